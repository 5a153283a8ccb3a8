#include "tfet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tfet {

namespace {
std::atomic<int> configured{0};
}

int default_threads() {
    if (int n = configured.load(); n > 0) return n;
    if (const char * env = std::getenv("TFETSIM_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception &) {
        }
    }
    return 1;
}

void set_default_threads(int n) { configured = n; }

} // namespace tfet
