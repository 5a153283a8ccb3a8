#pragma once

#include <stdexcept>
#include <string>

namespace tfet {

// Invalid or inconsistent user configuration. `key` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string & what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string & key() const noexcept { return key_; }
private:
    std::string key_;
};

// A numerical operation failed (singular system, non-finite result, broken invariant).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing an output or input file failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tfet
