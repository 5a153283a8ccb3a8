#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "tfet/config.hpp"
#include "tfet/errors.hpp"
#include "tfet/fermi.hpp"
#include "tfet/hamiltonian.hpp"
#include "tfet/io.hpp"
#include "tfet/negf.hpp"
#include "tfet/scenarios.hpp"
#include "tfet/sweep.hpp"

namespace py = pybind11;
using namespace tfet;

namespace {

py::list sweep_points(const SweepResult & r) {
    py::list out;
    for (const auto & p : r.points) {
        py::dict d;
        d["vg"] = p.bias.vg;
        d["vd"] = p.bias.vd;
        d["loop_status"] = to_string(p.loop.trace.status);
        d["iterations"] = p.loop.trace.iterations();
        d["current_computed"] = p.current_computed;
        d["current"] = p.current.current;
        d["current_status"] = to_string(p.current.status);
        out.append(std::move(d));
    }
    return out;
}

SimulationConfig resolve(const std::string & path, const std::vector<std::string> & overrides) {
    return load_config_file(std::filesystem::path(path), overrides);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ballistic 2D tunnel FET simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def("version", [] { return std::string(tool_version()); });

    m.def("fd_half_neg", &fd_half_neg, py::arg("x"), "Normalized Fermi-Dirac integral of order -1/2.");
    m.def("fd_half", &fd_half, py::arg("x"), "Normalized Fermi-Dirac integral of order 1/2.");

    m.def(
        "resolved_config",
        [](const std::string & path, const std::vector<std::string> & overrides) {
            return echo_config(resolve(path, overrides));
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
        "Validated config with every default filled in, as JSON text.");

    m.def(
        "run_sweep",
        [](const std::string & path, const std::vector<std::string> & overrides, int threads) {
            auto cfg = resolve(path, overrides);
            SweepOptions opt;
            opt.threads = threads;
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(cfg, opt);
            }
            py::dict out;
            out["points"] = sweep_points(r);
            out["iv_csv"] = to_csv(iv_table(r, sha256_hex(echo_config(cfg))));
            return out;
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{}, py::arg("threads") = 0,
        "Runs the bias sweep of a config file; returns per-point summaries and the IV table text.");

    m.def(
        "barrier_transmission",
        [](double e, double u0, int barrier_sites, double mass, double spacing, double eta) {
            FieldStrip s = rectangular_barrier_strip(4, barrier_sites, u0, mass, spacing);
            SliceOptions so;
            so.eta = eta;
            so.ldos = false;
            return compute_slice_at(assemble(s.u, s.mass), e, 0.0, so).transmission;
        },
        py::arg("e"), py::arg("u0"), py::arg("barrier_sites"), py::arg("mass"), py::arg("spacing"),
        py::arg("eta") = 1e-13, "NEGF transmission of a single-row strip through a rectangular barrier.");
}
