#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "support.hpp"
#include "tfet/errors.hpp"
#include "tfet/io.hpp"
#include "tfet/sweep.hpp"

using namespace tfet;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string & name) {
    fs::path d = fs::temp_directory_path() / ("tfet_test_io_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const SweepResult & smoke_sweep() {
    static SweepResult r = run_sweep(load_config_file(fs::path(TFET_SOURCE_DIR) / "configs/smoke_pn.json"));
    return r;
}
} // namespace

TEST_CASE("numbers print in shortest round-trip form") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int k = 0; k < 500; ++k) {
        double v = std::copysign(std::pow(10.0, u(rng)), u(rng));
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV round trip keeps metadata and text cells") {
    Table t;
    t.meta = {"tool tfetsim", "config abc"};
    t.columns = {"vg_V", "status", "empty"};
    t.add_row({"0.1", "converged", ""});
    t.add_row({format_number(1e-300), "max-iter", "x"});
    std::string text = to_csv(t);
    CHECK(text.rfind("# tool tfetsim\n", 0) == 0);
    Table back = parse_csv(text);
    CHECK(back == t);
    CHECK(back.number(1, "vg_V") == 1e-300);
    CHECK_THROWS(back.column("nope"));
    CHECK_THROWS(t.add_row({"only one"}));
}

TEST_CASE("file helpers") {
    fs::path d = scratch("files");
    Table t;
    t.columns = {"a"};
    t.add_row({"1"});
    write_csv(d / "t.csv", t);
    CHECK(read_csv(d / "t.csv") == t);
    CHECK_THROWS_AS(read_text_file(d / "missing.txt"), IoError);
    CHECK_THROWS_AS(write_text_file(d / "no_such_dir" / "x.txt", "x"), IoError);
}

TEST_CASE("sha256 of known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("field dump layout") {
    Mesh2D m = testing::mesh(2, 1, 0.5);
    FieldMap v(m, Quantity::potential), n(m, Quantity::electron_density);
    for (std::size_t p = 0; p < m.size(); ++p) {
        v[p] = 0.1 * p;
        n[p] = 1e18 * p;
    }
    Table t = field_table({&v, &n});
    REQUIRE(t.rows.size() == m.size());
    CHECK(t.columns.size() == 4);
    CHECK(t.columns[0] == "x_nm");
    // x outer, y inner
    CHECK(t.number(1, "x_nm") == 0.0);
    CHECK(t.number(1, "y_nm") == 0.5);
    CHECK(t.number(2, "x_nm") == 0.5);
    CHECK(t.number(5, t.columns[3]) == 5e18);
    FieldMap other(testing::mesh(3, 1, 0.5), Quantity::potential);
    CHECK_THROWS(field_table({&v, &other}));
}

TEST_CASE("bias tags and version") {
    CHECK(point_tag({1.0, 0.05, 0.0}) == "vg1.0000_vd0.0500");
    CHECK(std::string(tool_version()).size() > 0);
}

TEST_CASE("smoke sweep tables") {
    const SweepResult & r = smoke_sweep();
    REQUIRE(r.points.size() == 2);
    CHECK(r.all_converged());
    Table iv = iv_table(r, "hash");
    REQUIRE(iv.rows.size() == 2);
    CHECK(iv.number(0, "vg_V") == 0.8);
    CHECK(iv.number(1, "vg_V") == 1.2);
    CHECK(iv.number(0, "vd_V") == 0.3);
    CHECK(iv.rows[0][iv.column("loop_status")] == "converged");
    // more gate, more tunnelling
    CHECK(iv.number(1, "current_A_per_nm") > iv.number(0, "current_A_per_nm"));
    CHECK(iv.number(0, "log10_current") == doctest::Approx(std::log10(iv.number(0, "current_A_per_nm"))));
    Table tr = trace_table(r.points[0].loop.trace);
    CHECK(tr.rows.size() == std::size_t(r.points[0].loop.trace.iterations()));
}

TEST_CASE("plot emission") {
    const SweepResult & r = smoke_sweep();
    fs::path d = scratch("plots");
    auto iv = emit_plots(r, "iv", d);
    REQUIRE(iv.size() == 1);
    CHECK(read_csv(iv[0]).rows.size() == 2);
    auto bands = emit_plots(r, "bands", d);
    CHECK(bands.size() == 2);
    Table b = read_csv(bands[0]);
    CHECK(b.rows.size() == std::size_t(r.model.mesh.nodes_x()));
    for (std::size_t k = 0; k < b.rows.size(); ++k) CHECK(b.number(k, b.columns[1]) > b.number(k, b.columns[2]));
    CHECK(emit_plots(r, "barrier", d).size() == 2);
    CHECK_THROWS_AS(emit_plots(r, "nonsense", d), ConfigError);
    try {
        emit_plots(r, "nonsense", d);
    } catch (const ConfigError & e) {
        for (const auto & k : plot_kinds()) CHECK(std::string(e.what()).find(k) != std::string::npos);
    }
}

TEST_CASE("sweep output does not depend on the thread count") {
    auto cfg = load_config_file(fs::path(TFET_SOURCE_DIR) / "configs/smoke_pn.json");
    SweepOptions one, two;
    one.threads = 1;
    two.threads = 3;
    auto a = run_sweep(cfg, one), b = run_sweep(cfg, two);
    CHECK(to_csv(iv_table(a, "h")) == to_csv(iv_table(b, "h")));
}
