#include "doctest.h"

#include <cmath>
#include <fstream>

#include "pcqad/config.hpp"
#include "test_util.hpp"

using namespace pcqad;
using nlohmann::json;
using testutil::two_pi;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/pcqad_test_" + name;
    std::ofstream out(path);
    out << text;
    return path;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("empty file resolves to the reference device") {
    const Config c = parse_config(write_temp("empty.json", "  \n"));
    CHECK(c.lattice.period == 0.475e-6);
    CHECK(c.lattice.cell_count == 280);
    CHECK(c.transmon.ej_max_hz == 9.6e9);
    CHECK(c.drive_rabi == doctest::Approx(two_pi * 100e3));
    CHECK(c.solver.kind == SolverOptions::Kind::semiclassical);
    CHECK(c.flux_grid.count == 201);
    CHECK(c.frequency_grid.count == 401);
}

TEST_CASE("missing file is a config error") {
    CHECK_THROWS_AS(parse_config("/tmp/pcqad_does_not_exist.json"), ConfigError);
}

TEST_CASE("quantities carry explicit units") {
    CHECK(parse_quantity(json("0.475 um"), "length", "k") ==
          doctest::Approx(0.475e-6));
    CHECK(parse_quantity(json("3.16 km/s"), "speed", "k") == doctest::Approx(3160.0));
    CHECK(parse_quantity(json("1.6 V/nm"), "field", "k") == doctest::Approx(1.6e9));
    CHECK(parse_quantity(json(0.65), "dimensionless", "k") == 0.65);
    // rates quoted as linear frequencies pick up the 2 pi
    CHECK(parse_quantity(json("8 MHz"), "rate", "k") ==
          doctest::Approx(two_pi * 8e6).epsilon(1e-12));
    CHECK(parse_quantity(json("5 rad/s"), "rate", "k") == doctest::Approx(5.0));
    CHECK_THROWS_AS(parse_quantity(json("8 bananas"), "rate", "k"), ConfigError);
    CHECK_THROWS_AS(parse_quantity(json("8 MHz extra"), "rate", "k"), ConfigError);
    CHECK_THROWS_AS(parse_quantity(json("MHz"), "rate", "k"), ConfigError);
    CHECK_THROWS_AS(parse_quantity(json("8 um"), "frequency", "k"), ConfigError);
}

TEST_CASE("mirror-period and pair-count aliases") {
    const Config c = parse_config_json(json::parse(
        R"({"lattice": {"a": "0.95 um", "N_p": 140}})"));
    CHECK(c.lattice.period == doctest::Approx(0.475e-6));
    CHECK(c.lattice.cell_count == 280);
    CHECK(c.lattice.total_length() == doctest::Approx(133e-6));
}

TEST_CASE("conflicting aliases are rejected") {
    CHECK_THROWS_AS(parse_config_json(json::parse(
                        R"({"lattice": {"P": "0.475 um", "a": "0.95 um"}})")),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config_json(json::parse(R"({"lattice": {"N": 280, "N_p": 140}})")),
        ConfigError);
}

TEST_CASE("unknown keys are rejected with the offending name") {
    try {
        parse_config_json(json::parse(R"({"lattice": {"periods": 3}})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("lattice.periods") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_json(json::parse(R"({"latice": {}})")),
                    ConfigError);
}

TEST_CASE("constraint violations are config errors") {
    CHECK_THROWS_AS(parse_config_json(json::parse(
                        R"({"sweep": {"frequency": {"count": 1}}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(json::parse(
                        R"({"sweep": {"flux": {"start": 0.3, "stop": 0.2}}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(json::parse(R"({"solver": {"threads": 0}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_json(json::parse(
                        R"({"tolerances": {"profile": "lenient"}})")),
                    ConfigError);
}

TEST_CASE("serialization round trip is the identity") {
    Config c = default_config();
    c.lattice.cell_count = 192;
    c.solver.kind = SolverOptions::Kind::lindblad;
    c.solver.n_max = 3;
    c.transmon.ec_convention = EcConvention::cooper_pair;
    c.selection.min_quality = 450.0;
    const Config back = parse_config_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("hash is stable and sensitive") {
    const std::string h = config_hash(default_config());
    CHECK(h.size() == 16);
    CHECK(config_hash(default_config()) == h);
    Config c = default_config();
    c.lattice.speed_reduction = 0.021;
    CHECK(config_hash(c) != h);
    // key order in the input file does not matter
    const Config a = parse_config_json(
        json::parse(R"({"lattice": {"N": 64, "m": 0.5}})"));
    const Config b = parse_config_json(
        json::parse(R"({"lattice": {"m": 0.5, "N": 64}})"));
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("manifest names the tool, command, and derived scales") {
    const json m = run_manifest(default_config(), "trace");
    CHECK(m["tool"] == "pcqad");
    CHECK(m["command"] == "trace");
    CHECK(m["config_hash"] == config_hash(default_config()));
    CHECK(m["derived"]["L_m"].get<double>() == doctest::Approx(133e-6));
    CHECK(m["derived"]["n_eff"].get<double>() == doctest::Approx(1.013));
}

TEST_CASE("grid points are inclusive and uniform") {
    const GridSpec g{1.0, 2.0, 5};
    const auto x = g.points();
    REQUIRE(x.size() == 5);
    CHECK(x.front() == 1.0);
    CHECK(x.back() == 2.0);
    CHECK(x[2] == doctest::Approx(1.5));
}

} // TEST_SUITE
