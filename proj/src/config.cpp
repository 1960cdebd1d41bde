#include "pcqad/config.hpp"

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "pcqad/csv.hpp"

namespace pcqad {

using nlohmann::json;

std::string format_g12(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::vector<double> GridSpec::points() const {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = start + (stop - start) * i / (count - 1);
    return out;
}

void GridSpec::validate(const std::string& name) const {
    if (count < 2)
        throw ConfigError(name + ": grid needs at least 2 points");
    if (!(stop > start))
        throw ConfigError(name + ": grid must be strictly increasing");
}

namespace {

const std::map<std::string, std::map<std::string, double>>& unit_tables() {
    static const std::map<std::string, std::map<std::string, double>> tables{
        {"length", {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
        {"frequency", {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
        {"rate",
         {{"rad/s", 1.0},
          {"Hz", 2.0 * std::numbers::pi},
          {"kHz", 2.0 * std::numbers::pi * 1e3},
          {"MHz", 2.0 * std::numbers::pi * 1e6},
          {"GHz", 2.0 * std::numbers::pi * 1e9}}},
        {"speed", {{"m/s", 1.0}, {"km/s", 1e3}}},
        {"capacitance", {{"F", 1.0}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}}},
        {"field", {{"V/m", 1.0}, {"V/um", 1e6}, {"V/nm", 1e9}}},
        {"density", {{"kg/m^3", 1.0}}},
        {"dimensionless", {}},
    };
    return tables;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& section) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + section + "." + key + "'");
}

} // namespace

double parse_quantity(const json& value, const std::string& dimension,
                      const std::string& key) {
    if (value.is_number())
        return value.get<double>();
    if (!value.is_string())
        throw ConfigError(key + ": expected a number or \"<value> <unit>\" string");
    const std::string s = value.get<std::string>();
    std::istringstream in(s);
    double magnitude;
    std::string unit;
    if (!(in >> magnitude >> unit) || !(in >> std::ws).eof())
        throw ConfigError(key + ": cannot parse quantity '" + s + "'");
    const auto& table = unit_tables().at(dimension);
    const auto it = table.find(unit);
    if (it == table.end())
        throw ConfigError(key + ": unit '" + unit + "' is not a " + dimension +
                          " unit");
    return magnitude * it->second;
}

Config default_config() {
    Config c;
    c.lattice = {0.475e-6, 280, 0.65, 3160.0, 0.02, 12e-6};
    c.transmon = {9.6e9, 0.78e9, 83e-15, 14e-15,
                  2.0 * std::numbers::pi * 8e6, 2.0 * std::numbers::pi * 11e6,
                  EcConvention::single_electron};
    c.piezo = {1.6e9, 2650.0};
    c.drive_rabi = 2.0 * std::numbers::pi * 100e3;
    c.flux_grid = {0.175, 0.23, 201};
    c.frequency_grid = {3.20e9, 3.35e9, 401};
    return c;
}

void Config::validate() const {
    try {
        lattice.validate();
        transmon.validate();
        piezo.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(drive_rabi > 0.0))
        throw ConfigError("drive.Omega must be > 0");
    flux_grid.validate("sweep.flux");
    frequency_grid.validate("sweep.frequency");
    if (!(frequency_grid.start > 0.0))
        throw ConfigError("sweep.frequency must start above DC");
    if (solver.n_max < 1)
        throw ConfigError("solver.n_max must be >= 1");
    if (solver.dimension_cap < 2)
        throw ConfigError("solver.dimension_cap must be >= 2");
    if (solver.threads < 1)
        throw ConfigError("solver.threads must be >= 1");
    if (!(selection.window_low > 0.0 && selection.window_high > selection.window_low))
        throw ConfigError("selection window must satisfy 0 < low < high");
    if (selection.min_quality < 0.0 || selection.min_g_fraction < 0.0 ||
        selection.min_g_fraction >= 1.0)
        throw ConfigError("selection floors must be >= 0 (g fraction < 1)");
    if (tolerance_profile != "paper" && tolerance_profile != "strict")
        throw ConfigError("tolerances.profile must be 'paper' or 'strict'");
}

namespace {

GridSpec parse_grid(const json& obj, const std::string& section,
                    const std::string& dimension) {
    reject_unknown(obj, {"start", "stop", "count"}, section);
    GridSpec g;
    if (obj.contains("start"))
        g.start = parse_quantity(obj["start"], dimension, section + ".start");
    if (obj.contains("stop"))
        g.stop = parse_quantity(obj["stop"], dimension, section + ".stop");
    if (obj.contains("count")) {
        if (!obj["count"].is_number_integer())
            throw ConfigError(section + ".count: expected an integer");
        g.count = obj["count"].get<int>();
    }
    return g;
}

} // namespace

Config parse_config_json(const json& j) {
    if (!j.is_object())
        throw ConfigError("config root must be an object");
    reject_unknown(j, {"lattice", "transmon", "piezo", "drive", "sweep", "solver",
                       "selection", "tolerances"},
                   "config");
    Config c = default_config();

    if (j.contains("lattice")) {
        const json& o = j["lattice"];
        reject_unknown(o, {"P", "a", "N", "N_p", "m", "v", "delta", "W"}, "lattice");
        if (o.contains("P") && o.contains("a"))
            throw ConfigError("lattice: give either P or a, not both");
        if (o.contains("N") && o.contains("N_p"))
            throw ConfigError("lattice: give either N or N_p, not both");
        if (o.contains("P"))
            c.lattice.period = parse_quantity(o["P"], "length", "lattice.P");
        if (o.contains("a"))
            c.lattice.period = parse_quantity(o["a"], "length", "lattice.a") / 2.0;
        if (o.contains("N"))
            c.lattice.cell_count = o["N"].get<int>();
        if (o.contains("N_p"))
            c.lattice.cell_count = 2 * o["N_p"].get<int>();
        if (o.contains("m"))
            c.lattice.metallization =
                parse_quantity(o["m"], "dimensionless", "lattice.m");
        if (o.contains("v"))
            c.lattice.free_speed = parse_quantity(o["v"], "speed", "lattice.v");
        if (o.contains("delta"))
            c.lattice.speed_reduction =
                parse_quantity(o["delta"], "dimensionless", "lattice.delta");
        if (o.contains("W"))
            c.lattice.aperture = parse_quantity(o["W"], "length", "lattice.W");
    }

    if (j.contains("transmon")) {
        const json& o = j["transmon"];
        reject_unknown(o, {"EJ_max", "EC_pair", "C_q", "C_g", "Gamma1", "Gamma2",
                           "ec_convention"},
                       "transmon");
        if (o.contains("EJ_max"))
            c.transmon.ej_max_hz =
                parse_quantity(o["EJ_max"], "frequency", "transmon.EJ_max");
        if (o.contains("EC_pair"))
            c.transmon.ec_pair_hz =
                parse_quantity(o["EC_pair"], "frequency", "transmon.EC_pair");
        if (o.contains("C_q"))
            c.transmon.c_q = parse_quantity(o["C_q"], "capacitance", "transmon.C_q");
        if (o.contains("C_g"))
            c.transmon.c_g = parse_quantity(o["C_g"], "capacitance", "transmon.C_g");
        if (o.contains("Gamma1"))
            c.transmon.gamma1 = parse_quantity(o["Gamma1"], "rate", "transmon.Gamma1");
        if (o.contains("Gamma2"))
            c.transmon.gamma2 = parse_quantity(o["Gamma2"], "rate", "transmon.Gamma2");
        if (o.contains("ec_convention")) {
            const std::string conv = o["ec_convention"].get<std::string>();
            if (conv == "single_electron")
                c.transmon.ec_convention = EcConvention::single_electron;
            else if (conv == "cooper_pair")
                c.transmon.ec_convention = EcConvention::cooper_pair;
            else
                throw ConfigError("transmon.ec_convention: '" + conv +
                                  "' is not a known convention");
        }
    }

    if (j.contains("piezo")) {
        const json& o = j["piezo"];
        reject_unknown(o, {"epz_over_eps", "rho"}, "piezo");
        if (o.contains("epz_over_eps"))
            c.piezo.epz_over_eps =
                parse_quantity(o["epz_over_eps"], "field", "piezo.epz_over_eps");
        if (o.contains("rho"))
            c.piezo.mass_density = parse_quantity(o["rho"], "density", "piezo.rho");
    }

    if (j.contains("drive")) {
        const json& o = j["drive"];
        reject_unknown(o, {"Omega"}, "drive");
        if (o.contains("Omega"))
            c.drive_rabi = parse_quantity(o["Omega"], "rate", "drive.Omega");
    }

    if (j.contains("sweep")) {
        const json& o = j["sweep"];
        reject_unknown(o, {"flux", "frequency"}, "sweep");
        if (o.contains("flux")) {
            GridSpec g = parse_grid(o["flux"], "sweep.flux", "dimensionless");
            if (o["flux"].contains("start")) c.flux_grid.start = g.start;
            if (o["flux"].contains("stop")) c.flux_grid.stop = g.stop;
            if (o["flux"].contains("count")) c.flux_grid.count = g.count;
        }
        if (o.contains("frequency")) {
            GridSpec g = parse_grid(o["frequency"], "sweep.frequency", "frequency");
            if (o["frequency"].contains("start")) c.frequency_grid.start = g.start;
            if (o["frequency"].contains("stop")) c.frequency_grid.stop = g.stop;
            if (o["frequency"].contains("count")) c.frequency_grid.count = g.count;
        }
    }

    if (j.contains("solver")) {
        const json& o = j["solver"];
        reject_unknown(o, {"kind", "n_max", "dimension_cap", "threads"}, "solver");
        if (o.contains("kind")) {
            const std::string kind = o["kind"].get<std::string>();
            if (kind == "semiclassical")
                c.solver.kind = SolverOptions::Kind::semiclassical;
            else if (kind == "lindblad")
                c.solver.kind = SolverOptions::Kind::lindblad;
            else
                throw ConfigError("solver.kind: '" + kind + "' is not a solver");
        }
        if (o.contains("n_max"))
            c.solver.n_max = o["n_max"].get<int>();
        if (o.contains("dimension_cap"))
            c.solver.dimension_cap = o["dimension_cap"].get<int>();
        if (o.contains("threads"))
            c.solver.threads = o["threads"].get<int>();
    }

    if (j.contains("selection")) {
        const json& o = j["selection"];
        reject_unknown(o, {"window_low", "window_high", "min_quality",
                           "min_g_fraction"},
                       "selection");
        if (o.contains("window_low"))
            c.selection.window_low =
                parse_quantity(o["window_low"], "frequency", "selection.window_low");
        if (o.contains("window_high"))
            c.selection.window_high =
                parse_quantity(o["window_high"], "frequency", "selection.window_high");
        if (o.contains("min_quality"))
            c.selection.min_quality = parse_quantity(o["min_quality"], "dimensionless",
                                                     "selection.min_quality");
        if (o.contains("min_g_fraction"))
            c.selection.min_g_fraction = parse_quantity(
                o["min_g_fraction"], "dimensionless", "selection.min_g_fraction");
    }

    if (j.contains("tolerances")) {
        const json& o = j["tolerances"];
        reject_unknown(o, {"profile"}, "tolerances");
        if (o.contains("profile"))
            c.tolerance_profile = o["profile"].get<std::string>();
    }

    c.validate();
    return c;
}

Config parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        return default_config();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        return parse_config_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
}

json to_json(const Config& c) {
    auto q = [](double v, const char* unit) {
        return format_g12(v) + std::string(" ") + unit;
    };
    json j;
    j["lattice"] = {{"P", q(c.lattice.period, "m")},
                    {"N", c.lattice.cell_count},
                    {"m", c.lattice.metallization},
                    {"v", q(c.lattice.free_speed, "m/s")},
                    {"delta", c.lattice.speed_reduction},
                    {"W", q(c.lattice.aperture, "m")}};
    j["transmon"] = {
        {"EJ_max", q(c.transmon.ej_max_hz, "Hz")},
        {"EC_pair", q(c.transmon.ec_pair_hz, "Hz")},
        {"C_q", q(c.transmon.c_q, "F")},
        {"C_g", q(c.transmon.c_g, "F")},
        {"Gamma1", q(c.transmon.gamma1, "rad/s")},
        {"Gamma2", q(c.transmon.gamma2, "rad/s")},
        {"ec_convention", c.transmon.ec_convention == EcConvention::single_electron
                              ? "single_electron"
                              : "cooper_pair"}};
    j["piezo"] = {{"epz_over_eps", q(c.piezo.epz_over_eps, "V/m")},
                  {"rho", q(c.piezo.mass_density, "kg/m^3")}};
    j["drive"] = {{"Omega", q(c.drive_rabi, "rad/s")}};
    j["sweep"] = {{"flux",
                   {{"start", c.flux_grid.start},
                    {"stop", c.flux_grid.stop},
                    {"count", c.flux_grid.count}}},
                  {"frequency",
                   {{"start", q(c.frequency_grid.start, "Hz")},
                    {"stop", q(c.frequency_grid.stop, "Hz")},
                    {"count", c.frequency_grid.count}}}};
    j["solver"] = {
        {"kind", c.solver.kind == SolverOptions::Kind::semiclassical
                     ? "semiclassical"
                     : "lindblad"},
        {"n_max", c.solver.n_max},
        {"dimension_cap", c.solver.dimension_cap},
        {"threads", c.solver.threads}};
    j["selection"] = {{"window_low", q(c.selection.window_low, "Hz")},
                      {"window_high", q(c.selection.window_high, "Hz")},
                      {"min_quality", c.selection.min_quality},
                      {"min_g_fraction", c.selection.min_g_fraction}};
    j["tolerances"] = {{"profile", c.tolerance_profile}};
    return j;
}

std::string config_hash(const Config& config) {
    // nlohmann::json orders object keys, so dump() is canonical
    const std::string text = to_json(config).dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json run_manifest(const Config& config, const std::string& command) {
    json j;
    j["tool"] = "pcqad";
    j["version"] = "1.0.0";
    j["command"] = command;
    j["config"] = to_json(config);
    j["config_hash"] = config_hash(config);
    j["derived"] = {
        {"L_m", config.lattice.total_length()},
        {"f_ac_Hz", config.lattice.center_frequency()},
        {"n_eff", config.lattice.effective_index()}};
    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = stamp;
    return j;
}

} // namespace pcqad
