#include "hyperlc/config.hpp"

#include <set>

#include <json.hpp>

namespace hlc {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("config: unknown key '" + path + it.key() + "'");
}

template <typename T>
T take(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    reject_unknown(j, {"scenario", "output_dir", "grid", "coefficients", "initial_data", "scheme",
                       "diagnostics", "snapshots", "verify", "decay", "cross_check"},
                   "");

    RunConfig cfg;
    cfg.scenario = take<std::string>(j, "scenario", cfg.scenario);
    cfg.output_dir = take<std::string>(j, "output_dir", cfg.output_dir);

    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, {"points", "box_length", "dealias_fraction"}, "grid.");
        const int n = take<int>(g, "points", cfg.grid.n);
        const double box = take<double>(g, "box_length", cfg.grid.box_length);
        const double frac = take<double>(g, "dealias_fraction", cfg.grid.dealias_fraction);
        try {
            cfg.grid = Grid3(n, box, frac);
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }

    if (j.contains("coefficients")) {
        const json& c = j["coefficients"];
        reject_unknown(c, {"nu1", "nu4", "nu5"}, "coefficients.");
        cfg.nu1 = take<double>(c, "nu1", cfg.nu1);
        cfg.nu4 = take<double>(c, "nu4", cfg.nu4);
        cfg.nu5 = take<double>(c, "nu5", cfg.nu5);
    }
    {
        const std::string err = Coefficients::admissibility_violation(cfg.nu1, cfg.nu4, cfg.nu5);
        if (!err.empty()) throw ConfigError("config: " + err);
    }

    if (j.contains("initial_data")) {
        const json& d = j["initial_data"];
        reject_unknown(d, {"epsilon0", "seed", "band", "profile", "norm_order"}, "initial_data.");
        cfg.initial_data.epsilon0 = take<double>(d, "epsilon0", cfg.initial_data.epsilon0);
        cfg.initial_data.seed = take<std::uint64_t>(d, "seed", cfg.initial_data.seed);
        if (d.contains("band")) {
            const json& b = d["band"];
            if (!b.is_array() || b.size() != 2)
                throw ConfigError("config: initial_data.band must be [min,max]");
            cfg.initial_data.band_min = b[0].get<int>();
            cfg.initial_data.band_max = b[1].get<int>();
        }
        const std::string prof = take<std::string>(d, "profile", "random-band");
        if (prof == "random-band")
            cfg.initial_data.profile = InitialDataSpec::Profile::RandomBand;
        else if (prof == "gaussian-bump")
            cfg.initial_data.profile = InitialDataSpec::Profile::GaussianBump;
        else
            throw ConfigError("config: initial_data.profile must be 'random-band' or "
                              "'gaussian-bump'");
        cfg.initial_data.norm_order = take<double>(d, "norm_order", cfg.initial_data.norm_order);
        if (cfg.initial_data.epsilon0 < 0.0)
            throw ConfigError("config: initial_data.epsilon0 must be nonnegative");
    }

    if (j.contains("scheme")) {
        const json& s = j["scheme"];
        reject_unknown(s, {"dt", "t_end", "method", "cfl_safety", "reprojection_period",
                           "linear_only"},
                       "scheme.");
        cfg.scheme.dt = take<double>(s, "dt", cfg.scheme.dt);
        cfg.scheme.t_end = take<double>(s, "t_end", cfg.scheme.t_end);
        const std::string m = take<std::string>(s, "method", "ETD2");
        if (m == "ETD2")
            cfg.scheme.scheme = Scheme::Etd2;
        else if (m == "ETD-midpoint")
            cfg.scheme.scheme = Scheme::EtdMidpoint;
        else
            throw ConfigError("config: scheme.method must be 'ETD2' or 'ETD-midpoint'");
        cfg.scheme.cfl_safety = take<double>(s, "cfl_safety", cfg.scheme.cfl_safety);
        if (!(cfg.scheme.cfl_safety > 0.0) || cfg.scheme.cfl_safety > 1.0)
            throw ConfigError("config: scheme.cfl_safety must lie in (0,1]");
        cfg.scheme.reprojection_period =
            take<int>(s, "reprojection_period", cfg.scheme.reprojection_period);
        if (cfg.scheme.reprojection_period < 1)
            throw ConfigError("config: scheme.reprojection_period must be positive");
        cfg.scheme.linear_only = take<bool>(s, "linear_only", cfg.scheme.linear_only);
        if (cfg.scheme.dt < 0.0) throw ConfigError("config: scheme.dt must be nonnegative");
    }

    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        reject_unknown(d, {"cadence_steps", "sobolev_order"}, "diagnostics.");
        cfg.diagnostics.cadence_steps = take<int>(d, "cadence_steps", cfg.diagnostics.cadence_steps);
        cfg.diagnostics.sobolev_order = take<int>(d, "sobolev_order", cfg.diagnostics.sobolev_order);
        if (cfg.diagnostics.cadence_steps < 1)
            throw ConfigError("config: diagnostics.cadence_steps must be positive");
        if (cfg.diagnostics.sobolev_order < 0)
            throw ConfigError("config: diagnostics.sobolev_order must be nonnegative");
    }

    if (j.contains("snapshots")) {
        const json& s = j["snapshots"];
        reject_unknown(s, {"every_steps"}, "snapshots.");
        cfg.snapshots.every_steps = take<int>(s, "every_steps", cfg.snapshots.every_steps);
        if (cfg.snapshots.every_steps < 0)
            throw ConfigError("config: snapshots.every_steps must be nonnegative");
    }

    if (j.contains("verify")) {
        const json& v = j["verify"];
        reject_unknown(v, {"xi_samples", "coefficient_samples", "seed", "identity_tolerance"},
                       "verify.");
        cfg.verify.xi_samples = take<int>(v, "xi_samples", cfg.verify.xi_samples);
        cfg.verify.coefficient_samples =
            take<int>(v, "coefficient_samples", cfg.verify.coefficient_samples);
        cfg.verify.seed = take<std::uint64_t>(v, "seed", cfg.verify.seed);
        cfg.verify.identity_tolerance =
            take<double>(v, "identity_tolerance", cfg.verify.identity_tolerance);
    }

    if (j.contains("decay")) {
        const json& d = j["decay"];
        reject_unknown(d, {"points", "box_length", "samples", "heat_t_min", "heat_t_max",
                           "wave_t_min", "wave_t_max", "slope_tolerance", "bump_width", "shell"},
                       "decay.");
        cfg.decay.points = take<int>(d, "points", cfg.decay.points);
        cfg.decay.box_length = take<double>(d, "box_length", cfg.decay.box_length);
        cfg.decay.samples = take<int>(d, "samples", cfg.decay.samples);
        cfg.decay.heat_t_min = take<double>(d, "heat_t_min", cfg.decay.heat_t_min);
        cfg.decay.heat_t_max = take<double>(d, "heat_t_max", cfg.decay.heat_t_max);
        cfg.decay.wave_t_min = take<double>(d, "wave_t_min", cfg.decay.wave_t_min);
        cfg.decay.wave_t_max = take<double>(d, "wave_t_max", cfg.decay.wave_t_max);
        cfg.decay.slope_tolerance = take<double>(d, "slope_tolerance", cfg.decay.slope_tolerance);
        cfg.decay.bump_width = take<double>(d, "bump_width", cfg.decay.bump_width);
        cfg.decay.shell = take<int>(d, "shell", cfg.decay.shell);
    }

    if (j.contains("cross_check")) {
        const json& x = j["cross_check"];
        reject_unknown(x, {"epsilon0", "t_end", "dt", "halvings", "tolerance", "min_order"},
                       "cross_check.");
        cfg.cross_check.epsilon0 = take<double>(x, "epsilon0", cfg.cross_check.epsilon0);
        cfg.cross_check.t_end = take<double>(x, "t_end", cfg.cross_check.t_end);
        cfg.cross_check.dt = take<double>(x, "dt", cfg.cross_check.dt);
        cfg.cross_check.halvings = take<int>(x, "halvings", cfg.cross_check.halvings);
        cfg.cross_check.tolerance = take<double>(x, "tolerance", cfg.cross_check.tolerance);
        cfg.cross_check.min_order = take<double>(x, "min_order", cfg.cross_check.min_order);
    }

    const std::set<std::string> scenarios = {"simulate", "verify-operators", "verify-decay",
                                             "cross-check"};
    if (!scenarios.count(cfg.scenario))
        throw ConfigError("config: unknown scenario '" + cfg.scenario + "'");

    return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
    json j;
    j["scenario"] = cfg.scenario;
    j["output_dir"] = cfg.output_dir;
    j["grid"] = {{"points", cfg.grid.n},
                 {"box_length", cfg.grid.box_length},
                 {"dealias_fraction", cfg.grid.dealias_fraction}};
    j["coefficients"] = {{"nu1", cfg.nu1}, {"nu4", cfg.nu4}, {"nu5", cfg.nu5}};
    j["initial_data"] = {
        {"epsilon0", cfg.initial_data.epsilon0},
        {"seed", cfg.initial_data.seed},
        {"band", {cfg.initial_data.band_min, cfg.initial_data.band_max}},
        {"profile", cfg.initial_data.profile == InitialDataSpec::Profile::RandomBand
                        ? "random-band"
                        : "gaussian-bump"},
        {"norm_order", cfg.initial_data.norm_order}};
    j["scheme"] = {{"dt", cfg.scheme.dt},
                   {"t_end", cfg.scheme.t_end},
                   {"method", cfg.scheme.scheme == Scheme::Etd2 ? "ETD2" : "ETD-midpoint"},
                   {"cfl_safety", cfg.scheme.cfl_safety},
                   {"reprojection_period", cfg.scheme.reprojection_period},
                   {"linear_only", cfg.scheme.linear_only}};
    j["diagnostics"] = {{"cadence_steps", cfg.diagnostics.cadence_steps},
                        {"sobolev_order", cfg.diagnostics.sobolev_order}};
    j["snapshots"] = {{"every_steps", cfg.snapshots.every_steps}};
    j["verify"] = {{"xi_samples", cfg.verify.xi_samples},
                   {"coefficient_samples", cfg.verify.coefficient_samples},
                   {"seed", cfg.verify.seed},
                   {"identity_tolerance", cfg.verify.identity_tolerance}};
    j["decay"] = {{"points", cfg.decay.points},
                  {"box_length", cfg.decay.box_length},
                  {"samples", cfg.decay.samples},
                  {"heat_t_min", cfg.decay.heat_t_min},
                  {"heat_t_max", cfg.decay.heat_t_max},
                  {"wave_t_min", cfg.decay.wave_t_min},
                  {"wave_t_max", cfg.decay.wave_t_max},
                  {"slope_tolerance", cfg.decay.slope_tolerance},
                  {"bump_width", cfg.decay.bump_width},
                  {"shell", cfg.decay.shell}};
    j["cross_check"] = {{"epsilon0", cfg.cross_check.epsilon0},
                        {"t_end", cfg.cross_check.t_end},
                        {"dt", cfg.cross_check.dt},
                        {"halvings", cfg.cross_check.halvings},
                        {"tolerance", cfg.cross_check.tolerance},
                        {"min_order", cfg.cross_check.min_order}};
    return j.dump(2);
}

}  // namespace hlc
