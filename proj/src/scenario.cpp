#include "uavmec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json_codec.hpp"
#include "uavmec/errors.hpp"

namespace uavmec {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

DerivedConstants derive_constants(const SystemParams& params) {
    DerivedConstants c;
    c.noise_w = dbm_to_watts(params.noise_psd_dbm_per_hz) * params.bandwidth_hz;
    c.alpha = params.ref_channel_gain * params.antenna_const / c.noise_w;
    return c;
}

namespace {

void check(std::vector<Violation>& out, bool ok, std::string field, std::string message) {
    if (!ok) out.push_back({std::move(field), std::move(message)});
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::vector<Violation> validate(const SystemParams& p, const std::string& prefix) {
    std::vector<Violation> v;
    const auto f = [&](const char* name) { return prefix + "." + name; };
    check(v, finite(p.bandwidth_hz) && p.bandwidth_hz > 0, f("bandwidth_hz"), "must be > 0");
    check(v, finite(p.ref_channel_gain) && p.ref_channel_gain > 0, f("ref_channel_gain"), "must be > 0");
    check(v, finite(p.antenna_const) && p.antenna_const > 0, f("antenna_const"), "must be > 0");
    check(v, p.sidelobe_gain == 0.0, f("sidelobe_gain"), "only 0 is supported");
    check(v, finite(p.noise_psd_dbm_per_hz), f("noise_psd_dbm_per_hz"), "must be finite");
    check(v, finite(p.weight_ue) && p.weight_ue > 0, f("weight_ue"), "must be > 0");
    check(v, finite(p.weight_uav) && p.weight_uav > 0, f("weight_uav"), "must be > 0");
    check(v, finite(p.fcm_exponent) && p.fcm_exponent > 1, f("fcm_exponent"), "must be > 1");
    check(v, finite(p.reweight_tau) && p.reweight_tau > 0, f("reweight_tau"), "must be > 0");
    check(v, finite(p.theta_step_rad) && p.theta_step_rad > 0, f("theta_step_rad"), "must be > 0");
    check(v, finite(p.outer_tol) && p.outer_tol > 0, f("outer_tol"), "must be > 0");
    check(v, p.outer_max_iter >= 1, f("outer_max_iter"), "must be >= 1");
    check(v, finite(p.bisect_tol_inverse) && p.bisect_tol_inverse > 0, f("bisect_tol_inverse"),
          "must be > 0");
    check(v, finite(p.bisect_tol_multiplier) && p.bisect_tol_multiplier > 0,
          f("bisect_tol_multiplier"), "must be > 0");
    check(v, finite(p.subgrad_step_init) && p.subgrad_step_init > 0, f("subgrad_step_init"),
          "must be > 0");
    return v;
}

std::vector<Violation> validate(const Scenario& s) {
    auto v = validate(s.params);
    check(v, finite(s.latency_s) && s.latency_s > 0, "latency_s", "must be > 0");
    check(v, !s.ues.empty(), "ues", "need at least one UE");
    check(v, !s.uavs.empty(), "uavs", "need at least one UAV");

    std::set<int> ids;
    for (std::size_t i = 0; i < s.ues.size(); ++i) {
        const auto& u = s.ues[i];
        const std::string p = "ues[" + std::to_string(i) + "].";
        check(v, ids.insert(u.id).second, p + "id", "duplicate UE id");
        check(v, finite(u.pos.x) && finite(u.pos.y), p + "x_m", "position must be finite");
        check(v, finite(u.cpu_cycles) && u.cpu_cycles > 0, p + "cpu_cycles", "must be > 0");
        check(v, finite(u.data_bits) && u.data_bits > 0, p + "data_bits", "must be > 0");
        check(v, finite(u.p_max_w) && u.p_max_w > 0, p + "p_max_w", "must be > 0");
        check(v, finite(u.f_max_hz) && u.f_max_hz > 0, p + "f_max_hz", "must be > 0");
        check(v, finite(u.kappa) && u.kappa >= 0, p + "kappa", "must be >= 0");
        check(v, finite(u.nu) && u.nu >= 1, p + "nu", "must be >= 1");
    }

    ids.clear();
    for (std::size_t j = 0; j < s.uavs.size(); ++j) {
        const auto& u = s.uavs[j];
        const std::string p = "uavs[" + std::to_string(j) + "].";
        check(v, ids.insert(u.id).second, p + "id", "duplicate UAV id");
        check(v, finite(u.propulsion_w) && u.propulsion_w >= 0, p + "propulsion_w", "must be >= 0");
        check(v, finite(u.battery_w) && u.battery_w > u.propulsion_w, p + "battery_w",
              "must exceed propulsion_w");
        check(v, finite(u.f_max_hz) && u.f_max_hz > 0, p + "f_max_hz", "must be > 0");
        check(v, finite(u.s_coef) && u.s_coef > 0, p + "s_coef", "must be > 0");
        check(v, finite(u.w_exp) && u.w_exp > 1, p + "w_exp", "must be > 1");
        check(v, u.max_users >= 1, p + "max_users", "must be >= 1");
        check(v, finite(u.h_min_m) && u.h_min_m > 0, p + "h_min_m", "must be > 0");
        check(v, finite(u.h_max_m) && u.h_max_m >= u.h_min_m, p + "h_max_m", "must be >= h_min_m");
        check(v, finite(u.theta_min_rad) && u.theta_min_rad > 0, p + "theta_min_rad", "must be > 0");
        check(v,
              finite(u.theta_max_rad) && u.theta_max_rad >= u.theta_min_rad &&
                  u.theta_max_rad < std::numbers::pi / 2,
              p + "theta_max_rad", "must lie in [theta_min_rad, pi/2)");
    }
    return v;
}

void require_valid(const Scenario& s) {
    auto problems = validate(s);
    if (problems.empty()) return;
    std::ostringstream os;
    os << "invalid scenario:";
    for (const auto& p : problems) os << ' ' << p.field << " (" << p.message << ");";
    throw InvalidScenario(os.str());
}

namespace {

// 53-bit uniform in [0, 1). Spelled out instead of uniform_real_distribution
// so the generated positions do not depend on the standard library vendor.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Scenario generate_scenario(const GenSpec& spec) {
    if (spec.n_ues < 1) throw InvalidScenario("n_ues must be >= 1");
    if (spec.m_uavs < 1) throw InvalidScenario("m_uavs must be >= 1");
    if (!(spec.field_size_m > 0) || !std::isfinite(spec.field_size_m))
        throw InvalidScenario("field_size_m must be > 0");

    Scenario s;
    s.params = spec.params;
    s.params.rng_seed = spec.seed;
    s.latency_s = spec.latency_s;

    std::mt19937_64 rng(spec.seed);
    s.ues.reserve(static_cast<std::size_t>(spec.n_ues));
    for (int i = 0; i < spec.n_ues; ++i) {
        UeProfile u = spec.ue_template;
        u.id = i;
        u.pos.x = unit_uniform(rng) * spec.field_size_m;
        u.pos.y = unit_uniform(rng) * spec.field_size_m;
        s.ues.push_back(u);
    }
    for (int j = 0; j < spec.m_uavs; ++j) {
        UavProfile u = spec.uav_template;
        u.id = j;
        s.uavs.push_back(u);
    }
    require_valid(s);
    return s;
}

std::string scenario_to_text(const Scenario& scenario) {
    return detail::to_json(scenario).dump(2) + "\n";
}

Scenario scenario_from_text(const std::string& text, const std::string& source) {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ParseError("<document>", source + " byte " + std::to_string(e.byte), e.what());
    }
    try {
        return detail::scenario_from_json(j, source);
    } catch (const ParseError& e) {
        if (e.location().rfind(source, 0) == 0) throw;
        throw ParseError(e.field(), source + ": " + e.location(), e.reason());
    }
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << scenario_to_text(scenario);
    if (!out) throw Error("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str(), path.string());
}

}  // namespace uavmec
