#include "json_codec.hpp"

#include <functional>
#include <map>

#include "uavmec/errors.hpp"

namespace uavmec::detail {

namespace {

// A table of (key -> reader) per record type keeps the unknown-key check and
// the field list in one place.
template <typename T>
using Reader = std::function<void(const json&, T&, const std::string&)>;

struct TypeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double read_double(const json& v, const std::string&) {
    if (!v.is_number()) throw TypeMismatch("expected a number");
    return v.get<double>();
}

int read_int(const json& v, const std::string&) {
    if (!v.is_number_integer()) throw TypeMismatch("expected an integer");
    return v.get<int>();
}

std::uint64_t read_u64(const json& v, const std::string&) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw TypeMismatch("expected a non-negative integer");
    return v.get<std::uint64_t>();
}

template <typename T>
void apply_table(const json& j, T& out, const std::string& path,
                 const std::map<std::string, Reader<T>>& table) {
    if (!j.is_object()) throw ParseError(path, path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string field = path + "." + it.key();
        auto r = table.find(it.key());
        if (r == table.end()) throw ParseError(field, path, "unknown key");
        try {
            r->second(it.value(), out, field);
        } catch (const TypeMismatch& e) {
            throw ParseError(field, path, e.what());
        }
    }
}

#define UAVMEC_D(T, key, member) \
    {key, [](const json& v, T& o, const std::string& f) { o.member = read_double(v, f); }}
#define UAVMEC_I(T, key, member) \
    {key, [](const json& v, T& o, const std::string& f) { o.member = read_int(v, f); }}

const std::map<std::string, Reader<SystemParams>>& params_table() {
    static const std::map<std::string, Reader<SystemParams>> t = {
        UAVMEC_D(SystemParams, "bandwidth_hz", bandwidth_hz),
        UAVMEC_D(SystemParams, "ref_channel_gain", ref_channel_gain),
        UAVMEC_D(SystemParams, "antenna_const", antenna_const),
        UAVMEC_D(SystemParams, "sidelobe_gain", sidelobe_gain),
        UAVMEC_D(SystemParams, "noise_psd_dbm_per_hz", noise_psd_dbm_per_hz),
        UAVMEC_D(SystemParams, "weight_ue", weight_ue),
        UAVMEC_D(SystemParams, "weight_uav", weight_uav),
        UAVMEC_D(SystemParams, "fcm_exponent", fcm_exponent),
        UAVMEC_D(SystemParams, "reweight_tau", reweight_tau),
        UAVMEC_D(SystemParams, "theta_step_rad", theta_step_rad),
        UAVMEC_D(SystemParams, "outer_tol", outer_tol),
        UAVMEC_I(SystemParams, "outer_max_iter", outer_max_iter),
        UAVMEC_D(SystemParams, "bisect_tol_inverse", bisect_tol_inverse),
        UAVMEC_D(SystemParams, "bisect_tol_multiplier", bisect_tol_multiplier),
        UAVMEC_D(SystemParams, "subgrad_step_init", subgrad_step_init),
        {"rng_seed",
         [](const json& v, SystemParams& o, const std::string& f) { o.rng_seed = read_u64(v, f); }},
    };
    return t;
}

const std::map<std::string, Reader<UeProfile>>& ue_table() {
    static const std::map<std::string, Reader<UeProfile>> t = {
        UAVMEC_I(UeProfile, "id", id),
        UAVMEC_D(UeProfile, "x_m", pos.x),
        UAVMEC_D(UeProfile, "y_m", pos.y),
        UAVMEC_D(UeProfile, "cpu_cycles", cpu_cycles),
        UAVMEC_D(UeProfile, "data_bits", data_bits),
        UAVMEC_D(UeProfile, "p_max_w", p_max_w),
        UAVMEC_D(UeProfile, "f_max_hz", f_max_hz),
        UAVMEC_D(UeProfile, "kappa", kappa),
        UAVMEC_D(UeProfile, "nu", nu),
    };
    return t;
}

const std::map<std::string, Reader<UavProfile>>& uav_table() {
    static const std::map<std::string, Reader<UavProfile>> t = {
        UAVMEC_I(UavProfile, "id", id),
        UAVMEC_D(UavProfile, "propulsion_w", propulsion_w),
        UAVMEC_D(UavProfile, "battery_w", battery_w),
        UAVMEC_D(UavProfile, "f_max_hz", f_max_hz),
        UAVMEC_D(UavProfile, "s_coef", s_coef),
        UAVMEC_D(UavProfile, "w_exp", w_exp),
        UAVMEC_I(UavProfile, "max_users", max_users),
        UAVMEC_D(UavProfile, "h_min_m", h_min_m),
        UAVMEC_D(UavProfile, "h_max_m", h_max_m),
        UAVMEC_D(UavProfile, "theta_min_rad", theta_min_rad),
        UAVMEC_D(UavProfile, "theta_max_rad", theta_max_rad),
    };
    return t;
}

#undef UAVMEC_D
#undef UAVMEC_I

}  // namespace

json to_json(const SystemParams& p) {
    return json{
        {"bandwidth_hz", p.bandwidth_hz},
        {"ref_channel_gain", p.ref_channel_gain},
        {"antenna_const", p.antenna_const},
        {"sidelobe_gain", p.sidelobe_gain},
        {"noise_psd_dbm_per_hz", p.noise_psd_dbm_per_hz},
        {"weight_ue", p.weight_ue},
        {"weight_uav", p.weight_uav},
        {"fcm_exponent", p.fcm_exponent},
        {"reweight_tau", p.reweight_tau},
        {"theta_step_rad", p.theta_step_rad},
        {"outer_tol", p.outer_tol},
        {"outer_max_iter", p.outer_max_iter},
        {"bisect_tol_inverse", p.bisect_tol_inverse},
        {"bisect_tol_multiplier", p.bisect_tol_multiplier},
        {"subgrad_step_init", p.subgrad_step_init},
        {"rng_seed", p.rng_seed},
    };
}

json to_json(const UeProfile& u) {
    return json{
        {"id", u.id},
        {"x_m", u.pos.x},
        {"y_m", u.pos.y},
        {"cpu_cycles", u.cpu_cycles},
        {"data_bits", u.data_bits},
        {"p_max_w", u.p_max_w},
        {"f_max_hz", u.f_max_hz},
        {"kappa", u.kappa},
        {"nu", u.nu},
    };
}

json to_json(const UavProfile& u) {
    return json{
        {"id", u.id},
        {"propulsion_w", u.propulsion_w},
        {"battery_w", u.battery_w},
        {"f_max_hz", u.f_max_hz},
        {"s_coef", u.s_coef},
        {"w_exp", u.w_exp},
        {"max_users", u.max_users},
        {"h_min_m", u.h_min_m},
        {"h_max_m", u.h_max_m},
        {"theta_min_rad", u.theta_min_rad},
        {"theta_max_rad", u.theta_max_rad},
    };
}

json to_json(const Scenario& s) {
    json ues = json::array();
    for (const auto& u : s.ues) ues.push_back(to_json(u));
    json uavs = json::array();
    for (const auto& u : s.uavs) uavs.push_back(to_json(u));
    return json{
        {"params", to_json(s.params)},
        {"latency_s", s.latency_s},
        {"ues", std::move(ues)},
        {"uavs", std::move(uavs)},
    };
}

void overlay(const json& j, SystemParams& out, const std::string& path) {
    apply_table(j, out, path, params_table());
}

void overlay(const json& j, UeProfile& out, const std::string& path) {
    apply_table(j, out, path, ue_table());
}

void overlay(const json& j, UavProfile& out, const std::string& path) {
    apply_table(j, out, path, uav_table());
}

Scenario scenario_from_json(const json& j, const std::string& source) {
    if (!j.is_object()) throw ParseError("<root>", source, "top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        if (k != "params" && k != "latency_s" && k != "ues" && k != "uavs")
            throw ParseError(k, source, "unknown key");
    }
    for (const char* required : {"latency_s", "ues", "uavs"}) {
        if (!j.contains(required)) throw ParseError(required, source, "missing required key");
    }

    Scenario s;
    if (j.contains("params")) overlay(j.at("params"), s.params, "params");
    if (!j.at("latency_s").is_number())
        throw ParseError("latency_s", source, "expected a number");
    s.latency_s = j.at("latency_s").get<double>();

    const auto& ues = j.at("ues");
    if (!ues.is_array()) throw ParseError("ues", source, "expected an array");
    for (std::size_t i = 0; i < ues.size(); ++i) {
        UeProfile u;
        u.id = static_cast<int>(i);
        overlay(ues[i], u, "ues[" + std::to_string(i) + "]");
        s.ues.push_back(u);
    }
    const auto& uavs = j.at("uavs");
    if (!uavs.is_array()) throw ParseError("uavs", source, "expected an array");
    for (std::size_t i = 0; i < uavs.size(); ++i) {
        UavProfile u;
        u.id = static_cast<int>(i);
        overlay(uavs[i], u, "uavs[" + std::to_string(i) + "]");
        s.uavs.push_back(u);
    }

    auto problems = validate(s);
    if (!problems.empty()) {
        throw ParseError(problems.front().field, source, problems.front().message);
    }
    return s;
}

}  // namespace uavmec::detail
