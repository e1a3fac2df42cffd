#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace uavmec {

// Units throughout: meters, seconds, watts, Hz, bits, CPU cycles.
// The only dB quantities (noise PSD here, UE power in the generator defaults)
// are converted once, in derive_constants / the defaults below.

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct SystemParams {
    double bandwidth_hz = 1e6;
    double ref_channel_gain = 1.42e-4;  // g0, power gain at 1 m
    double antenna_const = 2.2846;      // G0
    double sidelobe_gain = 0.0;         // g; only 0 is supported
    double noise_psd_dbm_per_hz = -169.0;
    double weight_ue = 10.0;   // W1
    double weight_uav = 1.0;   // W2
    double fcm_exponent = 1.2; // m
    double reweight_tau = 1e-3;
    double theta_step_rad = std::numbers::pi / 90.0;  // xi
    double outer_tol = 1e-3;                          // epsilon
    int outer_max_iter = 50;                          // T_max
    double bisect_tol_inverse = 1e-10;     // eps1, relative
    double bisect_tol_multiplier = 1e-8;   // eps2, relative
    double subgrad_step_init = 1.0;        // phi0 (also psi0)
    std::uint64_t rng_seed = 0;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct UeProfile {
    int id = 0;
    Vec2 pos;
    double cpu_cycles = 1e7;      // F_i
    double data_bits = 1e5;       // D_i
    double p_max_w = 0.050118723362727230;  // 17 dBm
    double f_max_hz = 1e8;
    double kappa = 1e-28;
    double nu = 3.0;

    friend bool operator==(const UeProfile&, const UeProfile&) = default;
};

struct UavProfile {
    int id = 0;
    double propulsion_w = 100.0;  // Q_j
    double battery_w = 110.0;     // P^uav_max
    double f_max_hz = 1e9;
    double s_coef = 1e-28;
    double w_exp = 3.0;
    int max_users = 30;           // U_j
    double h_min_m = 10.0;
    double h_max_m = 50.0;
    double theta_min_rad = std::numbers::pi / 6.0;
    double theta_max_rad = std::numbers::pi / 3.0;

    friend bool operator==(const UavProfile&, const UavProfile&) = default;
};

struct Scenario {
    SystemParams params;
    std::vector<UeProfile> ues;
    std::vector<UavProfile> uavs;
    double latency_s = 1.0;

    int num_ues() const { return static_cast<int>(ues.size()); }
    int num_uavs() const { return static_cast<int>(uavs.size()); }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct DerivedConstants {
    double noise_w = 0.0;
    double alpha = 0.0;  // g0 * G0 / noise
};

DerivedConstants derive_constants(const SystemParams& params);

double dbm_to_watts(double dbm);

struct Violation {
    std::string field;    // dotted path, e.g. "uavs[2].battery_w"
    std::string message;
};

// Empty when every type invariant holds.
std::vector<Violation> validate(const Scenario& scenario);
std::vector<Violation> validate(const SystemParams& params, const std::string& prefix = "params");

// Throws InvalidScenario listing every violation.
void require_valid(const Scenario& scenario);

// Generator inputs. The templates carry every per-profile default; callers
// override by editing them before calling generate_scenario. The template
// ids and UE positions are ignored.
struct GenSpec {
    int n_ues = 100;
    int m_uavs = 10;
    double field_size_m = 1000.0;
    std::uint64_t seed = 0;
    SystemParams params;
    UeProfile ue_template;
    UavProfile uav_template;
    double latency_s = 1.0;
};

// UE positions are i.i.d. uniform on [0, field]^2; the same seed always gives
// the same scenario. params.rng_seed is set to spec.seed.
Scenario generate_scenario(const GenSpec& spec);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

// Text forms of the same format, used by the file functions and the config loader.
std::string scenario_to_text(const Scenario& scenario);
Scenario scenario_from_text(const std::string& text, const std::string& source = "<string>");

}  // namespace uavmec
