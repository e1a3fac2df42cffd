#include "uavmec/power.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "uavmec/errors.hpp"

namespace uavmec {

double required_spectral_efficiency(double data_bits, double cpu_cycles, double f_hz,
                                    double latency_s, double bandwidth_hz) {
    const double slack = latency_s * f_hz - cpu_cycles;
    if (!(slack > 0.0)) {
        std::ostringstream os;
        os << "deadline unreachable: capacity " << f_hz << " Hz must exceed F/T = "
           << cpu_cycles / latency_s << " Hz";
        throw InfeasibleDeadline(cpu_cycles / latency_s, os.str());
    }
    return data_bits * f_hz / (bandwidth_hz * slack);
}

double power_coefficient(const UeProfile& ue, double f_hz, double latency_s, double alpha,
                         double bandwidth_hz) {
    const double x =
        required_spectral_efficiency(ue.data_bits, ue.cpu_cycles, f_hz, latency_s, bandwidth_hz);
    return std::expm1(x * std::numbers::ln2) / alpha;
}

double optimal_uplink_power(const UeProfile& ue, const UavPlacement& uav, double f_hz,
                            double latency_s, double alpha, double bandwidth_hz) {
    const double r = horizontal_distance(ue.pos, uav.xy());
    const double path = uav.theta_rad * uav.theta_rad * (uav.h_m * uav.h_m + r * r);
    return power_coefficient(ue, f_hz, latency_s, alpha, bandwidth_hz) * path;
}

double local_exec_power(const UeProfile& ue, double f_hz) {
    if (f_hz <= 0.0) return 0.0;
    return ue.kappa * std::pow(f_hz, ue.nu);
}

}  // namespace uavmec
