#pragma once
// Physical constants (CODATA 2018) and the unit conventions used everywhere:
//
//   * frequencies are stored as angular quantities in rad/s. Configs and the
//     CLI accept ordinary Hz and the 2*pi factor is applied once, at the
//     boundary, by angular(). Formulas never multiply by 2*pi themselves.
//   * temperatures are stored in kelvin; the CLI accepts nK.
//
// Keeping the conversion in one place is the guard against factor-of-2*pi bugs.

#include <cmath>

#include "thermo/errors.hpp"

namespace thermo {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

// Angular frequency in rad/s. Non-negative for every physical input here;
// enforced where a sign would be meaningless (SystemParams construction).
struct AngularFrequency {
    double rad_per_s = 0.0;
};

inline AngularFrequency angular(double ordinary_hz) {
    if (!std::isfinite(ordinary_hz))
        throw DomainError("angular(): frequency must be finite");
    return AngularFrequency{constants::two_pi * ordinary_hz};
}

inline double ordinary_hz(AngularFrequency w) { return w.rad_per_s / constants::two_pi; }

// F = hbar * omega_a / (k_B * T), the dimensionless inverse temperature of the
// field mode. Strictly decreasing in T.
inline double thermal_ratio(AngularFrequency omega_a, double temperature_K) {
    if (!(omega_a.rad_per_s > 0.0))
        throw DomainError("thermal_ratio(): omega_a must be positive");
    if (!std::isfinite(temperature_K) || temperature_K <= 0.0)
        throw DomainError("thermal_ratio(): temperature must be positive");
    return constants::hbar * omega_a.rad_per_s / (constants::k_B * temperature_K);
}

inline double kelvin_from_nk(double nanokelvin) { return nanokelvin * 1e-9; }

}  // namespace thermo
