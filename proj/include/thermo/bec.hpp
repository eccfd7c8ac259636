#pragma once
// Mapping from laboratory condensate parameters to the effective qubit-mode
// model: phonon mode frequency from the box geometry, impurity-phonon coupling
// from the collisional strengths, probe budget from the spacing rule, the
// Unruh temperature, and the validity report for the rotating-wave and
// adiabatic approximations.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "thermo/constants.hpp"
#include "thermo/errors.hpp"
#include "thermo/jc.hpp"
#include "thermo/thermal.hpp"

namespace thermo {

struct CondensateParams {
    double length_L = 0.0;        // m
    double speed_c = 0.0;         // m/s, speed of sound
    double volume_V = 0.0;        // m^3
    double g_bb = 0.0;            // J m^3, condensate-condensate coupling
    double g_ab = 0.0;            // J m^3, dot-condensate coupling
    double healing_length = 0.0;  // m
    double dot_spacing = 0.0;     // m
    std::optional<double> g_aa;   // intra-dot strength; assumption input only

    void validate() const {
        if (!(length_L > 0.0)) throw DomainError("CondensateParams: length must be positive");
        if (!(speed_c > 0.0)) throw DomainError("CondensateParams: sound speed must be positive");
        if (!(volume_V > 0.0)) throw DomainError("CondensateParams: volume must be positive");
        if (!(g_bb > 0.0)) throw DomainError("CondensateParams: g_bb must be positive");
        if (!(healing_length > 0.0))
            throw DomainError("CondensateParams: healing length must be positive");
        if (!(dot_spacing > 0.0)) throw DomainError("CondensateParams: dot spacing must be positive");
    }
};

// Lowest phonon mode of a box of size L: Omega_a = c k with k = 2 pi / L.
inline AngularFrequency phonon_frequency(double length_L, double speed_c) {
    if (!(length_L > 0.0) || !(speed_c > 0.0))
        throw DomainError("phonon_frequency(): inputs must be positive");
    return AngularFrequency{constants::two_pi * (speed_c / length_L)};
}

inline double default_wavenumber(double length_L) {
    if (!(length_L > 0.0)) throw DomainError("default_wavenumber(): length must be positive");
    return constants::two_pi / length_L;
}

// Impurity-phonon coupling g = sqrt(c k / (2 hbar V g_bb)) * (g_ab - g_bb).
// The sign of (g_ab - g_bb) is preserved; downstream uses |g|.
inline AngularFrequency dot_coupling(const CondensateParams& c, double k) {
    c.validate();
    if (!(k > 0.0)) throw DomainError("dot_coupling(): wavenumber must be positive");
    const double prefactor =
        std::sqrt(c.speed_c * k / (2.0 * constants::hbar * c.volume_V * c.g_bb));
    return AngularFrequency{prefactor * (c.g_ab - c.g_bb)};
}

// Number of independently placeable probes. Spacing below the healing length
// breaks probe independence and is rejected.
inline std::int64_t probe_budget(double length_L, double dot_spacing, double healing_length) {
    if (!(length_L > 0.0) || !(dot_spacing > 0.0) || !(healing_length > 0.0))
        throw DomainError("probe_budget(): inputs must be positive");
    if (dot_spacing < healing_length)
        throw ValidationError(
            "probe_budget(): spatial separation must be larger than the healing length");
    return static_cast<std::int64_t>(std::floor(length_L / dot_spacing));
}

// T_U = hbar a / (2 pi c k_B).
inline double unruh_temperature(double acceleration, double speed_c) {
    if (acceleration < 0.0) throw DomainError("unruh_temperature(): acceleration must be >= 0");
    if (!(speed_c > 0.0)) throw DomainError("unruh_temperature(): sound speed must be positive");
    return constants::hbar * acceleration / (constants::two_pi * speed_c * constants::k_B);
}

struct ValidityThresholds {
    double rwa = 0.1;
    double adiabatic = 0.1;
};

// The rotating-wave margins are g/(Omega_a+Omega_d) and delta/(Omega_a+Omega_d).
//
// The adiabatic figure of merit is the standard dimensionless transition
// parameter |<n+| dH/dt |n->| / (E_+ - E_-)^2 evaluated at the thermal-mean
// occupation: with the drive angle swept at rate delta this is
// delta sin(alpha_n) / (2 sqrt(delta^2 + 4 g^2 (n+1))). It vanishes as g -> 0.
// The printed inequality compares the transition rate against g/2 with the
// interaction time on both sides; both sides (times t) are reported verbatim
// rather than encoded as a pass/fail rule, since that comparison does not
// vanish in the g -> 0 limit.
struct ValidityReport {
    double rwa_margin_g = 0.0;
    double rwa_margin_delta = 0.0;
    double rwa_margin = 0.0;  // max of the two
    bool rwa_ok = false;
    double adiabatic_margin = 0.0;
    bool adiabatic_ok = false;
    double transition_rate = 0.0;  // |<n+|dH/dt|n->| / (E_+ - E_-), rad/s
    double printed_rhs = 0.0;      // g/2, rad/s
    double lhs_times_t = 0.0;
    double rhs_times_t = 0.0;
    double thermal_mean_n = 0.0;
    ValidityThresholds thresholds;
};

inline ValidityReport validity_report(const SystemParams& p, double temperature_K,
                                      double interaction_time,
                                      ValidityThresholds thresholds = {}) {
    if (!(interaction_time > 0.0))
        throw DomainError("validity_report(): interaction time must be positive");
    ValidityReport r;
    r.thresholds = thresholds;
    const double eps = p.omega_a.rad_per_s + p.omega_d.rad_per_s;
    r.rwa_margin_g = p.g.rad_per_s / eps;
    r.rwa_margin_delta = p.delta.rad_per_s / eps;
    r.rwa_margin = std::max(r.rwa_margin_g, r.rwa_margin_delta);
    r.rwa_ok = r.rwa_margin < thresholds.rwa;

    const double F = thermal_ratio(p.omega_a, temperature_K);
    r.thermal_mean_n = 1.0 / std::expm1(F);
    const double d = p.delta.rad_per_s;
    const double g = p.g.rad_per_s;
    const double split = std::sqrt(d * d + 4.0 * g * g * (r.thermal_mean_n + 1.0));
    const double sin_alpha = 2.0 * g * std::sqrt(r.thermal_mean_n + 1.0) / split;
    r.transition_rate = 0.5 * d * sin_alpha;
    r.printed_rhs = 0.5 * g;
    r.lhs_times_t = r.transition_rate * interaction_time;
    r.rhs_times_t = r.printed_rhs * interaction_time;
    r.adiabatic_margin = r.transition_rate / split;
    r.adiabatic_ok = r.adiabatic_margin < thresholds.adiabatic;
    return r;
}

}  // namespace thermo
