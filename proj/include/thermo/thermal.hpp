#pragma once
// Thermal occupation weights and mixed-state phase averages.
//
// The field starts in a thermal state with weights p_n = e^(-F n) (1 - e^(-F)),
// F = hbar Omega_a / (k_B T). Sums are truncated at the smallest n_max whose
// geometric tail e^(-F (n_max+1)) falls below tail_tol; the weights are kept
// as printed (not renormalised) and the discarded tail mass is recorded.
//
// Temperature derivatives use d p_n / dT = (F/T) p_n (n - nbar) with
// nbar = 1/(e^F - 1), which is the exact derivative of the truncated sum at
// fixed truncation. Finite-difference checks must therefore hold the
// truncation fixed too (see thermal_weights_fixed).

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "thermo/constants.hpp"
#include "thermo/errors.hpp"
#include "thermo/jc.hpp"

namespace thermo {

struct ThermalField {
    double temperature_K = 0.0;  // 0 when built from F alone
    double ratio_F = 0.0;
    std::vector<double> weights;  // p_0 .. p_n_max
    double tail_mass = 0.0;       // e^(-F (n_max+1)), exact geometric tail

    int n_max() const { return static_cast<int>(weights.size()) - 1; }

    // Mean occupation of the untruncated distribution, 1/(e^F - 1).
    double mean_occupation() const { return 1.0 / std::expm1(ratio_F); }
};

inline constexpr double default_tail_tol = 1e-12;
inline constexpr std::int64_t default_level_cap = 10'000'000;

namespace detail {
inline ThermalField build_field(double F, std::int64_t levels) {
    ThermalField f;
    f.ratio_F = F;
    f.weights.resize(static_cast<std::size_t>(levels));
    const double q = std::exp(-F);
    double p = -std::expm1(-F);  // 1 - e^(-F)
    for (std::int64_t n = 0; n < levels; ++n) {
        f.weights[static_cast<std::size_t>(n)] = p;
        p *= q;
    }
    f.tail_mass = std::exp(-F * static_cast<double>(levels));
    return f;
}
}  // namespace detail

// Truncation chosen from the tail tolerance.
inline ThermalField thermal_weights(double F, double tail_tol = default_tail_tol,
                                    std::int64_t level_cap = default_level_cap) {
    if (!(F > 0.0) || !std::isfinite(F))
        throw DomainError("thermal_weights(): F must be positive");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw DomainError("thermal_weights(): tail_tol must lie in (0, 1)");
    // smallest level count L with e^(-F L) < tail_tol
    std::int64_t levels = static_cast<std::int64_t>(std::floor(-std::log(tail_tol) / F)) + 1;
    if (levels < 1) levels = 1;
    while (std::exp(-F * static_cast<double>(levels)) >= tail_tol) ++levels;
    if (levels > level_cap)
        throw ResourceError("thermal_weights(): truncation needs " + std::to_string(levels) +
                            " levels, above the cap of " + std::to_string(level_cap));
    return detail::build_field(F, levels);
}

// Fixed truncation (levels = n_max + 1), for derivative cross-checks.
inline ThermalField thermal_weights_fixed(double F, std::int64_t levels) {
    if (!(F > 0.0) || !std::isfinite(F))
        throw DomainError("thermal_weights_fixed(): F must be positive");
    if (levels < 1) throw DomainError("thermal_weights_fixed(): need at least one level");
    return detail::build_field(F, levels);
}

inline ThermalField thermal_field(AngularFrequency omega_a, double temperature_K,
                                  double tail_tol = default_tail_tol,
                                  std::int64_t level_cap = default_level_cap) {
    ThermalField f = thermal_weights(thermal_ratio(omega_a, temperature_K), tail_tol, level_cap);
    f.temperature_K = temperature_K;
    return f;
}

namespace detail {
// d p_n / dT = (F/T) p_n (n - nbar); prefactor (F/T) shared across levels.
inline double weight_derivative_scale(const ThermalField& f) {
    if (!(f.temperature_K > 0.0))
        throw DomainError("temperature derivative needs a field built from a temperature");
    return f.ratio_F / f.temperature_K;
}
}  // namespace detail

// Thermal average of the per-level dynamical phase, zero point retained.
inline double mixed_dynamical_phase(const ThermalField& f, const SystemParams& p, Branch b,
                                    FormulaMode mode = FormulaMode::closed_form) {
    double acc = 0.0;
    for (int n = 0; n <= f.n_max(); ++n)
        acc += f.weights[static_cast<std::size_t>(n)] * dynamical_phase_level(n, b, p, mode);
    return acc;
}

// Thermal average with each level's g = 0 zero point subtracted. This is the
// temperature-sensitive part of the dynamical phase: it vanishes as T -> 0
// and as g -> 0.
inline double dynamical_phase_shift(const ThermalField& f, const SystemParams& p, Branch b,
                                    FormulaMode mode = FormulaMode::closed_form) {
    double acc = 0.0;
    for (int n = 0; n <= f.n_max(); ++n)
        acc += f.weights[static_cast<std::size_t>(n)] *
               (dynamical_phase_level(n, b, p, mode) - dynamical_phase_level_bare(n, b, p, mode));
    return acc;
}

// Exact d/dT of dynamical_phase_shift at fixed truncation.
inline double dynamical_phase_shift_dT(const ThermalField& f, const SystemParams& p, Branch b,
                                       FormulaMode mode = FormulaMode::closed_form) {
    const double scale = detail::weight_derivative_scale(f);
    const double nbar = f.mean_occupation();
    double acc = 0.0;
    for (int n = 0; n <= f.n_max(); ++n)
        acc += f.weights[static_cast<std::size_t>(n)] * (n - nbar) *
               (dynamical_phase_level(n, b, p, mode) - dynamical_phase_level_bare(n, b, p, mode));
    return scale * acc;
}

// Interferometric relative phase Gamma_D = gamma_D^+ - gamma_D^- (raw average;
// the Omega_a offsets cancel level-by-level, so no zero-point handling needed).
inline double ramsey_relative_phase(const ThermalField& f, const SystemParams& p,
                                    FormulaMode mode = FormulaMode::closed_form) {
    double acc = 0.0;
    for (int n = 0; n <= f.n_max(); ++n)
        acc += f.weights[static_cast<std::size_t>(n)] *
               (dynamical_phase_level(n, Branch::plus, p, mode) -
                dynamical_phase_level(n, Branch::minus, p, mode));
    return acc;
}

// Exact d/dT of the relative phase at fixed truncation. The branch shifts are
// antisymmetric level-by-level in both formula modes, so this also equals
// 2 * d/dT gamma_D^+ = -2 * d/dT gamma_D^- (zero-point removed).
inline double ramsey_relative_phase_dT(const ThermalField& f, const SystemParams& p,
                                       FormulaMode mode = FormulaMode::closed_form) {
    const double scale = detail::weight_derivative_scale(f);
    const double nbar = f.mean_occupation();
    double acc = 0.0;
    for (int n = 0; n <= f.n_max(); ++n)
        acc += f.weights[static_cast<std::size_t>(n)] * (n - nbar) *
               (dynamical_phase_level(n, Branch::plus, p, mode) -
                dynamical_phase_level(n, Branch::minus, p, mode));
    return scale * acc;
}

namespace detail {
inline std::complex<double> geometric_resultant(const ThermalField& f, const SystemParams& p,
                                                Branch b) {
    std::complex<double> acc{0.0, 0.0};
    for (int n = 0; n <= f.n_max(); ++n) {
        const double phase = geometric_phase_level(n, b, p);
        acc += f.weights[static_cast<std::size_t>(n)] *
               std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}
}  // namespace detail

inline constexpr double resultant_modulus_floor = 1e-12;

// Mixed-state geometric phase Arg(sum_n p_n e^{i gamma_Gn}), principal value
// in (-pi, pi].
inline double mixed_geometric_phase(const ThermalField& f, const SystemParams& p, Branch b) {
    const std::complex<double> s = detail::geometric_resultant(f, p, b);
    const double mod = std::abs(s);
    if (mod < resultant_modulus_floor)
        throw SingularityError("mixed_geometric_phase(): resultant modulus " +
                               std::to_string(mod) + " below " +
                               std::to_string(resultant_modulus_floor) +
                               "; Arg is ill-conditioned");
    return std::atan2(s.imag(), s.real());
}

// Exact d/dT of the mixed geometric phase at fixed truncation:
// d Arg(S) = Im(conj(S) dS) / |S|^2, with dS from the weight derivatives.
inline double mixed_geometric_phase_dT(const ThermalField& f, const SystemParams& p, Branch b) {
    const double scale = detail::weight_derivative_scale(f);
    const double nbar = f.mean_occupation();
    const std::complex<double> s = detail::geometric_resultant(f, p, b);
    const double mod2 = std::norm(s);
    if (std::sqrt(mod2) < resultant_modulus_floor)
        throw SingularityError("mixed_geometric_phase_dT(): resultant modulus below floor");
    std::complex<double> ds{0.0, 0.0};
    for (int n = 0; n <= f.n_max(); ++n) {
        const double phase = geometric_phase_level(n, b, p);
        ds += f.weights[static_cast<std::size_t>(n)] * (n - nbar) *
              std::complex<double>(std::cos(phase), std::sin(phase));
    }
    ds *= scale;
    return (std::conj(s) * ds).imag() / mod2;
}

// Closed-form low-excitation approximations (leading order in g/delta).
// Their ratio geometric/dynamical is 1/(4 pi) identically.
inline double approx_geometric_phase(double ratio_F, const SystemParams& p) {
    const double g = p.g.rad_per_s;
    const double d = p.delta.rad_per_s;
    return g * g / (d * d * std::expm1(ratio_F));
}

inline double approx_dynamical_phase(double ratio_F, const SystemParams& p) {
    const double g = p.g.rad_per_s;
    const double d = p.delta.rad_per_s;
    return 4.0 * constants::pi * g * g * std::exp(-ratio_F) /
           (d * d * (-std::expm1(-ratio_F)));
}

// Temperature-facing convenience overloads.
inline double mixed_dynamical_phase(double T, const SystemParams& p, Branch b,
                                    FormulaMode mode = FormulaMode::closed_form,
                                    double tail_tol = default_tail_tol) {
    return mixed_dynamical_phase(thermal_field(p.omega_a, T, tail_tol), p, b, mode);
}

inline double dynamical_phase_shift(double T, const SystemParams& p, Branch b,
                                    FormulaMode mode = FormulaMode::closed_form,
                                    double tail_tol = default_tail_tol) {
    return dynamical_phase_shift(thermal_field(p.omega_a, T, tail_tol), p, b, mode);
}

inline double mixed_geometric_phase(double T, const SystemParams& p, Branch b,
                                    double tail_tol = default_tail_tol) {
    return mixed_geometric_phase(thermal_field(p.omega_a, T, tail_tol), p, b);
}

inline double ramsey_relative_phase(double T, const SystemParams& p,
                                    FormulaMode mode = FormulaMode::closed_form,
                                    double tail_tol = default_tail_tol) {
    return ramsey_relative_phase(thermal_field(p.omega_a, T, tail_tol), p, mode);
}

struct PhaseReport {
    double temperature_K = 0.0;
    double gamma_d_minus = 0.0;      // raw thermal average
    double gamma_d_plus = 0.0;       // raw thermal average
    double gamma_d_shift_minus = 0.0;  // zero-point removed
    double gamma_g_minus = 0.0;      // Arg form, in (-pi, pi]
    double gamma_g_plus = 0.0;
    double gamma_d_approx = 0.0;     // closed-form branch-minus approximation
    double gamma_g_approx = 0.0;
    double Gamma_D = 0.0;            // gamma_d_plus - gamma_d_minus
    FormulaMode mode = FormulaMode::closed_form;
};

inline PhaseReport phase_report(double T, const SystemParams& p,
                                FormulaMode mode = FormulaMode::closed_form,
                                double tail_tol = default_tail_tol) {
    const ThermalField f = thermal_field(p.omega_a, T, tail_tol);
    PhaseReport r;
    r.temperature_K = T;
    r.mode = mode;
    r.gamma_d_minus = mixed_dynamical_phase(f, p, Branch::minus, mode);
    r.gamma_d_plus = mixed_dynamical_phase(f, p, Branch::plus, mode);
    r.gamma_d_shift_minus = dynamical_phase_shift(f, p, Branch::minus, mode);
    r.gamma_g_minus = mixed_geometric_phase(f, p, Branch::minus);
    r.gamma_g_plus = mixed_geometric_phase(f, p, Branch::plus);
    r.gamma_d_approx = approx_dynamical_phase(f.ratio_F, p);
    r.gamma_g_approx = approx_geometric_phase(f.ratio_F, p);
    r.Gamma_D = r.gamma_d_plus - r.gamma_d_minus;
    return r;
}

}  // namespace thermo
