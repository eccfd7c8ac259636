#pragma once
// Fisher information and precision bounds.
//
// qfi_general implements the spectral form of the quantum Fisher information,
//   F(rho_x) = 2 sum_{nm} |<m| d rho_x |n>|^2 / (rho_m + rho_n),
// with terms excluded when rho_m + rho_n falls below a zero threshold (both
// eigenvalues numerically zero carry no information and would divide by zero).
// The derivative is taken analytically when supplied, otherwise by central
// finite differences with a step-halving consistency diagnostic.
//
// The closed-form Mach-Zehnder bounds and the Cramer-Rao map live here too,
// together with the entangled-probe scaling model.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "thermo/constants.hpp"
#include "thermo/errors.hpp"
#include "thermo/thermal.hpp"

namespace thermo {

enum class Scheme { ramsey_dynamical, mz_dynamical, mz_geometric };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ramsey_dynamical: return "ramsey_dynamical";
        case Scheme::mz_dynamical: return "mz_dynamical";
        case Scheme::mz_geometric: return "mz_geometric";
    }
    return "?";
}

// A parametric density-matrix family. matrix_at is required; derivative is
// optional (empty std::function means finite differences).
struct ParamDensity {
    int dimension = 0;
    std::function<Eigen::MatrixXcd(double)> matrix_at;
    std::function<Eigen::MatrixXcd(double)> derivative;
};

struct QfiOptions {
    double step = 0.0;                 // 0 = auto: 1e-4 * max(|x|, 1e-9)
    double zero_eig_threshold = 1e-12; // exclusion rule for rho_m + rho_n
    double physical_tol = 1e-12;       // Hermiticity / trace / positivity slack
};

struct QfiResult {
    double value = 0.0;
    double step_used = 0.0;        // 0 when the analytic derivative was used
    double step_halving_delta = 0.0;  // |F(h) - F(h/2)| / max(F(h/2), eps)
    bool conditioning_warning = false;
};

namespace detail {

inline void require_physical(const Eigen::MatrixXcd& rho, double tol, const char* where) {
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
        throw ValidationError(std::string(where) + ": matrix is not Hermitian");
    if (std::fabs(rho.trace().real() - 1.0) > tol || std::fabs(rho.trace().imag()) > tol)
        throw ValidationError(std::string(where) + ": trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw ValidationError(std::string(where) + ": matrix has a negative eigenvalue");
}

inline double qfi_from_derivative(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& drho,
                                  double zero_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    const Eigen::VectorXd lam = es.eigenvalues();
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::MatrixXcd d = v.adjoint() * drho * v;  // <m| drho |n> in the eigenbasis
    double acc = 0.0;
    const int dim = static_cast<int>(lam.size());
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const double denom = lam(m) + lam(n);
            if (denom <= zero_threshold) continue;
            acc += std::norm(d(m, n)) / denom;
        }
    }
    return 2.0 * acc;
}

}  // namespace detail

inline QfiResult qfi_general(const ParamDensity& rho, double x, QfiOptions opt = {}) {
    if (!rho.matrix_at) throw ValidationError("qfi_general(): matrix_at evaluator missing");
    const Eigen::MatrixXcd r = rho.matrix_at(x);
    if (rho.dimension > 0 && r.rows() != rho.dimension)
        throw ValidationError("qfi_general(): matrix size differs from declared dimension");
    detail::require_physical(r, opt.physical_tol, "qfi_general");

    QfiResult out;
    if (rho.derivative) {
        out.value = detail::qfi_from_derivative(r, rho.derivative(x), opt.zero_eig_threshold);
        return out;
    }

    const double h = opt.step > 0.0 ? opt.step : 1e-4 * std::max(std::fabs(x), 1e-9);
    auto central = [&](double step) {
        const Eigen::MatrixXcd hi = rho.matrix_at(x + step);
        const Eigen::MatrixXcd lo = rho.matrix_at(x - step);
        detail::require_physical(hi, opt.physical_tol, "qfi_general");
        detail::require_physical(lo, opt.physical_tol, "qfi_general");
        return Eigen::MatrixXcd((hi - lo) / (2.0 * step));
    };
    const double coarse = detail::qfi_from_derivative(r, central(h), opt.zero_eig_threshold);
    const double fine = detail::qfi_from_derivative(r, central(0.5 * h), opt.zero_eig_threshold);
    out.value = fine;
    out.step_used = 0.5 * h;
    out.step_halving_delta =
        std::fabs(fine - coarse) / std::max(std::fabs(fine), std::numeric_limits<double>::min());
    out.conditioning_warning = out.step_halving_delta > 1e-3;
    return out;
}

// Fisher information of a phase readout. The caller supplies the sensitivity
// of the phase actually read out: d Gamma_D / dT for the Ramsey scheme, the
// single-branch d gamma / dT for the Mach-Zehnder schemes. The map is the
// square in every case; the scheme tag documents which sensitivity is meant.
inline double phase_fisher(double dphase_dT, Scheme) {
    if (!std::isfinite(dphase_dT)) throw DomainError("phase_fisher(): sensitivity must be finite");
    return dphase_dT * dphase_dT;
}

// delta_T = 1 / sqrt(M * fisher). fisher = 0 is a valid no-information input
// and yields +infinity (the distinguished unbounded-error value), not a throw.
inline double cramer_rao(double fisher, std::int64_t M) {
    if (M < 1) throw DomainError("cramer_rao(): M must be >= 1");
    if (!(fisher >= 0.0) || !std::isfinite(fisher))
        throw DomainError("cramer_rao(): fisher must be finite and non-negative");
    if (fisher == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(static_cast<double>(M) * fisher);
}

// Closed-form lower bound for the geometric Mach-Zehnder scheme:
//   delta T > T delta^2 (e^F - 2) / (sqrt(M) F g^2).
// The printed form turns non-positive for F <= ln 2; that region is flagged
// rather than clamped.
struct GeometricBound {
    double delta_T = 0.0;
    bool in_validity = false;  // e^F > 2
};

inline GeometricBound geometric_mz_bound(double T, const SystemParams& p, std::int64_t M) {
    if (M < 1) throw DomainError("geometric_mz_bound(): M must be >= 1");
    const double F = thermal_ratio(p.omega_a, T);
    const double g = p.g.rad_per_s;
    const double d = p.delta.rad_per_s;
    if (!(g > 0.0)) throw DomainError("geometric_mz_bound(): needs g > 0");
    const double eF = std::exp(F);
    GeometricBound b;
    b.delta_T = T * d * d * (eF - 2.0) / (std::sqrt(static_cast<double>(M)) * F * g * g);
    b.in_validity = eF > 2.0;
    return b;
}

// Closed-form sandwich for the dynamical Mach-Zehnder scheme:
//   T delta^2 (e^F - 1)^2 / (sqrt(M) 8 pi F g^2 e^F)  <  delta T  <  2x that.
// upper/lower = 2 exactly (the printed forms differ only by the 8 pi vs 4 pi).
struct SandwichBounds {
    double lower = 0.0;
    double upper = 0.0;
};

inline SandwichBounds dynamical_mz_bounds(double T, const SystemParams& p, std::int64_t M) {
    if (M < 1) throw DomainError("dynamical_mz_bounds(): M must be >= 1");
    const double F = thermal_ratio(p.omega_a, T);
    const double g = p.g.rad_per_s;
    const double d = p.delta.rad_per_s;
    if (!(g > 0.0)) throw DomainError("dynamical_mz_bounds(): needs g > 0");
    const double em1 = std::expm1(F);
    const double lower = T * d * d * em1 * em1 /
                         (std::sqrt(static_cast<double>(M)) * 8.0 * constants::pi * F * g * g *
                          std::exp(F));
    return SandwichBounds{lower, 2.0 * lower};
}

// Maximally entangled N-probe input: N times the phase per shot, so the
// Fisher information per batch is N^2 * base and delta_T scales as 1/N.
inline double entangled_precision(int N, double base_fisher, std::int64_t M_batches) {
    if (N < 1) throw DomainError("entangled_precision(): N must be >= 1");
    return cramer_rao(static_cast<double>(N) * static_cast<double>(N) * base_fisher, M_batches);
}

enum class BoundKind { exact_numeric, closed_form_lower, closed_form_upper };

struct PrecisionReport {
    Scheme scheme = Scheme::ramsey_dynamical;
    double fisher = 0.0;        // K^-2
    std::int64_t M = 0;
    double delta_T = 0.0;       // K
    double relative_error = 0.0;  // delta_T / T
    BoundKind bound_kind = BoundKind::exact_numeric;
};

// Exact phase sensitivity |d phase / dT| for a scheme, from the analytic
// derivatives of the thermal sums. The Ramsey sensitivity is exactly twice
// the single-branch one (branch antisymmetry), computed as such so the
// factor-of-2 precision relation is exact in floating point as well.
inline double scheme_sensitivity(Scheme s, const ThermalField& f, const SystemParams& p,
                                 FormulaMode mode = FormulaMode::closed_form) {
    switch (s) {
        case Scheme::mz_dynamical:
            return std::fabs(dynamical_phase_shift_dT(f, p, Branch::minus, mode));
        case Scheme::ramsey_dynamical:
            return 2.0 * std::fabs(dynamical_phase_shift_dT(f, p, Branch::minus, mode));
        case Scheme::mz_geometric:
            return std::fabs(mixed_geometric_phase_dT(f, p, Branch::minus));
    }
    throw DomainError("scheme_sensitivity(): unknown scheme");
}

inline PrecisionReport scheme_precision(Scheme s, double T, const SystemParams& p,
                                        std::int64_t M,
                                        FormulaMode mode = FormulaMode::closed_form,
                                        double tail_tol = default_tail_tol) {
    const ThermalField f = thermal_field(p.omega_a, T, tail_tol);
    PrecisionReport r;
    r.scheme = s;
    r.M = M;
    r.fisher = phase_fisher(scheme_sensitivity(s, f, p, mode), s);
    r.delta_T = cramer_rao(r.fisher, M);
    r.relative_error = r.delta_T / T;
    r.bound_kind = BoundKind::exact_numeric;
    return r;
}

}  // namespace thermo
