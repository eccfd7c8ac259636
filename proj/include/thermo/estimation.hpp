#pragma once
// Monte-Carlo simulation of the Ramsey thermometry experiment: Bernoulli
// sampling of the excitation probability, maximum-likelihood temperature
// estimation (coarse log-spaced grid plus golden-section refinement), and the
// precision sweep that compares empirical errors against the Cramer-Rao
// prediction.
//
// Determinism contract: every random number comes from an mt19937_64 seeded
// per cell through a splitmix64 hash of (master seed, T index, M index, trial
// index), so sweep cells are reproducible in any execution order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "thermo/errors.hpp"
#include "thermo/metrology.hpp"
#include "thermo/thermal.hpp"

namespace thermo {

struct MeasurementModel {
    SystemParams params;
    double control_phase = 0.0;  // rad, added to Gamma_D in the fringe
    double visibility = 1.0;     // [0, 1]
    FormulaMode mode = FormulaMode::closed_form;
    double tail_tol = default_tail_tol;

    void validate() const {
        if (!(visibility >= 0.0 && visibility <= 1.0))
            throw DomainError("MeasurementModel: visibility must lie in [0, 1]");
        if (!std::isfinite(control_phase))
            throw DomainError("MeasurementModel: control phase must be finite");
    }
};

// Ramsey fringe p = (1 - v cos(Gamma_D(T) + phi_c)) / 2, clamped against
// rounding so the result is always a probability.
inline double excitation_probability(double T, const MeasurementModel& m) {
    m.validate();
    const double x = ramsey_relative_phase(T, m.params, m.mode, m.tail_tol) + m.control_phase;
    const double p = 0.5 * (1.0 - m.visibility * std::cos(x));
    return std::min(1.0, std::max(0.0, p));
}

// Control phase that puts temperature T_center at the fringe midpoint, where
// |dp/dT| is maximal: phi_c = pi/2 - Gamma_D(T_center).
inline double fringe_centering_phase(double T_center, const MeasurementModel& m) {
    return 0.5 * constants::pi - ramsey_relative_phase(T_center, m.params, m.mode, m.tail_tol);
}

struct ExperimentRecord {
    double T_true = 0.0;
    std::int64_t M = 0;
    std::uint64_t seed = 0;
    std::int64_t excited_count = 0;
    double T_hat = std::numeric_limits<double>::quiet_NaN();
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool boundary_hit = false;
    bool window_warning = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t t_index,
                               std::uint64_t m_index, std::uint64_t trial_index) {
    std::uint64_t h = splitmix64(master ^ 0x243F6A8885A308D3ULL);
    h = splitmix64(h ^ t_index);
    h = splitmix64(h ^ m_index);
    h = splitmix64(h ^ trial_index);
    return h;
}

// M independent Bernoulli draws at p = excitation_probability(T_true).
// Uniform deviates are built from the top 53 bits of the generator output so
// the stream is identical across platforms.
inline ExperimentRecord simulate_experiment(double T_true, const MeasurementModel& m,
                                            std::int64_t M, std::uint64_t seed) {
    if (M < 1) throw DomainError("simulate_experiment(): M must be >= 1");
    const double p = excitation_probability(T_true, m);
    std::mt19937_64 rng(seed);
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < M; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) ++count;
    }
    ExperimentRecord rec;
    rec.T_true = T_true;
    rec.M = M;
    rec.seed = seed;
    rec.excited_count = count;
    return rec;
}

struct Estimate {
    double T_hat = 0.0;
    bool boundary_hit = false;
    bool window_warning = false;  // p(T) not monotone over the window
};

inline constexpr int mle_grid_points = 512;
inline constexpr double mle_relative_tol = 1e-6;

namespace detail {

inline double log_likelihood(std::int64_t k, std::int64_t M, double p) {
    const double lo = 1e-300;
    const double pc = std::min(1.0 - 1e-16, std::max(lo, p));
    double acc = 0.0;
    if (k > 0) acc += static_cast<double>(k) * std::log(pc);
    if (k < M) acc += static_cast<double>(M - k) * std::log1p(-pc);
    return acc;
}

}  // namespace detail

// Binomial maximum-likelihood inversion of the fringe over [window_lo, window_hi]:
// coarse log-spaced grid, then golden-section refinement around the best cell.
inline Estimate estimate_temperature(std::int64_t excited_count, std::int64_t M,
                                     const MeasurementModel& m, double window_lo,
                                     double window_hi) {
    if (M < 1) throw DomainError("estimate_temperature(): M must be >= 1");
    if (excited_count < 0 || excited_count > M)
        throw DomainError("estimate_temperature(): count must lie in [0, M]");
    if (!(window_lo > 0.0) || !(window_hi > window_lo))
        throw DomainError("estimate_temperature(): window must satisfy 0 < lo < hi");

    const double log_ratio = std::log(window_hi / window_lo);
    std::vector<double> grid_T(mle_grid_points);
    std::vector<double> grid_p(mle_grid_points);
    for (int i = 0; i < mle_grid_points; ++i) {
        grid_T[i] = window_lo * std::exp(log_ratio * i / (mle_grid_points - 1.0));
        grid_p[i] = excitation_probability(grid_T[i], m);
    }

    double p_min = 1.0, p_max = 0.0;
    bool rising = false, falling = false;
    for (int i = 0; i < mle_grid_points; ++i) {
        p_min = std::min(p_min, grid_p[i]);
        p_max = std::max(p_max, grid_p[i]);
        if (i > 0) {
            if (grid_p[i] > grid_p[i - 1] + 1e-15) rising = true;
            if (grid_p[i] < grid_p[i - 1] - 1e-15) falling = true;
        }
    }
    if (p_max - p_min < 1e-12)
        throw NoInformationError(
            "estimate_temperature(): likelihood is flat over the window (p spans " +
            std::to_string(p_max - p_min) + ")");

    Estimate est;
    est.window_warning = rising && falling;

    int best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < mle_grid_points; ++i) {
        const double ll = detail::log_likelihood(excited_count, M, grid_p[i]);
        if (ll > best_ll) {
            best_ll = ll;
            best = i;
        }
    }
    est.boundary_hit = (best == 0 || best == mle_grid_points - 1);

    double a = grid_T[std::max(0, best - 1)];
    double b = grid_T[std::min(mle_grid_points - 1, best + 1)];
    auto ll_at = [&](double T) {
        return detail::log_likelihood(excited_count, M, excitation_probability(T, m));
    };
    const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = ll_at(x1);
    double f2 = ll_at(x2);
    while (b - a > mle_relative_tol * a) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = ll_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = ll_at(x1);
        }
    }
    est.T_hat = 0.5 * (a + b);
    return est;
}

// One full simulate-and-estimate round.
inline ExperimentRecord run_trial(double T_true, const MeasurementModel& m, std::int64_t M,
                                  std::uint64_t seed, double window_lo, double window_hi) {
    ExperimentRecord rec = simulate_experiment(T_true, m, M, seed);
    const Estimate est = estimate_temperature(rec.excited_count, M, m, window_lo, window_hi);
    rec.T_hat = est.T_hat;
    rec.window_lo = window_lo;
    rec.window_hi = window_hi;
    rec.boundary_hit = est.boundary_hit;
    rec.window_warning = est.window_warning;
    return rec;
}

struct SweepOptions {
    int trials = 200;
    std::uint64_t master_seed = 42;
    double window_lo = 0.0;  // 0 = grid bounds
    double window_hi = 0.0;
    // Fringe operating point: by default each cell is centred at its own
    // T_true (phi_c = pi/2 - Gamma_D(T_true)); a fixed control phase can be
    // forced instead.
    std::optional<double> fixed_control_phase;
};

struct SweepCell {
    double T_true = 0.0;
    std::int64_t M = 0;
    double p_true = 0.0;             // fringe probability at T_true
    double empirical_rel_error = 0.0;  // std(T_hat) / T_true
    double theory_rel_error = 0.0;     // Cramer-Rao delta_T / T_true
    double mean_T_hat = 0.0;
    int trials = 0;
    int failed = 0;    // trials that threw (no-information etc.)
    bool flagged = false;
};

inline std::vector<SweepCell> precision_sweep(const std::vector<double>& T_grid,
                                              const MeasurementModel& base,
                                              const std::vector<std::int64_t>& M_list,
                                              SweepOptions opt = {}) {
    if (T_grid.empty()) throw DomainError("precision_sweep(): empty temperature grid");
    if (M_list.empty()) throw DomainError("precision_sweep(): empty M list");
    if (opt.trials < 2) throw DomainError("precision_sweep(): need at least 2 trials");

    const double window_lo =
        opt.window_lo > 0.0 ? opt.window_lo : *std::min_element(T_grid.begin(), T_grid.end());
    const double window_hi =
        opt.window_hi > 0.0 ? opt.window_hi : *std::max_element(T_grid.begin(), T_grid.end());

    std::vector<SweepCell> table;
    table.reserve(T_grid.size() * M_list.size());
    for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
        const double T = T_grid[ti];
        MeasurementModel model = base;
        model.control_phase = opt.fixed_control_phase
                                  ? *opt.fixed_control_phase
                                  : fringe_centering_phase(T, base);

        const ThermalField field = thermal_field(model.params.omega_a, T, model.tail_tol);
        const double sens = scheme_sensitivity(Scheme::ramsey_dynamical, field, model.params,
                                               model.mode);
        const double cr = cramer_rao(phase_fisher(sens, Scheme::ramsey_dynamical), 1);

        for (std::size_t mi = 0; mi < M_list.size(); ++mi) {
            const std::int64_t M = M_list[mi];
            SweepCell cell;
            cell.T_true = T;
            cell.M = M;
            cell.p_true = excitation_probability(T, model);
            cell.theory_rel_error = cr / (std::sqrt(static_cast<double>(M)) * T);
            cell.trials = opt.trials;

            std::vector<double> hats;
            hats.reserve(static_cast<std::size_t>(opt.trials));
            for (int trial = 0; trial < opt.trials; ++trial) {
                const std::uint64_t seed = cell_seed(opt.master_seed, ti, mi,
                                                     static_cast<std::uint64_t>(trial));
                try {
                    hats.push_back(run_trial(T, model, M, seed, window_lo, window_hi).T_hat);
                } catch (const Error&) {
                    ++cell.failed;
                }
            }
            if (hats.size() >= 2) {
                double mean = 0.0;
                for (double h : hats) mean += h;
                mean /= static_cast<double>(hats.size());
                double var = 0.0;
                for (double h : hats) var += (h - mean) * (h - mean);
                var /= static_cast<double>(hats.size() - 1);
                cell.mean_T_hat = mean;
                cell.empirical_rel_error = std::sqrt(var) / T;
            } else {
                cell.mean_T_hat = std::numeric_limits<double>::quiet_NaN();
                cell.empirical_rel_error = std::numeric_limits<double>::quiet_NaN();
            }
            cell.flagged = cell.failed > 0;
            table.push_back(cell);
        }
    }
    return table;
}

}  // namespace thermo
