#pragma once
// Jaynes-Cummings dressed levels and the phases a level accumulates over one
// cycle of the drive angle theta (cycle duration t = 2*pi/delta).
//
// Level index n >= 0 labels the doublet spanned by {|n+1, g>, |n, e>} with
// mixing angle alpha_n = arctan(2 g sqrt(n+1) / delta).
//
// Two energy conventions coexist on purpose:
//
//   closed_form      E_n^(+/-) = hbar [ Omega_a (n - 1/2) +/- sqrt(delta^2 + 4 g^2 n) ]
//   diagonalization  exact eigenvalues of the 2x2 block,
//                    E_n^(+/-) = hbar [ Omega_a (n + 1/2) +/- (1/2) sqrt(delta^2 + 4 g^2 (n+1)) ]
//
// The conventions do not agree level-by-level: the offset index is shifted by
// one quantum and the closed form carries no 1/2 on the splitting. Both are
// kept first-class so the discrepancy can be measured instead of silently
// resolved; closed_form is the default used by the thermal averages.

#include <cmath>

#include "thermo/constants.hpp"
#include "thermo/errors.hpp"

namespace thermo {

enum class Branch { minus, plus };
enum class FormulaMode { closed_form, diagonalization };

inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

struct SystemParams {
    AngularFrequency omega_a;  // field mode
    AngularFrequency omega_d;  // two-level gap
    AngularFrequency g;        // coupling
    AngularFrequency delta;    // detuning |omega_d - omega_a|, must be > 0

    // omega_d is placed above the mode, omega_d = omega_a + delta, which also
    // keeps the rotating-wave margin (g, delta vs omega_a + omega_d) honest.
    static SystemParams from_detuning(AngularFrequency omega_a, AngularFrequency g,
                                      AngularFrequency delta) {
        SystemParams p{omega_a, AngularFrequency{omega_a.rad_per_s + delta.rad_per_s}, g, delta};
        p.validate();
        return p;
    }

    static SystemParams from_gap(AngularFrequency omega_a, AngularFrequency g,
                                 AngularFrequency omega_d) {
        SystemParams p{omega_a, omega_d,
                       g, AngularFrequency{std::fabs(omega_d.rad_per_s - omega_a.rad_per_s)}};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(omega_a.rad_per_s > 0.0))
            throw DomainError("SystemParams: omega_a must be positive");
        if (!(omega_d.rad_per_s > 0.0))
            throw DomainError("SystemParams: omega_d must be positive");
        if (g.rad_per_s < 0.0)
            throw DomainError("SystemParams: coupling g must be non-negative");
        if (!(delta.rad_per_s > 0.0))
            throw DomainError("SystemParams: detuning delta must be positive");
        const double implied = std::fabs(omega_d.rad_per_s - omega_a.rad_per_s);
        if (std::fabs(implied - delta.rad_per_s) > 1e-9 * delta.rad_per_s)
            throw DomainError("SystemParams: delta inconsistent with |omega_d - omega_a|");
    }
};

namespace detail {
inline void require_level(int n) {
    if (n < 0) throw DomainError("level index n must be >= 0");
}
}  // namespace detail

// alpha_n = arctan(2 g sqrt(n+1) / delta), in [0, pi/2).
inline double mixing_angle(int n, const SystemParams& p) {
    detail::require_level(n);
    return std::atan(2.0 * p.g.rad_per_s * std::sqrt(n + 1.0) / p.delta.rad_per_s);
}

// Duration of one theta cycle.
inline double cycle_time(const SystemParams& p) {
    return constants::two_pi / p.delta.rad_per_s;
}

// 2x2 Hamiltonian block at theta = 0 on span{|n+1, g>, |n, e>}; entries in J.
// theta only conjugates the block by a diagonal unitary, so eigenvalues are
// theta-independent and the block is built at theta = 0.
struct TwoLevelBlock {
    double e_ground;   // <n+1,g| H |n+1,g>
    double coupling;   // hbar g sqrt(n+1)
    double e_excited;  // <n,e| H |n,e>
};

inline TwoLevelBlock jc_block(int n, const SystemParams& p) {
    detail::require_level(n);
    const double wa = p.omega_a.rad_per_s;
    const double wd = p.omega_d.rad_per_s;
    return TwoLevelBlock{constants::hbar * (wa * (n + 1.0) - 0.5 * wd),
                         constants::hbar * p.g.rad_per_s * std::sqrt(n + 1.0),
                         constants::hbar * (wa * n + 0.5 * wd)};
}

struct EnergyPair {
    double minus_J;
    double plus_J;
};

inline EnergyPair dressed_energies(int n, const SystemParams& p, FormulaMode mode) {
    detail::require_level(n);
    const double wa = p.omega_a.rad_per_s;
    const double d = p.delta.rad_per_s;
    const double g = p.g.rad_per_s;
    if (mode == FormulaMode::closed_form) {
        const double split = std::sqrt(d * d + 4.0 * g * g * n);
        const double base = wa * (n - 0.5);
        return EnergyPair{constants::hbar * (base - split), constants::hbar * (base + split)};
    }
    // Closed-form eigenvalues of jc_block(n); minus is the lower branch.
    const double split = std::sqrt(d * d + 4.0 * g * g * (n + 1.0));
    const double base = wa * (n + 0.5);
    return EnergyPair{constants::hbar * (base - 0.5 * split),
                      constants::hbar * (base + 0.5 * split)};
}

struct DressedLevel {
    int n;
    Branch branch;
    double alpha_n;   // rad
    double energy_J;
    FormulaMode mode;
};

inline DressedLevel dressed_level(int n, Branch b, const SystemParams& p, FormulaMode mode) {
    const EnergyPair e = dressed_energies(n, p, mode);
    return DressedLevel{n, b, mixing_angle(n, p),
                        b == Branch::plus ? e.plus_J : e.minus_J, mode};
}

// Dynamical phase over one cycle, gamma = -E t / hbar, unwrapped.
inline double dynamical_phase_level(int n, Branch b, const SystemParams& p, FormulaMode mode) {
    const EnergyPair e = dressed_energies(n, p, mode);
    const double energy = (b == Branch::plus) ? e.plus_J : e.minus_J;
    return -energy * cycle_time(p) / constants::hbar;
}

// The same expression at g = 0: the temperature-insensitive zero point of the
// level. Subtracting it per level is what "zero-point removed" means here.
inline double dynamical_phase_level_bare(int n, Branch b, const SystemParams& p,
                                         FormulaMode mode) {
    SystemParams bare = p;
    bare.g = AngularFrequency{0.0};
    return dynamical_phase_level(n, b, bare, mode);
}

// Geometric phase over one cycle, unwrapped (not reduced mod 2*pi):
//   gamma_Gn^+ = 2 pi (n - cos^2(alpha_n / 2))
//   gamma_Gn^- = 2 pi (n - sin^2(alpha_n / 2))
inline double geometric_phase_level(int n, Branch b, const SystemParams& p) {
    const double half = 0.5 * mixing_angle(n, p);
    const double s = (b == Branch::plus) ? std::cos(half) : std::sin(half);
    return constants::two_pi * (n - s * s);
}

}  // namespace thermo
