#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "thermo/jc.hpp"

using namespace thermo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemParams headline() {
    return SystemParams::from_detuning(angular(10.0), angular(0.2), angular(2.0));
}

}  // namespace

TEST_CASE("system parameters relate gap, mode and detuning consistently", "[jc]") {
    const SystemParams p = headline();
    REQUIRE(p.omega_d.rad_per_s == p.omega_a.rad_per_s + p.delta.rad_per_s);

    const SystemParams q = SystemParams::from_gap(angular(10.0), angular(0.2), angular(12.0));
    REQUIRE_THAT(q.delta.rad_per_s, WithinRel(angular(2.0).rad_per_s, 1e-12));

    SECTION("invalid inputs are rejected") {
        REQUIRE_THROWS_AS(SystemParams::from_detuning(angular(-1.0), angular(0.2), angular(2.0)),
                          DomainError);
        REQUIRE_THROWS_AS(SystemParams::from_detuning(angular(10.0), angular(-0.2), angular(2.0)),
                          DomainError);
        REQUIRE_THROWS_AS(SystemParams::from_detuning(angular(10.0), angular(0.2), angular(0.0)),
                          DomainError);
    }
}

TEST_CASE("mixing angle arctan(2 g sqrt(n+1) / delta)", "[jc]") {
    const SystemParams p = headline();
    // [DERIVED] n = 3: atan(2 * 0.2 * sqrt(4) / 2) = atan(0.4).
    REQUIRE_THAT(mixing_angle(3, p), WithinRel(0.380506377112365, 1e-12));
    REQUIRE(mixing_angle(0, SystemParams::from_detuning(angular(10.0), angular(0.0),
                                                        angular(2.0))) == 0.0);
    REQUIRE_THROWS_AS(mixing_angle(-1, p), DomainError);

    SECTION("angle grows with level and coupling") {
        REQUIRE(mixing_angle(5, p) > mixing_angle(0, p));
    }
}

TEST_CASE("interrogation cycle lasts one full detuning period", "[jc]") {
    const SystemParams p = headline();
    // [TRIVIAL] 2 pi / (2 pi * 2 Hz) = 0.5 s.
    REQUIRE_THAT(cycle_time(p), WithinRel(0.5, 1e-14));
}

TEST_CASE("diagonalization energies match a brute-force 2x2 eigensolve", "[jc]") {
    const SystemParams p = headline();
    for (int n : {0, 1, 2, 7, 40}) {
        const TwoLevelBlock blk = jc_block(n, p);
        Eigen::Matrix2d h;
        h << blk.e_ground, blk.coupling, blk.coupling, blk.e_excited;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
        const EnergyPair e = dressed_energies(n, p, FormulaMode::diagonalization);
        REQUIRE_THAT(e.minus_J, WithinRel(es.eigenvalues()(0), 1e-12));
        REQUIRE_THAT(e.plus_J, WithinRel(es.eigenvalues()(1), 1e-12));
    }
}

TEST_CASE("closed-form energies follow the printed level expression", "[jc]") {
    const SystemParams p = headline();
    const double wa = p.omega_a.rad_per_s;
    const double d = p.delta.rad_per_s;
    const double g = p.g.rad_per_s;
    for (int n : {0, 1, 2, 7, 40}) {
        const double radical = std::sqrt(d * d + 4.0 * g * g * n);
        const EnergyPair e = dressed_energies(n, p, FormulaMode::closed_form);
        REQUIRE_THAT(e.plus_J, WithinRel(constants::hbar * (wa * (n - 0.5) + radical), 1e-12));
        REQUIRE_THAT(e.minus_J, WithinRel(constants::hbar * (wa * (n - 0.5) - radical), 1e-12));
    }
}

TEST_CASE("doublet splittings differ between the two formula modes", "[jc]") {
    // The closed-form expression and the exact 2x2 eigenvalues disagree
    // level-by-level (different radicands); both modes stay first-class and
    // the gap is measured, not reconciled.
    const SystemParams p = headline();
    const int n = 1;
    const EnergyPair closed = dressed_energies(n, p, FormulaMode::closed_form);
    const EnergyPair diag = dressed_energies(n, p, FormulaMode::diagonalization);
    const double closed_radical = (closed.plus_J - closed.minus_J) / (2.0 * constants::hbar);
    const double diag_split = (diag.plus_J - diag.minus_J) / constants::hbar;
    // [DERIVED] sqrt(delta^2 + 4 g^2 n) and sqrt(delta^2 + 4 g^2 (n+1)) at n = 1.
    REQUIRE_THAT(closed_radical, WithinRel(12.8152337955, 1e-10));
    REQUIRE_THAT(diag_split, WithinRel(13.0593554225, 1e-10));

    SECTION("at g = 0 the closed-form splitting is twice the exact one") {
        const SystemParams q =
            SystemParams::from_detuning(angular(10.0), angular(0.0), angular(2.0));
        const EnergyPair c0 = dressed_energies(n, q, FormulaMode::closed_form);
        const EnergyPair d0 = dressed_energies(n, q, FormulaMode::diagonalization);
        REQUIRE_THAT(c0.plus_J - c0.minus_J,
                     WithinRel(2.0 * constants::hbar * q.delta.rad_per_s, 1e-12));
        REQUIRE_THAT(d0.plus_J - d0.minus_J,
                     WithinRel(constants::hbar * q.delta.rad_per_s, 1e-12));
    }

    SECTION("each mode is continuous as g -> 0") {
        for (FormulaMode mode : {FormulaMode::closed_form, FormulaMode::diagonalization}) {
            const SystemParams tiny =
                SystemParams::from_detuning(angular(10.0), angular(1e-9), angular(2.0));
            const SystemParams zero =
                SystemParams::from_detuning(angular(10.0), angular(0.0), angular(2.0));
            const EnergyPair a = dressed_energies(n, tiny, mode);
            const EnergyPair b = dressed_energies(n, zero, mode);
            REQUIRE_THAT(a.minus_J, WithinRel(b.minus_J, 1e-10));
            REQUIRE_THAT(a.plus_J, WithinRel(b.plus_J, 1e-10));
        }
    }
}

TEST_CASE("per-level dynamical phase is -E t / hbar over one cycle", "[jc]") {
    const SystemParams p = headline();
    const double t = cycle_time(p);
    for (FormulaMode mode : {FormulaMode::closed_form, FormulaMode::diagonalization}) {
        const EnergyPair e = dressed_energies(2, p, mode);
        REQUIRE_THAT(dynamical_phase_level(2, Branch::minus, p, mode),
                     WithinRel(-e.minus_J * t / constants::hbar, 1e-13));
        REQUIRE_THAT(dynamical_phase_level(2, Branch::plus, p, mode),
                     WithinRel(-e.plus_J * t / constants::hbar, 1e-13));
    }
}

TEST_CASE("bare reference phase equals the dressed phase at g = 0", "[jc]") {
    const SystemParams zero =
        SystemParams::from_detuning(angular(10.0), angular(0.0), angular(2.0));
    for (FormulaMode mode : {FormulaMode::closed_form, FormulaMode::diagonalization}) {
        for (int n : {0, 1, 5}) {
            REQUIRE(dynamical_phase_level_bare(n, Branch::minus, zero, mode) ==
                    dynamical_phase_level(n, Branch::minus, zero, mode));
            REQUIRE(dynamical_phase_level_bare(n, Branch::plus, zero, mode) ==
                    dynamical_phase_level(n, Branch::plus, zero, mode));
        }
    }
}

TEST_CASE("per-level geometric phase 2 pi (n - overlap^2)", "[jc]") {
    // [DERIVED] lowest doublet at 2 g = delta: alpha_0 = atan(1) = pi/4,
    // lower-branch phase = -2 pi sin^2(pi/8).
    const SystemParams p = SystemParams::from_detuning(angular(10.0), angular(1.0), angular(2.0));
    REQUIRE_THAT(geometric_phase_level(0, Branch::minus, p),
                 WithinRel(-0.92015118451061, 1e-12));

    SECTION("branch overlaps are complementary") {
        const SystemParams q = headline();
        for (int n : {0, 1, 4}) {
            const double sum = geometric_phase_level(n, Branch::plus, q) +
                               geometric_phase_level(n, Branch::minus, q);
            REQUIRE_THAT(sum, WithinRel(constants::two_pi * (2.0 * n - 1.0), 1e-12));
        }
    }

    SECTION("upper branch lies below the lower branch at the same level") {
        const SystemParams q = headline();
        REQUIRE(geometric_phase_level(0, Branch::plus, q) <
                geometric_phase_level(0, Branch::minus, q));
    }
}
