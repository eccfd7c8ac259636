#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "thermo/metrology.hpp"

using namespace thermo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemParams headline() {
    return SystemParams::from_detuning(angular(10.0), angular(0.2), angular(2.0));
}

// Equal superposition acquiring a parameter-dependent phase theta(x):
// rho = |psi><psi| with |psi> = (|0> + e^{i theta} |1>) / sqrt(2).
Eigen::MatrixXcd phase_state(double theta) {
    Eigen::MatrixXcd r(2, 2);
    const std::complex<double> e(std::cos(theta), std::sin(theta));
    r << 0.5, 0.5 * std::conj(e), 0.5 * e, 0.5;
    return r;
}

Eigen::MatrixXcd phase_state_derivative(double theta, double dtheta_dx) {
    Eigen::MatrixXcd d(2, 2);
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> e(std::cos(theta), std::sin(theta));
    d << 0.0, -i * dtheta_dx * 0.5 * std::conj(e), i * dtheta_dx * 0.5 * e, 0.0;
    return d;
}

}  // namespace

TEST_CASE("precision from Fisher information", "[metrology]") {
    REQUIRE_THAT(cramer_rao(4.0, 25), WithinRel(0.1, 1e-14));

    SECTION("zero information yields the distinguished unbounded value") {
        REQUIRE(std::isinf(cramer_rao(0.0, 100)));
    }
    SECTION("invalid inputs are rejected") {
        REQUIRE_THROWS_AS(cramer_rao(1.0, 0), DomainError);
        REQUIRE_THROWS_AS(cramer_rao(-1.0, 10), DomainError);
        REQUIRE_THROWS_AS(cramer_rao(std::numeric_limits<double>::infinity(), 10), DomainError);
    }
}

TEST_CASE("phase readout Fisher information is the squared sensitivity", "[metrology]") {
    REQUIRE(phase_fisher(3.0, Scheme::ramsey_dynamical) == 9.0);
    REQUIRE(phase_fisher(-3.0, Scheme::mz_geometric) == 9.0);
    REQUIRE_THROWS_AS(phase_fisher(std::numeric_limits<double>::quiet_NaN(),
                                   Scheme::mz_dynamical),
                      DomainError);
}

TEST_CASE("quantum Fisher information of a pure phase state", "[metrology]") {
    const double slope = 2.0;  // d theta / dx
    ParamDensity rho;
    rho.dimension = 2;
    rho.matrix_at = [&](double x) { return phase_state(slope * x); };

    SECTION("finite-difference path matches the squared phase sensitivity") {
        const QfiResult r = qfi_general(rho, 0.7);
        REQUIRE_THAT(r.value, WithinRel(slope * slope, 1e-6));
        REQUIRE(r.step_used > 0.0);
        REQUIRE_FALSE(r.conditioning_warning);
    }

    SECTION("analytic-derivative path is available and tighter") {
        rho.derivative = [&](double x) { return phase_state_derivative(slope * x, slope); };
        const QfiResult r = qfi_general(rho, 0.7);
        REQUIRE_THAT(r.value, WithinRel(slope * slope, 1e-10));
        REQUIRE(r.step_used == 0.0);
    }
}

TEST_CASE("parameter-independent state carries zero information", "[metrology]") {
    ParamDensity rho;
    rho.dimension = 2;
    rho.matrix_at = [](double) {
        Eigen::MatrixXcd r(2, 2);
        r << 0.25, 0.0, 0.0, 0.75;
        return r;
    };
    const QfiResult r = qfi_general(rho, 1.0);
    REQUIRE_THAT(r.value, WithinAbs(0.0, 1e-12));
}

TEST_CASE("rank-deficient support is excluded rather than divided by", "[metrology]") {
    ParamDensity rho;
    rho.dimension = 2;
    rho.matrix_at = [](double x) {
        Eigen::MatrixXcd r(2, 2);
        r << std::cos(x) * std::cos(x), std::cos(x) * std::sin(x), std::cos(x) * std::sin(x),
            std::sin(x) * std::sin(x);
        return r;
    };
    // Pure state: one eigenvalue is zero; the (0,0)-block is dropped by the
    // exclusion rule and the result stays finite.
    const QfiResult r = qfi_general(rho, 0.3);
    REQUIRE(std::isfinite(r.value));
    REQUIRE_THAT(r.value, WithinRel(4.0, 1e-5));  // pure-state value 4 <psi'|psi'>
}

TEST_CASE("unphysical inputs to the information functional are rejected", "[metrology]") {
    ParamDensity rho;
    rho.dimension = 2;

    SECTION("non-Hermitian") {
        rho.matrix_at = [](double) {
            Eigen::MatrixXcd r(2, 2);
            r << 0.5, 0.3, 0.1, 0.5;
            return r;
        };
        REQUIRE_THROWS_AS(qfi_general(rho, 1.0), ValidationError);
    }
    SECTION("trace differs from one") {
        rho.matrix_at = [](double) {
            Eigen::MatrixXcd r(2, 2);
            r << 0.6, 0.0, 0.0, 0.6;
            return r;
        };
        REQUIRE_THROWS_AS(qfi_general(rho, 1.0), ValidationError);
    }
    SECTION("negative eigenvalue") {
        rho.matrix_at = [](double) {
            Eigen::MatrixXcd r(2, 2);
            r << 1.5, 0.0, 0.0, -0.5;
            return r;
        };
        REQUIRE_THROWS_AS(qfi_general(rho, 1.0), ValidationError);
    }
}

TEST_CASE("closed-form geometric lower bound at the reference point", "[metrology]") {
    const SystemParams p = headline();
    // [DERIVED] frozen from the independent evaluation at 0.5 nK, M = 1000.
    const GeometricBound b = geometric_mz_bound(0.5e-9, p, 1000);
    REQUIRE_THAT(b.delta_T, WithinRel(1.00698374536e-9, 1e-9));
    REQUIRE(b.in_validity);

    SECTION("outside its validity region the printed form is flagged, not clamped") {
        const GeometricBound warm = geometric_mz_bound(2e-9, p, 1000);
        REQUIRE_FALSE(warm.in_validity);
        REQUIRE(warm.delta_T < 0.0);
    }
}

TEST_CASE("closed-form dynamical sandwich at the reference point", "[metrology]") {
    const SystemParams p = headline();
    const SandwichBounds b = dynamical_mz_bounds(0.5e-9, p, 1000);
    // [DERIVED] frozen from the independent evaluation.
    REQUIRE_THAT(b.lower, WithinRel(6.5166420863e-11, 1e-9));
    REQUIRE_THAT(b.upper, WithinRel(1.30332841726e-10, 1e-9));
    REQUIRE(b.upper == 2.0 * b.lower);
}

TEST_CASE("relative-phase sensitivity is exactly twice the single branch", "[metrology]") {
    const SystemParams p = headline();
    const ThermalField f = thermal_field(p.omega_a, 0.5e-9);
    const double one = scheme_sensitivity(Scheme::mz_dynamical, f, p);
    const double two = scheme_sensitivity(Scheme::ramsey_dynamical, f, p);
    REQUIRE(two == 2.0 * one);
}

TEST_CASE("scheme precisions at the reference point", "[metrology]") {
    const SystemParams p = headline();
    const PrecisionReport ram = scheme_precision(Scheme::ramsey_dynamical, 0.5e-9, p, 5000);
    // [DERIVED] frozen delta_T for the relative-phase readout at M = 5000.
    REQUIRE_THAT(ram.delta_T, WithinRel(3.01099009466e-11, 1e-8));
    REQUIRE(ram.relative_error > 0.03);
    REQUIRE(ram.relative_error < 0.08);

    SECTION("halving relation against the single-branch scheme is bitwise") {
        const PrecisionReport mz = scheme_precision(Scheme::mz_dynamical, 0.5e-9, p, 5000);
        REQUIRE(ram.delta_T == 0.5 * mz.delta_T);
    }

    SECTION("the dynamical readout beats the geometric one") {
        const PrecisionReport geo = scheme_precision(Scheme::mz_geometric, 0.5e-9, p, 5000);
        REQUIRE(geo.delta_T > ram.delta_T);
    }

    SECTION("quadrupling the budget halves the error exactly") {
        const PrecisionReport m1 = scheme_precision(Scheme::ramsey_dynamical, 0.5e-9, p, 1000);
        const PrecisionReport m4 = scheme_precision(Scheme::ramsey_dynamical, 0.5e-9, p, 4000);
        REQUIRE(m1.delta_T == 2.0 * m4.delta_T);
    }
}

TEST_CASE("entangled probes tighten precision as 1/N", "[metrology]") {
    const double base_fisher = 7.3e16;
    const double single = entangled_precision(1, base_fisher, 1000);
    for (int N : {2, 4, 8, 16})
        REQUIRE_THAT(entangled_precision(N, base_fisher, 1000) * N, WithinRel(single, 1e-12));
    REQUIRE_THROWS_AS(entangled_precision(0, base_fisher, 1000), DomainError);
}
