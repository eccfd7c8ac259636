#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "thermo/bec.hpp"

using namespace thermo;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CondensateParams lab_defaults() {
    CondensateParams c;
    c.length_L = 500e-6;
    c.speed_c = 5e-3;
    c.volume_V = 1.25e-14;
    c.g_bb = 5.2e-51;
    c.g_ab = 2.375e-50;
    c.healing_length = 2e-7;
    c.dot_spacing = 3e-7;
    return c;
}

}  // namespace

TEST_CASE("lowest box mode frequency c / L lands on 10 Hz exactly", "[bec]") {
    // 5e-3 / 5e-4 happens to be exact in binary, so the comparison is ==.
    const AngularFrequency w = phonon_frequency(500e-6, 5e-3);
    REQUIRE(w.rad_per_s == angular(10.0).rad_per_s);
    REQUIRE(default_wavenumber(500e-6) == constants::two_pi / 500e-6);
    REQUIRE_THROWS_AS(phonon_frequency(0.0, 5e-3), DomainError);
}

TEST_CASE("impurity-phonon coupling from collisional strengths", "[bec]") {
    const CondensateParams c = lab_defaults();
    const double k = default_wavenumber(c.length_L);
    const AngularFrequency g = dot_coupling(c, k);

    SECTION("the laboratory defaults land near 0.2 Hz") {
        REQUIRE_THAT(ordinary_hz(g), WithinRel(0.2, 1e-3));
    }

    SECTION("the sign of g_ab - g_bb is preserved") {
        CondensateParams swapped = c;
        swapped.g_ab = c.g_bb - (c.g_ab - c.g_bb);
        const AngularFrequency neg = dot_coupling(swapped, k);
        REQUIRE(neg.rad_per_s < 0.0);
        REQUIRE_THAT(-neg.rad_per_s, WithinRel(g.rad_per_s, 1e-12));
    }

    SECTION("equal strengths decouple the probe") {
        CondensateParams equal = c;
        equal.g_ab = equal.g_bb;
        REQUIRE(dot_coupling(equal, k).rad_per_s == 0.0);
    }

    SECTION("coupling scales as 1/sqrt(volume)") {
        CondensateParams big = c;
        big.volume_V = 4.0 * c.volume_V;
        REQUIRE_THAT(dot_coupling(big, k).rad_per_s, WithinRel(0.5 * g.rad_per_s, 1e-12));
    }
}

TEST_CASE("probe budget from the spacing rule", "[bec]") {
    REQUIRE(probe_budget(500e-6, 3e-7, 2e-7) == 1666);
    REQUIRE(probe_budget(500e-6, 3e-7, 2e-7) >= 1500);

    SECTION("spacing below the healing length is rejected with a clear message") {
        REQUIRE_THROWS_MATCHES(
            probe_budget(500e-6, 1e-7, 2e-7), ValidationError,
            Catch::Matchers::MessageMatches(
                ContainsSubstring("spatial separation must be larger than the healing length")));
    }
}

TEST_CASE("analogue Unruh temperature", "[bec]") {
    // [DERIVED] hbar * 9.81 / (2 pi * 0.005 * k_B), frozen.
    const double tu = unruh_temperature(9.81, 5e-3);
    REQUIRE_THAT(tu, WithinRel(2.38512976851e-9, 1e-10));
    REQUIRE_THAT(tu, WithinRel(2.4e-9, 0.05));

    SECTION("temperature scales inversely with the sound speed") {
        REQUIRE_THAT(unruh_temperature(9.81, 1e-2), WithinRel(0.5 * tu, 1e-12));
    }
    REQUIRE(unruh_temperature(0.0, 5e-3) == 0.0);
    REQUIRE_THROWS_AS(unruh_temperature(-1.0, 5e-3), DomainError);
}

TEST_CASE("approximation validity margins at the working point", "[bec]") {
    const SystemParams p = SystemParams::from_detuning(angular(10.0), angular(0.2), angular(2.0));
    const ValidityReport r = validity_report(p, 0.5e-9, cycle_time(p));

    SECTION("rotating-wave margins against the sum frequency") {
        // delta / (omega_a + omega_d) = 2 / 22 dominates g / 22.
        REQUIRE_THAT(r.rwa_margin_delta, WithinRel(1.0 / 11.0, 1e-12));
        REQUIRE_THAT(r.rwa_margin_g, WithinRel(0.2 / 22.0, 1e-12));
        REQUIRE(r.rwa_margin == r.rwa_margin_delta);
        REQUIRE(r.rwa_ok);
    }

    SECTION("adiabatic figure of merit is marginal at the working coupling") {
        REQUIRE(r.adiabatic_margin > 0.11);
        REQUIRE(r.adiabatic_margin < 0.13);
        REQUIRE_FALSE(r.adiabatic_ok);
    }

    SECTION("the printed-rate comparison is reported verbatim, both sides") {
        REQUIRE(r.printed_rhs == 0.5 * p.g.rad_per_s);
        REQUIRE_THAT(r.lhs_times_t, WithinRel(r.transition_rate * cycle_time(p), 1e-12));
        // At these parameters the left side exceeds the right by ~2.5x; the
        // report exposes the numbers instead of encoding a pass/fail verdict.
        const double ratio = r.lhs_times_t / r.rhs_times_t;
        REQUIRE(ratio > 2.3);
        REQUIRE(ratio < 2.7);
    }

    SECTION("mean occupation enters the figure of merit") {
        // [DERIVED] 1 / (e^F - 1) at F = 0.959848614085127 (0.5 nK, 10 Hz).
        REQUIRE_THAT(r.thermal_mean_n, WithinRel(0.620616458229308, 1e-10));
    }

    SECTION("the transition parameter vanishes with the coupling") {
        const SystemParams weak =
            SystemParams::from_detuning(angular(10.0), angular(1e-6), angular(2.0));
        const ValidityReport w = validity_report(weak, 0.5e-9, cycle_time(weak));
        REQUIRE(w.adiabatic_margin < 1e-6);
        REQUIRE(w.adiabatic_ok);
    }
}

TEST_CASE("condensate parameter validation", "[bec]") {
    CondensateParams c = lab_defaults();
    REQUIRE_NOTHROW(c.validate());
    c.volume_V = 0.0;
    REQUIRE_THROWS_AS(c.validate(), DomainError);
    c = lab_defaults();
    c.g_bb = -1e-51;
    REQUIRE_THROWS_AS(c.validate(), DomainError);
}
