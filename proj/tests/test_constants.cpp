#include <catch2/catch_amalgamated.hpp>

#include "thermo/constants.hpp"
#include "thermo/errors.hpp"

using namespace thermo;
using Catch::Matchers::WithinRel;

TEST_CASE("physical constants carry their defined values", "[constants]") {
    REQUIRE(constants::hbar == 1.054571817e-34);
    REQUIRE(constants::k_B == 1.380649e-23);
    REQUIRE(constants::two_pi == 2.0 * constants::pi);
}

TEST_CASE("angular frequency conversion is the exact 2 pi scaling", "[constants]") {
    const AngularFrequency w = angular(10.0);
    REQUIRE(w.rad_per_s == constants::two_pi * 10.0);
    REQUIRE(ordinary_hz(w) == 10.0);

    SECTION("non-finite input is rejected") {
        REQUIRE_THROWS_AS(angular(std::numeric_limits<double>::infinity()), DomainError);
        REQUIRE_THROWS_AS(angular(std::numeric_limits<double>::quiet_NaN()), DomainError);
    }
}

TEST_CASE("nanokelvin conversion applies the 1e-9 scale", "[constants]") {
    REQUIRE(kelvin_from_nk(0.5) == 0.5e-9);
    REQUIRE(kelvin_from_nk(2.0) == 2e-9);
}

TEST_CASE("thermal ratio hbar omega / kT at reference points", "[constants]") {
    // [DERIVED] F = hbar * 2 pi * 10 Hz / (k_B * T): evaluated independently
    // with 128-bit arithmetic, then frozen.
    const AngularFrequency w = angular(10.0);
    REQUIRE_THAT(thermal_ratio(w, 0.5e-9), WithinRel(0.959848614085127, 1e-12));
    REQUIRE_THAT(thermal_ratio(w, 2e-9), WithinRel(0.239962153521282, 1e-12));
    REQUIRE_THAT(thermal_ratio(w, 0.1e-9), WithinRel(4.79924307043, 1e-11));

    SECTION("ratio scales inversely with temperature") {
        REQUIRE_THAT(thermal_ratio(w, 0.25e-9), WithinRel(2.0 * thermal_ratio(w, 0.5e-9), 1e-14));
    }

    SECTION("non-positive inputs are rejected") {
        REQUIRE_THROWS_AS(thermal_ratio(w, 0.0), DomainError);
        REQUIRE_THROWS_AS(thermal_ratio(w, -1e-9), DomainError);
        REQUIRE_THROWS_AS(thermal_ratio(AngularFrequency{0.0}, 1e-9), DomainError);
    }
}
