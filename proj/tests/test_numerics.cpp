#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "zeris/numerics.hpp"

using namespace zeris::numerics;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("ln_gamma matches known values") {
    CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ln_gamma(0.5) == doctest::Approx(std::log(std::sqrt(oracles::kPi))).epsilon(1e-13));
    // Gamma(3.5) = 2.5 * 1.5 * 0.5 * sqrt(pi)
    const double g35 = 2.5 * 1.5 * 0.5 * std::sqrt(oracles::kPi);
    CHECK(ln_gamma(3.5) == doctest::Approx(std::log(g35)).epsilon(1e-13));
    CHECK_THROWS_AS((void)ln_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS((void)ln_gamma(-2.0), std::domain_error);
}

TEST_CASE("ln_gamma relative accuracy across the range") {
    // recurrence ln G(x+1) = ln G(x) + ln x propagates exact anchors
    double lg = ln_gamma(0.5);
    for (int k = 0; k < 30; ++k) {
        const double x = 0.5 + k;
        lg += std::log(x);
        CHECK(ln_gamma(x + 1.0) == doctest::Approx(lg).epsilon(1e-12));
    }
    // Stirling check at large arguments
    for (double x : {1e3, 1e4, 1e6}) {
        const double stirling = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * oracles::kPi) +
                                1.0 / (12.0 * x) - 1.0 / (360.0 * x * x * x);
        CHECK(ln_gamma(x) == doctest::Approx(stirling).epsilon(1e-12));
    }
}

TEST_CASE("regularized lower incomplete gamma") {
    CHECK(reg_lower_incomplete_gamma(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reg_lower_incomplete_gamma(2.0, 0.0) == 0.0);
    // integer shape closed form: P(3, 3) = 1 - e^-3 (1 + 3 + 4.5)
    const double expected = 1.0 - std::exp(-3.0) * (1.0 + 3.0 + 4.5);
    CHECK(reg_lower_incomplete_gamma(3.0, 3.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS((void)reg_lower_incomplete_gamma(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)reg_lower_incomplete_gamma(2.0, -1.0), std::domain_error);
    CHECK(reg_lower_incomplete_gamma(RegularizedGammaArgs{3.0, 3.0}) ==
          reg_lower_incomplete_gamma(3.0, 3.0));
}

TEST_CASE("incomplete gamma bounds, monotonicity and saturation") {
    for (double k : {0.3, 1.0, 2.5, 40.0, 417.0}) {
        double prev = 0.0;
        for (double x = 0.0; x <= 4.0 * k; x += 0.25 * k + 0.05) {
            const double p = reg_lower_incomplete_gamma(k, x);
            CHECK(p >= prev - 1e-14);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            prev = p;
        }
        CHECK(reg_lower_incomplete_gamma(k, 50.0 * k) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bessel_i reference values") {
    CHECK(bessel_i(0, 0.0) == 1.0);
    CHECK(bessel_i(1, 0.0) == 0.0);
    CHECK(bessel_i(5, 0.0) == 0.0);
    CHECK(bessel_i(0, 3.0) ==
          doctest::Approx(oracles::bessel_i_reference(0, 3.0)).epsilon(1e-13));
    for (int l : {0, 1, 2, 7, 16, 64}) {
        for (double kappa : {0.5, 3.0, 10.0, 50.0}) {
            CHECK(bessel_i(l, kappa) ==
                  doctest::Approx(oracles::bessel_i_reference(l, kappa)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS((void)bessel_i(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)bessel_i(0, -1.0), std::domain_error);
}

TEST_CASE("bessel ratio bound used by the truncation proof") {
    for (int l : {1, 2, 5, 12, 30}) {
        for (double kappa : {0.25, 1.0, 3.0, 10.0, 50.0}) {
            double factorial_bound = 1.0;
            for (int i = 1; i <= l; ++i) factorial_bound *= 0.5 * kappa / i;
            CHECK(bessel_i(l, kappa) / bessel_i(0, kappa) <= factorial_bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("sinc_like limit and zeros") {
    CHECK(sinc_like(0.0, oracles::kPi) == oracles::kPi);
    CHECK(sinc_like(1.0, 2.0 * oracles::kPi) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sinc_like(2.0, oracles::kPi) == doctest::Approx(0.0).epsilon(1e-14));
    // continuity at the removable singularity
    for (double delta : {oracles::kPi, oracles::kPi / 2, 0.1}) {
        CHECK(sinc_like(1e-8, delta) == doctest::Approx(delta).epsilon(1e-10));
        CHECK(sinc_like(-1e-8, delta) == doctest::Approx(delta).epsilon(1e-10));
    }
    CHECK_THROWS_AS((void)sinc_like(1.0, 0.0), std::domain_error);
}

TEST_SUITE_END();
