// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "doctest.h"

#include "../oracles/oracles.hpp"
#include "pdnn/errors.hpp"
#include "pdnn/rng.hpp"
#include "pdnn/special_functions.hpp"

using namespace pdnn;

TEST_CASE("I0 anchor values")
{
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658777520).epsilon(1e-12));
    CHECK(bessel_i0(10.0) == doctest::Approx(2815.7166284662544).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_i0(-1.0), InvalidArgument);
    CHECK(std::isinf(bessel_i0(800.0)));
    CHECK(std::isfinite(bessel_i0_scaled(800.0)));
}

TEST_CASE("I0 matches the high-precision series to 1e-10 relative")
{
    for (int i = 0; i <= 200; ++i)
    {
        const double x = 0.35 * i;
        const double ref = oracle::bessel_i0_series(x);
        CHECK(std::abs(bessel_i0(x) - ref) <= 1e-10 * ref);
        CHECK(std::abs(bessel_i0_scaled(x) - std::exp(-x) * ref) <= 1e-10 * std::exp(-x) * ref);
    }
}

TEST_CASE("Q1 boundary identities")
{
    for (double b : {0.0, 0.3, 1.0, 2.5, 7.0, 20.0})
        CHECK(std::abs(marcum_q1(0.0, b) - std::exp(-b * b / 2)) < 1e-14);
    for (double a : {0.0, 0.3, 1.0, 2.5, 7.0, 40.0})
        CHECK(marcum_q1(a, 0.0) == 1.0);
}

TEST_CASE("Q1 matches the Poisson-weighted series to 1e-10")
{
    RandomStream rng(StreamKey{7, StreamDomain::init, {0, 0, 0}});
    for (int i = 0; i < 200; ++i)
    {
        const double a = 40.0 * rng.uniform();
        const double b = a + 8.0 * (rng.uniform() - 0.5) + (i % 4 == 0 ? 10.0 * rng.uniform() : 0.0);
        const double bb = std::max(0.0, b);
        const double ref = oracle::marcum_q1_series(a, bb);
        CHECK(std::abs(marcum_q1(a, bb) - ref) < 1e-10);
        CHECK(std::abs(marcum_q1_complement(a, bb) - (1.0 - ref)) < 1e-10);
    }
    CHECK(std::abs(marcum_q1(1.0, 1.0) - oracle::marcum_q1_series(1.0, 1.0)) < 1e-14);
}

TEST_CASE("Q1 is increasing in a and decreasing in b")
{
    RandomStream rng(StreamKey{8, StreamDomain::init, {0, 0, 0}});
    for (int i = 0; i < 200; ++i)
    {
        const double a = 6.0 * rng.uniform();
        const double b = 6.0 * rng.uniform();
        CHECK(marcum_q1(a + 0.1, b) > marcum_q1(a, b));
        CHECK(marcum_q1(a, b + 0.1) < marcum_q1(a, b));
    }
}
