// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"

#include "../oracles/oracles.hpp"
#include "pdnn/analysis.hpp"
#include "pdnn/errors.hpp"
#include "pdnn/rng.hpp"

using namespace pdnn;

TEST_CASE("Eb/N0 conversions")
{
    CHECK(ebn0_from_gamma(4.0, 4) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ebn0_from_gamma(28.3, 4) == doctest::Approx(10.0 * std::log10(28.3 / 4.0)));
    for (std::size_t m : {2u, 4u, 16u, 64u})
        for (double g : {0.01, 1.0, 7.5, 300.0})
            CHECK(std::abs(gamma_from_ebn0(ebn0_from_gamma(g, m), m) - g) < 1e-12 * g);
    const auto p = SnrPoint::from_ebn0_db(3.0, 16);
    CHECK(p.gamma == doctest::Approx(8.0 * std::pow(10.0, 0.3)));
    CHECK(SnrPoint::from_gamma(p.gamma, 16).ebn0_db == doctest::Approx(3.0));
}

TEST_CASE("Rician density and CDF agree with the noncentral chi-square law")
{
    for (double mu : {0.0, 0.5, 2.0, 6.0})
        for (double sigma : {0.4, 1.0})
            for (double r : {0.05, 0.5, 1.0, 2.5, 6.0, 9.0})
            {
                CHECK(std::abs(rician_cdf(r, mu, sigma) - oracle::rician_cdf_chi2(r, mu, sigma)) < 1e-10);
                CHECK(std::abs(rician_pdf(r, mu, sigma) - oracle::rician_pdf_direct(r, mu, sigma)) <
                      1e-10 * std::max(1.0, oracle::rician_pdf_direct(r, mu, sigma)));
            }
}

TEST_CASE("SER closed form anchors")
{
    CHECK(ser_exact(0.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(ser_exact(0.0, 4) - 0.75) < 1e-15);
    for (std::size_t m : {2u, 4u, 16u, 64u, 128u, 256u})
        CHECK(std::abs(ser_exact(0.0, m) - (1.0 - 1.0 / m)) < 1e-12);
    CHECK(ser_asymptotic(0.0, 2) == ser_exact(0.0, 2));
    CHECK(ser_asymptotic(3.0, 2) == doctest::Approx(ser_exact(3.0, 2)).epsilon(1e-15));
}

TEST_CASE("SER matches a 50-digit term-by-term evaluation")
{
    for (std::size_t m : {2u, 4u, 16u, 64u, 128u})
        for (double g : {0.0, 0.1, 1.0, 5.0, 20.0, 60.0})
        {
            const double ref = oracle::ser_closed_form(g, m);
            CHECK(std::abs(ser_exact(g, m) - ref) <= 1e-13 * ref + 1e-300);
        }
}

TEST_CASE("SER is monotone in gamma and M, bounded, and below its asymptote")
{
    for (std::size_t m : {4u, 16u, 64u})
    {
        double prev = 1.0;
        for (double g = 0.0; g <= 80.0; g += 0.5)
        {
            const double s = ser_exact(g, m);
            CHECK(s < prev);
            CHECK(s > 0.0);
            CHECK(s <= 1.0 - 1.0 / m + 1e-15);
            CHECK(ser_asymptotic(g, m) >= s);
            prev = s;
        }
    }
    for (double g : {0.5, 3.0, 10.0})
    {
        CHECK(ser_exact(g, 4) < ser_exact(g, 16));
        CHECK(ser_exact(g, 16) < ser_exact(g, 64));
    }
}

TEST_CASE("asymptotic ratio tends to one")
{
    CHECK(ser_asymptotic(20.0, 4) / ser_exact(20.0, 4) > ser_asymptotic(40.0, 4) / ser_exact(40.0, 4));
    CHECK(ser_asymptotic(40.0, 4) / ser_exact(40.0, 4) < 1.01);
}

TEST_CASE("CCDP without interference reproduces the closed form")
{
    for (std::size_t m : {2u, 4u, 16u})
        for (double g : {0.0, 1.0, 5.0, 10.0, 20.0})
        {
            CcdpInputs in{std::sqrt(2.0 * 0.7 * 0.7 * g), std::vector<double>(m - 1, 0.0), 0.7};
            CHECK(std::abs(ccdp(in, m) - (1.0 - ser_exact(g, m))) < 1e-8);
            CHECK(std::abs(ccdp_interference_free(g, m) - (1.0 - ser_exact(g, m))) < 1e-8);
        }
    CHECK(std::abs(ccdp({0.0, {0.0}, 1.0}, 2) - 0.5) < 1e-10);
    // gamma = 20, M = 4 against the quadrature route.
    CHECK(std::abs(ser_exact(20.0, 4) - (1.0 - ccdp_interference_free(20.0, 4))) < 1e-8);
}

TEST_CASE("CCDP with interferers matches an independent chi-square quadrature")
{
    RandomStream rng(StreamKey{12, StreamDomain::init, {0, 0, 0}});
    for (int i = 0; i < 6; ++i)
    {
        const std::size_t m = i % 2 ? 4 : 2;
        CcdpInputs in;
        in.sigma = 0.5 + rng.uniform();
        in.desired_amp = 4.0 * rng.uniform();
        for (std::size_t k = 0; k + 1 < m; ++k)
            in.interferer_amps.push_back(2.0 * rng.uniform());
        CHECK(std::abs(ccdp(in, m) - oracle::ccdp_chi2(in.desired_amp, in.interferer_amps, in.sigma)) < 1e-9);
    }
}

TEST_CASE("CCDP input validation")
{
    CHECK_THROWS_AS(ccdp({1.0, {0.1}, 1.0}, 4), InvalidArgument);
    CHECK_THROWS_AS(ccdp({1.0, {0.1}, 0.0}, 2), InvalidArgument);
    CHECK_THROWS_AS(ccdp({-1.0, {0.1}, 1.0}, 2), InvalidArgument);
}

TEST_CASE("FSK benchmark aliases the closed form")
{
    for (double g : {0.0, 2.0, 10.0})
        for (std::size_t m : {4u, 16u})
            CHECK(benchmark_fsk_ser(g, m) == ser_exact(g, m));
    CHECK(benchmark_fsk_ser(10.0, 4) == ser_exact(10.0, 4));
    CHECK(std::abs(benchmark_fsk_ser(0.0, 16) - 15.0 / 16.0) < 1e-12);
}

TEST_CASE("QAM benchmark domain and limits")
{
    CHECK_THROWS_AS(benchmark_qam_ser(5.0, 8), InvalidArgument);
    CHECK_THROWS_AS(benchmark_qam_ser(5.0, 2), InvalidArgument);
    CHECK(benchmark_qam_ser(40.0, 4) < 1e-100);
    CHECK(benchmark_qam_ser(0.0, 4) > 0.0);
    CHECK(benchmark_qam_ser(5.0, 16) > benchmark_qam_ser(5.0, 4));
}

TEST_CASE("4-QAM formula matches a symbol-level simulation")
{
    // Gray-coded 4-QAM at Eb/N0 = 4 dB, 1e6 symbols, minimum-distance detection.
    const double ebn0 = std::pow(10.0, 0.4);
    const double es = 1.0;
    const double n0 = es / (2.0 * ebn0);
    const double a = std::sqrt(es / 2.0);
    RandomStream rng(StreamKey{13, StreamDomain::noise, {0, 0, 0}});
    const int n = 1000000;
    int errors = 0;
    for (int t = 0; t < n; ++t)
    {
        const double si = rng.uniform() < 0.5 ? -a : a;
        const double sq = rng.uniform() < 0.5 ? -a : a;
        const double ri = si + std::sqrt(n0 / 2.0) * rng.normal();
        const double rq = sq + std::sqrt(n0 / 2.0) * rng.normal();
        errors += ((ri > 0) != (si > 0)) || ((rq > 0) != (sq > 0));
    }
    const double p = benchmark_qam_ser(4.0, 4);
    CHECK(std::abs(static_cast<double>(errors) / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("theory curve rows and CSV layout")
{
    const auto rows = theory_curve(16, {0.0, 5.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].gamma == doctest::Approx(gamma_from_ebn0(5.0, 16)));
    CHECK(rows[1].ser_exact == ser_exact(rows[1].gamma, 16));
    CHECK(rows[1].ser_fsk == rows[1].ser_exact);
    CHECK(std::isnan(theory_curve(8, {0.0}).front().ser_qam));
    std::ostringstream os;
    write_theory_csv(os, rows);
    CHECK(os.str().rfind("ebn0_db,gamma,ser_exact,ser_asymptotic,ser_fsk,ser_qam\n", 0) == 0);
}
