// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"

#include "pdnn/coupling.hpp"
#include "pdnn/errors.hpp"
#include "pdnn/rng.hpp"

using namespace pdnn;
using std::numbers::pi;

namespace
{

ComplexVector random_vector(Eigen::Index n, std::uint64_t seed)
{
    RandomStream rng(StreamKey{seed, StreamDomain::channel, {n, 0, 0}});
    ComplexVector v(n);
    for (auto &z : v)
        z = rng.complex_normal();
    return v;
}

} // namespace

TEST_CASE("coupler unit is the symmetric unitary hybrid")
{
    const ComplexMatrix w = coupler_unit();
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(w(0, 0) - cplx(s, 0)) < 1e-15);
    CHECK(std::abs(w(0, 1) - cplx(0, s)) < 1e-15);
    CHECK(std::abs(w(1, 0) - cplx(0, s)) < 1e-15);
    CHECK(std::abs(w(1, 1) - cplx(s, 0)) < 1e-15);
    CHECK(unitarity_error(w) < 1e-15);
    CHECK((w - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("W1 is block diagonal and unitary")
{
    CHECK((build_w1(2) - coupler_unit()).cwiseAbs().maxCoeff() == 0.0);
    const ComplexMatrix w4 = build_w1(4);
    CHECK(w4(0, 2) == cplx(0, 0));
    CHECK((w4.block(2, 2, 2, 2) - coupler_unit()).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t n = 2; n <= 16; n += 2)
        CHECK(unitarity_error(build_w1(n)) < 1e-12);
    CHECK_THROWS_AS(build_w1(3), InvalidArgument);
    CHECK_THROWS_AS(build_w1(0), InvalidArgument);
}

TEST_CASE("W2 staggers the couplers between boundary phase delays")
{
    const ComplexMatrix w = build_w2(4, pi / 4);
    const cplx edge = std::polar(1.0, -pi / 4);
    CHECK(std::abs(w(0, 0) - edge) < 1e-15);
    CHECK(std::abs(w(3, 3) - edge) < 1e-15);
    CHECK((w.block(1, 1, 2, 2) - coupler_unit()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(w(0, 1) == cplx(0, 0));

    const ComplexMatrix w0 = build_w2(4, 0.0);
    CHECK(w0(0, 0) == cplx(1, 0));
    CHECK(w0(3, 3) == cplx(1, 0));

    const ComplexMatrix w2 = build_w2(2, 0.3);
    CHECK(std::abs(w2(0, 0) - std::polar(1.0, -0.3)) < 1e-15);
    CHECK(std::abs(w2(1, 1) - std::polar(1.0, -0.3)) < 1e-15);
    CHECK(w2(0, 1) == cplx(0, 0));

    for (std::size_t n = 2; n <= 16; n += 2)
        for (double theta : {0.0, 0.4, pi / 4, 2.0})
            CHECK(unitarity_error(build_w2(n, theta)) < 1e-12);
    CHECK_THROWS_AS(build_w2(5, 0.0), InvalidArgument);
}

TEST_CASE("coupler spec validation and N_max")
{
    CHECK(CouplerSpec{3, 5, 1, 0.0}.n_max() == 6);
    CHECK(CouplerSpec{8, 8, 1, 0.0}.n_max() == 8);
    CHECK(CouplerSpec{1, 1, 1, 0.0}.n_max() == 2);
    CHECK_THROWS_AS(CouplerSpec({0, 4, 1, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(CouplerSpec({4, 4, 0, 0.0}).validate(), InvalidArgument);
}

TEST_CASE("smallest coupler network")
{
    const ComplexMatrix w = build_coupler_matrix({2, 2, 1, 0.7});
    const ComplexMatrix expected = std::polar(1.0, -0.7) * coupler_unit();
    CHECK((w - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cascaded 8-port network couples most ports")
{
    const ComplexMatrix w = build_coupler_matrix({8, 8, 3, pi / 4});
    CHECK(unitarity_error(w) < 1e-12);
    int strong = 0;
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j < 8; ++j)
            strong += std::norm(w(i, j)) > 1e-3;
    CHECK(strong >= 48);
}

TEST_CASE("square base networks preserve norms, sub-matrices do not expand")
{
    for (std::size_t n : {2u, 4u, 6u, 10u, 16u, 32u})
        for (std::size_t mc : {1u, 2u, 3u})
        {
            const ComplexMatrix w = build_coupler_matrix({n, n, mc, pi / 4});
            CHECK(unitarity_error(w) < 1e-12);
            const ComplexVector x = random_vector(static_cast<Eigen::Index>(n), mc);
            CHECK(std::abs((w * x).norm() - x.norm()) < 1e-12 * x.norm());
        }
    for (auto [n_in, n_out] : {std::pair{4u, 16u}, {16u, 4u}, {7u, 12u}, {32u, 17u}})
        for (auto sel : {PortSelection::first, PortSelection::center})
        {
            const ComplexMatrix w = build_coupler_matrix({n_in, n_out, 3, pi / 4, sel});
            CHECK(w.rows() == static_cast<Eigen::Index>(n_out));
            CHECK(w.cols() == static_cast<Eigen::Index>(n_in));
            Eigen::JacobiSVD<ComplexMatrix> svd(w);
            CHECK(svd.singularValues().maxCoeff() <= 1.0 + 1e-12);
        }
}

TEST_CASE("first-port selection is the top-left block of the base network")
{
    const CouplerSpec spec{6, 10, 2, 0.3};
    const ComplexMatrix base = build_coupler_base(spec);
    CHECK(base.rows() == 10);
    CHECK((build_coupler_matrix(spec) - base.block(0, 0, 10, 6)).cwiseAbs().maxCoeff() == 0.0);
    CouplerSpec centered = spec;
    centered.selection = PortSelection::center;
    CHECK((build_coupler_matrix(centered) - base.block(0, 2, 10, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coupler matrices are bit-identical across calls")
{
    const CouplerSpec spec{12, 12, 3, pi / 4};
    CHECK((build_coupler_matrix(spec) - build_coupler_matrix(spec)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Rayleigh-Sommerfeld entries match a direct evaluation")
{
    const DiffractionSpec spec = DiffractionSpec::from_carrier(8, 8, 28e9, 2.0, 0.5);
    const double lambda = kSpeedOfLight / 28e9;
    CHECK(spec.wavelength == doctest::Approx(lambda).epsilon(1e-15));
    CHECK(spec.element_area == doctest::Approx(0.25 * lambda * lambda).epsilon(1e-15));
    const ComplexMatrix w = build_rs_matrix(spec);
    const double d = 2.0 * lambda;
    for (int m = 0; m < 8; ++m)
        for (int mt = 0; mt < 8; ++mt)
        {
            const double dx = (m - mt) * 0.5 * lambda;
            const double r = std::sqrt(d * d + dx * dx);
            const std::complex<double> expected = spec.element_area * (d / r) / r *
                                                  std::complex<double>(1.0 / (2 * pi * r), -1.0 / lambda) *
                                                  std::exp(std::complex<double>(0, 2 * pi * r / lambda));
            CHECK(std::abs(w(m, mt) - expected) < 1e-12 * std::abs(expected));
        }
    // Facing elements: r equals the layer spacing.
    const std::complex<double> facing =
        spec.element_area / d * std::complex<double>(1.0 / (2 * pi * d), -1.0 / lambda) *
        std::exp(std::complex<double>(0, 2 * pi * d / lambda));
    CHECK(std::abs(w(3, 3) - facing) < 1e-12 * std::abs(facing));
    // Lossy and decaying with lateral offset.
    for (int j = 0; j < 8; ++j)
        CHECK(w.col(j).norm() < 1.0);
    for (int k = 1; k < 7; ++k)
        CHECK(std::abs(w(0, k)) > std::abs(w(0, k + 1)));
}

TEST_CASE("diffraction geometry validation")
{
    DiffractionSpec spec = DiffractionSpec::from_carrier(4, 4, 28e9, 2.0, 0.5);
    spec.layer_spacing = 0.0;
    CHECK_THROWS_AS(build_rs_matrix(spec), GeometryError);
    spec = DiffractionSpec::from_carrier(4, 4, 28e9, 2.0, 0.5);
    spec.wavelength = -1.0;
    CHECK_THROWS_AS(build_rs_matrix(spec), InvalidArgument);
}
