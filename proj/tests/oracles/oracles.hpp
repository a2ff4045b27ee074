// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the tests. None of these
// call into the library's numerical routines.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pdnn/linalg.hpp"

namespace oracle
{

using hp = boost::multiprecision::cpp_bin_float_50;

// I0(x) = sum_k (x/2)^{2k} / (k!)^2, 50 digits.
inline hp bessel_i0_series_hp(const hp &x)
{
    const hp q = x * x / 4;
    hp term = 1;
    hp sum = 1;
    for (int k = 1; k < 5000; ++k)
    {
        term *= q / (hp(k) * hp(k));
        sum += term;
        if (term < sum * hp("1e-40"))
            break;
    }
    return sum;
}

inline double bessel_i0_series(double x)
{
    return static_cast<double>(bessel_i0_series_hp(hp(x)));
}

// Q1(a, b) = sum_k e^{-a^2/2} (a^2/2)^k / k! * e^{-b^2/2} sum_{j<=k} (b^2/2)^j / j!, 50 digits.
inline double marcum_q1_series(double a, double b)
{
    const hp x = hp(a) * hp(a) / 2;
    const hp y = hp(b) * hp(b) / 2;
    hp pois_x = exp(-x); // Pois(k; x)
    hp pois_y = exp(-y); // Pois(k; y)
    hp cdf_y = pois_y;   // P[Pois(y) <= k]
    hp sum = pois_x * cdf_y;
    for (int k = 1; k < 20000; ++k)
    {
        pois_x *= x / k;
        pois_y *= y / k;
        cdf_y += pois_y;
        const hp term = pois_x * cdf_y;
        sum += term;
        if (k > x && term < hp("1e-30"))
            break;
    }
    return static_cast<double>(sum);
}

// Rician CDF through the noncentral chi-square law with 2 degrees of freedom:
// (X / sigma)^2 ~ chi'^2(2, mu^2 / sigma^2).
inline double rician_cdf_chi2(double r, double mu, double sigma)
{
    if (r <= 0.0)
        return 0.0;
    boost::math::non_central_chi_squared dist(2.0, mu * mu / (sigma * sigma));
    return boost::math::cdf(dist, r * r / (sigma * sigma));
}

inline double rician_pdf_direct(double r, double mu, double sigma)
{
    const hp s2 = hp(sigma) * hp(sigma);
    const hp rr = r;
    const hp m = mu;
    return static_cast<double>(rr / s2 * exp(-(rr * rr + m * m) / (2 * s2)) * bessel_i0_series_hp(rr * m / s2));
}

// CCDP integral with noncentral chi-square CDFs and a fixed-panel quadrature.
inline double ccdp_chi2(double desired, const std::vector<double> &interferers, double sigma)
{
    auto f = [&](double r) {
        double v = rician_pdf_direct(r, desired, sigma);
        for (double a : interferers)
            v *= rician_cdf_chi2(r, a, sigma);
        return v;
    };
    const double hi = desired + 14.0 * sigma;
    const int panels = 56;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p)
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, hi * p / panels, hi * (p + 1) / panels,
                                                                             0, 0);
    return sum;
}

// SER from the closed form evaluated term by term in 50 digits.
inline double ser_closed_form(double gamma, std::size_t m)
{
    hp sum = 0;
    for (std::size_t k = 1; k < m; ++k)
    {
        const hp binom = boost::math::binomial_coefficient<hp>(static_cast<unsigned>(m - 1), static_cast<unsigned>(k));
        const hp sign = (k % 2 == 1) ? 1 : -1;
        sum += sign * binom / hp(k + 1) * exp(-hp(gamma) * hp(k) / hp(k + 1));
    }
    return static_cast<double>(sum);
}

// Per-symbol SINR with explicit loops.
inline std::vector<double> sinr_loop(const pdnn::ComplexMatrix &c, double noise_power)
{
    std::vector<double> out;
    for (Eigen::Index m = 0; m < c.cols(); ++m)
    {
        double interference = 0.0;
        for (Eigen::Index k = 0; k < c.rows(); ++k)
            if (k != m)
                interference += std::norm(c(k, m));
        out.push_back(std::norm(c(m, m)) / (interference + noise_power));
    }
    return out;
}

} // namespace oracle
