// SPDX-License-Identifier: Apache-2.0

#include "pdnn/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

// Power series sum_k ((x/2)^k / k!)^2; all terms positive.
double i0_series(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k)
    {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum;
}

// exp(-x) I0(x) ~ (2 pi x)^{-1/2} sum_k c_k x^{-k}, c_k = c_{k-1} (2k-1)^2 / (8k).
// Truncated at the smallest term; used for x > 20 where that term is < 1e-17.
double i0_scaled_asymptotic(double x)
{
    double c = 1.0;
    double sum = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k)
    {
        c *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (c > prev)
            break;
        sum += c;
        prev = c;
        if (c < 1e-17 * sum)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

constexpr double kAsymptoticThreshold = 20.0;

void check_bessel_arg(double x)
{
    if (!(x >= 0.0))
        throw InvalidArgument("bessel_i0: argument must be >= 0");
}

// Poisson(mean) pmf over the window [lo, lo + pmf.size()), normalized to
// unit mass. The window spans mode -/+ 12 standard deviations (plus margin),
// far past where the pmf drops below 1e-30.
struct PoissonWindow
{
    long lo = 0;
    std::vector<double> pmf;

    explicit PoissonWindow(double mean)
    {
        if (mean <= 0.0)
        {
            pmf.assign(1, 1.0);
            return;
        }
        const long mode = static_cast<long>(std::floor(mean));
        const double sd = std::sqrt(mean);
        lo = std::max(0L, mode - static_cast<long>(std::ceil(12.0 * sd + 10.0)));
        const long hi = mode + static_cast<long>(std::ceil(12.0 * sd + 30.0));
        pmf.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
        const std::size_t im = static_cast<std::size_t>(mode - lo);
        pmf[im] = std::exp(-mean + static_cast<double>(mode) * std::log(mean) -
                           std::lgamma(static_cast<double>(mode) + 1.0));
        for (std::size_t i = im + 1; i < pmf.size(); ++i)
            pmf[i] = pmf[i - 1] * mean / static_cast<double>(lo + static_cast<long>(i));
        for (std::size_t i = im; i > 0; --i)
            pmf[i - 1] = pmf[i] * static_cast<double>(lo + static_cast<long>(i)) / mean;
        double total = 0.0;
        for (double p : pmf)
            total += p;
        for (double &p : pmf)
            p /= total;
    }

    long hi() const noexcept { return lo + static_cast<long>(pmf.size()) - 1; }
};

struct MarcumPair
{
    double q;          // Q1(a, b)
    double complement; // 1 - Q1(a, b)
};

MarcumPair marcum_pair(double a, double b)
{
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw InvalidArgument("marcum_q1: arguments must be finite and >= 0");
    if (b == 0.0)
        return {1.0, 0.0};
    if (a == 0.0)
    {
        const double y = 0.5 * b * b;
        return {std::exp(-y), -std::expm1(-y)};
    }
    // Tail bounds: Q1 <= exp(-(b-a)^2/2) for b > a and 1 - Q1 <= exp(-(a-b)^2/2) for a > b.
    if (b - a > 40.0)
        return {0.0, 1.0};
    if (a - b > 40.0)
        return {1.0, 0.0};

    const PoissonWindow k_win(0.5 * a * a);
    const PoissonWindow y_win(0.5 * b * b);

    // cdf[i] = P[Y <= y_win.lo + i], upper[i] = P[Y > y_win.lo + i], each summed
    // from its own small end.
    const std::size_t ny = y_win.pmf.size();
    std::vector<double> cdf(ny), upper(ny);
    double acc = 0.0;
    for (std::size_t i = 0; i < ny; ++i)
        cdf[i] = (acc += y_win.pmf[i]);
    acc = 0.0;
    for (std::size_t i = ny; i > 0; --i)
    {
        upper[i - 1] = acc;
        acc += y_win.pmf[i - 1];
    }

    double q = 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < k_win.pmf.size(); ++i)
    {
        const long k = k_win.lo + static_cast<long>(i);
        double f, g;
        if (k < y_win.lo)
        {
            f = 0.0;
            g = 1.0;
        }
        else if (k >= y_win.hi())
        {
            f = 1.0;
            g = 0.0;
        }
        else
        {
            const auto j = static_cast<std::size_t>(k - y_win.lo);
            f = cdf[j];
            g = upper[j];
        }
        q += k_win.pmf[i] * f;
        p += k_win.pmf[i] * g;
    }
    // The smaller of the two sums carries full relative accuracy.
    if (q <= p)
        return {q, 1.0 - q};
    return {1.0 - p, p};
}

} // namespace

double bessel_i0(double x)
{
    check_bessel_arg(x);
    if (x <= kAsymptoticThreshold)
        return i0_series(x);
    if (x > 713.0)
    {
        // exp(x) overflows first; combine in log space.
        const double log_value = x + std::log(i0_scaled_asymptotic(x));
        return log_value > std::log(std::numeric_limits<double>::max()) ? std::numeric_limits<double>::infinity()
                                                                          : std::exp(log_value);
    }
    return std::exp(x) * i0_scaled_asymptotic(x);
}

double bessel_i0_scaled(double x)
{
    check_bessel_arg(x);
    if (x <= kAsymptoticThreshold)
        return std::exp(-x) * i0_series(x);
    return i0_scaled_asymptotic(x);
}

double marcum_q1(double a, double b) { return marcum_pair(a, b).q; }

double marcum_q1_complement(double a, double b) { return marcum_pair(a, b).complement; }

} // namespace pdnn
