// SPDX-License-Identifier: Apache-2.0

#include "pdnn/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pdnn/errors.hpp"
#include "pdnn/special_functions.hpp"

namespace pdnn
{

namespace
{

void check_order(std::size_t m_order, const char *op)
{
    if (m_order < 2)
        throw InvalidArgument(std::string(op) + ": modulation order must be >= 2");
}

void check_gamma(double gamma, const char *op)
{
    if (!(gamma >= 0.0))
        throw InvalidArgument(std::string(op) + ": gamma must be >= 0");
}

// Rician density in units of sigma: u exp(-(u-a)^2/2) I0e(a u).
double rician_pdf_unit(double u, double a)
{
    if (u <= 0.0)
        return 0.0;
    const double d = u - a;
    return u * std::exp(-0.5 * d * d) * bessel_i0_scaled(a * u);
}

constexpr double kWindowSigmas = 12.0;
constexpr double kPanelWidth = 3.0;
constexpr double kQuadTolerance = 1e-10;

// Integrates f(u) * pdf(u; a) over the Rician support window, in unit-sigma
// coordinates, panel by panel.
template <class F> double integrate_rician(double a, F &&weight, const char *op)
{
    using boost::math::quadrature::gauss_kronrod;
    const double lo = std::max(0.0, a - kWindowSigmas);
    const double hi = a + kWindowSigmas;
    const int panels = static_cast<int>(std::ceil((hi - lo) / kPanelWidth));
    const double width = (hi - lo) / panels;
    double total = 0.0;
    double total_err = 0.0;
    auto integrand = [&](double u) { return rician_pdf_unit(u, a) * weight(u); };
    for (int p = 0; p < panels; ++p)
    {
        double err = 0.0;
        const double x0 = lo + p * width;
        total += gauss_kronrod<double, 15>::integrate(integrand, x0, x0 + width, 15, 1e-13, &err);
        total_err += err;
    }
    if (!(total_err <= kQuadTolerance) || !std::isfinite(total))
        throw NumericError("analysis", op,
                           "quadrature did not converge (estimate " + std::to_string(total) + ", error " +
                               std::to_string(total_err) + ", a=" + std::to_string(a) + ")");
    return total;
}

template <class Real> double ser_alternating_sum(double gamma, std::size_t m_order)
{
    Real sum = 0;
    Real binom = 1;
    const Real g = gamma;
    for (std::size_t k = 1; k < m_order; ++k)
    {
        binom = binom * Real(m_order - k) / Real(k);
        const Real kk = Real(k);
        const Real term = binom / (kk + 1) * exp(-g * kk / (kk + 1));
        if (k % 2 == 1)
            sum += term;
        else
            sum -= term;
    }
    return static_cast<double>(sum);
}

} // namespace

double ebn0_from_gamma(double gamma, std::size_t m_order)
{
    check_order(m_order, "ebn0_from_gamma");
    return 10.0 * std::log10(gamma / (2.0 * std::log2(static_cast<double>(m_order))));
}

double gamma_from_ebn0(double ebn0_db, std::size_t m_order)
{
    check_order(m_order, "gamma_from_ebn0");
    return 2.0 * std::log2(static_cast<double>(m_order)) * std::pow(10.0, ebn0_db / 10.0);
}

SnrPoint SnrPoint::from_gamma(double gamma, std::size_t m_order)
{
    return {gamma, ebn0_from_gamma(gamma, m_order), m_order};
}

SnrPoint SnrPoint::from_ebn0_db(double ebn0_db, std::size_t m_order)
{
    return {gamma_from_ebn0(ebn0_db, m_order), ebn0_db, m_order};
}

double rician_pdf(double r, double mu, double sigma)
{
    if (!(sigma > 0.0) || mu < 0.0)
        throw InvalidArgument("rician_pdf: need sigma > 0 and mu >= 0");
    return rician_pdf_unit(r / sigma, mu / sigma) / sigma;
}

double rician_cdf(double r, double mu, double sigma)
{
    if (!(sigma > 0.0) || mu < 0.0)
        throw InvalidArgument("rician_cdf: need sigma > 0 and mu >= 0");
    if (r <= 0.0)
        return 0.0;
    return marcum_q1_complement(mu / sigma, r / sigma);
}

double ccdp(const CcdpInputs &inputs, std::size_t m_order)
{
    check_order(m_order, "ccdp");
    if (inputs.interferer_amps.size() != m_order - 1)
        throw InvalidArgument("ccdp: expected M-1 = " + std::to_string(m_order - 1) + " interferer amplitudes, got " +
                              std::to_string(inputs.interferer_amps.size()));
    if (!(inputs.sigma > 0.0) || !(inputs.desired_amp >= 0.0))
        throw InvalidArgument("ccdp: need sigma > 0 and desired_amp >= 0");
    std::vector<double> a_int;
    for (double amp : inputs.interferer_amps)
    {
        if (!(amp >= 0.0))
            throw InvalidArgument("ccdp: interferer amplitudes must be >= 0");
        a_int.push_back(amp / inputs.sigma);
    }
    const double a = inputs.desired_amp / inputs.sigma;
    auto product_of_cdfs = [&](double u) {
        double prod = 1.0;
        for (double ak : a_int)
            prod *= marcum_q1_complement(ak, u);
        return prod;
    };
    return integrate_rician(a, product_of_cdfs, "ccdp");
}

double ccdp_interference_free(double gamma, std::size_t m_order)
{
    check_order(m_order, "ccdp_interference_free");
    check_gamma(gamma, "ccdp_interference_free");
    const double a = std::sqrt(2.0 * gamma);
    const double power = static_cast<double>(m_order - 1);
    auto rayleigh_cdfs = [&](double u) { return std::pow(-std::expm1(-0.5 * u * u), power); };
    return integrate_rician(a, rayleigh_cdfs, "ccdp_interference_free");
}

double ser_exact(double gamma, std::size_t m_order)
{
    check_order(m_order, "ser_exact");
    check_gamma(gamma, "ser_exact");
    using boost::multiprecision::cpp_bin_float_100;
    using boost::multiprecision::cpp_bin_float_50;
    if (m_order <= 64)
        return ser_alternating_sum<cpp_bin_float_50>(gamma, m_order);
    if (m_order <= 256)
        return ser_alternating_sum<cpp_bin_float_100>(gamma, m_order);
    return 1.0 - ccdp_interference_free(gamma, m_order);
}

double ser_asymptotic(double gamma, std::size_t m_order)
{
    check_order(m_order, "ser_asymptotic");
    check_gamma(gamma, "ser_asymptotic");
    return 0.5 * static_cast<double>(m_order - 1) * std::exp(-0.5 * gamma);
}

double benchmark_fsk_ser(double gamma, std::size_t m_order) { return ser_exact(gamma, m_order); }

double benchmark_qam_ser(double ebn0_db, std::size_t m_order)
{
    const bool power_of_four = m_order >= 4 && (m_order & (m_order - 1)) == 0 && (std::countr_zero(m_order) % 2 == 0);
    if (!power_of_four)
        throw InvalidArgument("benchmark_qam_ser: M must be a power of 4 (square constellation), got " +
                              std::to_string(m_order));
    if (!std::isfinite(ebn0_db))
        throw InvalidArgument("benchmark_qam_ser: Eb/N0 must be finite");
    const double m = static_cast<double>(m_order);
    const double esn0 = std::log2(m) * std::pow(10.0, ebn0_db / 10.0);
    const double x = std::sqrt(3.0 * esn0 / (m - 1.0));
    const double q = 0.5 * std::erfc(x / std::numbers::sqrt2);
    const double p_axis = 2.0 * (1.0 - 1.0 / std::sqrt(m)) * q;
    return p_axis * (2.0 - p_axis); // 1 - (1 - p)^2 without cancellation
}

std::vector<TheoryRow> theory_curve(std::size_t m_order, const std::vector<double> &ebn0_db_grid)
{
    std::vector<TheoryRow> rows;
    for (double ebn0 : ebn0_db_grid)
    {
        TheoryRow row;
        row.ebn0_db = ebn0;
        row.gamma = gamma_from_ebn0(ebn0, m_order);
        row.ser_exact = ser_exact(row.gamma, m_order);
        row.ser_asymptotic = ser_asymptotic(row.gamma, m_order);
        row.ser_fsk = benchmark_fsk_ser(row.gamma, m_order);
        try
        {
            row.ser_qam = benchmark_qam_ser(ebn0, m_order);
        }
        catch (const InvalidArgument &)
        {
            row.ser_qam = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back(row);
    }
    return rows;
}

void write_theory_csv(std::ostream &os, const std::vector<TheoryRow> &rows)
{
    const auto old_precision = os.precision(17);
    os << "ebn0_db,gamma,ser_exact,ser_asymptotic,ser_fsk,ser_qam\n";
    for (const auto &r : rows)
        os << r.ebn0_db << ',' << r.gamma << ',' << r.ser_exact << ',' << r.ser_asymptotic << ',' << r.ser_fsk << ','
           << r.ser_qam << '\n';
    os.precision(old_precision);
}

} // namespace pdnn
