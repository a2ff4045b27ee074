// SPDX-License-Identifier: Apache-2.0
//
// Detection-error theory for the power-detector receiver.
//
// When symbol m is sent, output port k carries X_k = |c_{k,m} + n_k| with
// n_k ~ CN(0, 2 sigma^2): X_m is Rician around |c_{m,m}|, every other port is
// Rician around its interference amplitude. The conditional probability of a
// correct decision (CCDP) is
//   P_c = int_0^inf f_Rice(r; |c_mm|) prod_{k != m} F_Rice(r; |c_km|) dr.
// With all interference removed this integral has the closed form
//   SER = sum_{k=1}^{M-1} C(M-1, k) (-1)^{k+1} / (k+1) exp(-gamma k / (k+1)),
// gamma = |c_mm|^2 / (2 sigma^2), identical to non-coherent orthogonal FSK.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pdnn
{

struct CcdpInputs
{
    double desired_amp = 0.0;
    std::vector<double> interferer_amps; // M - 1 entries
    double sigma = 1.0;
};

struct SnrPoint
{
    double gamma = 0.0;   // linear
    double ebn0_db = 0.0; // gamma / (2 log2 M) in dB
    std::size_t m_order = 2;

    static SnrPoint from_gamma(double gamma, std::size_t m_order);
    static SnrPoint from_ebn0_db(double ebn0_db, std::size_t m_order);
};

double ebn0_from_gamma(double gamma, std::size_t m_order);   // dB
double gamma_from_ebn0(double ebn0_db, std::size_t m_order); // linear

// Rician density/CDF of |mu + n|, n ~ CN(0, 2 sigma^2).
double rician_pdf(double r, double mu, double sigma);
double rician_cdf(double r, double mu, double sigma);

// Adaptive Gauss-Kronrod over r in [max(0, mu - 12 sigma), mu + 12 sigma].
// Throws NumericError when the error estimate exceeds 1e-10.
double ccdp(const CcdpInputs &inputs, std::size_t m_order);

// The CCDP integral with every interferer nulled (Rayleigh CDFs at the other
// ports), as a function of gamma. Independent quadrature route to 1 - ser_exact.
double ccdp_interference_free(double gamma, std::size_t m_order);

// Closed-form SER. The alternating binomial sum is accumulated in 50- or
// 100-digit arithmetic (M <= 256); larger M falls back to the quadrature route.
double ser_exact(double gamma, std::size_t m_order);

// Leading (k = 1) term: (M-1)/2 exp(-gamma/2).
double ser_asymptotic(double gamma, std::size_t m_order);

// Non-coherent orthogonal M-FSK, same expression as ser_exact.
double benchmark_fsk_ser(double gamma, std::size_t m_order);

// Gray-coded square M-QAM with coherent detection:
//   P_s = 1 - (1 - 2 (1 - 1/sqrt M) Q(sqrt(3 Es/N0 / (M-1))))^2,
//   Es/N0 = log2(M) Eb/N0.
// M must be a power of 4.
double benchmark_qam_ser(double ebn0_db, std::size_t m_order);

inline constexpr const char *kQamFormulaNote =
    "square M-QAM, coherent, Ps = 1 - (1 - 2(1 - 1/sqrt(M)) Q(sqrt(3 Es/N0/(M-1))))^2, Es/N0 = log2(M) Eb/N0";

struct TheoryRow
{
    double ebn0_db = 0.0;
    double gamma = 0.0;
    double ser_exact = 0.0;
    double ser_asymptotic = 0.0;
    double ser_fsk = 0.0;
    double ser_qam = 0.0; // NaN when M is not a power of 4
};

std::vector<TheoryRow> theory_curve(std::size_t m_order, const std::vector<double> &ebn0_db_grid);
// Header: ebn0_db,gamma,ser_exact,ser_asymptotic,ser_fsk,ser_qam
void write_theory_csv(std::ostream &os, const std::vector<TheoryRow> &rows);

} // namespace pdnn
