// SPDX-License-Identifier: Apache-2.0
//
// Phase optimization against the effective achievable sum-rate
//   R = sum_m log2(1 + SINR_m),
//   SINR_m = |c_mm|^2 / (sum_{k != m} |c_km|^2 + 2 sigma^2).
// The surrogate loss is J = -sum_m ln(1 + SINR_m) (natural log), so
// R = -J / ln 2 exactly.
//
// Gradients are obtained by reverse-mode differentiation through the chain
// C = F_R H F_T. For a phase layer Phi = diag(e^{j beta}) sitting in
// C = A Phi B, with G = dJ/d conj(C),
//   dJ/d beta_n = 2 Re{ j phi_n conj(K_nn) },  K = A^H G B^H.
// The forward pass caches B for every phase layer; the backward pass carries
// U = A^H G from the output towards the input.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pdnn/channel.hpp"
#include "pdnn/linalg.hpp"
#include "pdnn/network.hpp"

namespace pdnn
{

struct SinrReport
{
    std::vector<double> sinr;
    double sum_rate = 0.0; // bits per channel use, log2
    double loss = 0.0;     // -sum ln(1 + SINR)
};

SinrReport sinr_from_effective_channel(const EffectiveChannel &c, const NoiseSpec &noise);

struct SystemGradient
{
    SinrReport report;
    PhaseParams tx; // dJ/d beta, same layout as the tx phases
    PhaseParams rx;
};

SystemGradient loss_and_gradients(const PdnnNetwork &tx, const ComplexMatrix &h, const PdnnNetwork &rx,
                                  const NoiseSpec &noise, std::size_t m_order);
SystemGradient loss_and_gradients(const SystemState &state);
SinrReport evaluate_sum_rate(const SystemState &state);

// Parameter vector layout used by the optimizers: tx layers, then rx layers.
RealVector flatten_phases(const PhaseParams &tx, const PhaseParams &rx);
void install_phases(SystemState &state, const RealVector &flat);

enum class OptimizerKind
{
    adam,
    pga_armijo,
    random,
};

const char *to_string(OptimizerKind kind) noexcept;
OptimizerKind optimizer_from_string(const std::string &name);

struct AdamParams
{
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct ArmijoParams
{
    double initial_step = 1.0;
    double shrink = 0.5;
    double slope = 1e-4;
    std::size_t max_backtracks = 30;
};

struct TrainConfig
{
    double learning_rate = 0.1;
    std::size_t epochs = 1000;
    AdamParams adam;
    OptimizerKind kind = OptimizerKind::adam;
    ArmijoParams armijo;
    std::uint64_t seed = 0; // random baseline draws

    std::vector<std::string> violations() const;
};

// Bias-corrected Adam on a flat parameter vector (minimization).
class AdamOptimizer
{
  public:
    AdamOptimizer(std::size_t size, double learning_rate, AdamParams params);
    void step(RealVector &x, const RealVector &grad);

  private:
    double lr_;
    AdamParams p_;
    RealVector m_;
    RealVector v_;
    std::size_t t_ = 0;
};

struct ArmijoStep
{
    double step = 0.0; // accepted step, 0 when the line search failed
    std::size_t backtracks = 0;
    bool accepted = false;
    double value_before = 0.0;
    double value_after = 0.0;
    double grad_norm2 = 0.0;
};

using ValueAndGradient = std::function<std::pair<double, RealVector>(const RealVector &)>;
using ValueOnly = std::function<double(const RealVector &)>;

// Steepest ascent with backtracking: accept t when
//   f(x + t g) >= f(x) + slope * t * |g|^2.
// The projection onto the unit-modulus set is the identity in phase space.
// `trace` receives f at every iterate, iterations + 1 values.
std::vector<ArmijoStep> armijo_ascent(RealVector &x, const ValueAndGradient &value_and_grad, const ValueOnly &value,
                                      const ArmijoParams &params, std::size_t iterations,
                                      std::vector<double> *trace = nullptr);

struct TrainRecord
{
    OptimizerKind kind = OptimizerKind::adam;
    std::vector<double> sum_rate;      // epoch 0 (initial) .. epochs
    std::vector<double> loss;          // same length as sum_rate
    std::vector<double> epoch_seconds; // one per epoch
    PhaseParams tx_phases;
    PhaseParams rx_phases;
    std::vector<ArmijoStep> armijo_log;

    double final_sum_rate() const { return sum_rate.back(); }
    nlohmann::json to_json() const;
};

// Each trainer starts from the phases currently installed in `state` and
// leaves the final phases installed.
TrainRecord train_adam(SystemState &state, const TrainConfig &config);
TrainRecord train_pga_armijo(SystemState &state, const TrainConfig &config);
TrainRecord random_phase_baseline(SystemState &state, std::uint64_t seed);
TrainRecord train(SystemState &state, const TrainConfig &config);

// max over columns of max_{k != m} |c_km|^2 / |c_mm|^2.
double max_interference_ratio(const ComplexMatrix &c);

} // namespace pdnn
