// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo harnesses: SER curves against theory and sum-rate sweeps
// over network structure. Every trial draws from its own counter-based stream
// {seed, noise, (point, trial)}, so results do not depend on the worker count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pdnn/channel.hpp"
#include "pdnn/training.hpp"

namespace pdnn
{

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct WilsonInterval
{
    double low = 0.0;
    double high = 1.0;

    double half_width() const noexcept { return 0.5 * (high - low); }
    double center() const noexcept { return 0.5 * (high + low); }
};

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = kWilsonZ95);

// Runs body(i) for i in [0, count) on up to `workers` threads (0: hardware
// concurrency). Exceptions are rethrown on the calling thread.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &body);

enum class Detector
{
    noncoherent,
    ml,
};

const char *to_string(Detector d) noexcept;

struct SerPoint
{
    double ebn0_db = 0.0;
    double gamma = 0.0; // mean over symbols for trained systems
    double sigma2 = 0.5;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double ser = 0.0;
    WilsonInterval ci;
    double ser_theory = 0.0; // interference-free SER averaged over the realized gamma_m
    double inr_db = 0.0;     // worst-column interference over noise; -inf when interference-free
};

struct SerCurve
{
    std::size_t m_order = 0;
    std::string label;
    std::vector<SerPoint> points;
    std::vector<double> gamma_per_symbol_unit_noise; // |c_mm|^2, trained systems only
};

struct MonteCarloOptions
{
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    std::size_t workers = 0;
    std::uint64_t stop_after_errors = 0; // 0: run every trial
};

// Diagonal C with |c_mm| = sqrt(2 sigma^2 gamma), sigma^2 = 1/2.
SerCurve ser_interference_free(std::size_t m_order, const std::vector<double> &gamma_grid,
                               const MonteCarloOptions &options, Detector detector = Detector::noncoherent);

// Fixed trained C; sigma^2 scaled so the mean gamma over symbols realizes each E_b/N_0.
SerCurve ser_trained_system(const SystemState &state, const std::vector<double> &ebn0_grid,
                            const MonteCarloOptions &options, std::string label = "trained");

void write_ser_csv(std::ostream &os, const std::vector<SerCurve> &curves);

struct SweepCase
{
    std::string family; // label printed in outputs
    std::size_t tx_layers = 1;
    std::size_t rx_layers = 1;
    InterconnectSpec interconnect;
};

struct SweepResult
{
    SweepCase config;
    std::size_t width = 0;
    double mean_sum_rate = 0.0;
    double std_sum_rate = 0.0; // population std over seeds
    std::vector<std::uint64_t> seeds;
    std::vector<double> sum_rates; // one per seed, same order

    nlohmann::json to_json() const;
};

struct SweepOptions
{
    std::size_t m_order = 16;
    std::vector<std::size_t> n_grid;
    std::vector<std::uint64_t> channel_seeds;
    TrainConfig train;
    NoiseSpec noise;
    std::size_t workers = 0;
};

// One fresh system per (case, N, seed), trained with options.train.
std::vector<SweepResult> run_sweep(const std::vector<SweepCase> &cases, const SweepOptions &options);

std::vector<SweepResult> sweep_depth_width(const std::vector<std::pair<std::size_t, std::size_t>> &layer_configs,
                                           const InterconnectSpec &interconnect, const SweepOptions &options);

// Coupler families for each M_c at 2 layers (1,1) and 4 layers (2,2), the
// diffraction family at the same depths when `include_diffraction`, and the
// uncoupled single-layer analog baseline.
std::vector<SweepResult> sweep_coupling(const std::vector<std::size_t> &mc_values, const InterconnectSpec &diffraction,
                                        bool include_diffraction, const SweepOptions &options);

void write_sweep_csv(std::ostream &os, const std::vector<SweepResult> &results);

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count);

} // namespace pdnn
