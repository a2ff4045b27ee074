// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration and runners behind the pdnn_ssk command line.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "pdnn/channel.hpp"
#include "pdnn/montecarlo.hpp"
#include "pdnn/training.hpp"

namespace pdnn::cli
{

inline constexpr const char *kExperimentKinds[] = {
    "theory-curves", "ser-interference-free", "train",         "ser-trained",
    "sweep-depth-width", "sweep-coupling",    "dump-matrices", "propagate-taps",
};

struct ExperimentConfig
{
    std::string kind;
    std::filesystem::path out = "pdnn_out";
    std::uint64_t seed = 1;
    std::size_t workers = 0;

    // Curves
    // Empty: {4, 16, 64} for curves, 16 for sweeps, 4 otherwise. System
    // experiments take a single value.
    std::vector<std::size_t> m_orders;
    std::string ebn0 = "0:0.5:14"; // start:step:stop in dB, inclusive
    std::uint64_t trials = 100000;
    std::string detector = "noncoherent";

    // System
    std::size_t n = 16;
    std::size_t tx_layers = 2;
    std::size_t rx_layers = 2;
    std::string interconnect = "coupler";
    std::size_t cascade = 3;
    double theta = 0.785398163397448309616;
    std::string port_selection = "first";
    double carrier_hz = 28e9;
    double layer_spacing_wl = 2.0;
    double element_spacing_wl = 0.5;
    double element_area = 0.0;
    double sigma2 = 0.001;
    std::vector<std::size_t> tx_ports;
    std::vector<std::size_t> rx_ports;
    bool random_init = true;

    // Training
    std::vector<std::string> optimizers{"adam", "pga_armijo", "random"};
    double lr = 0.1;
    std::size_t epochs = 1000;
    std::size_t channels = 100; // channel seeds seed, seed+1, ...

    // Sweeps
    std::vector<std::size_t> n_grid{16, 20, 24, 28, 32, 36, 40};
    std::vector<std::string> layer_configs{"1x1", "1x3", "2x2", "3x3"};
    std::vector<std::size_t> mc_values{1, 2, 3};
    bool include_diffraction = true;

    // Single-system tools
    std::string phases;     // checkpoint with {"tx": ..., "rx": ...}
    std::size_t symbol = 0; // 0-based, propagate-taps

    // Field-level problems; empty when runnable.
    std::vector<std::string> violations() const;

    std::vector<std::size_t> curve_orders() const;
    std::size_t system_order() const;
    bool is_curve_kind() const;
    // Lossless TOML echo in the --config key schema.
    std::string to_toml() const;
    SystemSpec system_spec(std::uint64_t channel_seed) const;
    TrainConfig train_config() const;
    SweepOptions sweep_options() const;
    std::vector<std::uint64_t> channel_seeds() const;
};

// Inclusive "start:step:stop" grid. Throws InvalidArgument on malformed input.
std::vector<double> parse_range(const std::string &text);
std::pair<std::size_t, std::size_t> parse_layer_config(const std::string &text);

// Writes artifacts and manifest.json under config.out.
void run_experiment(const ExperimentConfig &config, const std::string &config_echo);

// {"valid": bool, "violations": [...]}
nlohmann::json validate_experiment(const ExperimentConfig &config);

} // namespace pdnn::cli
