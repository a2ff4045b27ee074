// SPDX-License-Identifier: Apache-2.0
//
// Rayleigh channel, receiver noise, end-to-end system assembly and the
// noisy power-detector output y = |F_R H F_T s + n|^2.
//
// Symbol indices are 0-based in code: symbol m excites TX input port m and is
// decided correctly when RX output port m carries the most power.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pdnn/linalg.hpp"
#include "pdnn/network.hpp"
#include "pdnn/rng.hpp"

namespace pdnn
{

struct ChannelRealization
{
    ComplexMatrix h; // N_R^(0) x N_T^(L_T), i.i.d. CN(0, 1)
    std::uint64_t seed = 0;
};

// sigma2 is the per-component variance; the complex noise power is 2 sigma2.
struct NoiseSpec
{
    double sigma2 = 0.5;

    double complex_power() const noexcept { return 2.0 * sigma2; }
    void validate() const;
};

struct EffectiveChannel
{
    ComplexMatrix c; // M x M; column m is F_R H F_T s_m
};

struct SystemState
{
    PdnnNetwork tx;
    PdnnNetwork rx;
    ChannelRealization channel;
    NoiseSpec noise;
    std::size_t modulation_order = 2;

    std::vector<std::string> violations() const;
    // Throws ConfigError listing every violation.
    void validate() const;
};

bool is_power_of_two(std::size_t m) noexcept;

// Column-major fill from the stream {seed, channel}.
ChannelRealization sample_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed);

// One-hot s_m, zero-padded to `width`.
ComplexVector one_hot(std::size_t m, std::size_t width);

// C = F_R H F_T [I_M; 0].
ComplexMatrix effective_channel(const PdnnNetwork &tx, const ComplexMatrix &h, const PdnnNetwork &rx,
                                std::size_t modulation_order);
EffectiveChannel effective_channel(const SystemState &state);

// y = |c_{.,m} + n|^2 with n ~ CN(0, 2 sigma2 I).
RealVector transmit(const EffectiveChannel &c, const NoiseSpec &noise, std::size_t m, RandomStream &rng);
RealVector transmit(const SystemState &state, std::size_t m, RandomStream &rng);

// Recipe for the standard symmetric system used by the experiments: M input
// ports, N ports on every interior layer, M output ports.
enum class Interconnect
{
    coupler,
    diffraction,
    identity,
};

struct InterconnectSpec
{
    Interconnect kind = Interconnect::coupler;
    std::size_t cascade_count = 3;
    double theta = 0.785398163397448309616; // pi/4
    PortSelection selection = PortSelection::first;
    double carrier_hz = 28e9;
    double layer_spacing_wl = 2.0;
    double element_spacing_wl = 0.5;
    double element_area = 0.0; // 0: element_spacing^2
};

struct SystemSpec
{
    std::size_t modulation_order = 4;
    std::size_t width = 16; // N
    std::size_t tx_layers = 2;
    std::size_t rx_layers = 2;
    InterconnectSpec interconnect;
    NoiseSpec noise;
    std::uint64_t channel_seed = 0;
    std::uint64_t init_seed = 0;
    bool random_init = true; // beta ~ U(-pi, pi) from {init_seed, init, side, layer}
    // Optional explicit port lists; empty means [M, N, ..., N] / [N, ..., N, M].
    std::vector<std::size_t> tx_ports;
    std::vector<std::size_t> rx_ports;

    std::vector<std::size_t> resolved_tx_ports() const;
    std::vector<std::size_t> resolved_rx_ports() const;
};

PdnnConfig make_pdnn_config(Side side, const std::vector<std::size_t> &ports, const InterconnectSpec &interconnect);
// beta ~ U(-pi, pi), one stream per (side, layer).
PhaseParams random_phases(const std::vector<std::size_t> &widths, std::uint64_t seed, Side side,
                          StreamDomain domain = StreamDomain::init);
std::vector<std::string> system_spec_violations(const SystemSpec &spec);
SystemState assemble_system(const SystemSpec &spec);

} // namespace pdnn
