// SPDX-License-Identifier: Apache-2.0

#include "pdnn/channel.hpp"

#include <cmath>
#include <string>

#include "pdnn/errors.hpp"

namespace pdnn
{

void NoiseSpec::validate() const
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw InvalidArgument("noise: sigma2 must be positive and finite");
}

bool is_power_of_two(std::size_t m) noexcept { return m >= 2 && (m & (m - 1)) == 0; }

std::vector<std::string> SystemState::violations() const
{
    std::vector<std::string> out;
    const std::size_t m = modulation_order;
    if (!is_power_of_two(m))
        out.push_back("modulation order must be a power of two (M = 2^p, p >= 1), got " + std::to_string(m));
    if (tx.side() != Side::tx)
        out.push_back("tx network must be configured with Side::tx");
    if (rx.side() != Side::rx)
        out.push_back("rx network must be configured with Side::rx");
    if (tx.input_width() < m)
        out.push_back("tx input width N_T^(0)=" + std::to_string(tx.input_width()) + " is smaller than M=" +
                      std::to_string(m));
    if (rx.output_width() != m)
        out.push_back("rx output width N_R^(L_R)=" + std::to_string(rx.output_width()) + " must equal M=" +
                      std::to_string(m));
    if (static_cast<std::size_t>(channel.h.cols()) != tx.output_width())
        out.push_back("channel has " + std::to_string(channel.h.cols()) + " columns, tx output width is " +
                      std::to_string(tx.output_width()));
    if (static_cast<std::size_t>(channel.h.rows()) != rx.input_width())
        out.push_back("channel has " + std::to_string(channel.h.rows()) + " rows, rx input width is " +
                      std::to_string(rx.input_width()));
    if (!(noise.sigma2 > 0.0))
        out.push_back("noise sigma2 must be positive");
    return out;
}

void SystemState::validate() const
{
    if (auto v = violations(); !v.empty())
        throw ConfigError(std::move(v));
}

ChannelRealization sample_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed)
{
    if (n_rx < 1 || n_tx < 1)
        throw InvalidArgument("sample_channel: dimensions must be positive");
    RandomStream rng(StreamKey{seed, StreamDomain::channel, {0, 0, 0}});
    ChannelRealization out;
    out.seed = seed;
    out.h.resize(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
    for (Eigen::Index c = 0; c < out.h.cols(); ++c)
        for (Eigen::Index r = 0; r < out.h.rows(); ++r)
            out.h(r, c) = rng.complex_normal();
    return out;
}

ComplexVector one_hot(std::size_t m, std::size_t width)
{
    if (m >= width)
        throw InvalidArgument("one_hot: symbol index out of range");
    ComplexVector s = ComplexVector::Zero(static_cast<Eigen::Index>(width));
    s(static_cast<Eigen::Index>(m)) = 1.0;
    return s;
}

ComplexMatrix effective_channel(const PdnnNetwork &tx, const ComplexMatrix &h, const PdnnNetwork &rx,
                                std::size_t modulation_order)
{
    const auto m = static_cast<Eigen::Index>(modulation_order);
    if (modulation_order > tx.input_width() || static_cast<std::size_t>(h.cols()) != tx.output_width() ||
        static_cast<std::size_t>(h.rows()) != rx.input_width() || rx.output_width() != modulation_order)
        throw ConfigError({"effective_channel: shape mismatch along F_R H F_T"});
    const auto n0 = static_cast<Eigen::Index>(tx.input_width());
    const ComplexMatrix symbols = ComplexMatrix::Identity(n0, m);
    return rx.apply(h * tx.apply(symbols));
}

EffectiveChannel effective_channel(const SystemState &state)
{
    return {effective_channel(state.tx, state.channel.h, state.rx, state.modulation_order)};
}

RealVector transmit(const EffectiveChannel &c, const NoiseSpec &noise, std::size_t m, RandomStream &rng)
{
    if (m >= static_cast<std::size_t>(c.c.cols()))
        throw InvalidArgument("transmit: symbol index out of range");
    const double scale = std::sqrt(noise.complex_power());
    const auto col = c.c.col(static_cast<Eigen::Index>(m));
    RealVector y(col.size());
    for (Eigen::Index k = 0; k < col.size(); ++k)
        y(k) = std::norm(col(k) + scale * rng.complex_normal());
    return y;
}

RealVector transmit(const SystemState &state, std::size_t m, RandomStream &rng)
{
    return transmit(effective_channel(state), state.noise, m, rng);
}

std::vector<std::size_t> SystemSpec::resolved_tx_ports() const
{
    if (!tx_ports.empty())
        return tx_ports;
    std::vector<std::size_t> ports(tx_layers + 1, width);
    ports.front() = modulation_order;
    return ports;
}

std::vector<std::size_t> SystemSpec::resolved_rx_ports() const
{
    if (!rx_ports.empty())
        return rx_ports;
    std::vector<std::size_t> ports(rx_layers + 1, width);
    ports.back() = modulation_order;
    return ports;
}

PdnnConfig make_pdnn_config(Side side, const std::vector<std::size_t> &ports, const InterconnectSpec &ic)
{
    switch (ic.kind)
    {
    case Interconnect::coupler:
        return PdnnConfig::coupler_chain(side, ports, ic.cascade_count, ic.theta, ic.selection);
    case Interconnect::diffraction:
        return PdnnConfig::diffraction_chain(side, ports, ic.carrier_hz, ic.layer_spacing_wl, ic.element_spacing_wl,
                                             ic.element_area);
    case Interconnect::identity:
        return PdnnConfig::identity_chain(side, ports);
    }
    throw InvalidArgument("unknown interconnect kind");
}

PhaseParams random_phases(const std::vector<std::size_t> &widths, std::uint64_t seed, Side side, StreamDomain domain)
{
    PhaseParams p;
    for (std::size_t l = 0; l < widths.size(); ++l)
    {
        RandomStream rng(StreamKey{seed, domain, {side == Side::tx ? 0u : 1u, l, 0}});
        RealVector beta(static_cast<Eigen::Index>(widths[l]));
        for (Eigen::Index n = 0; n < beta.size(); ++n)
            beta(n) = rng.uniform_phase();
        p.layers.push_back(std::move(beta));
    }
    return p;
}

std::vector<std::string> system_spec_violations(const SystemSpec &spec)
{
    std::vector<std::string> out;
    if (!is_power_of_two(spec.modulation_order))
        out.push_back("modulation order must be a power of two (M = 2^p, p >= 1), got " +
                      std::to_string(spec.modulation_order));
    if (spec.width < 1)
        out.push_back("port count N must be >= 1");
    if (spec.tx_ports.empty() && spec.tx_layers < 1)
        out.push_back("tx: at least one layer is required");
    if (spec.rx_ports.empty() && spec.rx_layers < 1)
        out.push_back("rx: at least one layer is required");
    if (spec.interconnect.kind == Interconnect::coupler && spec.interconnect.cascade_count < 1)
        out.push_back("cascade count M_c must be >= 1");
    if (!(spec.noise.sigma2 > 0.0))
        out.push_back("noise sigma2 must be positive");
    if (!out.empty())
        return out;

    const auto tx_ports = spec.resolved_tx_ports();
    const auto rx_ports = spec.resolved_rx_ports();
    if (tx_ports.size() < 2)
        out.push_back("tx: at least one layer is required");
    else if (tx_ports.front() != spec.modulation_order)
        out.push_back("tx: N_T^(0)=" + std::to_string(tx_ports.front()) + " must equal M=" +
                      std::to_string(spec.modulation_order));
    if (rx_ports.size() < 2)
        out.push_back("rx: at least one layer is required");
    else if (rx_ports.back() != spec.modulation_order)
        out.push_back("rx: N_R^(L_R)=" + std::to_string(rx_ports.back()) + " must equal M=" +
                      std::to_string(spec.modulation_order));
    for (auto *v : {&tx_ports, &rx_ports})
        for (std::size_t i = 0; i < v->size(); ++i)
            if ((*v)[i] < 1)
                out.push_back(std::string(v == &tx_ports ? "tx" : "rx") + ": port count N^(" + std::to_string(i) +
                              ") must be >= 1");
    return out;
}

SystemState assemble_system(const SystemSpec &spec)
{
    if (auto v = system_spec_violations(spec); !v.empty())
        throw ConfigError(std::move(v));
    const auto tx_ports = spec.resolved_tx_ports();
    const auto rx_ports = spec.resolved_rx_ports();
    PdnnNetwork tx(make_pdnn_config(Side::tx, tx_ports, spec.interconnect));
    PdnnNetwork rx(make_pdnn_config(Side::rx, rx_ports, spec.interconnect));
    if (spec.random_init)
    {
        tx.set_phases(random_phases(phase_widths(tx.config()), spec.init_seed, Side::tx));
        rx.set_phases(random_phases(phase_widths(rx.config()), spec.init_seed, Side::rx));
    }
    SystemState state{std::move(tx), std::move(rx),
                      sample_channel(rx_ports.front(), tx_ports.back(), spec.channel_seed), spec.noise,
                      spec.modulation_order};
    state.validate();
    return state;
}

} // namespace pdnn
