// SPDX-License-Identifier: Apache-2.0

#include "pdnn/network.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

template <class... Fs> struct overloaded : Fs...
{
    using Fs::operator()...;
};
template <class... Fs> overloaded(Fs...) -> overloaded<Fs...>;

std::string layer_tag(std::size_t l) { return "layer " + std::to_string(l + 1); }

} // namespace

const char *to_string(Side side) noexcept { return side == Side::tx ? "tx" : "rx"; }

std::size_t coupling_n_in(const LayerCoupling &coupling)
{
    return std::visit(overloaded{[](const ExplicitCoupling &e) { return static_cast<std::size_t>(e.matrix.cols()); },
                                 [](const auto &s) { return s.n_in; }},
                      coupling);
}

std::size_t coupling_n_out(const LayerCoupling &coupling)
{
    return std::visit(overloaded{[](const ExplicitCoupling &e) { return static_cast<std::size_t>(e.matrix.rows()); },
                                 [](const auto &s) { return s.n_out; }},
                      coupling);
}

ComplexMatrix build_layer_matrix(const LayerCoupling &coupling)
{
    return std::visit(overloaded{[](const CouplerSpec &s) { return build_coupler_matrix(s); },
                                 [](const DiffractionSpec &s) { return build_rs_matrix(s); },
                                 [](const IdentityCoupling &s) {
                                     return ComplexMatrix(ComplexMatrix::Identity(static_cast<Eigen::Index>(s.n_out),
                                                                                  static_cast<Eigen::Index>(s.n_in)));
                                 },
                                 [](const ExplicitCoupling &e) { return e.matrix; }},
                      coupling);
}

std::vector<std::string> PdnnConfig::violations() const
{
    std::vector<std::string> out;
    const std::string side_tag = std::string(to_string(side)) + ": ";
    if (port_counts.size() < 2)
    {
        out.push_back(side_tag + "at least one layer is required (port_counts needs L+1 >= 2 entries)");
        return out;
    }
    for (std::size_t i = 0; i < port_counts.size(); ++i)
        if (port_counts[i] < 1)
            out.push_back(side_tag + "port count N^(" + std::to_string(i) + ") must be >= 1");
    if (coupling.size() != num_layers())
    {
        out.push_back(side_tag + "expected " + std::to_string(num_layers()) + " coupling specs, got " +
                      std::to_string(coupling.size()));
        return out;
    }
    for (std::size_t l = 0; l < coupling.size(); ++l)
    {
        const std::size_t n_in = coupling_n_in(coupling[l]);
        const std::size_t n_out = coupling_n_out(coupling[l]);
        if (n_in != port_counts[l])
            out.push_back(side_tag + layer_tag(l) + ": coupling n_in=" + std::to_string(n_in) +
                          " does not match N^(" + std::to_string(l) + ")=" + std::to_string(port_counts[l]));
        if (n_out != port_counts[l + 1])
            out.push_back(side_tag + layer_tag(l) + ": coupling n_out=" + std::to_string(n_out) +
                          " does not match N^(" + std::to_string(l + 1) + ")=" + std::to_string(port_counts[l + 1]));
        if (const auto *c = std::get_if<CouplerSpec>(&coupling[l]); c && c->cascade_count < 1)
            out.push_back(side_tag + layer_tag(l) + ": cascade_count must be >= 1");
    }
    return out;
}

PdnnConfig PdnnConfig::coupler_chain(Side side, std::vector<std::size_t> ports, std::size_t cascade_count,
                                     double theta, PortSelection selection)
{
    PdnnConfig cfg{side, std::move(ports), {}};
    for (std::size_t l = 0; l + 1 < cfg.port_counts.size(); ++l)
        cfg.coupling.emplace_back(CouplerSpec{cfg.port_counts[l], cfg.port_counts[l + 1], cascade_count, theta, selection});
    return cfg;
}

PdnnConfig PdnnConfig::diffraction_chain(Side side, std::vector<std::size_t> ports, double carrier_hz,
                                         double layer_spacing_wl, double element_spacing_wl, double element_area)
{
    PdnnConfig cfg{side, std::move(ports), {}};
    for (std::size_t l = 0; l + 1 < cfg.port_counts.size(); ++l)
        cfg.coupling.emplace_back(DiffractionSpec::from_carrier(cfg.port_counts[l], cfg.port_counts[l + 1], carrier_hz,
                                                                layer_spacing_wl, element_spacing_wl, element_area));
    return cfg;
}

PdnnConfig PdnnConfig::identity_chain(Side side, std::vector<std::size_t> ports)
{
    PdnnConfig cfg{side, std::move(ports), {}};
    for (std::size_t l = 0; l + 1 < cfg.port_counts.size(); ++l)
        cfg.coupling.emplace_back(IdentityCoupling{cfg.port_counts[l], cfg.port_counts[l + 1]});
    return cfg;
}

PhaseParams PhaseParams::zeros(const std::vector<std::size_t> &widths)
{
    PhaseParams p;
    for (std::size_t w : widths)
        p.layers.push_back(RealVector::Zero(static_cast<Eigen::Index>(w)));
    return p;
}

std::size_t PhaseParams::total_count() const noexcept
{
    std::size_t n = 0;
    for (const auto &v : layers)
        n += static_cast<std::size_t>(v.size());
    return n;
}

std::vector<std::size_t> PhaseParams::widths() const
{
    std::vector<std::size_t> w;
    for (const auto &v : layers)
        w.push_back(static_cast<std::size_t>(v.size()));
    return w;
}

nlohmann::json PhaseParams::to_json() const
{
    nlohmann::json layers_json = nlohmann::json::array();
    for (const auto &v : layers)
        layers_json.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    return {{"unit", "rad"}, {"layers", layers_json}};
}

PhaseParams PhaseParams::from_json(const nlohmann::json &j)
{
    PhaseParams p;
    for (const auto &layer : j.at("layers"))
    {
        const auto values = layer.get<std::vector<double>>();
        p.layers.push_back(Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size())));
    }
    return p;
}

std::vector<std::size_t> phase_widths(const PdnnConfig &config)
{
    std::vector<std::size_t> widths;
    for (std::size_t l = 0; l < config.num_layers(); ++l)
        widths.push_back(config.side == Side::tx ? config.port_counts[l + 1] : config.port_counts[l]);
    return widths;
}

PdnnNetwork::PdnnNetwork(PdnnConfig config) : config_(std::move(config))
{
    if (auto v = config_.violations(); !v.empty())
        throw ConfigError(std::move(v));
    for (const auto &c : config_.coupling)
        fixed_.push_back(build_layer_matrix(c));
    params_ = PhaseParams::zeros(phase_widths(config_));
}

PdnnNetwork::PdnnNetwork(PdnnConfig config, PhaseParams params) : PdnnNetwork(std::move(config))
{
    set_phases(std::move(params));
}

void PdnnNetwork::set_phases(PhaseParams params)
{
    if (params.widths() != params_.widths())
        throw InvalidArgument("set_phases: phase layer widths do not match the network");
    for (const auto &v : params.layers)
        if (!v.allFinite())
            throw InvalidArgument("set_phases: phases must be finite");
    params_ = std::move(params);
}

ComplexVector PdnnNetwork::phase_factors(std::size_t layer) const
{
    const RealVector &beta = params_.layers.at(layer);
    ComplexVector phi(beta.size());
    for (Eigen::Index n = 0; n < beta.size(); ++n)
        phi(n) = std::polar(1.0, beta(n));
    return phi;
}

ComplexMatrix PdnnNetwork::apply(const ComplexMatrix &x) const
{
    if (static_cast<std::size_t>(x.rows()) != input_width())
        throw InvalidArgument("PdnnNetwork::apply: input has " + std::to_string(x.rows()) + " rows, expected " +
                              std::to_string(input_width()));
    ComplexMatrix v = x;
    for (std::size_t l = 0; l < fixed_.size(); ++l)
    {
        const ComplexVector phi = phase_factors(l);
        if (side() == Side::tx)
            v = phi.asDiagonal() * (fixed_[l] * v);
        else
            v = fixed_[l] * (phi.asDiagonal() * v);
    }
    return v;
}

ComplexMatrix PdnnNetwork::transfer_matrix() const
{
    const auto n0 = static_cast<Eigen::Index>(input_width());
    return apply(ComplexMatrix::Identity(n0, n0));
}

std::vector<ComplexVector> PdnnNetwork::forward_with_taps(const ComplexVector &x0) const
{
    if (static_cast<std::size_t>(x0.size()) != input_width())
        throw InvalidArgument("forward_with_taps: input length " + std::to_string(x0.size()) + ", expected " +
                              std::to_string(input_width()));
    std::vector<ComplexVector> taps{x0};
    for (std::size_t l = 0; l < fixed_.size(); ++l)
    {
        const ComplexVector phi = phase_factors(l);
        const ComplexVector &prev = taps.back();
        if (side() == Side::tx)
            taps.push_back(phi.cwiseProduct(fixed_[l] * prev));
        else
            taps.push_back(fixed_[l] * phi.cwiseProduct(prev));
    }
    return taps;
}

} // namespace pdnn
