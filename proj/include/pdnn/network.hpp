// SPDX-License-Identifier: Apache-2.0
//
// One planar diffractive network (TX or RX side): a chain of fixed coupling
// matrices W^(l) and trainable diagonal phase matrices Phi^(l) = diag(e^{j beta}).
//
// Layer indices are 0-based in code; layer l maps N^(l) input ports to
// N^(l+1) output ports.
//   TX order:  x^(l+1) = Phi^(l) W^(l) x^(l)
//   RX order:  x^(l+1) = W^(l) Phi^(l) x^(l)
// On the RX side the phase layer of step l therefore has N^(l) entries, on the
// TX side N^(l+1).

#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "pdnn/coupling.hpp"
#include "pdnn/linalg.hpp"

namespace pdnn
{

enum class Side
{
    tx,
    rx,
};

const char *to_string(Side side) noexcept;

// W = first n_out rows / n_in columns of the identity (no coupling).
struct IdentityCoupling
{
    std::size_t n_in = 0;
    std::size_t n_out = 0;
};

// Arbitrary user-supplied matrix.
struct ExplicitCoupling
{
    ComplexMatrix matrix;
};

using LayerCoupling = std::variant<CouplerSpec, DiffractionSpec, IdentityCoupling, ExplicitCoupling>;

std::size_t coupling_n_in(const LayerCoupling &coupling);
std::size_t coupling_n_out(const LayerCoupling &coupling);
ComplexMatrix build_layer_matrix(const LayerCoupling &coupling);

struct PdnnConfig
{
    Side side = Side::tx;
    std::vector<std::size_t> port_counts; // N^(0), ..., N^(L)
    std::vector<LayerCoupling> coupling;  // one per layer

    std::size_t num_layers() const noexcept { return port_counts.empty() ? 0 : port_counts.size() - 1; }
    // Empty when the configuration is consistent.
    std::vector<std::string> violations() const;

    // Same coupler design on every layer, port counts taken from `ports`.
    static PdnnConfig coupler_chain(Side side, std::vector<std::size_t> ports, std::size_t cascade_count,
                                    double theta, PortSelection selection = PortSelection::first);
    static PdnnConfig diffraction_chain(Side side, std::vector<std::size_t> ports, double carrier_hz,
                                        double layer_spacing_wl, double element_spacing_wl,
                                        double element_area = 0.0);
    static PdnnConfig identity_chain(Side side, std::vector<std::size_t> ports);
};

// Per-layer phase vectors beta^(l) in radians, unconstrained reals.
struct PhaseParams
{
    std::vector<RealVector> layers;

    static PhaseParams zeros(const std::vector<std::size_t> &widths);
    std::size_t total_count() const noexcept;
    std::vector<std::size_t> widths() const;

    nlohmann::json to_json() const;
    static PhaseParams from_json(const nlohmann::json &j);
};

// Width of each phase layer for the given configuration.
std::vector<std::size_t> phase_widths(const PdnnConfig &config);

class PdnnNetwork
{
  public:
    explicit PdnnNetwork(PdnnConfig config);
    PdnnNetwork(PdnnConfig config, PhaseParams params);

    const PdnnConfig &config() const noexcept { return config_; }
    Side side() const noexcept { return config_.side; }
    std::size_t num_layers() const noexcept { return fixed_.size(); }
    std::size_t input_width() const noexcept { return config_.port_counts.front(); }
    std::size_t output_width() const noexcept { return config_.port_counts.back(); }

    const ComplexMatrix &fixed(std::size_t layer) const { return fixed_.at(layer); }
    const PhaseParams &phases() const noexcept { return params_; }
    // Throws InvalidArgument on a shape mismatch.
    void set_phases(PhaseParams params);
    // e^{j beta^(l)}
    ComplexVector phase_factors(std::size_t layer) const;

    // N^(L) x N^(0) end-to-end matrix.
    ComplexMatrix transfer_matrix() const;
    // F * x for a block of column vectors.
    ComplexMatrix apply(const ComplexMatrix &x) const;
    // [x^(0), ..., x^(L)]
    std::vector<ComplexVector> forward_with_taps(const ComplexVector &x0) const;

  private:
    PdnnConfig config_;
    std::vector<ComplexMatrix> fixed_;
    PhaseParams params_;
};

} // namespace pdnn
