// SPDX-License-Identifier: Apache-2.0
//
// Symbol detectors. Ties resolve to the lowest port index.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdnn/channel.hpp"
#include "pdnn/linalg.hpp"
#include "pdnn/rng.hpp"

namespace pdnn
{

struct DetectionResult
{
    std::size_t m_hat = 0; // 0-based
    std::vector<double> metric;
};

// Maximum-power port of the power-detector outputs.
DetectionResult detect_noncoherent(std::span<const double> y);

// Coherent detector: argmax_k Re{c_k + n_k}, n_k ~ CN(0, 2 sigma2) drawn from
// `rng`. `c_column` holds the noiseless amplitude at every output port for
// the transmitted symbol (c_{k,m}, k = 0..M-1).
DetectionResult detect_ml(std::span<const cplx> c_column, const NoiseSpec &noise, RandomStream &rng);

// Same decision rule on an already noisy coherent observation.
DetectionResult detect_ml_observed(std::span<const cplx> observation);

} // namespace pdnn
