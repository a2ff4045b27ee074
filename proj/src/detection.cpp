// SPDX-License-Identifier: Apache-2.0

#include "pdnn/detection.hpp"

#include <cmath>

#include "pdnn/errors.hpp"

namespace pdnn
{

namespace
{

DetectionResult argmax_lowest(std::vector<double> metric)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < metric.size(); ++k)
        if (metric[k] > metric[best])
            best = k;
    return {best, std::move(metric)};
}

} // namespace

DetectionResult detect_noncoherent(std::span<const double> y)
{
    if (y.empty())
        throw InvalidArgument("detect_noncoherent: empty received vector");
    return argmax_lowest(std::vector<double>(y.begin(), y.end()));
}

DetectionResult detect_ml_observed(std::span<const cplx> observation)
{
    if (observation.empty())
        throw InvalidArgument("detect_ml: empty observation");
    std::vector<double> metric(observation.size());
    for (std::size_t k = 0; k < observation.size(); ++k)
        metric[k] = observation[k].real();
    return argmax_lowest(std::move(metric));
}

DetectionResult detect_ml(std::span<const cplx> c_column, const NoiseSpec &noise, RandomStream &rng)
{
    if (c_column.empty())
        throw InvalidArgument("detect_ml: empty coefficient vector");
    const double scale = std::sqrt(noise.complex_power());
    std::vector<cplx> observation(c_column.size());
    for (std::size_t k = 0; k < c_column.size(); ++k)
        observation[k] = c_column[k] + scale * rng.complex_normal();
    return detect_ml_observed(observation);
}

} // namespace pdnn
