// SPDX-License-Identifier: Apache-2.0

#include "pdnn/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pdnn/errors.hpp"

namespace pdnn
{

std::size_t CouplerSpec::n_max() const noexcept
{
    const std::size_t m = std::max(n_in, n_out);
    return m + (m % 2);
}

void CouplerSpec::validate() const
{
    if (n_in < 1 || n_out < 1)
        throw InvalidArgument("coupler: port counts must be >= 1");
    if (cascade_count < 1)
        throw InvalidArgument("coupler: cascade_count must be >= 1");
    if (!std::isfinite(theta))
        throw InvalidArgument("coupler: theta must be finite");
}

DiffractionSpec DiffractionSpec::from_carrier(std::size_t n_in, std::size_t n_out, double carrier_hz,
                                              double layer_spacing_wl, double element_spacing_wl, double element_area)
{
    if (!(carrier_hz > 0.0))
        throw InvalidArgument("diffraction: carrier frequency must be positive");
    DiffractionSpec spec;
    spec.n_in = n_in;
    spec.n_out = n_out;
    spec.wavelength = kSpeedOfLight / carrier_hz;
    spec.layer_spacing = layer_spacing_wl * spec.wavelength;
    spec.element_spacing = element_spacing_wl * spec.wavelength;
    spec.element_area = element_area > 0.0 ? element_area : spec.element_spacing * spec.element_spacing;
    return spec;
}

void DiffractionSpec::validate() const
{
    if (n_in < 1 || n_out < 1)
        throw InvalidArgument("diffraction: port counts must be >= 1");
    if (!(wavelength > 0.0) || !(element_spacing > 0.0) || !(element_area > 0.0))
        throw InvalidArgument("diffraction: wavelength, element spacing and area must be positive");
    if (!(layer_spacing > 0.0))
        throw GeometryError("diffraction: layer spacing must be positive (zero propagation distance)");
}

ComplexMatrix coupler_unit()
{
    const double s = 1.0 / std::numbers::sqrt2;
    ComplexMatrix w(2, 2);
    w << cplx(s, 0.0), cplx(0.0, s), cplx(0.0, s), cplx(s, 0.0);
    return w;
}

ComplexMatrix build_w1(std::size_t n_max)
{
    if (n_max < 2 || n_max % 2 != 0)
        throw InvalidArgument("build_w1: n_max must be even and >= 2, got " + std::to_string(n_max));
    const auto n = static_cast<Eigen::Index>(n_max);
    const ComplexMatrix sub = coupler_unit();
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2)
        w.block<2, 2>(k, k) = sub;
    return w;
}

ComplexMatrix build_w2(std::size_t n_max, double theta)
{
    if (n_max < 2 || n_max % 2 != 0)
        throw InvalidArgument("build_w2: n_max must be even and >= 2, got " + std::to_string(n_max));
    const auto n = static_cast<Eigen::Index>(n_max);
    const ComplexMatrix sub = coupler_unit();
    const cplx edge = std::polar(1.0, -theta);
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    w(0, 0) = edge;
    w(n - 1, n - 1) = edge;
    for (Eigen::Index k = 1; k + 1 <= n - 2; k += 2)
        w.block<2, 2>(k, k) = sub;
    return w;
}

ComplexMatrix build_coupler_base(const CouplerSpec &spec)
{
    spec.validate();
    const std::size_t n = spec.n_max();
    const ComplexMatrix stage = build_w2(n, spec.theta) * build_w1(n);
    ComplexMatrix base = stage;
    for (std::size_t c = 1; c < spec.cascade_count; ++c)
        base = stage * base;
    return base;
}

ComplexMatrix build_coupler_matrix(const CouplerSpec &spec)
{
    const ComplexMatrix base = build_coupler_base(spec);
    const auto n = static_cast<Eigen::Index>(spec.n_max());
    const auto rows = static_cast<Eigen::Index>(spec.n_out);
    const auto cols = static_cast<Eigen::Index>(spec.n_in);
    Eigen::Index r0 = 0;
    Eigen::Index c0 = 0;
    if (spec.selection == PortSelection::center)
    {
        r0 = (n - rows) / 2;
        c0 = (n - cols) / 2;
    }
    return base.block(r0, c0, rows, cols);
}

ComplexMatrix build_rs_matrix(const DiffractionSpec &spec)
{
    spec.validate();
    const auto rows = static_cast<Eigen::Index>(spec.n_out);
    const auto cols = static_cast<Eigen::Index>(spec.n_in);
    const double lambda = spec.wavelength;
    const double two_pi = 2.0 * std::numbers::pi;
    // Elements on a line centered on the common axis of both layers.
    auto position = [&](Eigen::Index i, Eigen::Index count) {
        return (static_cast<double>(i) - 0.5 * static_cast<double>(count - 1)) * spec.element_spacing;
    };

    ComplexMatrix w(rows, cols);
    for (Eigen::Index m = 0; m < rows; ++m)
    {
        for (Eigen::Index mt = 0; mt < cols; ++mt)
        {
            const double dx = position(m, rows) - position(mt, cols);
            const double r = std::hypot(spec.layer_spacing, dx);
            if (!(r > 0.0))
                throw GeometryError("build_rs_matrix: zero propagation distance");
            const double cos_chi = spec.layer_spacing / r;
            const cplx radial(1.0 / (two_pi * r), -1.0 / lambda);
            w(m, mt) = (spec.element_area * cos_chi / r) * radial * std::polar(1.0, two_pi * r / lambda);
        }
    }
    return w;
}

} // namespace pdnn
