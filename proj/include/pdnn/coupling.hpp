// SPDX-License-Identifier: Apache-2.0
//
// Fixed inter-layer transfer matrices W^(l).
//
// Two families are provided:
//  - cascaded branch-line couplers: a base matrix (W2 * W1)^Mc on N_max
//    ports, from which the N_out x N_in sub-matrix is selected;
//  - free-space Rayleigh-Sommerfeld diffraction between two parallel,
//    axially aligned linear arrays.
// All functions are pure; returned matrices are plain values.

#pragma once

#include <cstddef>

#include "pdnn/linalg.hpp"

namespace pdnn
{

// Which ports of the square base network are wired to the layer.
enum class PortSelection
{
    first,  // first n_out rows, first n_in columns
    center, // rows/columns centered in the base network
};

struct CouplerSpec
{
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::size_t cascade_count = 1;
    double theta = 0.0; // direct-path phase delay at the network boundaries [rad]
    PortSelection selection = PortSelection::first;

    // Smallest even integer >= max(n_in, n_out).
    std::size_t n_max() const noexcept;
    void validate() const;
};

struct DiffractionSpec
{
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    double wavelength = 0.0;      // [m]
    double layer_spacing = 0.0;   // distance between the two layers [m]
    double element_spacing = 0.0; // pitch within a layer [m]
    double element_area = 0.0;    // meta-atom area A_l [m^2]

    // Spacings given in wavelengths at carrier frequency fc; an element area
    // of 0 means element_spacing^2.
    static DiffractionSpec from_carrier(std::size_t n_in, std::size_t n_out, double carrier_hz,
                                        double layer_spacing_wl, double element_spacing_wl,
                                        double element_area = 0.0);
    void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;

// (1/sqrt 2) [[1, j], [j, 1]]
ComplexMatrix coupler_unit();

// blkdiag of n_max/2 coupler units; n_max must be even and >= 2.
ComplexMatrix build_w1(std::size_t n_max);

// blkdiag(e^{-j theta}, W_sub x (n_max/2 - 1), e^{-j theta}), staggered by one
// port against W1. For n_max = 2 this is diag(e^{-j theta}, e^{-j theta}).
ComplexMatrix build_w2(std::size_t n_max, double theta);

// (W2 W1)^Mc on N_max ports.
ComplexMatrix build_coupler_base(const CouplerSpec &spec);

// n_out x n_in sub-matrix of the base network.
ComplexMatrix build_coupler_matrix(const CouplerSpec &spec);

// n_out x n_in free-space interconnect:
//   w = (A cos chi / r) (1/(2 pi r) - j/lambda) exp(j 2 pi r / lambda)
ComplexMatrix build_rs_matrix(const DiffractionSpec &spec);

} // namespace pdnn
