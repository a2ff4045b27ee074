// SPDX-License-Identifier: Apache-2.0
//
// Dense complex carriers used for every transfer matrix and signal vector.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pdnn
{

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kJ{0.0, 1.0};

// Max-abs deviation of A * A^H from the identity (0 for an exactly unitary matrix).
inline double unitarity_error(const ComplexMatrix &a)
{
    const ComplexMatrix prod = a * a.adjoint();
    return (prod - ComplexMatrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff();
}

} // namespace pdnn
