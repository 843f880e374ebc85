#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rtnwalk {

using Complex = std::complex<double>;

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Density matrices are plain complex matrices; Hermiticity and unit trace are
// checked at the boundaries that require them.
using DensityMatrix = Eigen::MatrixXcd;

// Coherence (Bloch) vector, length dim^2 - 1.
using BlochVector = Eigen::VectorXd;

template <class Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

} // namespace rtnwalk
