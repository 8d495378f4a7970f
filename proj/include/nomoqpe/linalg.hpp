// Copyright 2026 The nomoqpe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nomoqpe/error.hpp"

namespace nomoqpe {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

inline constexpr double kInputHermiticityTol = 1e-10;
inline constexpr double kSymmetrizedTol = 1e-12;
inline constexpr double kReconstructionTol = 1e-9;
inline constexpr double kUnitarityTol = 1e-9;

/// Largest |M_ij - conj(M_ji)|.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m,
                       double tol = kInputHermiticityTol,
                       const std::string& what = "matrix") {
  if (m.rows() != m.cols()) {
    throw NumericalError(what + " is not square");
  }
  double defect = hermiticity_defect(m);
  if (!(defect <= tol)) {
    throw NumericalError(what + " is not Hermitian (defect " +
                         std::to_string(defect) + ")");
  }
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending. Columns of
/// `vectors` are orthonormal eigenvectors.
template <typename Scalar>
struct Spectrum {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  RealVector values;
  Matrix vectors;

  Eigen::Index size() const { return values.size(); }
};

/// Diagonalizes a Hermitian matrix. Rejects inputs that are not Hermitian to
/// 1e-10 and checks the reconstruction residual max|M - Q L Q^H| <= 1e-9.
template <typename Derived>
Spectrum<typename Derived::Scalar> exact_spectrum(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require_hermitian(m, kInputHermiticityTol);
  Spectrum<Scalar> out;
  if (m.rows() == 0) return out;
  Matrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge");
  }
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  Matrix rebuilt = out.vectors * out.values.template cast<Scalar>().asDiagonal() *
                   out.vectors.adjoint();
  double residual = max_abs(rebuilt - sym);
  double scale = std::max(1.0, max_abs(sym));
  if (!(residual <= kReconstructionTol * scale)) {
    throw NumericalError("eigendecomposition residual " +
                         std::to_string(residual) + " exceeds tolerance");
  }
  return out;
}

/// Largest singular value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                               Eigen::Dynamic>;
  Eigen::JacobiSVD<Matrix> svd(m.eval());
  return svd.singularValues()(0);
}

/// max|U U^H - I|
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  if (u.size() == 0) return 0.0;
  auto n = u.rows();
  return max_abs(u * u.adjoint() -
                 Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                               Eigen::Dynamic>::Identity(n, n));
}

}  // namespace nomoqpe
