// Copyright 2026 The qcavity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcavity/tolerances.hpp"

namespace qcavity {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when a numerical contract (residual, rank, positivity, ...) fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected square");
  }
}

}  // namespace detail

/// max |M - M^dagger| over all entries.
inline double hermitian_error(const ComplexMatrix& m) {
  detail::require_square(m, "hermitian_error");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::hermitian_input) {
  return m.rows() == m.cols() && hermitian_error(m) <= tolerance;
}

inline bool is_anti_hermitian(const ComplexMatrix& m, double tolerance = tol::hermitian_input) {
  return m.rows() == m.cols() && (m.size() == 0 || (m + m.adjoint()).cwiseAbs().maxCoeff() <= tolerance);
}

/// Kronecker product with a-index major block ordering:
/// (a ⊗ b)(i*nb + k, j*nb + l) = a(i, j) * b(k, l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  detail::require_square(a, "kron");
  detail::require_square(b, "kron");
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  ComplexMatrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b;
    }
  }
  return out;
}

/// Column-stacking vectorization; matches Eigen's default column-major storage.
inline ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw std::invalid_argument("unvec: vector length " + std::to_string(v.size()) + " is not " +
                                std::to_string(dim) + "^2");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

struct EigenSystem {
  RealVector values;      ///< ascending
  ComplexMatrix vectors;  ///< column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix.
inline EigenSystem eig_herm(const ComplexMatrix& m) {
  detail::require_square(m, "eig_herm");
  const double err = hermitian_error(m);
  if (err > tol::hermitian_input) {
    throw std::invalid_argument("eig_herm: matrix is not Hermitian (max|M - M^dagger| = " + std::to_string(err) +
                                ")");
  }
  // Solve the exactly Hermitian part so roundoff asymmetry never leaks in.
  const ComplexMatrix symmetric = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_herm: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

inline ComplexMatrix expm_series(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const int squarings = norm1 > 0.5 ? static_cast<int>(std::ceil(std::log2(norm1 / 0.5))) : 0;
  const ComplexMatrix scaled = m / std::ldexp(1.0, squarings);

  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= std::numeric_limits<double>::epsilon() * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace detail

/// Matrix exponential. Hermitian and anti-Hermitian inputs go through an
/// eigendecomposition (unitary output for anti-Hermitian input); anything else
/// through scaling-and-squaring of the truncated Taylor series.
inline ComplexMatrix expm(const ComplexMatrix& m) {
  detail::require_square(m, "expm");
  if (m.size() == 0) return m;
  if (is_hermitian(m)) {
    const EigenSystem es = eig_herm(m);
    const ComplexVector phases = es.values.array().exp().cast<Complex>();
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
  }
  if (is_anti_hermitian(m)) {
    // m = i h with h Hermitian
    const EigenSystem es = eig_herm(-kI * m);
    const ComplexVector phases = (kI * es.values.cast<Complex>()).array().exp();
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
  }
  return detail::expm_series(m);
}

/// Orthonormal basis (as columns) of the numerical null space of m.
///
/// Uses column-pivoted QR of m^dagger: m^dagger P = Q R gives m = P R^dagger Q^dagger,
/// so the trailing columns of Q matching negligible diagonal entries of R are
/// annihilated by m. Throws NumericalError for a numerically full-rank input or
/// when a returned direction misses the residual bound.
inline ComplexMatrix null_vector(const ComplexMatrix& m) {
  detail::require_square(m, "null_vector");
  const Eigen::Index n = m.rows();
  if (n == 0) throw NumericalError("null_vector: empty matrix");

  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m.adjoint());
  const ComplexMatrix& packed = qr.matrixQR();
  const double lead = std::abs(packed(0, 0));
  if (lead == 0.0) return ComplexMatrix::Identity(n, n);

  Eigen::Index rank = 0;
  while (rank < n && std::abs(packed(rank, rank)) > tol::rank_deficiency * lead) ++rank;
  if (rank == n) {
    throw NumericalError("null_vector: matrix is numerically full rank (smallest pivot ratio " +
                         std::to_string(std::abs(packed(n - 1, n - 1)) / lead) + ")");
  }

  const Eigen::Index nullity = n - rank;
  ComplexMatrix basis = qr.householderQ() * ComplexMatrix::Identity(n, n).rightCols(nullity);

  const double bound = tol::null_residual * m.norm();
  for (Eigen::Index k = 0; k < nullity; ++k) {
    const double residual = (m * basis.col(k)).norm();
    if (residual > bound) {
      throw NumericalError("null_vector: residual " + std::to_string(residual) + " exceeds bound " +
                           std::to_string(bound));
    }
  }
  return basis;
}

/// `points` evenly spaced values on [lo, hi]; endpoints exact.
inline std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  out.back() = hi;
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least-squares straight line through (xs, ys).
inline LineFit line_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("line_fit: xs and ys differ in length");
  if (xs.size() < 2) throw std::invalid_argument("line_fit: need at least two points");

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  double scale = 0.0;
  for (double x : xs) scale = std::max(scale, std::abs(x));
  if (sxx <= 1e-24 * std::max(1.0, scale * scale) * n) {
    throw std::invalid_argument("line_fit: x values are degenerate (fewer than two distinct)");
  }

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace qcavity
