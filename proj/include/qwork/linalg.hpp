// Copyright 2026 The qwork Authors
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

// Dense complex linear algebra on small Hilbert spaces: validated operator
// types, Hermitian eigendecomposition, Kronecker products, PSD tests and
// energy-basis dephasing. Everything here is a pure function of its inputs.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qwork/errors.hpp"

namespace qwork {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// ‖M − M†‖_F relative to ‖M‖_F.
inline constexpr double kHermiticity = 1e-12;
// ‖U†U − I‖_F.
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kTrace = 1e-12;
// A Hermitian operator is PSD iff its smallest eigenvalue is ≥ −kPsd.
inline constexpr double kPsd = 1e-10;
// Relative to max(1, spectral range).
inline constexpr double kDegeneracy = 1e-9;
inline constexpr double kCompleteness = 1e-10;
}  // namespace tol

inline bool all_finite(const ComplexMatrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
        return false;
      }
    }
  }
  return true;
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const ComplexMatrix& m) {
  return m.rows() == m.cols() &&
         hermiticity_defect(m) <= tol::kHermiticity * m.norm();
}

inline double degeneracy_tolerance(double spectral_range) {
  return tol::kDegeneracy * std::max(1.0, spectral_range);
}

// Splits sorted values into maximal runs whose neighbours are within
// `tolerance`. Returns [begin, end) index pairs.
inline std::vector<std::pair<Index, Index>> group_sorted(
    const std::vector<double>& sorted, double tolerance) {
  std::vector<std::pair<Index, Index>> groups;
  Index begin = 0;
  const auto n = static_cast<Index>(sorted.size());
  for (Index k = 1; k <= n; ++k) {
    if (k == n || sorted[k] - sorted[k - 1] > tolerance) {
      groups.emplace_back(begin, k);
      begin = k;
    }
  }
  return groups;
}

namespace detail {

inline void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m)) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

// Rotates each column so that its largest-magnitude component is real and
// positive. Ties go to the lowest index.
inline void fix_column_phases(ComplexMatrix& v) {
  for (Index c = 0; c < v.cols(); ++c) {
    double largest = 0.0;
    for (Index r = 0; r < v.rows(); ++r) largest = std::max(largest, std::abs(v(r, c)));
    if (largest == 0.0) continue;
    Index pivot = 0;
    while (std::abs(v(pivot, c)) < largest - 1e-12) ++pivot;
    const Complex phase = std::conj(v(pivot, c)) / std::abs(v(pivot, c));
    v.col(c) *= phase;
    v(pivot, c) = Complex(v(pivot, c).real(), 0.0);
  }
}

struct RawSpectrum {
  RealVector values;
  ComplexMatrix vectors;
};

inline RawSpectrum solve_hermitian(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigendecomposition did not converge");
  }
  RawSpectrum out{solver.eigenvalues(), solver.eigenvectors()};
  fix_column_phases(out.vectors);
  return out;
}

}  // namespace detail

class UnitaryOperator {
 public:
  explicit UnitaryOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    detail::check_square(matrix_, "UnitaryOperator");
    const Index d = matrix_.rows();
    const double defect = (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(d, d)).norm();
    if (defect > tol::kUnitarity) {
      throw UnitarityError("matrix is not unitary: ‖U†U − I‖_F = " + std::to_string(defect));
    }
  }

  static UnitaryOperator identity(Index d) {
    return UnitaryOperator(ComplexMatrix::Identity(d, d));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  UnitaryOperator adjoint() const { return UnitaryOperator(matrix_.adjoint()); }

 private:
  ComplexMatrix matrix_;
};

// Hermitian matrix with its spectrum computed once at construction.
// Eigenvalues ascend; eigenvector phases follow fix_column_phases.
class HermitianOperator {
 public:
  explicit HermitianOperator(ComplexMatrix m) {
    detail::check_square(m, "HermitianOperator");
    if (!is_hermitian(m)) {
      throw HermiticityError("matrix is not Hermitian: ‖M − M†‖_F = " +
                             std::to_string(hermiticity_defect(m)));
    }
    matrix_ = 0.5 * (m + m.adjoint());
    auto spectrum = detail::solve_hermitian(matrix_);
    values_ = std::move(spectrum.values);
    vectors_ = std::move(spectrum.vectors);
  }

  static HermitianOperator diagonal(const std::vector<double>& entries) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(entries.size()),
                                          static_cast<Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
      m(static_cast<Index>(k), static_cast<Index>(k)) = entries[k];
    }
    return HermitianOperator(std::move(m));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  const RealVector& eigenvalues() const { return values_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  double min_eigenvalue() const { return values_(0); }
  double spectral_range() const { return values_(values_.size() - 1) - values_(0); }

  // Index ranges of the numerically degenerate eigenspaces, in ascending
  // energy order.
  std::vector<std::pair<Index, Index>> eigenspaces() const {
    std::vector<double> v(values_.data(), values_.data() + values_.size());
    return group_sorted(v, degeneracy_tolerance(spectral_range()));
  }

 private:
  ComplexMatrix matrix_;
  RealVector values_;
  ComplexMatrix vectors_;
};

// Unit-trace PSD Hermitian matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) {
    detail::check_square(m, "DensityMatrix");
    if (!is_hermitian(m)) {
      throw HermiticityError("density matrix is not Hermitian");
    }
    matrix_ = 0.5 * (m + m.adjoint());
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > tol::kTrace) {
      throw StateError("density matrix trace is " + std::to_string(trace) + ", expected 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -tol::kPsd) {
      throw StateError("density matrix has negative eigenvalue " +
                       std::to_string(solver.eigenvalues()(0)));
    }
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const ComplexVector unit = psi / psi.norm();
    return DensityMatrix(unit * unit.adjoint());
  }

  // weight·a + (1 − weight)·b
  static DensityMatrix mixture(double weight, const DensityMatrix& a, const DensityMatrix& b) {
    if (!(weight >= 0.0 && weight <= 1.0)) throw ParamError("mixture weight must lie in [0,1]");
    if (a.dim() != b.dim()) throw DimensionError("mixture of states with different dimensions");
    return DensityMatrix(weight * a.matrix() + (1.0 - weight) * b.matrix());
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

struct EigenDecomposition {
  RealVector values;
  UnitaryOperator vectors;
};

inline EigenDecomposition eig_hermitian(const HermitianOperator& m) {
  return {m.eigenvalues(), UnitaryOperator(m.eigenvectors())};
}

inline EigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  return eig_hermitian(HermitianOperator(m));
}

// Kronecker product, entry (i·rB + k, j·cB + l) = A(i,j)·B(k,l).
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexMatrix tensor_power(const ComplexMatrix& a, int copies) {
  if (copies < 1) throw ParamError("tensor power needs at least one copy");
  ComplexMatrix out = a;
  for (int k = 1; k < copies; ++k) out = tensor(out, a);
  return out;
}

inline double min_eigenvalue(const HermitianOperator& m) { return m.min_eigenvalue(); }

inline double min_eigenvalue(const ComplexMatrix& m) {
  detail::check_square(m, "min_eigenvalue");
  if (!is_hermitian(m)) {
    throw HermiticityError("min_eigenvalue: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

inline bool is_psd(const ComplexMatrix& m) { return min_eigenvalue(m) >= -tol::kPsd; }

// Projector onto the span of columns [begin, end) of `basis`.
inline ComplexMatrix span_projector(const ComplexMatrix& basis, Index begin, Index end) {
  const auto block = basis.middleCols(begin, end - begin);
  return block * block.adjoint();
}

// Removes coherence between distinct eigenspaces of h. Coherence inside a
// degenerate eigenspace survives.
inline DensityMatrix dephase(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) {
    throw DimensionError("dephase: state has dimension " + std::to_string(rho.dim()) +
                         ", Hamiltonian " + std::to_string(h.dim()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& [begin, end] : h.eigenspaces()) {
    const ComplexMatrix p = span_projector(h.eigenvectors(), begin, end);
    out += p * rho.matrix() * p;
  }
  return DensityMatrix(std::move(out));
}

}  // namespace qwork
