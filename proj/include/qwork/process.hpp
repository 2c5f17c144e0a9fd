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

// Driven processes (H, H', U), the work values E_i − E'_j they induce, and
// the canonical unitaries and states used throughout the library.
//
// Sign convention: work is counted as *extracted*, W(i,j) = E_i − E'_j, and
// the operator whose expectation gives the exact average work is
// X_req = H − U†H'U.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"

namespace qwork {

struct WorkValue {
  Index initial;  // i, index into the ascending spectrum of H
  Index final;    // j, index into the ascending spectrum of H'
  double work;    // E_i − E'_j
};

class WorkValueTable {
 public:
  WorkValueTable(const RealVector& initial_energies, const RealVector& final_energies)
      : dim_(initial_energies.size()) {
    entries_.reserve(static_cast<std::size_t>(dim_ * dim_));
    for (Index i = 0; i < dim_; ++i) {
      for (Index j = 0; j < dim_; ++j) {
        entries_.push_back({i, j, initial_energies(i) - final_energies(j)});
      }
    }
    std::vector<double> sorted;
    for (const auto& e : entries_) sorted.push_back(e.work);
    std::sort(sorted.begin(), sorted.end());
    tolerance_ = degeneracy_tolerance(sorted.back() - sorted.front());
    for (std::size_t k = 1; k < sorted.size(); ++k) {
      if (sorted[k] - sorted[k - 1] <= tolerance_) degenerate_ = true;
    }
  }

  Index dim() const { return dim_; }
  double work(Index i, Index j) const { return entries_[static_cast<std::size_t>(i * dim_ + j)].work; }
  // Row-major in (i, j).
  const std::vector<WorkValue>& entries() const { return entries_; }
  // True iff two distinct (i, j) pairs share a work value within tolerance().
  bool degenerate() const { return degenerate_; }
  double tolerance() const { return tolerance_; }

 private:
  Index dim_;
  std::vector<WorkValue> entries_;
  double tolerance_ = 0.0;
  bool degenerate_ = false;
};

class Process {
 public:
  Process(HermitianOperator h, HermitianOperator h_final, UnitaryOperator u)
      : h_(std::move(h)),
        h_final_(std::move(h_final)),
        u_(std::move(u)),
        work_values_(checked_table(h_, h_final_, u_)) {
    rotated_ = h_final_.eigenvectors().adjoint() * u_.matrix() * h_.eigenvectors();
  }

  const HermitianOperator& h() const { return h_; }
  const HermitianOperator& h_final() const { return h_final_; }
  const UnitaryOperator& u() const { return u_; }
  Index dim() const { return h_.dim(); }

  const RealVector& initial_energies() const { return h_.eigenvalues(); }
  const RealVector& final_energies() const { return h_final_.eigenvalues(); }
  // Columns are |i> and |j'> in the computational basis.
  const ComplexMatrix& initial_basis() const { return h_.eigenvectors(); }
  const ComplexMatrix& final_basis() const { return h_final_.eigenvectors(); }

  // U'(j, i) = <j'|U|i>.
  const ComplexMatrix& rotated_unitary() const { return rotated_; }
  const WorkValueTable& work_values() const { return work_values_; }

  // H − U†H'U
  ComplexMatrix required_work_operator() const {
    return h_.matrix() - u_.matrix().adjoint() * h_final_.matrix() * u_.matrix();
  }

 private:
  static WorkValueTable checked_table(const HermitianOperator& h, const HermitianOperator& h_final,
                                      const UnitaryOperator& u) {
    if (h.dim() != h_final.dim() || h.dim() != u.dim()) {
      throw DimensionError("process operators disagree in dimension: H " +
                           std::to_string(h.dim()) + ", H' " + std::to_string(h_final.dim()) +
                           ", U " + std::to_string(u.dim()));
    }
    return WorkValueTable(h.eigenvalues(), h_final.eigenvalues());
  }

  HermitianOperator h_;
  HermitianOperator h_final_;
  UnitaryOperator u_;
  WorkValueTable work_values_;
  ComplexMatrix rotated_;
};

inline Process build_process(const ComplexMatrix& h, const ComplexMatrix& h_final,
                             const ComplexMatrix& u) {
  detail::check_square(h, "H");
  detail::check_square(h_final, "H_final");
  detail::check_square(u, "U");
  if (h.rows() != h_final.rows() || h.rows() != u.rows()) {
    throw DimensionError("process operators disagree in dimension: H " + std::to_string(h.rows()) +
                         ", H' " + std::to_string(h_final.rows()) + ", U " +
                         std::to_string(u.rows()));
  }
  return Process(HermitianOperator(h), HermitianOperator(h_final), UnitaryOperator(u));
}

inline double exact_average_work(const Process& process, const DensityMatrix& rho) {
  if (rho.dim() != process.dim()) {
    throw DimensionError("state dimension " + std::to_string(rho.dim()) +
                         " does not match process dimension " + std::to_string(process.dim()));
  }
  return (rho.matrix() * process.required_work_operator()).trace().real();
}

using Params = std::map<std::string, double, std::less<>>;

namespace unitaries {

inline UnitaryOperator rotation(double alpha) {
  if (!std::isfinite(alpha)) throw ParamError("rotation angle must be finite");
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return UnitaryOperator(std::move(m));
}

// sqrt(1 − ε²)·I + ε·iσ_y
inline UnitaryOperator near_identity(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ParamError("near_identity needs 0 <= epsilon <= 1");
  }
  const double a = std::sqrt(1.0 - epsilon * epsilon);
  ComplexMatrix m(2, 2);
  m << a, epsilon, -epsilon, a;
  return UnitaryOperator(std::move(m));
}

// (1/sqrt d) Σ_jk exp(−2πi·jk/d) |j><k|
inline UnitaryOperator dft(Index d) {
  if (d < 2) throw ParamError("dft needs dimension >= 2");
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix m(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      const Index r = (j * k) % d;
      Complex phase;
      if ((4 * r) % d == 0) {
        // Quarter turns are exact.
        static constexpr Complex kQuarter[] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
        phase = kQuarter[(4 * r) / d];
      } else {
        phase = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(r) /
                                    static_cast<double>(d));
      }
      m(j, k) = norm * phase;
    }
  }
  return UnitaryOperator(std::move(m));
}

// |0><+| + |1><−|
inline UnitaryOperator swap_to_coherent() {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2, 2);
  m << r, r, r, -r;
  return UnitaryOperator(std::move(m));
}

}  // namespace unitaries

namespace detail {

inline double require_param(const Params& params, std::string_view key, std::string_view kind) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ParamError(std::string(kind) + " requires parameter '" + std::string(key) + "'");
  }
  return it->second;
}

inline Index require_index_param(const Params& params, std::string_view key,
                                 std::string_view kind) {
  const double v = require_param(params, key, kind);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e6) {
    throw ParamError(std::string(kind) + ": '" + std::string(key) +
                     "' must be a non-negative integer");
  }
  return static_cast<Index>(v);
}

}  // namespace detail

// Named unitaries: rotation{alpha}, near_identity{epsilon}, dft{d},
// swap_to_coherent{}.
inline UnitaryOperator builtin_unitary(std::string_view kind, const Params& params) {
  if (kind == "rotation") return unitaries::rotation(detail::require_param(params, "alpha", kind));
  if (kind == "near_identity") {
    return unitaries::near_identity(detail::require_param(params, "epsilon", kind));
  }
  if (kind == "dft") return unitaries::dft(detail::require_index_param(params, "d", kind));
  if (kind == "swap_to_coherent") return unitaries::swap_to_coherent();
  throw ParamError("unknown builtin unitary '" + std::string(kind) + "'");
}

namespace states {

// e^{−βH}/Z; beta = +inf gives the uniform mixture over the ground space.
inline DensityMatrix thermal(const HermitianOperator& h, double beta) {
  if (std::isnan(beta) || beta < 0.0) throw ParamError("thermal state needs beta >= 0");
  const RealVector& e = h.eigenvalues();
  RealVector weights(e.size());
  if (std::isinf(beta)) {
    const auto ground = h.eigenspaces().front();
    weights.setZero();
    weights.segment(ground.first, ground.second - ground.first).setOnes();
  } else {
    for (Index k = 0; k < e.size(); ++k) weights(k) = std::exp(-beta * (e(k) - e(0)));
  }
  weights /= weights.sum();
  const ComplexMatrix& v = h.eigenvectors();
  return DensityMatrix(v * weights.cast<Complex>().asDiagonal() * v.adjoint());
}

inline DensityMatrix basis(Index k, Index d) {
  if (d < 1 || k < 0 || k >= d) throw ParamError("basis state needs 0 <= k < d");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

// (1/sqrt d) Σ_k |k>, as a projector.
inline DensityMatrix maximally_coherent(Index d) {
  if (d < 1) throw ParamError("maximally_coherent needs d >= 1");
  return DensityMatrix(ComplexMatrix::Constant(d, d, Complex(1.0 / static_cast<double>(d), 0.0)));
}

}  // namespace states

// Named states: thermal{beta} (uses h), basis{k}, maximally_coherent{}.
// The dimension is taken from h.
inline DensityMatrix builtin_state(std::string_view kind, const Params& params,
                                   const HermitianOperator& h) {
  if (kind == "thermal") return states::thermal(h, detail::require_param(params, "beta", kind));
  if (kind == "basis") return states::basis(detail::require_index_param(params, "k", kind), h.dim());
  if (kind == "maximally_coherent") return states::maximally_coherent(h.dim());
  throw ParamError("unknown builtin state '" + std::string(kind) + "'");
}

namespace detail {

inline double param_or(const Params& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace detail

// Ready-made processes:
//   dft{d=2}                      cyclic, H = diag(0, 1, …, d−1), U = dft(d)
//   rotation{alpha}               cyclic qubit, H = |1><1|, U = rotation(alpha)
//   near_identity{epsilon}        cyclic qubit, H = |1><1|, U = near_identity(epsilon)
//   swap_to_coherent{eps=1, eps_prime=1}
//                                 H = eps|1><1|, H' = eps_prime|1><1|
//   diagonal_phase{phi}           cyclic qubit, H = |1><1|, U = diag(1, e^{i·phi})
inline Process builtin_process(std::string_view name, const Params& params) {
  if (name == "dft") {
    const double d = detail::param_or(params, "d", 2.0);
    if (!(d >= 2.0) || d != std::floor(d) || d > 64.0) throw ParamError("dft needs integer 2 <= d <= 64");
    const auto dim = static_cast<Index>(d);
    std::vector<double> levels;
    for (Index k = 0; k < dim; ++k) levels.push_back(static_cast<double>(k));
    auto h = HermitianOperator::diagonal(levels);
    return Process(h, h, unitaries::dft(dim));
  }
  const auto qubit_h = [](double gap) { return HermitianOperator::diagonal({0.0, gap}); };
  if (name == "rotation") {
    return Process(qubit_h(1.0), qubit_h(1.0),
                   unitaries::rotation(detail::require_param(params, "alpha", name)));
  }
  if (name == "near_identity") {
    return Process(qubit_h(1.0), qubit_h(1.0),
                   unitaries::near_identity(detail::require_param(params, "epsilon", name)));
  }
  if (name == "swap_to_coherent") {
    return Process(qubit_h(detail::param_or(params, "eps", 1.0)),
                   qubit_h(detail::param_or(params, "eps_prime", 1.0)), unitaries::swap_to_coherent());
  }
  if (name == "diagonal_phase") {
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    u(1, 1) = std::polar(1.0, detail::require_param(params, "phi", name));
    return Process(qubit_h(1.0), qubit_h(1.0), UnitaryOperator(std::move(u)));
  }
  throw ParamError("unknown builtin process '" + std::string(name) + "'");
}

}  // namespace qwork
