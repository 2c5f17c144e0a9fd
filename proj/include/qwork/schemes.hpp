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

// Work measurement schemes as POVMs on one or two copies of the state: the
// two-point-measurement (TPM) scheme and the two-copy collective scheme
// M(i,j) = |i><i| ⊗ (|U'_ji|²·I + λ·T_j^off) with λ pushed as far towards 1
// as positivity allows.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwork/distribution.hpp"
#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"
#include "qwork/process.hpp"

namespace qwork {

struct PovmElement {
  Index initial;  // i
  Index final;    // j
  double work;    // E_i − E'_j
  ComplexMatrix op;
};

/// POVM on `copies` copies of a `system_dim`-dimensional system. Elements
/// are labelled by (i, j) and stored row-major. Positivity and completeness
/// are guaranteed by the named constructors (tpm_povm, two_copy_povm), not
/// by the type; use check_povm to verify an arbitrary instance.
struct WorkPOVM {
  int copies = 1;
  Index system_dim = 0;
  double work_tolerance = 0.0;  // coalescing threshold for equal work values
  std::vector<PovmElement> elements;

  Index dim() const {
    Index d = 1;
    for (int k = 0; k < copies; ++k) d *= system_dim;
    return d;
  }

  const PovmElement& element(Index i, Index j) const {
    return elements[static_cast<std::size_t>(i * system_dim + j)];
  }
};

struct PovmCheck {
  double min_eigenvalue;       // over all elements
  double completeness_defect;  // ‖Σ M − I‖_F
  bool valid() const {
    return min_eigenvalue >= -tol::kPsd && completeness_defect <= tol::kCompleteness;
  }
};

inline PovmCheck check_povm(const WorkPOVM& povm) {
  PovmCheck out{std::numeric_limits<double>::infinity(), 0.0};
  ComplexMatrix sum = ComplexMatrix::Zero(povm.dim(), povm.dim());
  for (const auto& e : povm.elements) {
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_eigenvalue(e.op));
    sum += e.op;
  }
  out.completeness_defect = (sum - ComplexMatrix::Identity(povm.dim(), povm.dim())).norm();
  return out;
}

// p(i, j) = |<j'|U|i>|², doubly stochastic.
inline RealMatrix transition_matrix(const Process& process) {
  return process.rotated_unitary().cwiseAbs2().transpose();
}

namespace detail {

inline ComplexMatrix basis_projector(const ComplexMatrix& basis, Index k) {
  return basis.col(k) * basis.col(k).adjoint();
}

}  // namespace detail

inline WorkPOVM tpm_povm(const Process& process) {
  const RealMatrix p = transition_matrix(process);
  WorkPOVM povm{1, process.dim(), process.work_values().tolerance(), {}};
  for (const auto& w : process.work_values().entries()) {
    povm.elements.push_back({w.initial, w.final, w.work,
                             p(w.initial, w.final) *
                                 detail::basis_projector(process.initial_basis(), w.initial)});
  }
  return povm;
}

// Populations of rho in the eigenbasis of H.
inline RealVector energy_populations(const Process& process, const DensityMatrix& rho) {
  if (rho.dim() != process.dim()) {
    throw DimensionError("state dimension " + std::to_string(rho.dim()) +
                         " does not match process dimension " + std::to_string(process.dim()));
  }
  const ComplexMatrix& v = process.initial_basis();
  return (v.adjoint() * rho.matrix() * v).diagonal().real();
}

inline WorkDistribution tpm_distribution(const Process& process, const DensityMatrix& rho) {
  const RealVector pop = energy_populations(process, rho);
  const RealMatrix p = transition_matrix(process);
  std::vector<std::pair<double, double>> weighted;
  for (const auto& w : process.work_values().entries()) {
    weighted.emplace_back(w.work, pop(w.initial) * p(w.initial, w.final));
  }
  return WorkDistribution::coalesce(std::move(weighted), process.work_values().tolerance());
}

/// T_j = U†|j'><j'|U split into its diagonal and off-diagonal parts with
/// respect to the eigenbasis of H. All three are in computational
/// coordinates.
struct TOperator {
  ComplexMatrix full;
  ComplexMatrix diag;
  ComplexMatrix offdiag;
};

struct TOperatorSet {
  std::vector<TOperator> ops;  // indexed by final level j
};

inline TOperatorSet t_operators(const Process& process) {
  const ComplexMatrix& up = process.rotated_unitary();
  const ComplexMatrix& v = process.initial_basis();
  TOperatorSet out;
  for (Index j = 0; j < process.dim(); ++j) {
    // <k|T_j|l> = conj(U'_jk)·U'_jl in the H eigenbasis.
    const ComplexVector row = up.row(j).adjoint();
    const ComplexMatrix t = row * row.adjoint();
    ComplexMatrix t_diag = ComplexMatrix::Zero(t.rows(), t.cols());
    t_diag.diagonal() = t.diagonal();
    const ComplexMatrix t_off = t - t_diag;
    out.ops.push_back({v * t * v.adjoint(), v * t_diag * v.adjoint(), v * t_off * v.adjoint()});
  }
  return out;
}

struct LambdaResult {
  double lambda = 1.0;
  // The (i, j) whose element reaches zero eigenvalue first; empty when λ is
  // capped at 1 with slack or nothing constrains it.
  std::optional<std::pair<Index, Index>> binding_pair;
  // Smallest eigenvalue of T_j^off for every j (0 when it vanishes).
  std::vector<double> offdiag_min_eigenvalues;
  // Every T_j^off vanished, so positivity never constrains λ.
  bool unconstrained = false;
  // λ = 0 forced by an element with |U'_ji|² = 0 but T_j^off ≠ 0; the
  // scheme degenerates to TPM ⊗ I.
  bool collapsed_to_tpm = false;
};

// S(i,j)_λ = |U'_ji|²·I + λ·T_j^off has smallest eigenvalue
// |U'_ji|² + λ·μ_j with μ_j = λ_min(T_j^off) ≤ 0, so the largest feasible λ
// is min_ij |U'_ji|² / |μ_j| capped at 1.
inline LambdaResult lambda_max(const Process& process) {
  constexpr double kVanishing = 1e-12;
  const ComplexMatrix& up = process.rotated_unitary();
  const Index d = process.dim();
  LambdaResult out;
  out.offdiag_min_eigenvalues.assign(static_cast<std::size_t>(d), 0.0);
  double best = std::numeric_limits<double>::infinity();
  std::pair<Index, Index> arg{0, 0};
  bool any_constraint = false;
  for (Index j = 0; j < d; ++j) {
    const ComplexVector row = up.row(j).adjoint();
    ComplexMatrix t_off = row * row.adjoint();
    t_off.diagonal().setZero();
    if (t_off.norm() < kVanishing) continue;
    const double mu = min_eigenvalue(t_off);
    out.offdiag_min_eigenvalues[static_cast<std::size_t>(j)] = mu;
    if (mu >= 0.0) continue;
    any_constraint = true;
    for (Index i = 0; i < d; ++i) {
      const double ratio = std::norm(up(j, i)) / -mu;
      if (ratio < best) {
        best = ratio;
        arg = {i, j};
      }
    }
  }
  if (!any_constraint) {
    out.unconstrained = true;
    return out;
  }
  out.lambda = std::min(1.0, best);
  if (best <= 1.0 + 1e-12) out.binding_pair = arg;
  out.collapsed_to_tpm = out.lambda <= kVanishing;
  return out;
}

/// The two-copy family at an arbitrary λ. Completeness holds for every λ;
/// positivity only for λ ≤ lambda_max(process).lambda.
inline WorkPOVM two_copy_family(const Process& process, double lambda) {
  const TOperatorSet t = t_operators(process);
  const ComplexMatrix& up = process.rotated_unitary();
  const Index d = process.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  WorkPOVM povm{2, d, process.work_values().tolerance(), {}};
  for (const auto& w : process.work_values().entries()) {
    const ComplexMatrix second =
        std::norm(up(w.final, w.initial)) * id +
        lambda * t.ops[static_cast<std::size_t>(w.final)].offdiag;
    povm.elements.push_back(
        {w.initial, w.final, w.work,
         tensor(detail::basis_projector(process.initial_basis(), w.initial), second)});
  }
  return povm;
}

struct TwoCopyScheme {
  WorkPOVM povm;
  LambdaResult lambda;
};

inline TwoCopyScheme two_copy_povm(const Process& process) {
  LambdaResult lambda = lambda_max(process);
  return {two_copy_family(process, lambda.lambda), std::move(lambda)};
}

enum class SchemeKind { tpm, two_copy };

inline WorkPOVM scheme_povm(SchemeKind kind, const Process& process) {
  return kind == SchemeKind::tpm ? tpm_povm(process) : two_copy_povm(process).povm;
}

struct OutcomeProbability {
  Index initial;
  Index final;
  double work;
  double probability;
};

/// tr(ρ^⊗N M(i,j)) for every element, row-major in (i, j). Values in
/// [-1e-10, 0) are clamped to zero; anything more negative means the
/// operators were not a POVM and raises DistributionError.
inline std::vector<OutcomeProbability> outcome_probabilities(const WorkPOVM& povm,
                                                             const DensityMatrix& rho) {
  if (rho.dim() != povm.system_dim) {
    throw DimensionError("state dimension " + std::to_string(rho.dim()) +
                         " does not match POVM system dimension " +
                         std::to_string(povm.system_dim));
  }
  const ComplexMatrix joint = tensor_power(rho.matrix(), povm.copies);
  std::vector<OutcomeProbability> out;
  out.reserve(povm.elements.size());
  for (const auto& e : povm.elements) {
    double p = joint.transpose().cwiseProduct(e.op).sum().real();
    if (p < 0.0) {
      if (p < -tol::kPsd) {
        throw DistributionError("negative outcome probability " + std::to_string(p) +
                                " for (" + std::to_string(e.initial) + "," +
                                std::to_string(e.final) + ")");
      }
      p = 0.0;
    }
    out.push_back({e.initial, e.final, e.work, p});
  }
  return out;
}

inline WorkDistribution evaluate_povm(const WorkPOVM& povm, const DensityMatrix& rho) {
  std::vector<std::pair<double, double>> weighted;
  for (const auto& o : outcome_probabilities(povm, rho)) weighted.emplace_back(o.work, o.probability);
  return WorkDistribution::coalesce(std::move(weighted), povm.work_tolerance);
}

// X = Σ W(i,j)·M(i,j)
inline HermitianOperator work_operator(const WorkPOVM& povm) {
  ComplexMatrix x = ComplexMatrix::Zero(povm.dim(), povm.dim());
  for (const auto& e : povm.elements) x += e.work * e.op;
  return HermitianOperator(std::move(x));
}

struct QubitLambda {
  double lambda;
  bool unconstrained;  // α a multiple of π/2: no off-diagonal constraint
};

// λ(α) = min{cos²α, sin²α}/|cos α sin α| for the cyclic qubit process with
// U' the rotation by α.
inline QubitLambda qubit_lambda_closed_form(double alpha) {
  if (!std::isfinite(alpha)) throw ParamError("alpha must be finite");
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  if (std::abs(c * s) <= 1e-15) return {1.0, true};
  return {std::min(c * c, s * s) / std::abs(c * s), false};
}

/// Closed-form p(00), p(01), p(10), p(11) of the two-copy scheme for the
/// cyclic qubit rotation by α ∈ [0, π/4], where λ = tan α.
inline std::array<double, 4> qubit_probabilities_closed_form(double alpha,
                                                             const DensityMatrix& rho) {
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 4 + 1e-15)) {
    throw ParamError("closed-form qubit probabilities need alpha in [0, pi/4]");
  }
  if (rho.dim() != 2) throw DimensionError("closed-form qubit probabilities need a qubit state");
  const double c2 = std::cos(alpha) * std::cos(alpha);
  const double s2 = std::sin(alpha) * std::sin(alpha);
  const double r00 = rho.matrix()(0, 0).real();
  const double r11 = rho.matrix()(1, 1).real();
  const double coh = 2.0 * s2 * rho.matrix()(0, 1).real();
  return {r00 * (c2 - coh), r00 * (s2 + coh), r11 * (s2 - coh), r11 * (c2 + coh)};
}

}  // namespace qwork
