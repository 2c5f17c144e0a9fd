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

// Numeric witnesses that no POVM can reproduce both the exact average work
// and the TPM statistics on incoherent states:
//
//   single_copy_gap            one copy: the TPM-forced work operator versus
//                              H − U†H'U.
//   individual_work_bound      N copies, single-copy work: entry bound on
//                              near-identity qubit rotations versus the exact
//                              average on |+>.
//   total_work_infeasibility   N qubit copies, total work: least-squares
//                              residual of the symmetric constraint system
//                              restricted to the TPM-allowed support.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"
#include "qwork/process.hpp"
#include "qwork/schemes.hpp"

namespace qwork {

enum class CertificateKind { single_copy, individual_N, total_N };
enum class Verdict { certified_incompatible, not_certified };

inline const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::single_copy: return "single_copy";
    case CertificateKind::individual_N: return "individual_N";
    case CertificateKind::total_N: return "total_N";
  }
  return "?";
}

inline const char* to_string(Verdict verdict) {
  return verdict == Verdict::certified_incompatible ? "certified_incompatible" : "not_certified";
}

struct NoGoCertificate {
  CertificateKind kind = CertificateKind::single_copy;
  std::optional<ComplexMatrix> required_operator;
  std::optional<ComplexMatrix> achievable_operator;
  double gap = 0.0;  // Frobenius norm, energy units
  std::optional<double> bound_lhs;
  std::optional<double> bound_rhs;
  Verdict verdict = Verdict::not_certified;
  std::map<std::string, double> details;

  bool certified() const { return verdict == Verdict::certified_incompatible; }
};

inline constexpr double kGapThreshold = 1e-8;
inline constexpr double kBoundMargin = 1e-12;

// Requirement (ii) fixes M(W) on every block-diagonal state. That pins the
// single-copy POVM to the TPM one iff no work value is shared by pairs whose
// initial energies sit in different eigenspaces of H.
inline bool tpm_uniqueness_applies(const Process& process) {
  std::vector<Index> sector(static_cast<std::size_t>(process.dim()));
  Index s = 0;
  for (const auto& [begin, end] : process.h().eigenspaces()) {
    for (Index k = begin; k < end; ++k) sector[static_cast<std::size_t>(k)] = s;
    ++s;
  }
  auto entries = process.work_values().entries();
  std::sort(entries.begin(), entries.end(),
            [](const WorkValue& a, const WorkValue& b) { return a.work < b.work; });
  std::vector<double> works;
  for (const auto& e : entries) works.push_back(e.work);
  for (const auto& [begin, end] : group_sorted(works, process.work_values().tolerance())) {
    const Index first = sector[static_cast<std::size_t>(entries[static_cast<std::size_t>(begin)].initial)];
    for (Index k = begin + 1; k < end; ++k) {
      if (sector[static_cast<std::size_t>(entries[static_cast<std::size_t>(k)].initial)] != first) {
        return false;
      }
    }
  }
  return true;
}

/// Compares the work operator forced by the TPM statistics with the one the
/// exact average demands. The diagonal parts (in the H eigenbasis) always
/// agree; the gap is the norm of the coherent part of U†H'U.
inline NoGoCertificate single_copy_gap(const Process& process) {
  if (!tpm_uniqueness_applies(process)) {
    throw DegenerateWorkValuesError(
        "work values coincide across distinct initial energies; the TPM POVM is not the "
        "unique single-copy scheme for this process");
  }
  const ComplexMatrix required = process.required_work_operator();
  const ComplexMatrix achievable = work_operator(tpm_povm(process)).matrix();
  const ComplexMatrix& v = process.initial_basis();
  const ComplexMatrix diff = v.adjoint() * (achievable - required) * v;

  NoGoCertificate cert;
  cert.kind = CertificateKind::single_copy;
  cert.gap = (achievable - required).norm();
  cert.verdict = cert.gap > kGapThreshold ? Verdict::certified_incompatible : Verdict::not_certified;
  cert.details["diagonal_mismatch"] = diff.diagonal().cwiseAbs().maxCoeff();
  cert.details["work_values_degenerate"] = process.work_values().degenerate() ? 1.0 : 0.0;
  cert.required_operator = required;
  cert.achievable_operator = achievable;
  return cert;
}

struct EntryBoundCheck {
  double max_diagonal = 0.0;
  double max_offdiagonal = 0.0;
  // max over k ≠ l of |M_kl|² − M_kk·M_ll; positive means the element is not PSD.
  double max_minor_violation = -std::numeric_limits<double>::infinity();
  bool holds = true;
};

/// Checks ⟨k|M|k⟩ ≤ ε² and |⟨k|M|l⟩| ≤ ε² on every element carrying a
/// non-zero work value.
inline EntryBoundCheck check_entry_bound(const WorkPOVM& povm, double epsilon) {
  const double bound = epsilon * epsilon;
  EntryBoundCheck out;
  for (const auto& e : povm.elements) {
    if (std::abs(e.work) <= povm.work_tolerance) continue;
    const Index n = e.op.rows();
    for (Index k = 0; k < n; ++k) {
      out.max_diagonal = std::max(out.max_diagonal, e.op(k, k).real());
      for (Index l = 0; l < n; ++l) {
        if (l == k) continue;
        out.max_offdiagonal = std::max(out.max_offdiagonal, std::abs(e.op(k, l)));
        out.max_minor_violation = std::max(
            out.max_minor_violation, std::norm(e.op(k, l)) - e.op(k, k).real() * e.op(l, l).real());
      }
    }
  }
  out.holds = out.max_diagonal <= bound + 1e-12 && out.max_offdiagonal <= bound + 1e-10 &&
              out.max_minor_violation <= 1e-10;
  return out;
}

/// Compares the entry-bound ceiling 2^(N+1)·ε² on any admissible N-copy
/// scheme with the exact |<W>| = ε·sqrt(1 − ε²) on |+>, at ε = 1/(N·2^(N+1)).
/// When a candidate N-copy POVM for the cyclic near_identity(ε) process is
/// given, its entry-bound premise and achieved average are recorded too.
inline NoGoCertificate individual_work_bound(int copies, const WorkPOVM* candidate = nullptr) {
  if (copies < 1) throw ParamError("individual_work_bound needs N >= 1");
  if (copies > 60) throw ParamError("individual_work_bound: N too large for double precision");
  const double scale = std::ldexp(1.0, copies + 1);  // 2^(N+1)
  const double epsilon = 1.0 / (copies * scale);

  NoGoCertificate cert;
  cert.kind = CertificateKind::individual_N;
  cert.bound_lhs = scale * epsilon * epsilon;
  cert.bound_rhs = epsilon * std::sqrt(1.0 - epsilon * epsilon);
  cert.gap = std::max(0.0, *cert.bound_rhs - *cert.bound_lhs);
  cert.verdict = *cert.bound_lhs < *cert.bound_rhs - kBoundMargin ? Verdict::certified_incompatible
                                                                  : Verdict::not_certified;
  cert.details["n_copies"] = copies;
  cert.details["epsilon"] = epsilon;

  if (candidate != nullptr) {
    if (candidate->copies != copies || candidate->system_dim != 2) {
      throw DimensionError("candidate POVM must act on N qubit copies");
    }
    const EntryBoundCheck premise = check_entry_bound(*candidate, epsilon);
    cert.details["candidate_max_diagonal"] = premise.max_diagonal;
    cert.details["candidate_max_offdiagonal"] = premise.max_offdiagonal;
    cert.details["candidate_premise_holds"] = premise.holds ? 1.0 : 0.0;
    const ComplexMatrix plus = states::maximally_coherent(2).matrix();
    const ComplexMatrix x = work_operator(*candidate).matrix();
    const double achieved =
        std::abs(tensor_power(plus, copies).transpose().cwiseProduct(x).sum().real());
    cert.details["candidate_average_work"] = achieved;
    cert.achievable_operator = x;
  }
  return cert;
}

struct SymmetricFit {
  double residual;       // min ‖Sym(X) − T‖_F over X supported on equal-weight pairs
  ComplexMatrix fit;     // the minimising Sym(X)
  Index unknowns;
  Index constraints;
};

namespace detail {

// Index of the bit string obtained by reading the N-bit string `a` through
// `perm`: bit k of the result is bit perm[k] of a. Bit 0 is the first
// (most significant) tensor factor.
inline std::uint32_t permute_bits(std::uint32_t a, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::uint32_t out = 0;
  for (int k = 0; k < n; ++k) {
    const std::uint32_t bit = (a >> (n - 1 - perm[static_cast<std::size_t>(k)])) & 1u;
    out |= bit << (n - 1 - k);
  }
  return out;
}

}  // namespace detail

/// Least-squares fit of an N-qubit target T by Sym(X), with X allowed
/// non-zero only where row and column strings have equal Hamming weight.
/// Sym averages over simultaneous permutations of the tensor factors, which
/// is exactly the freedom left by requiring tr(ρ^⊗N X) = tr(ρ^⊗N T) ∀ρ.
inline SymmetricFit total_work_fit(const ComplexMatrix& target, int copies) {
  if (copies < 1 || copies > 3) {
    throw UnsupportedDimensionError("total-work system is limited to 1 <= N <= 3 qubit copies");
  }
  const Index dim = Index{1} << copies;
  if (target.rows() != dim || target.cols() != dim) {
    throw DimensionError("target must be 2^N x 2^N");
  }
  std::vector<int> perm(static_cast<std::size_t>(copies));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::map<std::pair<std::uint32_t, std::uint32_t>, Index> column;
  for (std::uint32_t a = 0; a < dim; ++a) {
    for (std::uint32_t b = 0; b < dim; ++b) {
      if (std::popcount(a) == std::popcount(b)) column.emplace(std::pair{a, b}, column.size());
    }
  }
  const auto unknowns = static_cast<Index>(column.size());
  const Index rows = dim * dim;
  ComplexMatrix system = ComplexMatrix::Zero(rows, unknowns);
  ComplexVector rhs(rows);
  const double weight = 1.0 / static_cast<double>(perms.size());
  for (std::uint32_t a = 0; a < dim; ++a) {
    for (std::uint32_t b = 0; b < dim; ++b) {
      const Index r = a * dim + b;
      rhs(r) = target(a, b);
      for (const auto& p : perms) {
        const auto it = column.find({detail::permute_bits(a, p), detail::permute_bits(b, p)});
        if (it != column.end()) system(r, it->second) += weight;
      }
    }
  }
  const ComplexVector x = system.completeOrthogonalDecomposition().solve(rhs);
  const ComplexVector fitted = system * x;
  ComplexMatrix fit(dim, dim);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = 0; b < dim; ++b) fit(a, b) = fitted(a * dim + b);
  }
  return {(fitted - rhs).norm(), fit, unknowns, rows};
}

// Σ_m I ⊗ … ⊗ W ⊗ … ⊗ I with W in slot m.
inline ComplexMatrix sum_over_copies(const ComplexMatrix& single, int copies) {
  const Index d = single.rows();
  Index dim = 1;
  for (int k = 0; k < copies; ++k) dim *= d;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m < copies; ++m) {
    ComplexMatrix term = ComplexMatrix::Identity(1, 1);
    for (int k = 0; k < copies; ++k) {
      term = tensor(term, k == m ? single : ComplexMatrix::Identity(d, d));
    }
    out += term;
  }
  return out;
}

/// Total work on N qubit copies: the exact average demands
/// tr(ρ^⊗N X) = tr(ρ^⊗N Σ_m Ŵ_m) with Ŵ = H − U†H'U, while TPM agreement on
/// incoherent states confines X to equal-Hamming-weight entries (in the H
/// eigenbasis). A positive residual certifies that no such X exists.
inline NoGoCertificate total_work_infeasibility(const Process& process, int copies = 2) {
  if (copies < 1) throw ParamError("total_work_infeasibility needs N >= 1");
  if (process.dim() != 2 || copies > 3) {
    throw UnsupportedDimensionError("total_work_infeasibility supports qubits with N <= 3");
  }
  const ComplexMatrix& v = process.initial_basis();
  const ComplexMatrix w_hat = v.adjoint() * process.required_work_operator() * v;
  const ComplexMatrix target = sum_over_copies(w_hat, copies);
  const SymmetricFit fit = total_work_fit(target, copies);

  NoGoCertificate cert;
  cert.kind = CertificateKind::total_N;
  cert.gap = fit.residual;
  cert.verdict = fit.residual > kGapThreshold ? Verdict::certified_incompatible
                                              : Verdict::not_certified;
  cert.required_operator = target;
  cert.achievable_operator = fit.fit;
  cert.details["n_copies"] = copies;
  cert.details["unknowns"] = static_cast<double>(fit.unknowns);
  cert.details["constraints"] = static_cast<double>(fit.constraints);
  cert.details["w_hat_offdiagonal"] = std::abs(w_hat(0, 1));
  return cert;
}

}  // namespace qwork
