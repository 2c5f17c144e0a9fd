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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qwork/distribution.hpp"
#include "qwork/errors.hpp"
#include "qwork/process.hpp"
#include "qwork/schemes.hpp"

namespace qwork {

// Σ p·W^k
inline double moment(const WorkDistribution& dist, int k) {
  if (k < 1) throw ParamError("moment order must be >= 1");
  double m = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) {
    m += dist.probabilities()[n] * std::pow(dist.support()[n], k);
  }
  return m;
}

struct JarzynskiCheck {
  double lhs;  // <e^{+βW}> over the TPM statistics of the thermal state
  double rhs;  // Z'/Z
};

// With extracted work W = E_i − E'_j the identity reads <e^{+βW}> = Z'/Z.
inline JarzynskiCheck jarzynski_check(const Process& process, double beta) {
  if (!(beta >= 0.0) || std::isinf(beta)) throw ParamError("jarzynski_check needs finite beta >= 0");
  const RealVector& e = process.initial_energies();
  const RealVector& ef = process.final_energies();
  const RealMatrix p = transition_matrix(process);
  // Boltzmann weights are taken relative to the ground energy of H so large
  // βE never overflows; the common factor cancels in both sides.
  const double e0 = e.minCoeff();
  double z = 0.0;
  double z_final = 0.0;
  for (Index k = 0; k < e.size(); ++k) {
    z += std::exp(-beta * (e(k) - e0));
    z_final += std::exp(-beta * (ef(k) - e0));
  }
  double lhs = 0.0;
  for (Index i = 0; i < e.size(); ++i) {
    for (Index j = 0; j < ef.size(); ++j) {
      // (e^{−βE_i}/Z)·p(i,j)·e^{βW(i,j)} with the exponents combined.
      lhs += p(i, j) * std::exp(-beta * (e(i) - e0) + beta * (e(i) - ef(j))) / z;
    }
  }
  return {lhs, z_final / z};
}

struct LinearityDeviation {
  double max_deviation;
  Index initial;  // outcome (i, j) where it is attained
  Index final;
};

/// max over outcomes (i, j) of |P(weight·ρ1 + (1 − weight)·ρ2) −
/// weight·P(ρ1) − (1 − weight)·P(ρ2)|. Zero for any single-copy scheme.
inline LinearityDeviation linearity_test(SchemeKind kind, const Process& process,
                                         const DensityMatrix& rho1, const DensityMatrix& rho2,
                                         double weight) {
  const WorkPOVM povm = scheme_povm(kind, process);
  const auto mixed = outcome_probabilities(povm, DensityMatrix::mixture(weight, rho1, rho2));
  const auto first = outcome_probabilities(povm, rho1);
  const auto second = outcome_probabilities(povm, rho2);
  LinearityDeviation out{0.0, 0, 0};
  for (std::size_t k = 0; k < mixed.size(); ++k) {
    const double dev = std::abs(mixed[k].probability - weight * first[k].probability -
                                (1.0 - weight) * second[k].probability);
    if (dev > out.max_deviation) out = {dev, mixed[k].initial, mixed[k].final};
  }
  return out;
}

// Generator identifier recorded alongside sampled output.
inline constexpr const char* kSamplerId = "mt19937_64/inverse-cdf/v1";

/// n i.i.d. draws by inverse CDF over the sorted support. Uniforms are the
/// top 53 bits of std::mt19937_64 scaled by 2^-53, so the stream is fixed by
/// the seed on every standard library.
inline std::vector<double> sample(const WorkDistribution& dist, std::size_t n, std::uint64_t seed) {
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    acc += dist.probabilities()[k];
    cdf[k] = acc;
  }
  std::mt19937_64 engine(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t draw = 0; draw < n; ++draw) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), dist.size() - 1);
    out.push_back(dist.support()[k]);
  }
  return out;
}

}  // namespace qwork
