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
#include <string>
#include <utility>
#include <vector>

#include "qwork/errors.hpp"
#include "qwork/linalg.hpp"

namespace qwork {

/// Finite work distribution: strictly increasing support with matching
/// non-negative probabilities summing to one (within 1e-10). Zero-probability
/// work values are kept so that distributions from the same scheme share a
/// support.
class WorkDistribution {
 public:
  WorkDistribution(std::vector<double> support, std::vector<double> probabilities)
      : support_(std::move(support)), probabilities_(std::move(probabilities)) {
    if (support_.size() != probabilities_.size() || support_.empty()) {
      throw DistributionError("support and probabilities must be non-empty and equally long");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
      if (!std::isfinite(support_[k]) || !std::isfinite(probabilities_[k])) {
        throw DistributionError("non-finite work value or probability");
      }
      if (k > 0 && !(support_[k] > support_[k - 1])) {
        throw DistributionError("support must be strictly increasing");
      }
      if (probabilities_[k] < 0.0) throw DistributionError("negative probability");
      total += probabilities_[k];
    }
    if (std::abs(total - 1.0) > tol::kCompleteness) {
      throw DistributionError("probabilities sum to " + std::to_string(total));
    }
  }

  /// Builds a distribution from (work, probability) pairs, merging work
  /// values closer than `tolerance`. Values within `tolerance` of zero are
  /// reported as exactly zero; probabilities in [-1e-10, 0) are clamped.
  static WorkDistribution coalesce(std::vector<std::pair<double, double>> weighted,
                                   double tolerance) {
    std::stable_sort(weighted.begin(), weighted.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> works;
    for (const auto& [w, p] : weighted) works.push_back(w);
    std::vector<double> support;
    std::vector<double> probabilities;
    for (const auto& [begin, end] : group_sorted(works, tolerance)) {
      double w = works[static_cast<std::size_t>(begin)];
      double p = 0.0;
      for (Index k = begin; k < end; ++k) p += weighted[static_cast<std::size_t>(k)].second;
      if (std::abs(w) <= tolerance) w = 0.0;
      if (p < 0.0) {
        if (p < -tol::kPsd) {
          throw DistributionError("probability " + std::to_string(p) + " for work value " +
                                  std::to_string(w) + " is negative");
        }
        p = 0.0;
      }
      support.push_back(w);
      probabilities.push_back(p);
    }
    return WorkDistribution(std::move(support), std::move(probabilities));
  }

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t size() const { return support_.size(); }

  /// Probability of the support point within `tolerance` of w, else 0.
  double probability_of(double w, double tolerance = 1e-9) const {
    for (std::size_t k = 0; k < support_.size(); ++k) {
      if (std::abs(support_[k] - w) <= tolerance) return probabilities_[k];
    }
    return 0.0;
  }

  double mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) m += support_[k] * probabilities_[k];
    return m;
  }

 private:
  std::vector<double> support_;
  std::vector<double> probabilities_;
};

}  // namespace qwork
