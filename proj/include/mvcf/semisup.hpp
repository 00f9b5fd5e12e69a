/*
 * Copyright 2026 the mvcf authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MVCF_SEMISUP_HPP
#define MVCF_SEMISUP_HPP

#include <cstdint>
#include <vector>

#include "mvcf/core.hpp"

namespace mvcf {

/// Partial-label structures: which samples carry a label, the one-hot label
/// matrix Y (zero rows for unlabeled samples) and the diagonal a of the
/// labeled-sample indicator matrix A.
struct SemiSupervision {
  std::vector<std::uint8_t> labeled;  // mask, length n
  Matrix Y;                           // n x n_classes
  Vector a;                           // a(i) = 1 iff labeled[i]
  double label_ratio = 0.0;

  Index n_labeled() const {
    Index c = 0;
    for (auto m : labeled) c += m ? 1 : 0;
    return c;
  }
};

enum class SplitMode {
  stratified,  // per class c: max(1, round(ratio * m_c)) labeled samples
  global       // max(1, round(ratio * n)) labeled samples drawn over all;
               // does not guarantee per-class coverage
};

/// Draws a labeled subset of the given ratio without replacement and builds
/// Y and A from it. Stratified mode labels every class at least once; it
/// throws EmptyClass when some class id in [0, n_classes) has no members.
SemiSupervision stratified_split(const std::vector<int>& labels, int n_classes,
                                 double ratio, Rng& rng,
                                 SplitMode mode = SplitMode::stratified);

/// Builds Y and A from an explicit mask (e.g. one loaded from disk).
SemiSupervision semisup_from_mask(const std::vector<int>& labels, int n_classes,
                                  const std::vector<std::uint8_t>& mask);

/// tr(B^T L B) + tr((B - Y)^T A (B - Y)): graph smoothness of the predicted
/// label matrix plus fidelity to the known labels. Nonnegative for any PSD L.
double label_prop_energy(const Matrix& B, const Matrix& Y, const Vector& a,
                         const Matrix& L);

}  // namespace mvcf

#endif  // MVCF_SEMISUP_HPP
