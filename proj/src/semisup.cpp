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

#include "mvcf/semisup.hpp"

#include <algorithm>
#include <cmath>

namespace mvcf {

namespace {

// Moves `count` uniformly chosen elements (without replacement) to the front.
void partial_shuffle(std::vector<Index>& v, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < v.size(); ++i) {
    const std::size_t j = i + rng.uniform_index(v.size() - i);
    std::swap(v[i], v[j]);
  }
}

std::size_t labeled_count(double ratio, std::size_t group_size) {
  const auto rounded = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(group_size)));
  return std::min(group_size, std::max<std::size_t>(1, rounded));
}

}  // namespace

SemiSupervision stratified_split(const std::vector<int>& labels, int n_classes,
                                 double ratio, Rng& rng, SplitMode mode) {
  const Index n = static_cast<Index>(labels.size());
  std::vector<std::uint8_t> mask(labels.size(), 0);

  if (mode == SplitMode::stratified) {
    std::vector<std::vector<Index>> members(static_cast<std::size_t>(n_classes));
    for (Index i = 0; i < n; ++i) {
      members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]
          .push_back(i);
    }
    for (int c = 0; c < n_classes; ++c) {
      auto& idx = members[static_cast<std::size_t>(c)];
      if (idx.empty()) throw EmptyClass("class " + std::to_string(c) + " is empty");
      const std::size_t count = labeled_count(ratio, idx.size());
      partial_shuffle(idx, count, rng);
      for (std::size_t i = 0; i < count; ++i) mask[static_cast<std::size_t>(idx[i])] = 1;
    }
  } else {
    std::vector<Index> all(labels.size());
    for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    const std::size_t count = labeled_count(ratio, all.size());
    partial_shuffle(all, count, rng);
    for (std::size_t i = 0; i < count; ++i) mask[static_cast<std::size_t>(all[i])] = 1;
  }

  SemiSupervision ss = semisup_from_mask(labels, n_classes, mask);
  ss.label_ratio = ratio;
  return ss;
}

SemiSupervision semisup_from_mask(const std::vector<int>& labels, int n_classes,
                                  const std::vector<std::uint8_t>& mask) {
  if (labels.size() != mask.size()) {
    throw LengthMismatch("mask length does not match label count");
  }
  const Index n = static_cast<Index>(labels.size());
  SemiSupervision ss;
  ss.labeled = mask;
  ss.Y = Matrix::Zero(n, n_classes);
  ss.a = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    ss.Y(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    ss.a(i) = 1.0;
  }
  ss.label_ratio = n > 0 ? static_cast<double>(ss.n_labeled()) / static_cast<double>(n) : 0.0;
  return ss;
}

double label_prop_energy(const Matrix& B, const Matrix& Y, const Vector& a,
                         const Matrix& L) {
  if (B.rows() != Y.rows() || B.cols() != Y.cols() || B.rows() != L.rows() ||
      L.rows() != L.cols() || a.size() != B.rows()) {
    throw ShapeMismatch("label_prop_energy: incompatible shapes");
  }
  const double smooth = (B.array() * (L * B).array()).sum();
  const Matrix R = B - Y;
  const double fidelity = (R.array().square().rowwise().sum() * a.array()).sum();
  return smooth + fidelity;
}

}  // namespace mvcf
