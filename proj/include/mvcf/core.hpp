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

#ifndef MVCF_CORE_HPP
#define MVCF_CORE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mvcf/errors.hpp"

namespace mvcf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Seeded pseudorandom generator shared by every stochastic step (factor
/// initialization, k-means, label splits). Backed by std::mt19937_64 whose
/// output sequence is fixed by the standard, so equal seeds yield identical
/// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw on [0, 1) built from the top 53 bits of one engine output.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer on [0, n); n must be positive.
  std::size_t uniform_index(std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  /// Generator for an unrelated stream. Derived from the original seed only,
  /// never from the current engine state, so workers can grab substreams by
  /// index regardless of how many draws the parent has produced.
  Rng substream(std::uint64_t offset) const { return Rng(mix(seed_, offset)); }

  std::uint64_t seed() const { return seed_; }

  /// splitmix64-style mixing of a seed with a stream offset.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// Solver and preprocessing knobs. The defaults are the recommended operating
/// point: lambda/beta/gamma balance graph smoothness, label fidelity and view
/// weighting, and p is the mutual-kNN neighbor count.
struct Hyperparams {
  double lambda = 1.0;    // graph regularization weight, >= 0
  double beta = 1.0;      // label fidelity weight, >= 0
  double gamma = 100.0;   // view-weight smoothing, > 0
  int p = 5;              // kNN neighbor count, >= 1
  int k = 0;              // latent dimension; 0 means "use the class count"
  int max_iters = 200;
  double rel_tol = 1e-5;
  double eps_guard = 1e-12;      // floor applied to update denominators
  bool normalize_columns = true;  // L2-normalize sample columns before fitting
  std::uint64_t seed = 0;

  double fixed_sigma2 = 0.0;  // > 0 pins the heat-kernel width; 0 = self-tuned
  bool printed_v_rule = false;  // alternative V denominator kept for A/B runs
  bool concat_consensus = false;  // consensus by column concatenation instead
                                  // of the alpha-weighted average
  bool check_iterates = true;  // assert nonnegativity/simplex every iteration
};

/// A multi-view dataset: one features_v x n matrix per view, columns are
/// samples, plus one shared ground-truth label per sample.
struct MultiViewDataset {
  std::vector<Matrix> views;
  std::vector<int> labels;  // class ids in [0, n_classes)
  int n_classes = 0;

  Index n_samples() const { return views.empty() ? 0 : views.front().cols(); }
  int n_views() const { return static_cast<int>(views.size()); }
};

struct ViewShape {
  Index rows = 0;
  Index cols = 0;
};

struct ValidationReport {
  bool ok = false;
  Index n = 0;       // shared sample count (0 if inconsistent)
  int n_classes = 0;
  std::vector<ViewShape> view_shapes;
  std::vector<std::string> issues;  // empty iff ok
};

/// Checks per-view shapes, column-count consistency, label range/coverage and
/// entry finiteness. Collects every problem instead of stopping at the first.
ValidationReport validate_dataset(const MultiViewDataset& ds);

/// Throws the typed error for the first invariant violation found
/// (MismatchedSampleCount, NonFiniteEntry, EmptyClass, ...).
void require_valid(const MultiViewDataset& ds);

/// Returns X with every column scaled to unit Euclidean norm. Signs are
/// preserved. Throws ZeroColumn for an all-zero column.
Matrix normalize_view(const Matrix& X);

/// Copy of the dataset with every view column-normalized.
MultiViewDataset normalized(const MultiViewDataset& ds);

}  // namespace mvcf

#endif  // MVCF_CORE_HPP
