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

#ifndef MVCF_EVALUATION_HPP
#define MVCF_EVALUATION_HPP

#include <vector>

#include "mvcf/core.hpp"

namespace mvcf {

struct ClusterAssignment {
  std::vector<int> labels;  // cluster id per point, in [0, k)
  Matrix centroids;         // k x dim
  double inertia = 0.0;     // sum of squared distances to assigned centroids
};

/// Lloyd's algorithm from k-means++ seeding, best of `restarts` by inertia.
/// Rows of `points` are samples. Empty clusters are re-seeded at the point
/// farthest from its assigned centroid. Throws KTooLarge if k > n.
ClusterAssignment kmeans(const Matrix& points, int k, Rng& rng,
                         int restarts = 10);

/// Clustering accuracy: the best fraction of agreeing samples over all
/// cluster-to-class bijections, found by optimal assignment on the
/// contingency matrix.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

enum class NmiNorm {
  sqrt_norm,  // I / sqrt(H(pred) H(truth))
  max_norm    // I / max(H(pred), H(truth))
};

/// Normalized mutual information with natural logarithms. When both
/// partitions are trivial (one cluster each) the result is 1 if they are
/// identical as partitions, else 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNorm norm = NmiNorm::sqrt_norm);

/// Average majority-class fraction per cluster. Always >= accuracy.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

/// Minimum-cost perfect assignment on a square cost matrix (O(n^3) potentials
/// method); returns the column matched to each row. Exposed for testing.
std::vector<Index> hungarian_min_assignment(const Matrix& cost);

struct RunMetrics {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

/// Per-metric mean and population standard deviation over repeated runs.
struct EvalReport {
  double acc_mean = 0.0, acc_std = 0.0;
  double nmi_mean = 0.0, nmi_std = 0.0;
  double purity_mean = 0.0, purity_std = 0.0;
  int repeats = 0;
};

EvalReport aggregate_runs(const std::vector<RunMetrics>& runs);

}  // namespace mvcf

#endif  // MVCF_EVALUATION_HPP
