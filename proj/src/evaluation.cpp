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

#include "mvcf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvcf {

namespace {

constexpr int kMaxLloydIters = 300;

// Contingency matrix C(i, j) = #{samples in pred cluster i and truth class j},
// padded square over max(#pred ids, #truth ids).
Matrix contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatch("label vectors differ in length");
  }
  int kp = 0, kt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) {
      throw LengthMismatch("cluster/class ids must be nonnegative");
    }
    kp = std::max(kp, pred[i] + 1);
    kt = std::max(kt, truth[i] + 1);
  }
  const int k = std::max(kp, kt);
  Matrix C = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < pred.size(); ++i) C(pred[i], truth[i]) += 1.0;
  return C;
}

double entropy(const std::vector<int>& labels) {
  int k = 0;
  for (int c : labels) k = std::max(k, c + 1);
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (int c : labels) counts[static_cast<std::size_t>(c)] += 1.0;
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

ClusterAssignment lloyd_once(const Matrix& points, int k, Rng rng) {
  const Index n = points.rows();
  const Index dim = points.cols();

  // k-means++ seeding.
  Matrix centroids(k, dim);
  Vector d2 = Vector::Constant(n, std::numeric_limits<double>::infinity());
  centroids.row(0) = points.row(static_cast<Index>(rng.uniform_index(n)));
  for (int c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i) {
      const double d = (points.row(i) - centroids.row(c - 1)).squaredNorm();
      d2(i) = std::min(d2(i), d);
    }
    const double total = d2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        chosen = i;
        if (acc >= target) break;
      }
    } else {
      chosen = static_cast<Index>(rng.uniform_index(n));
    }
    centroids.row(c) = points.row(chosen);
  }

  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  Vector dist_to_centroid = Vector::Zero(n);
  double inertia = 0.0;

  for (int iter = 0; iter < kMaxLloydIters; ++iter) {
    bool changed = false;
    inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (assign[static_cast<std::size_t>(i)] != best_c) {
        assign[static_cast<std::size_t>(i)] = best_c;
        changed = true;
      }
      dist_to_centroid(i) = best;
      inertia += best;
    }
    if (!changed && iter > 0) break;

    Matrix sums = Matrix::Zero(k, dim);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    std::vector<char> reseeded(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Re-seed an empty cluster at the point farthest from its centroid.
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          if (!reseeded[static_cast<std::size_t>(i)] && dist_to_centroid(i) > far_d) {
            far_d = dist_to_centroid(i);
            far = i;
          }
        }
        centroids.row(c) = points.row(far);
        reseeded[static_cast<std::size_t>(far)] = 1;
      }
    }
  }

  ClusterAssignment out;
  out.labels = std::move(assign);
  out.centroids = std::move(centroids);
  out.inertia = inertia;
  return out;
}

}  // namespace

ClusterAssignment kmeans(const Matrix& points, int k, Rng& rng, int restarts) {
  const Index n = points.rows();
  if (k < 1 || static_cast<Index>(k) > n) {
    throw KTooLarge("kmeans requires 1 <= k <= n; got k = " + std::to_string(k) +
                    ", n = " + std::to_string(n));
  }
  restarts = std::max(1, restarts);

  // One fresh base per call so consecutive calls see different substreams.
  const std::uint64_t base = rng.next_u64();
  ClusterAssignment best;
  for (int r = 0; r < restarts; ++r) {
    ClusterAssignment cur = lloyd_once(points, k, Rng(Rng::mix(base, r)));
    if (r == 0 || cur.inertia < best.inertia) best = std::move(cur);
  }
  return best;
}

std::vector<Index> hungarian_min_assignment(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw ShapeMismatch("cost matrix must be square");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Index> match(n + 1, 0), way(n + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = match[static_cast<std::size_t>(j0)];
      Index j1 = 0;
      double delta = inf;
      for (Index j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> row_to_col(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0) {
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] =
          j - 1;
    }
  }
  return row_to_col;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Matrix C = contingency(pred, truth);
  const std::vector<Index> assign = hungarian_min_assignment(-C);
  double matched = 0.0;
  for (Index i = 0; i < C.rows(); ++i) matched += C(i, assign[static_cast<std::size_t>(i)]);
  return matched / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNorm norm) {
  const Matrix C = contingency(pred, truth);
  const double n = static_cast<double>(pred.size());
  const Vector row = C.rowwise().sum();
  const Vector col = C.colwise().sum();

  double mi = 0.0;
  for (Index i = 0; i < C.rows(); ++i) {
    for (Index j = 0; j < C.cols(); ++j) {
      const double nij = C(i, j);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (row(i) * col(j)));
    }
  }
  const double hp = entropy(pred);
  const double ht = entropy(truth);
  const double denom =
      norm == NmiNorm::sqrt_norm ? std::sqrt(hp * ht) : std::max(hp, ht);
  if (denom == 0.0) {
    // Both partitions trivial: identical iff each is a single cluster.
    return (hp == 0.0 && ht == 0.0) ? 1.0 : 0.0;
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Matrix C = contingency(pred, truth);
  double sum = 0.0;
  for (Index i = 0; i < C.rows(); ++i) sum += C.row(i).maxCoeff();
  return sum / static_cast<double>(pred.size());
}

EvalReport aggregate_runs(const std::vector<RunMetrics>& runs) {
  EvalReport rep;
  rep.repeats = static_cast<int>(runs.size());
  if (runs.empty()) return rep;
  const double n = static_cast<double>(runs.size());

  const auto mean_std = [n](auto get, const std::vector<RunMetrics>& rs) {
    double mean = 0.0;
    for (const auto& r : rs) mean += get(r);
    mean /= n;
    double var = 0.0;
    for (const auto& r : rs) var += (get(r) - mean) * (get(r) - mean);
    return std::pair<double, double>{mean, std::sqrt(var / n)};
  };

  std::tie(rep.acc_mean, rep.acc_std) =
      mean_std([](const RunMetrics& r) { return r.acc; }, runs);
  std::tie(rep.nmi_mean, rep.nmi_std) =
      mean_std([](const RunMetrics& r) { return r.nmi; }, runs);
  std::tie(rep.purity_mean, rep.purity_std) =
      mean_std([](const RunMetrics& r) { return r.purity; }, runs);
  return rep;
}

}  // namespace mvcf
