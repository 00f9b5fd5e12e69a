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

#include "mvcf/graph.hpp"

#include <algorithm>
#include <cmath>

namespace mvcf {

namespace {

// Exact symmetric pairwise squared distances between columns. Computed from
// column differences rather than the Gram expansion so that ties seen by the
// sort are bit-identical to a brute-force oracle.
Matrix pairwise_sq_dists(const Matrix& X) {
  const Index n = X.cols();
  Matrix d2 = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (X.col(i) - X.col(j)).squaredNorm();
      d2(i, j) = d;
      d2(j, i) = d;
    }
  }
  return d2;
}

}  // namespace

std::vector<std::vector<Index>> knn_sets(const Matrix& X, int p) {
  const Index n = X.cols();
  if (p < 0 || static_cast<Index>(p) >= n) {
    throw PTooLarge("p = " + std::to_string(p) + " must be < n = " +
                    std::to_string(n));
  }

  const Matrix d2 = pairwise_sq_dists(X);
  std::vector<std::vector<Index>> sets(static_cast<std::size_t>(n));
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (d2(i, a) != d2(i, b)) return d2(i, a) < d2(i, b);
      return a < b;  // deterministic tie-break
    });
    auto& set = sets[static_cast<std::size_t>(i)];
    set.assign(order.begin(), order.begin() + p);
    std::sort(set.begin(), set.end());
  }
  return sets;
}

ViewGraph build_weights(const Matrix& X, int p, double fixed_sigma2) {
  const Index n = X.cols();
  const auto neighbors = knn_sets(X, p);
  const Matrix d2 = pairwise_sq_dists(X);

  const auto is_neighbor = [&](Index of, Index who) {
    const auto& set = neighbors[static_cast<std::size_t>(of)];
    return std::binary_search(set.begin(), set.end(), who);
  };

  // Mutual edges, each undirected pair recorded once.
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j : neighbors[static_cast<std::size_t>(i)]) {
      if (j > i && is_neighbor(j, i)) edges.emplace_back(i, j);
    }
  }

  double sigma2 = fixed_sigma2;
  if (sigma2 <= 0.0) {
    if (edges.empty()) {
      sigma2 = 1.0;
    } else {
      double sum = 0.0;
      for (auto [i, j] : edges) sum += d2(i, j);
      sigma2 = sum / static_cast<double>(edges.size());
      if (sigma2 <= 0.0) sigma2 = 1.0;  // all mutual pairs coincide
    }
  }

  ViewGraph g;
  g.p = p;
  g.sigma2 = sigma2;
  g.S = Matrix::Zero(n, n);
  for (auto [i, j] : edges) {
    const double w = std::exp(-d2(i, j) / sigma2);
    g.S(i, j) = w;
    g.S(j, i) = w;
  }
  g.degrees = g.S.rowwise().sum();
  g.L = Matrix(g.degrees.asDiagonal()) - g.S;
  return g;
}

}  // namespace mvcf
