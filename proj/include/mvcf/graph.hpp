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

#ifndef MVCF_GRAPH_HPP
#define MVCF_GRAPH_HPP

#include <vector>

#include "mvcf/core.hpp"

namespace mvcf {

/// Mutual-kNN heat-kernel similarity graph of one view, together with its
/// degree and Laplacian matrices.
///
/// Invariants: S is symmetric with entries in [0,1] and zero diagonal,
/// degrees(i) equals the i-th row sum of S, and every row of L = D - S sums
/// to zero.
struct ViewGraph {
  Matrix S;        // similarity weights s(i,j)
  Vector degrees;  // diagonal of D
  Matrix L;        // D - S
  int p = 0;
  double sigma2 = 1.0;  // heat-kernel width actually used
};

/// The p nearest other samples of each column of X under Euclidean distance,
/// self excluded, distance ties broken by lower sample index. Each returned
/// set is sorted ascending by index. Throws PTooLarge if p >= n.
std::vector<std::vector<Index>> knn_sets(const Matrix& X, int p);

/// Builds the mutual-kNN graph: s(i,j) = exp(-||x_i - x_j||^2 / sigma2) iff
/// i and j are each among the other's p nearest neighbors, 0 otherwise.
///
/// When fixed_sigma2 <= 0 the width self-tunes to the mean squared distance
/// over the retained mutual edges (1 when the graph has no edge).
ViewGraph build_weights(const Matrix& X, int p, double fixed_sigma2 = 0.0);

}  // namespace mvcf

#endif  // MVCF_GRAPH_HPP
