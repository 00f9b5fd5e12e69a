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

#include <doctest.h>

#include <cmath>

#include "mvcf/graph.hpp"
#include "mvcf/semisup.hpp"
#include "test_helpers.hpp"

using namespace mvcf;
using namespace mvcf_test;

namespace {

std::size_t expected_count(double ratio, std::size_t m) {
  return std::min(m, std::max<std::size_t>(
                         1, static_cast<std::size_t>(std::llround(ratio * m))));
}

}  // namespace

TEST_CASE("stratified split labels one sample per class at 20% of 6/4") {
  std::vector<int> labels = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
  Rng rng(1);
  const SemiSupervision ss = stratified_split(labels, 2, 0.2, rng);
  int per_class[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (ss.labeled[i]) ++per_class[labels[i]];
  }
  CHECK(per_class[0] == 1);  // round(0.2 * 6) = 1
  CHECK(per_class[1] == 1);  // round(0.2 * 4) = 1
  CHECK(ss.n_labeled() == 2);
}

TEST_CASE("ratio 1.0 labels everything") {
  std::vector<int> labels = {0, 1, 2, 0, 1, 2};
  Rng rng(2);
  const SemiSupervision ss = stratified_split(labels, 3, 1.0, rng);
  CHECK(ss.n_labeled() == 6);
  CHECK((ss.a - Vector::Ones(6)).cwiseAbs().maxCoeff() == 0.0);
  for (Index i = 0; i < 6; ++i) {
    CHECK(ss.Y.row(i).sum() == doctest::Approx(1.0));
    CHECK(ss.Y(i, labels[static_cast<std::size_t>(i)]) == 1.0);
  }
}

TEST_CASE("a singleton class always gets its one label") {
  std::vector<int> labels = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
  Rng rng(3);
  const SemiSupervision ss = stratified_split(labels, 2, 0.1, rng);
  CHECK(ss.labeled[9] == 1);
}

TEST_CASE("per-class labeled counts follow the rounding rule") {
  Rng rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    const Index n = 10 + static_cast<Index>(rng.uniform_index(60));
    const auto labels = cyclic_labels(n, k);
    const double ratio = 0.05 + 0.9 * rng.uniform();
    Rng split_rng(rng.next_u64());
    const SemiSupervision ss = stratified_split(labels, k, ratio, split_rng);

    std::vector<std::size_t> members(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> got(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ++members[static_cast<std::size_t>(labels[i])];
      if (ss.labeled[i]) ++got[static_cast<std::size_t>(labels[i])];
    }
    for (int c = 0; c < k; ++c) {
      CHECK(got[static_cast<std::size_t>(c)] ==
            expected_count(ratio, members[static_cast<std::size_t>(c)]));
    }
  }
}

TEST_CASE("splits are reproducible per seed") {
  const auto labels = cyclic_labels(40, 4);
  Rng a(77), b(77), c(78);
  const SemiSupervision s1 = stratified_split(labels, 4, 0.3, a);
  const SemiSupervision s2 = stratified_split(labels, 4, 0.3, b);
  const SemiSupervision s3 = stratified_split(labels, 4, 0.3, c);
  CHECK(s1.labeled == s2.labeled);
  CHECK(s1.labeled != s3.labeled);
}

TEST_CASE("empty classes are rejected") {
  std::vector<int> labels = {0, 0, 2, 2};  // class 1 missing
  Rng rng(5);
  CHECK_THROWS_AS(stratified_split(labels, 3, 0.5, rng), EmptyClass);
}

TEST_CASE("global split draws round(ratio * n) labels overall") {
  const auto labels = cyclic_labels(30, 3);
  Rng rng(6);
  const SemiSupervision ss =
      stratified_split(labels, 3, 0.2, rng, SplitMode::global);
  CHECK(ss.n_labeled() == 6);
}

TEST_CASE("label propagation energy at its zeros") {
  const Matrix Y = Matrix::Identity(2, 2);
  const Matrix L0 = Matrix::Zero(2, 2);
  const Vector a = Vector::Ones(2);
  CHECK(label_prop_energy(Y, Y, a, L0) == 0.0);

  Matrix L(2, 2);
  L << 1.0, -1.0, -1.0, 1.0;
  Matrix constant_rows(2, 2);
  constant_rows << 0.4, 0.6, 0.4, 0.6;
  // Constant functions lie in the Laplacian null space.
  CHECK(label_prop_energy(constant_rows, constant_rows, Vector::Zero(2), L) ==
        doctest::Approx(0.0));
}

TEST_CASE("label propagation energy on the worked 2x2 example") {
  Matrix B = Matrix::Identity(2, 2);
  Matrix Y(2, 2);
  Y << 1.0, 0.0, 0.0, 0.0;
  Vector a(2);
  a << 1.0, 0.0;
  Matrix L(2, 2);
  L << 1.0, -1.0, -1.0, 1.0;
  CHECK(label_prop_energy(B, Y, a, L) == doctest::Approx(2.0));
}

TEST_CASE("energy is nonnegative and matches the pairwise double sum") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 5 + static_cast<Index>(rng.uniform_index(15));
    const int p = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n - 1)));
    const ViewGraph g = build_weights(random_nonneg(3, n, rng), p);
    const Matrix B = random_nonneg(n, 3, rng, -1.0, 1.0);
    const Matrix Y = random_nonneg(n, 3, rng);
    Vector a(n);
    for (Index i = 0; i < n; ++i) a(i) = rng.uniform() < 0.5 ? 1.0 : 0.0;

    const double energy = label_prop_energy(B, Y, a, g.L);
    CHECK(energy >= -1e-10);

    double pairwise = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        pairwise += g.S(i, j) * (B.row(i) - B.row(j)).squaredNorm();
      }
    }
    const double trace_form = (B.array() * (g.L * B).array()).sum();
    const double scale = std::max({1.0, pairwise, std::abs(trace_form)});
    CHECK(std::abs(pairwise - 2.0 * trace_form) / scale <= 1e-8);
  }
}

TEST_CASE("energy rejects mismatched shapes") {
  CHECK_THROWS_AS(label_prop_energy(Matrix::Zero(3, 2), Matrix::Zero(2, 2),
                                    Vector::Zero(3), Matrix::Zero(3, 3)),
                  ShapeMismatch);
}

TEST_CASE("semisup_from_mask round trip") {
  const auto labels = cyclic_labels(8, 2);
  std::vector<std::uint8_t> mask = {1, 0, 0, 1, 0, 0, 1, 0};
  const SemiSupervision ss = semisup_from_mask(labels, 2, mask);
  CHECK(ss.labeled == mask);
  CHECK(ss.n_labeled() == 3);
  CHECK(ss.Y.sum() == doctest::Approx(3.0));
}
