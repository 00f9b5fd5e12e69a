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

#include "mvcf/core.hpp"

#include <cmath>
#include <sstream>

namespace mvcf {

namespace {

// First non-finite entry of M, or (-1, -1).
std::pair<Index, Index> find_non_finite(const Matrix& M) {
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      if (!std::isfinite(M(i, j))) return {i, j};
    }
  }
  return {-1, -1};
}

}  // namespace

ValidationReport validate_dataset(const MultiViewDataset& ds) {
  ValidationReport report;
  report.n_classes = ds.n_classes;

  if (ds.views.empty()) {
    report.issues.push_back("dataset has no views");
    return report;
  }

  const Index n = ds.views.front().cols();
  bool consistent = true;
  for (int v = 0; v < ds.n_views(); ++v) {
    const Matrix& X = ds.views[v];
    report.view_shapes.push_back({X.rows(), X.cols()});
    if (X.cols() != n) {
      consistent = false;
      std::ostringstream os;
      os << "view " << v << " has " << X.cols() << " samples, view 0 has " << n;
      report.issues.push_back(os.str());
    }
    auto [i, j] = find_non_finite(X);
    if (i >= 0) {
      std::ostringstream os;
      os << "non-finite entry in view " << v << " at (" << i << ", " << j << ")";
      report.issues.push_back(os.str());
    }
  }
  report.n = consistent ? n : 0;

  if (static_cast<Index>(ds.labels.size()) != n) {
    std::ostringstream os;
    os << "label count " << ds.labels.size() << " does not match sample count " << n;
    report.issues.push_back(os.str());
  } else {
    std::vector<Index> counts(std::max(ds.n_classes, 0), 0);
    for (Index i = 0; i < n; ++i) {
      const int c = ds.labels[i];
      if (c < 0 || c >= ds.n_classes) {
        std::ostringstream os;
        os << "label " << c << " of sample " << i << " outside [0, "
           << ds.n_classes << ")";
        report.issues.push_back(os.str());
      } else {
        ++counts[c];
      }
    }
    for (int c = 0; c < ds.n_classes; ++c) {
      if (counts[c] == 0) {
        report.issues.push_back("class " + std::to_string(c) + " has no samples");
      }
    }
  }

  report.ok = report.issues.empty();
  return report;
}

void require_valid(const MultiViewDataset& ds) {
  if (ds.views.empty()) throw MismatchedSampleCount("dataset has no views");
  const Index n = ds.views.front().cols();
  for (int v = 0; v < ds.n_views(); ++v) {
    if (ds.views[v].cols() != n) {
      throw MismatchedSampleCount(
          "view " + std::to_string(v) + " has " +
          std::to_string(ds.views[v].cols()) + " samples, expected " +
          std::to_string(n));
    }
    auto [i, j] = find_non_finite(ds.views[v]);
    if (i >= 0) throw NonFiniteEntry(v, i, j);
  }
  if (static_cast<Index>(ds.labels.size()) != n) {
    throw ShapeMismatch("label count does not match sample count");
  }
  std::vector<Index> counts(std::max(ds.n_classes, 0), 0);
  for (int c : ds.labels) {
    if (c < 0 || c >= ds.n_classes) {
      throw ShapeMismatch("label " + std::to_string(c) + " outside [0, " +
                          std::to_string(ds.n_classes) + ")");
    }
    ++counts[c];
  }
  for (int c = 0; c < ds.n_classes; ++c) {
    if (counts[c] == 0) throw EmptyClass("class " + std::to_string(c) + " has no samples");
  }
}

Matrix normalize_view(const Matrix& X) {
  Matrix out = X;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm == 0.0) throw ZeroColumn(j);
    out.col(j) /= norm;
  }
  return out;
}

MultiViewDataset normalized(const MultiViewDataset& ds) {
  MultiViewDataset out = ds;
  for (Matrix& X : out.views) X = normalize_view(X);
  return out;
}

}  // namespace mvcf
