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

#include "mvcf/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvcf {

namespace {

constexpr double kKernelTolerance = -1e-12;

// F <- F .* num ./ max(den, eps). Numerator and denominator are nonnegative
// for nonnegative inputs, so the factor stays nonnegative exactly.
void mult_update(Matrix& F, const Matrix& num, const Matrix& den, double eps) {
  F.array() *= num.array() / den.array().max(eps);
}

// Linear kernel with the tiny-negative roundoff band clamped to exact zero.
Matrix make_kernel(const Matrix& X) {
  Matrix K = X.transpose() * X;
  if (K.minCoeff() < kKernelTolerance) {
    throw NegativeKernel("X^T X has an entry below -1e-12; nonnegative data required");
  }
  return K.cwiseMax(0.0);
}

// ||X - X W V^T||_F^2 expressed through K = X^T X:
//   tr(K) - 2 tr(V^T K W) + tr((W^T K W)(V^T V)).
double reconstruction_through_kernel(const Matrix& K, const Matrix& W,
                                     const Matrix& V) {
  const Matrix KW = K * W;
  const double cross = (V.array() * KW.array()).sum();
  const double quad =
      ((W.transpose() * KW).array() * (V.transpose() * V).array()).sum();
  return K.trace() - 2.0 * cross + quad;
}

void check_state_invariants(const SmvcfState& s) {
  for (int v = 0; v < s.n_views(); ++v) {
    if (s.W[v].minCoeff() < 0.0 || s.V[v].minCoeff() < 0.0) {
      throw std::logic_error("factor matrix lost nonnegativity in view " +
                             std::to_string(v));
    }
  }
  if (s.alpha.minCoeff() < 0.0 || std::abs(s.alpha.sum() - 1.0) > 1e-12) {
    throw std::logic_error("view weights left the probability simplex");
  }
}

bool relative_change_below(double prev, double cur, double rel_tol, double eps) {
  return std::abs(cur - prev) / std::max(prev, eps) < rel_tol;
}

}  // namespace

void nmf_step(const Matrix& X, Matrix& U, Matrix& V, double eps_guard) {
  if (X.rows() != U.rows() || X.cols() != V.rows() || U.cols() != V.cols()) {
    throw ShapeMismatch("nmf_step: incompatible shapes");
  }
  if (X.minCoeff() < 0.0 || U.minCoeff() < 0.0 || V.minCoeff() < 0.0) {
    throw NegativeInput("nmf_step requires entrywise nonnegative X, U, V");
  }
  mult_update(U, X * V, U * (V.transpose() * V), eps_guard);
  mult_update(V, X.transpose() * U, V * (U.transpose() * U), eps_guard);
}

void cf_step(const Matrix& K, Matrix& W, Matrix& V, double eps_guard) {
  if (K.rows() != K.cols() || K.rows() != W.rows() || W.rows() != V.rows() ||
      W.cols() != V.cols()) {
    throw ShapeMismatch("cf_step: incompatible shapes");
  }
  if (K.minCoeff() < kKernelTolerance) {
    throw NegativeKernel("cf_step requires a nonnegative kernel");
  }
  mult_update(W, K * V, K * (W * (V.transpose() * V)), eps_guard);
  const Matrix KW = K * W;
  mult_update(V, KW, V * (W.transpose() * KW), eps_guard);
}

Vector project_simplex(const Vector& z) {
  const Index n = z.size();
  if (n < 1) throw ShapeMismatch("project_simplex: empty input");

  std::vector<double> u(z.data(), z.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());

  // Largest prefix whose shifted entries stay positive.
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  return (z.array() - theta).max(0.0);
}

Vector update_alpha(const Vector& per_view_f, double gamma) {
  if (gamma <= 0.0) throw Error("update_alpha: gamma must be positive");
  return project_simplex(-per_view_f / (2.0 * gamma));
}

namespace {

// Row-major fill order so the draw sequence is part of the contract.
Matrix positive_uniform(Index rows, Index cols, Rng& rng) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.uniform() + 1e-3;
  }
  return M;
}

}  // namespace

std::pair<Matrix, Matrix> init_factors(Index n, Index k, Rng& rng) {
  Matrix W = positive_uniform(n, k, rng);
  Matrix V = positive_uniform(n, k, rng);
  return {std::move(W), std::move(V)};
}

SmvcfState init_smvcf_state(const MultiViewDataset& ds,
                            const SemiSupervision& ss, const Hyperparams& hp) {
  const Index n = ds.n_samples();
  const Index k = hp.k > 0 ? hp.k : ds.n_classes;
  if (k < 1) throw ShapeMismatch("latent dimension must be >= 1");
  if (hp.beta > 0.0 && k < ds.n_classes) {
    throw ShapeMismatch(
        "label fidelity needs latent dimension >= class count; got k = " +
        std::to_string(k) + " < " + std::to_string(ds.n_classes));
  }
  if (static_cast<Index>(ss.labeled.size()) != n) {
    throw LengthMismatch("semi-supervision mask length does not match dataset");
  }

  const MultiViewDataset data = hp.normalize_columns ? normalized(ds) : ds;

  SmvcfState s;
  Rng root(hp.seed);
  for (int v = 0; v < data.n_views(); ++v) {
    const Matrix& X = data.views[static_cast<std::size_t>(v)];
    s.kernels.push_back(make_kernel(X));
    s.graphs.push_back(build_weights(X, hp.p, hp.fixed_sigma2));
    Rng sub = root.substream(static_cast<std::uint64_t>(v));
    auto [W, V] = init_factors(n, k, sub);
    s.W.push_back(std::move(W));
    s.V.push_back(std::move(V));
  }
  s.alpha = Vector::Constant(data.n_views(), 1.0 / data.n_views());
  s.Y = Matrix::Zero(n, k);
  s.Y.leftCols(ss.Y.cols()) = ss.Y;
  s.a = ss.a;
  return s;
}

void update_W(SmvcfState& s, int v, const Hyperparams& hp) {
  const Matrix& K = s.kernels[v];
  Matrix& W = s.W[v];
  const Matrix& V = s.V[v];
  mult_update(W, K * V, K * (W * (V.transpose() * V)), hp.eps_guard);
}

void update_V(SmvcfState& s, int v, const Hyperparams& hp) {
  const Matrix& K = s.kernels[v];
  const Matrix& W = s.W[v];
  Matrix& V = s.V[v];
  const ViewGraph& g = s.graphs[v];

  const Matrix KW = K * W;
  Matrix num = KW;
  Matrix den = hp.printed_v_rule ? Matrix(K * (V * (W.transpose() * W)))
                                 : Matrix(V * (W.transpose() * KW));
  if (hp.lambda != 0.0) {
    num += hp.lambda * (g.S * V);
    den += hp.lambda * (g.degrees.asDiagonal() * V);
  }
  if (hp.beta != 0.0) {
    num += hp.beta * (s.a.asDiagonal() * s.Y);
    den += hp.beta * (s.a.asDiagonal() * V);
  }
  mult_update(V, num, den, hp.eps_guard);
}

Vector per_view_objectives(const SmvcfState& s, const Hyperparams& hp) {
  Vector f(s.n_views());
  for (int v = 0; v < s.n_views(); ++v) {
    double val = reconstruction_through_kernel(s.kernels[v], s.W[v], s.V[v]);
    if (hp.lambda != 0.0) {
      val += hp.lambda * (s.V[v].array() * (s.graphs[v].L * s.V[v]).array()).sum();
    }
    if (hp.beta != 0.0) {
      const Matrix R = s.V[v] - s.Y;
      val += hp.beta * (R.array().square().rowwise().sum() * s.a.array()).sum();
    }
    f(v) = val;
  }
  return f;
}

std::pair<double, Vector> smvcf_objective(const SmvcfState& s,
                                          const Hyperparams& hp) {
  Vector f = per_view_objectives(s, hp);
  const double total = s.alpha.dot(f) + hp.gamma * s.alpha.squaredNorm();
  return {total, std::move(f)};
}

FitReport fit_smvcf(const MultiViewDataset& ds, const SemiSupervision& ss,
                    const Hyperparams& hp) {
  require_valid(ds);
  SmvcfState s = init_smvcf_state(ds, ss, hp);

  auto record = [&s](double total, const Vector& f) {
    s.objective_trace.push_back(total);
    s.f_trace.push_back(f);
    s.alpha_trace.push_back(s.alpha);
  };

  auto [obj, f] = smvcf_objective(s, hp);
  record(obj, f);

  FitReport report;
  double prev = obj;
  for (int t = 1; t <= hp.max_iters; ++t) {
    for (int v = 0; v < s.n_views(); ++v) {
      update_W(s, v, hp);
      update_V(s, v, hp);
    }
    f = per_view_objectives(s, hp);
    s.alpha = update_alpha(f, hp.gamma);
    obj = s.alpha.dot(f) + hp.gamma * s.alpha.squaredNorm();
    record(obj, f);
    if (hp.check_iterates) check_state_invariants(s);

    report.iterations_run = t;
    if (relative_change_below(prev, obj, hp.rel_tol, hp.eps_guard)) {
      report.converged = true;
      break;
    }
    prev = obj;
  }

  report.final_objective = obj;
  report.per_view_f = f;
  report.alpha = s.alpha;

  const Index n = ds.n_samples();
  const Index k = s.V.front().cols();
  if (hp.concat_consensus) {
    report.consensus_V = Matrix(n, k * s.n_views());
    for (int v = 0; v < s.n_views(); ++v) {
      report.consensus_V.middleCols(v * k, k) = s.V[v];
    }
  } else {
    report.consensus_V = Matrix::Zero(n, k);
    for (int v = 0; v < s.n_views(); ++v) {
      report.consensus_V += s.alpha(v) * s.V[v];
    }
  }
  report.objective_trace = std::move(s.objective_trace);
  report.f_trace = std::move(s.f_trace);
  report.alpha_trace = std::move(s.alpha_trace);
  return report;
}

SingleViewFit cf_fit(const Matrix& X, Index k, const Hyperparams& hp) {
  const Matrix Xp = hp.normalize_columns ? normalize_view(X) : X;
  const Matrix K = make_kernel(Xp);
  Rng root(hp.seed);
  Rng sub = root.substream(0);
  auto [W, V] = init_factors(Xp.cols(), k, sub);

  SingleViewFit fit;
  double obj = reconstruction_through_kernel(K, W, V);
  fit.trace.push_back(obj);
  double prev = obj;
  for (int t = 1; t <= hp.max_iters; ++t) {
    cf_step(K, W, V, hp.eps_guard);
    obj = reconstruction_through_kernel(K, W, V);
    fit.trace.push_back(obj);
    fit.iterations_run = t;
    if (relative_change_below(prev, obj, hp.rel_tol, hp.eps_guard)) {
      fit.converged = true;
      break;
    }
    prev = obj;
  }
  fit.basis = std::move(W);
  fit.V = std::move(V);
  fit.final_objective = obj;
  return fit;
}

SingleViewFit nmf_fit(const Matrix& X, Index k, const Hyperparams& hp) {
  if (X.minCoeff() < 0.0) {
    throw NegativeInput("nmf_fit requires entrywise nonnegative data");
  }
  const Matrix Xp = hp.normalize_columns ? normalize_view(X) : X;
  Rng root(hp.seed);
  Rng sub = root.substream(0);
  Matrix U = positive_uniform(Xp.rows(), k, sub);
  Matrix V = positive_uniform(Xp.cols(), k, sub);

  SingleViewFit fit;
  double obj = (Xp - U * V.transpose()).squaredNorm();
  fit.trace.push_back(obj);
  double prev = obj;
  for (int t = 1; t <= hp.max_iters; ++t) {
    nmf_step(Xp, U, V, hp.eps_guard);
    obj = (Xp - U * V.transpose()).squaredNorm();
    fit.trace.push_back(obj);
    fit.iterations_run = t;
    if (relative_change_below(prev, obj, hp.rel_tol, hp.eps_guard)) {
      fit.converged = true;
      break;
    }
    prev = obj;
  }
  fit.basis = std::move(U);
  fit.V = std::move(V);
  fit.final_objective = obj;
  return fit;
}

}  // namespace mvcf
