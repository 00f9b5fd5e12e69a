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

#ifndef MVCF_FACTORIZATION_HPP
#define MVCF_FACTORIZATION_HPP

#include <utility>
#include <vector>

#include "mvcf/core.hpp"
#include "mvcf/graph.hpp"
#include "mvcf/semisup.hpp"

namespace mvcf {

/// Mutable state of one semi-supervised multi-view concept factorization run.
///
/// Per view v it holds the linear kernel K_v = X_v^T X_v, the nonnegative
/// factor pair (W_v, V_v) of the approximation X_v ~ X_v W_v V_v^T, and the
/// similarity graph of the view. The view weights alpha live on the
/// probability simplex. Y here is the one-hot label matrix widened to the
/// latent dimension (zero-padded when k exceeds the class count).
struct SmvcfState {
  std::vector<Matrix> kernels;
  std::vector<ViewGraph> graphs;
  std::vector<Matrix> W;
  std::vector<Matrix> V;
  Vector alpha;
  Matrix Y;  // n x k
  Vector a;  // diagonal of the labeled-sample indicator

  std::vector<double> objective_trace;
  std::vector<Vector> f_trace;      // per-view objective values per iteration
  std::vector<Vector> alpha_trace;

  int n_views() const { return static_cast<int>(kernels.size()); }
};

struct FitReport {
  int iterations_run = 0;
  double final_objective = 0.0;
  bool converged = false;
  Vector per_view_f;
  Vector alpha;
  Matrix consensus_V;  // n x k (or n x (k * n_views) when concatenating)
  std::vector<double> objective_trace;
  std::vector<Vector> f_trace;
  std::vector<Vector> alpha_trace;
};

/// One multiplicative NMF round for X ~ U V^T:
///   U <- U .* (X V) ./ (U V^T V),  then  V <- V .* (X^T U) ./ (V U^T U),
/// denominators floored at eps_guard. Inputs must be entrywise nonnegative.
void nmf_step(const Matrix& X, Matrix& U, Matrix& V, double eps_guard = 1e-12);

/// One multiplicative concept-factorization round on the kernel K = X^T X:
///   W <- W .* (K V) ./ (K W V^T V),  then  V <- V .* (K W) ./ (V W^T K W).
void cf_step(const Matrix& K, Matrix& W, Matrix& V, double eps_guard = 1e-12);

/// Euclidean projection of z onto the probability simplex
/// { alpha : alpha >= 0, sum(alpha) = 1 }, by sort-and-threshold.
Vector project_simplex(const Vector& z);

/// Closed-form view-weight update: alpha = project_simplex(-f / (2 gamma)).
/// Lower per-view objective means no smaller weight, and gamma -> infinity
/// drives the weights to uniform.
Vector update_alpha(const Vector& per_view_f, double gamma);

/// Strictly positive factor pair of shape (n, k): uniform(0,1) entries
/// shifted by 1e-3 so multiplicative updates never start on a dead zero.
std::pair<Matrix, Matrix> init_factors(Index n, Index k, Rng& rng);

/// Precomputes kernels, graphs, label structures and seeded factors; alpha
/// starts uniform. Views are column-normalized first when the flag is on.
/// Throws NegativeKernel when some X^T X entry falls below -1e-12.
SmvcfState init_smvcf_state(const MultiViewDataset& ds,
                            const SemiSupervision& ss, const Hyperparams& hp);

/// Multiplicative W update of view v; the view weight cancels in the ratio.
void update_W(SmvcfState& s, int v, const Hyperparams& hp);

/// Multiplicative V update of view v:
///   V <- V .* (K W + lambda S V + beta A Y)
///          ./ (V W^T K W + lambda D V + beta A V).
/// With hp.printed_v_rule the reconstruction denominator K V W^T W is used
/// instead of V W^T K W (kept for A/B comparison; the default is the gradient
/// of the reconstruction trace and matches the plain CF rule at lambda=beta=0).
void update_V(SmvcfState& s, int v, const Hyperparams& hp);

/// Per-view objectives f_v = ||X_v - X_v W_v V_v^T||_F^2
///   + lambda tr(V_v^T L_v V_v) + beta tr((V_v - Y)^T A (V_v - Y)),
/// reconstruction evaluated through the kernel trace identity.
Vector per_view_objectives(const SmvcfState& s, const Hyperparams& hp);

/// Total objective sum_v alpha_v f_v + gamma ||alpha||^2 and the f vector.
std::pair<double, Vector> smvcf_objective(const SmvcfState& s,
                                          const Hyperparams& hp);

/// Full solver loop: per view W then V updates, then the alpha update, until
/// the relative objective change drops below hp.rel_tol or hp.max_iters is
/// reached. Non-convergence is reported, not thrown.
FitReport fit_smvcf(const MultiViewDataset& ds, const SemiSupervision& ss,
                    const Hyperparams& hp);

/// Factors and objective trace of a single-view baseline run.
struct SingleViewFit {
  Matrix basis;  // W for CF, U for NMF
  Matrix V;
  std::vector<double> trace;
  int iterations_run = 0;
  bool converged = false;
  double final_objective = 0.0;
};

/// Concept factorization baseline: multiplicative updates on K = X^T X with
/// the same stopping rule as the multi-view solver.
SingleViewFit cf_fit(const Matrix& X, Index k, const Hyperparams& hp);

/// Plain NMF baseline X ~ U V^T. Throws NegativeInput on negative entries.
SingleViewFit nmf_fit(const Matrix& X, Index k, const Hyperparams& hp);

}  // namespace mvcf

#endif  // MVCF_FACTORIZATION_HPP
