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

#ifndef MVCF_EXPERIMENT_HPP
#define MVCF_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "mvcf/core.hpp"
#include "mvcf/evaluation.hpp"
#include "mvcf/factorization.hpp"
#include "mvcf/io.hpp"
#include "mvcf/semisup.hpp"

namespace mvcf {

enum class Algorithm { smvcf, cf_concat, nmf_concat };

/// One experiment: fit -> cluster -> evaluate over a label-ratio grid with
/// repeated random splits, everything derived from one seed.
struct ExperimentConfig {
  std::string manifest_path;  // empty when synthetic data is requested
  Hyperparams hp;
  std::vector<double> label_ratios = {0.1, 0.2, 0.3, 0.4};
  int repeats = 10;
  std::string outdir = "out";
  Algorithm algorithm = Algorithm::smvcf;
  int kmeans_restarts = 10;
  SplitMode split_mode = SplitMode::stratified;

  // Synthetic source, used when manifest_path is empty.
  Index synth_n = 120;
  int synth_k = 4;
  int synth_views = 2;
  double synth_noise = 0.3;
  Index synth_dim = 12;
};

/// Per-run result row as written to runs.csv.
struct RunRow {
  std::size_t ratio_index = 0;
  double ratio = 0.0;
  int repeat = 0;
  RunMetrics metrics;
  int iterations_run = 0;
  bool converged = false;
  double final_objective = 0.0;
  Vector alpha;
};

struct ExperimentResult {
  std::vector<RunRow> rows;                 // ratio-major, repeat-minor order
  std::vector<EvalReport> per_ratio;        // one aggregate per label ratio
};

/// Balanced synthetic multi-view data: per view, k nonnegative prototypes in
/// dimension `dim`; sample j of class c is prototype c plus uniform [0, noise)
/// entrywise noise. Views draw independent prototypes.
MultiViewDataset synth_dataset(Index n, int k, int n_views, double noise,
                               Rng& rng, Index dim = 12);

/// Runs the full grid, writes runs.csv, aggregate.json, trace_*.csv and
/// mask_*.csv under config.outdir, and returns the in-memory results.
/// Worker count is capped by the MVCF_THREADS environment variable.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Re-runs the experiment once per value of the chosen hyperparameter
/// (lambda, beta, gamma or p) and writes a long-format sweep.csv with columns
/// param,value,ratio,metric,mean,std. Throws UnknownParameter.
void sweep(const ExperimentConfig& config, const std::string& param,
           const std::vector<double>& values);

/// Loads the configured dataset (manifest or synthetic).
MultiViewDataset load_experiment_dataset(const ExperimentConfig& config);

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

}  // namespace mvcf

#endif  // MVCF_EXPERIMENT_HPP
