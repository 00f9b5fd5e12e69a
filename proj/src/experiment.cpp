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

#include "mvcf/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace mvcf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int worker_count(std::size_t tasks) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MVCF_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) workers = v;
  }
  workers = std::max(1, workers);
  return static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
}

// Runs fn(0..count-1) on a small pool; rethrows the first worker exception.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto drain = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Views stacked along the feature axis, for the single-view baselines.
Matrix concat_views(const MultiViewDataset& ds) {
  Index rows = 0;
  for (const Matrix& X : ds.views) rows += X.rows();
  Matrix out(rows, ds.n_samples());
  Index at = 0;
  for (const Matrix& X : ds.views) {
    out.middleRows(at, X.rows()) = X;
    at += X.rows();
  }
  return out;
}

json report_to_json(const EvalReport& rep) {
  return json{{"acc_mean", rep.acc_mean},       {"acc_std", rep.acc_std},
              {"nmi_mean", rep.nmi_mean},       {"nmi_std", rep.nmi_std},
              {"purity_mean", rep.purity_mean}, {"purity_std", rep.purity_std},
              {"repeats", rep.repeats}};
}

struct TaskOutput {
  RunRow row;
  std::vector<double> objective_trace;
  std::vector<Vector> f_trace;
  std::vector<Vector> alpha_trace;
  std::vector<std::uint8_t> mask;
};

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::smvcf: return "smvcf";
    case Algorithm::cf_concat: return "cf_concat";
    case Algorithm::nmf_concat: return "nmf_concat";
  }
  return "smvcf";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "smvcf") return Algorithm::smvcf;
  if (name == "cf_concat") return Algorithm::cf_concat;
  if (name == "nmf_concat") return Algorithm::nmf_concat;
  throw UnknownParameter("unknown algorithm '" + name + "'");
}

MultiViewDataset synth_dataset(Index n, int k, int n_views, double noise,
                               Rng& rng, Index dim) {
  if (k < 1 || n < 2 * static_cast<Index>(k)) {
    throw ShapeMismatch("synth_dataset needs n >= 2k");
  }
  MultiViewDataset ds;
  ds.n_classes = k;
  ds.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    ds.labels[static_cast<std::size_t>(i)] = static_cast<int>(i % k);
  }
  for (int v = 0; v < n_views; ++v) {
    Matrix prototypes(dim, k);
    for (Index j = 0; j < static_cast<Index>(k); ++j) {
      for (Index i = 0; i < dim; ++i) prototypes(i, j) = rng.uniform();
    }
    Matrix X(dim, n);
    for (Index s = 0; s < n; ++s) {
      const int c = ds.labels[static_cast<std::size_t>(s)];
      for (Index i = 0; i < dim; ++i) {
        X(i, s) = prototypes(i, c) + noise * rng.uniform();
      }
    }
    ds.views.push_back(std::move(X));
  }
  return ds;
}

MultiViewDataset load_experiment_dataset(const ExperimentConfig& config) {
  if (!config.manifest_path.empty()) {
    return load_dataset(load_manifest(config.manifest_path));
  }
  Rng rng(Rng::mix(config.hp.seed, 0x5eed));
  return synth_dataset(config.synth_n, config.synth_k, config.synth_views,
                       config.synth_noise, rng, config.synth_dim);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.repeats < 1) throw Error("repeats must be >= 1");
  for (double r : config.label_ratios) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw Error("label ratio " + std::to_string(r) + " outside (0, 1]");
    }
  }

  const MultiViewDataset ds = load_experiment_dataset(config);
  require_valid(ds);
  fs::create_directories(config.outdir);

  const std::size_t n_ratios = config.label_ratios.size();
  const std::size_t n_tasks = n_ratios * static_cast<std::size_t>(config.repeats);
  std::vector<TaskOutput> outputs(n_tasks);

  parallel_for(n_tasks, [&](std::size_t task) {
    const std::size_t ratio_idx = task / static_cast<std::size_t>(config.repeats);
    const int repeat = static_cast<int>(task % static_cast<std::size_t>(config.repeats));
    const double ratio = config.label_ratios[ratio_idx];

    const std::uint64_t task_seed =
        Rng::mix(config.hp.seed, ratio_idx * 1000003ULL + static_cast<std::uint64_t>(repeat));
    Rng task_rng(task_seed);
    Rng split_rng = task_rng.substream(1);
    Rng kmeans_rng = task_rng.substream(3);

    SemiSupervision ss = stratified_split(ds.labels, ds.n_classes, ratio,
                                          split_rng, config.split_mode);

    Hyperparams hp = config.hp;
    hp.seed = Rng::mix(task_seed, 2);

    TaskOutput out;
    Matrix embedding;
    if (config.algorithm == Algorithm::smvcf) {
      FitReport fit = fit_smvcf(ds, ss, hp);
      embedding = std::move(fit.consensus_V);
      out.row.iterations_run = fit.iterations_run;
      out.row.converged = fit.converged;
      out.row.final_objective = fit.final_objective;
      out.row.alpha = fit.alpha;
      out.objective_trace = std::move(fit.objective_trace);
      out.f_trace = std::move(fit.f_trace);
      out.alpha_trace = std::move(fit.alpha_trace);
    } else {
      // Unsupervised single-view baselines on per-view-normalized features.
      Hyperparams base_hp = hp;
      base_hp.normalize_columns = false;
      const Matrix cat = concat_views(hp.normalize_columns ? normalized(ds) : ds);
      const Index k = hp.k > 0 ? hp.k : ds.n_classes;
      SingleViewFit fit = config.algorithm == Algorithm::cf_concat
                              ? cf_fit(cat, k, base_hp)
                              : nmf_fit(cat, k, base_hp);
      embedding = std::move(fit.V);
      out.row.iterations_run = fit.iterations_run;
      out.row.converged = fit.converged;
      out.row.final_objective = fit.final_objective;
      out.row.alpha = Vector::Ones(1);
      out.objective_trace = std::move(fit.trace);
      const std::size_t len = out.objective_trace.size();
      out.f_trace.assign(len, Vector::Zero(1));
      for (std::size_t t = 0; t < len; ++t) out.f_trace[t](0) = out.objective_trace[t];
      out.alpha_trace.assign(len, Vector::Ones(1));
    }

    ClusterAssignment clusters =
        kmeans(embedding, ds.n_classes, kmeans_rng, config.kmeans_restarts);
    out.row.metrics.acc = accuracy(clusters.labels, ds.labels);
    out.row.metrics.nmi = nmi(clusters.labels, ds.labels);
    out.row.metrics.purity = purity(clusters.labels, ds.labels);
    out.row.ratio_index = ratio_idx;
    out.row.ratio = ratio;
    out.row.repeat = repeat;
    out.mask = ss.labeled;
    outputs[task] = std::move(out);
  });

  // Per-run artifacts and the ordered runs.csv.
  const int nv = config.algorithm == Algorithm::smvcf ? ds.n_views() : 1;
  {
    std::ofstream runs(fs::path(config.outdir) / "runs.csv");
    runs << "ratio,repeat,acc,nmi,purity,iterations,converged,final_objective";
    for (int v = 1; v <= nv; ++v) runs << ",alpha_" << v;
    runs << "\n";
    for (const TaskOutput& out : outputs) {
      const std::string run_id = "r" + std::to_string(out.row.ratio_index) + "_rep" +
                                 std::to_string(out.row.repeat);
      save_trace_csv((fs::path(config.outdir) / ("trace_" + run_id + ".csv")).string(),
                     out.objective_trace, out.f_trace, out.alpha_trace);
      save_mask_csv((fs::path(config.outdir) / ("mask_" + run_id + ".csv")).string(),
                    out.mask);
      runs << format_double(out.row.ratio) << "," << out.row.repeat << ","
           << format_double(out.row.metrics.acc) << ","
           << format_double(out.row.metrics.nmi) << ","
           << format_double(out.row.metrics.purity) << "," << out.row.iterations_run
           << "," << (out.row.converged ? 1 : 0) << ","
           << format_double(out.row.final_objective);
      for (Index v = 0; v < out.row.alpha.size(); ++v) {
        runs << "," << format_double(out.row.alpha(v));
      }
      runs << "\n";
    }
  }

  ExperimentResult result;
  for (const TaskOutput& out : outputs) result.rows.push_back(out.row);

  json ratios_json = json::array();
  for (std::size_t r = 0; r < n_ratios; ++r) {
    std::vector<RunMetrics> metrics;
    for (const RunRow& row : result.rows) {
      if (row.ratio_index == r) metrics.push_back(row.metrics);
    }
    EvalReport rep = aggregate_runs(metrics);
    result.per_ratio.push_back(rep);
    json entry = report_to_json(rep);
    entry["ratio"] = config.label_ratios[r];
    ratios_json.push_back(entry);
  }

  json aggregate{{"algorithm", algorithm_name(config.algorithm)},
                 {"dataset", config.manifest_path.empty() ? "synthetic" : config.manifest_path},
                 {"seed", config.hp.seed},
                 {"repeats", config.repeats},
                 {"ratios", ratios_json}};
  std::ofstream agg(fs::path(config.outdir) / "aggregate.json");
  agg << aggregate.dump(2) << "\n";

  return result;
}

void sweep(const ExperimentConfig& config, const std::string& param,
           const std::vector<double>& values) {
  const bool known =
      param == "lambda" || param == "beta" || param == "gamma" || param == "p";
  if (!known) throw UnknownParameter("cannot sweep parameter '" + param + "'");

  fs::create_directories(config.outdir);
  std::ofstream out(fs::path(config.outdir) / "sweep.csv");
  out << "param,value,ratio,metric,mean,std\n";

  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig cell = config;
    if (param == "lambda") cell.hp.lambda = values[i];
    if (param == "beta") cell.hp.beta = values[i];
    if (param == "gamma") cell.hp.gamma = values[i];
    if (param == "p") cell.hp.p = static_cast<int>(values[i]);
    cell.outdir = (fs::path(config.outdir) / (param + "_" + std::to_string(i))).string();

    const ExperimentResult res = run_experiment(cell);
    for (std::size_t r = 0; r < cell.label_ratios.size(); ++r) {
      const EvalReport& rep = res.per_ratio[r];
      const auto emit = [&](const std::string& metric, double mean, double std) {
        out << param << "," << format_double(values[i]) << ","
            << format_double(cell.label_ratios[r]) << "," << metric << ","
            << format_double(mean) << "," << format_double(std) << "\n";
      };
      emit("acc", rep.acc_mean, rep.acc_std);
      emit("nmi", rep.nmi_mean, rep.nmi_std);
      emit("purity", rep.purity_mean, rep.purity_std);
    }
  }
}

}  // namespace mvcf
