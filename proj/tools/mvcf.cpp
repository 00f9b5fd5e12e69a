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

// Command-line front end: fit, eval, sweep, synth and validate subcommands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvcf/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
  mvcf::ExperimentConfig config;
  std::string algorithm = "smvcf";
  std::string split = "stratified";
  std::string consensus = "weighted";
  bool no_normalize = false;
  double fit_ratio = 0.2;
  std::string fit_mask;  // reproduce a published split instead of sampling
  bool dump_graphs = false;
  std::string sweep_param;
  std::vector<double> sweep_values;
  std::string synth_format = "csv";
  std::string config_path;
};

void add_hyperparam_options(CLI::App* cmd, CliOptions& o) {
  auto& hp = o.config.hp;
  cmd->add_option("--lambda", hp.lambda, "Graph regularization weight");
  cmd->add_option("--beta", hp.beta, "Label fidelity weight");
  cmd->add_option("--gamma", hp.gamma, "View-weight smoothing");
  cmd->add_option("--p", hp.p, "Mutual-kNN neighbor count");
  cmd->add_option("--k", hp.k, "Latent dimension (0 = class count)");
  cmd->add_option("--max-iters", hp.max_iters, "Iteration cap");
  cmd->add_option("--rel-tol", hp.rel_tol, "Relative objective-change stop");
  cmd->add_option("--seed", hp.seed, "Root random seed");
  cmd->add_option("--sigma2", hp.fixed_sigma2, "Fixed heat-kernel width (0 = self-tuned)");
  cmd->add_flag("--no-normalize", o.no_normalize, "Skip column normalization");
  cmd->add_flag("--printed-v-rule", hp.printed_v_rule,
                "Alternative V-update denominator (A/B comparisons)");
  cmd->add_option("--consensus", o.consensus, "weighted|concat")
      ->check(CLI::IsMember({"weighted", "concat"}));
}

void add_experiment_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--manifest", o.config.manifest_path, "Dataset manifest path");
  cmd->add_option("--out", o.config.outdir, "Output directory");
  cmd->add_option("--ratios", o.config.label_ratios, "Label ratios in (0,1]")
      ->delimiter(',');
  cmd->add_option("--repeats", o.config.repeats, "Repeats per ratio");
  cmd->add_option("--algorithm", o.algorithm, "smvcf|cf_concat|nmf_concat")
      ->check(CLI::IsMember({"smvcf", "cf_concat", "nmf_concat"}));
  cmd->add_option("--restarts", o.config.kmeans_restarts, "k-means restarts");
  cmd->add_option("--split", o.split, "stratified|global")
      ->check(CLI::IsMember({"stratified", "global"}));
  cmd->add_option("--synth-n", o.config.synth_n, "Synthetic sample count");
  cmd->add_option("--synth-k", o.config.synth_k, "Synthetic class count");
  cmd->add_option("--synth-views", o.config.synth_views, "Synthetic view count");
  cmd->add_option("--synth-noise", o.config.synth_noise, "Synthetic noise level");
  cmd->add_option("--synth-dim", o.config.synth_dim, "Synthetic feature dimension");
  add_hyperparam_options(cmd, o);
  // Parsed up front in main(); registered here so it shows in --help and is
  // accepted by the parser.
  cmd->add_option("--config", o.config_path, "Key = value configuration file");
}

// Key = value configuration file sharing the long option names. Applied as
// new defaults before flag parsing, so explicit flags win.
void apply_config_file(const std::string& path, CliOptions& o) {
  std::ifstream in(path);
  if (!in) throw mvcf::ParseError(path, 0, "cannot open config file");
  std::string line;
  long lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = line;
    const auto hash = t.find('#');
    if (hash != std::string::npos) t = t.substr(0, hash);
    t = trim(t);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw mvcf::ParseError(path, lineno, "expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    try {
      if (key == "manifest") o.config.manifest_path = value;
      else if (key == "out") o.config.outdir = value;
      else if (key == "ratios") {
        o.config.label_ratios.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          o.config.label_ratios.push_back(std::stod(trim(item)));
        }
      }
      else if (key == "repeats") o.config.repeats = std::stoi(value);
      else if (key == "algorithm") o.algorithm = value;
      else if (key == "restarts") o.config.kmeans_restarts = std::stoi(value);
      else if (key == "split") o.split = value;
      else if (key == "consensus") o.consensus = value;
      else if (key == "synth-n") o.config.synth_n = std::stol(value);
      else if (key == "synth-k") o.config.synth_k = std::stoi(value);
      else if (key == "synth-views") o.config.synth_views = std::stoi(value);
      else if (key == "synth-noise") o.config.synth_noise = std::stod(value);
      else if (key == "synth-dim") o.config.synth_dim = std::stol(value);
      else if (key == "lambda") o.config.hp.lambda = std::stod(value);
      else if (key == "beta") o.config.hp.beta = std::stod(value);
      else if (key == "gamma") o.config.hp.gamma = std::stod(value);
      else if (key == "p") o.config.hp.p = std::stoi(value);
      else if (key == "k") o.config.hp.k = std::stoi(value);
      else if (key == "max-iters") o.config.hp.max_iters = std::stoi(value);
      else if (key == "rel-tol") o.config.hp.rel_tol = std::stod(value);
      else if (key == "seed") o.config.hp.seed = std::stoull(value);
      else if (key == "sigma2") o.config.hp.fixed_sigma2 = std::stod(value);
      else if (key == "ratio") o.fit_ratio = std::stod(value);
      else if (key == "mask") o.fit_mask = value;
      else if (key == "no-normalize") o.no_normalize = (value == "true" || value == "1");
      else if (key == "printed-v-rule") {
        o.config.hp.printed_v_rule = (value == "true" || value == "1");
      }
      else throw mvcf::ParseError(path, lineno, "unknown config key '" + key + "'");
    } catch (const mvcf::ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw mvcf::ParseError(path, lineno, "bad value for '" + key + "': " + value);
    }
  }
}

// Locates --config FILE (or --config=FILE) ahead of full argument parsing.
std::string find_config_argument(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

void finalize(CliOptions& o) {
  o.config.algorithm = mvcf::algorithm_from_name(o.algorithm);
  o.config.split_mode =
      o.split == "global" ? mvcf::SplitMode::global : mvcf::SplitMode::stratified;
  o.config.hp.normalize_columns = !o.no_normalize;
  o.config.hp.concat_consensus = o.consensus == "concat";
}

int run_validate(const CliOptions& o) {
  const mvcf::DatasetManifest manifest = mvcf::load_manifest(o.config.manifest_path);
  const auto resolve = [&manifest](const std::string& p) {
    fs::path fp(p);
    if (fp.is_absolute() || manifest.base_dir.empty()) return p;
    return (fs::path(manifest.base_dir) / fp).string();
  };

  // Load views and labels individually so every problem ends up in the
  // report instead of aborting at the first throw.
  mvcf::MultiViewDataset ds;
  ds.n_classes = manifest.declared_classes;
  std::vector<std::string> load_issues;
  for (std::size_t v = 0; v < manifest.view_paths.size(); ++v) {
    try {
      ds.views.push_back(mvcf::load_view(resolve(manifest.view_paths[v]),
                                         manifest.format, manifest.orientation));
    } catch (const mvcf::Error& e) {
      load_issues.push_back("view " + std::to_string(v) + ": " + e.what());
    }
  }
  if (!ds.views.empty()) {
    try {
      ds.labels = mvcf::load_labels_csv(resolve(manifest.labels_path),
                                        ds.views.front().cols(),
                                        manifest.declared_classes);
      if (ds.n_classes == 0) {
        for (int c : ds.labels) ds.n_classes = std::max(ds.n_classes, c + 1);
      }
    } catch (const mvcf::Error& e) {
      load_issues.push_back(std::string("labels: ") + e.what());
    }
  }

  mvcf::ValidationReport report = mvcf::validate_dataset(ds);
  report.issues.insert(report.issues.end(), load_issues.begin(), load_issues.end());
  report.ok = report.ok && load_issues.empty();

  std::cout << "dataset: " << manifest.name << "\n";
  for (std::size_t v = 0; v < report.view_shapes.size(); ++v) {
    std::cout << "  view " << v << ": " << report.view_shapes[v].rows << " x "
              << report.view_shapes[v].cols << "\n";
  }
  std::cout << "  samples: " << report.n << "\n";
  std::cout << "  classes: " << report.n_classes << "\n";
  if (report.ok) {
    std::cout << "  status: ok\n";
    return 0;
  }
  for (const std::string& issue : report.issues) {
    std::cout << "  issue: " << issue << "\n";
  }
  return 1;
}

int run_fit(CliOptions& o) {
  finalize(o);
  const mvcf::MultiViewDataset ds = mvcf::load_experiment_dataset(o.config);
  mvcf::require_valid(ds);
  fs::create_directories(o.config.outdir);

  mvcf::SemiSupervision ss;
  if (!o.fit_mask.empty()) {
    ss = mvcf::semisup_from_mask(ds.labels, ds.n_classes,
                                 mvcf::load_mask_csv(o.fit_mask));
  } else {
    mvcf::Rng split_rng(mvcf::Rng::mix(o.config.hp.seed, 1));
    ss = mvcf::stratified_split(ds.labels, ds.n_classes, o.fit_ratio, split_rng,
                                o.config.split_mode);
  }

  const mvcf::FitReport fit = mvcf::fit_smvcf(ds, ss, o.config.hp);

  mvcf::Rng kmeans_rng(mvcf::Rng::mix(o.config.hp.seed, 3));
  const mvcf::ClusterAssignment clusters = mvcf::kmeans(
      fit.consensus_V, ds.n_classes, kmeans_rng, o.config.kmeans_restarts);

  json out{{"algorithm", "smvcf"},
           {"ratio", ss.label_ratio},
           {"iterations", fit.iterations_run},
           {"converged", fit.converged},
           {"final_objective", fit.final_objective},
           {"acc", mvcf::accuracy(clusters.labels, ds.labels)},
           {"nmi", mvcf::nmi(clusters.labels, ds.labels)},
           {"purity", mvcf::purity(clusters.labels, ds.labels)}};
  json alpha = json::array();
  for (mvcf::Index v = 0; v < fit.alpha.size(); ++v) alpha.push_back(fit.alpha(v));
  out["alpha"] = alpha;

  mvcf::save_trace_csv((fs::path(o.config.outdir) / "trace.csv").string(),
                       fit.objective_trace, fit.f_trace, fit.alpha_trace);
  mvcf::save_mask_csv((fs::path(o.config.outdir) / "mask.csv").string(), ss.labeled);
  mvcf::save_dense_csv((fs::path(o.config.outdir) / "consensus.csv").string(),
                       fit.consensus_V);
  if (o.dump_graphs) {
    const mvcf::MultiViewDataset data =
        o.config.hp.normalize_columns ? mvcf::normalized(ds) : ds;
    for (int v = 0; v < data.n_views(); ++v) {
      const mvcf::ViewGraph g =
          mvcf::build_weights(data.views[v], o.config.hp.p, o.config.hp.fixed_sigma2);
      mvcf::save_matrix_market(
          (fs::path(o.config.outdir) / ("graph_" + std::to_string(v) + ".mtx")).string(),
          g.S);
    }
  }
  std::ofstream((fs::path(o.config.outdir) / "fit.json").string()) << out.dump(2) << "\n";
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_eval(CliOptions& o) {
  finalize(o);
  const mvcf::ExperimentResult result = mvcf::run_experiment(o.config);
  for (std::size_t r = 0; r < o.config.label_ratios.size(); ++r) {
    const mvcf::EvalReport& rep = result.per_ratio[r];
    std::cout << "ratio " << o.config.label_ratios[r] << ": acc " << rep.acc_mean
              << " +- " << rep.acc_std << ", nmi " << rep.nmi_mean << " +- "
              << rep.nmi_std << ", purity " << rep.purity_mean << " +- "
              << rep.purity_std << "\n";
  }
  std::cout << "artifacts written to " << o.config.outdir << "\n";
  return 0;
}

int run_sweep(CliOptions& o) {
  finalize(o);
  mvcf::sweep(o.config, o.sweep_param, o.sweep_values);
  std::cout << "sweep written to " << (fs::path(o.config.outdir) / "sweep.csv").string()
            << "\n";
  return 0;
}

int run_synth(CliOptions& o) {
  fs::create_directories(o.config.outdir);
  mvcf::Rng rng(mvcf::Rng::mix(o.config.hp.seed, 0x5eed));
  const mvcf::MultiViewDataset ds =
      mvcf::synth_dataset(o.config.synth_n, o.config.synth_k, o.config.synth_views,
                          o.config.synth_noise, rng, o.config.synth_dim);

  mvcf::DatasetManifest manifest;
  manifest.name = "synthetic";
  manifest.declared_classes = ds.n_classes;
  manifest.labels_path = "labels.csv";
  const bool mtx = o.synth_format == "mtx";
  for (int v = 0; v < ds.n_views(); ++v) {
    const std::string file = "view_" + std::to_string(v) + (mtx ? ".mtx" : ".csv");
    const std::string path = (fs::path(o.config.outdir) / file).string();
    if (mtx) {
      mvcf::save_matrix_market(path, ds.views[v]);
    } else {
      mvcf::save_dense_csv(path, ds.views[v]);
    }
    manifest.view_paths.push_back(file);
  }
  mvcf::save_labels_csv((fs::path(o.config.outdir) / "labels.csv").string(), ds.labels);
  mvcf::save_manifest((fs::path(o.config.outdir) / "manifest.txt").string(), manifest);
  std::cout << "synthetic dataset written to " << o.config.outdir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-supervised multi-view concept factorization toolkit"};
  app.require_subcommand(1);
  CliOptions o;

  const std::string config_path = find_config_argument(argc, argv);
  if (!config_path.empty()) {
    try {
      apply_config_file(config_path, o);
    } catch (const mvcf::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  CLI::App* validate = app.add_subcommand("validate", "Check a dataset manifest");
  validate->add_option("--manifest", o.config.manifest_path, "Dataset manifest path")
      ->required();

  CLI::App* fit = app.add_subcommand("fit", "Single solver run with one label split");
  add_experiment_options(fit, o);
  fit->add_option("--ratio", o.fit_ratio, "Label ratio for the split");
  fit->add_option("--mask", o.fit_mask, "0/1 mask CSV reproducing a known split");
  fit->add_flag("--dump-graphs", o.dump_graphs, "Write per-view similarity graphs");

  CLI::App* eval = app.add_subcommand("eval", "Label-ratio grid with repeats");
  add_experiment_options(eval, o);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter sweep");
  add_experiment_options(sweep_cmd, o);
  sweep_cmd->add_option("--param", o.sweep_param, "lambda|beta|gamma|p")->required();
  sweep_cmd->add_option("--values", o.sweep_values, "Sweep values")
      ->delimiter(',')
      ->required();

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--out", o.config.outdir, "Output directory")->required();
  synth->add_option("--n", o.config.synth_n, "Sample count");
  synth->add_option("--k", o.config.synth_k, "Class count");
  synth->add_option("--views", o.config.synth_views, "View count");
  synth->add_option("--noise", o.config.synth_noise, "Noise level");
  synth->add_option("--dim", o.config.synth_dim, "Feature dimension per view");
  synth->add_option("--seed", o.config.hp.seed, "Random seed");
  synth->add_option("--format", o.synth_format, "csv|mtx")
      ->check(CLI::IsMember({"csv", "mtx"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return run_validate(o);
    if (*fit) return run_fit(o);
    if (*eval) return run_eval(o);
    if (*sweep_cmd) return run_sweep(o);
    if (*synth) return run_synth(o);
  } catch (const mvcf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mvcf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
