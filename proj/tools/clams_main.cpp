// clams: command-line front end for scoring, training and the two
// applications (ambiguity-constrained embedding search, benchmark stability).

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clams/ambiguity.hpp"
#include "clams/bench.hpp"
#include "clams/datagen.hpp"
#include "clams/errors.hpp"
#include "clams/evm.hpp"
#include "clams/gmm.hpp"
#include "clams/io.hpp"
#include "clams/reducer.hpp"
#include "clams/separability.hpp"
#include "clams/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    clams::write_text(out, text);
  }
}

std::vector<fs::path> plot_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".csv" || ext == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct GmmFlags {
  clams::GmmFitConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--k-max", cfg.k_max, "Largest component count tried")->capture_default_str();
    app->add_option("--restarts", cfg.restarts, "EM restarts per k")->capture_default_str();
    app->add_option("--max-iters", cfg.max_iters, "EM iteration cap")->capture_default_str();
    app->add_option("--tol", cfg.loglik_tol, "Per-point log-likelihood tolerance")->capture_default_str();
    app->add_option("--sensitivity", cfg.kneedle_sensitivity, "Kneedle sensitivity")->capture_default_str();
  }
};

struct TrainFlags {
  clams::TrainConfig cfg;
  std::string mask = "standard";

  void attach(CLI::App* app) {
    app->add_option("--n-trees", cfg.n_trees)->capture_default_str();
    app->add_option("--max-depth", cfg.max_depth)->capture_default_str();
    app->add_option("--learning-rate", cfg.learning_rate)->capture_default_str();
    app->add_option("--subsample", cfg.subsample)->capture_default_str();
    app->add_option("--min-leaf", cfg.min_leaf)->capture_default_str();
    app->add_option("--cv-folds", cfg.cv_folds)->capture_default_str();
  }

  clams::FeatureMask feature_mask() const {
    if (mask == "standard") return clams::FeatureMask::standard();
    if (mask == "all") return clams::FeatureMask::all();
    clams::FeatureMask m;
    m.enabled.fill(false);
    std::stringstream ss(mask);
    std::string name;
    while (std::getline(ss, name, ',')) m.enabled[static_cast<std::size_t>(clams::feature_from_name(name))] = true;
    return m;
  }
};

struct DataFlags {
  int synthetic = 0;
  std::vector<std::string> clustme;
  std::string data;
  int mc_samples = 2000;
  bool refit = false;

  void attach(CLI::App* app) {
    auto* group = app->add_option_group("source", "Training data source");
    group->add_option("--synthetic", synthetic, "Generate N surrogate-labeled pairs");
    group->add_option("--clustme", clustme, "Params CSV and scores CSV")->expected(2);
    group->add_option("--data", data, "Training CSV (dc,dsr,dd,sd,ed,ac,label)");
    group->require_option(1);
    app->add_option("--mc-samples", mc_samples, "Surrogate Monte-Carlo samples per component")
        ->capture_default_str();
    app->add_flag("--refit", refit, "Features from GMM refits of sampled pairs");
  }

  clams::TrainingSet load(std::uint64_t seed) const {
    if (synthetic > 0) {
      clams::TrainingSetOptions opts;
      opts.mc_samples = mc_samples;
      opts.refit = refit;
      return clams::generate_training_set(synthetic, clams::PairRanges{}, opts, seed);
    }
    if (!clustme.empty()) return clams::ingest_clustme(clustme[0], clustme[1]);
    return clams::read_training_csv(data);
  }
};

int run_score(const std::string& input, const std::string& model_path, const GmmFlags& gmm,
              const std::string& out, const std::string& svg, bool pretty) {
  const clams::SeparabilityModel model = clams::load_model(model_path);
  const bool batch = fs::is_directory(input);
  const std::vector<fs::path> files = batch ? plot_files(input) : std::vector<fs::path>{input};
  if (batch && !svg.empty()) fs::create_directories(svg);
  json reports = json::array();
  for (const auto& file : files) {
    const clams::Scatterplot plot = clams::read_scatterplot(file);
    const clams::AmbiguityReport report = clams::clams_score(plot, model, gmm.cfg);
    reports.push_back(clams::report_json(plot.id(), report, model, gmm.cfg));
    if (!svg.empty()) {
      const fs::path target = batch ? fs::path(svg) / (file.stem().string() + ".svg") : fs::path(svg);
      clams::write_text(target, clams::render_svg(clams::canonical_order(plot), report));
    }
  }
  emit(clams::dump(batch ? reports : reports.front(), pretty), out);
  return 0;
}

int run_train(const DataFlags& data_flags, TrainFlags train, bool grid, const std::string& model_out,
              const std::string& out, bool pretty) {
  const clams::TrainingSet data = data_flags.load(train.cfg.seed);
  const clams::FeatureMask mask = train.feature_mask();
  if (grid) train.cfg = clams::select_by_cv(data, train.cfg, mask);
  const clams::SeparabilityModel model = clams::train(data, train.cfg, mask);
  clams::save_model(model, model_out);
  const json report = {{"model", model_out},
                       {"rows", data.rows.size()},
                       {"provenance", clams::to_string(data.provenance)},
                       {"mask", mask.to_string()},
                       {"config", clams::to_json(train.cfg)},
                       {"cv_r2", clams::json_number(model.meta().cv_r2)}};
  emit(clams::dump(report, pretty), out);
  return 0;
}

std::string removed_names(const std::vector<clams::Feature>& removed) {
  std::string s;
  for (clams::Feature f : removed) s += (s.empty() ? "" : "+") + std::string(clams::feature_name(f));
  return s;
}

int run_ablate(const DataFlags& data_flags, const TrainFlags& train, const std::string& csv_out,
               const std::string& json_out) {
  const clams::TrainingSet data = data_flags.load(train.cfg.seed);
  const clams::AblationTable table = clams::ablate(data, train.cfg);
  std::ostringstream csv;
  csv << "removed,r2,change_percent\n";
  csv << "none," << clams::format12(clams::round12(table.full_r2)) << ",0\n";
  for (const auto* rows : {&table.single, &table.pairs}) {
    for (const auto& r : *rows) {
      csv << removed_names(r.removed) << ',' << clams::format12(clams::round12(r.r2)) << ','
          << clams::format12(clams::round12(r.change_percent)) << '\n';
    }
  }
  if (!csv_out.empty()) clams::write_text(csv_out, csv.str());
  if (!json_out.empty()) clams::write_text(json_out, clams::dump(clams::to_json(table), true));

  std::printf("%-12s %8s %9s\n", "removed", "R2", "change");
  std::printf("%-12s %8.4f %9s\n", "(none)", table.full_r2, "");
  for (const auto* rows : {&table.single, &table.pairs}) {
    for (const auto& r : *rows) {
      std::printf("%-12s %8.4f %+8.2f%%\n", removed_names(r.removed).c_str(), r.r2, r.change_percent);
    }
  }
  return 0;
}

int run_generate_pairs(int n, std::uint64_t seed, int mc_samples, bool points, const std::string& dir) {
  fs::create_directories(dir);
  clams::TrainingSetOptions opts;
  opts.mc_samples = mc_samples;
  clams::write_training_csv(clams::generate_training_set(n, clams::PairRanges{}, opts, seed),
                            fs::path(dir) / "training.csv");
  if (points) {
    fs::create_directories(fs::path(dir) / "points");
    const auto specs = clams::draw_pair_specs(n, clams::PairRanges{}, seed);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "pair_%05zu.csv", i);
      clams::write_scatterplot_csv(clams::sample_pair(specs[i], clams::derive_seed(seed, 0x9a12 + i)),
                                   fs::path(dir) / "points" / name);
    }
  }
  return 0;
}

int run_generate_scene(clams::SceneSpec spec, const std::string& dir) {
  fs::create_directories(dir);
  const clams::Scene scene = clams::generate_scene(spec);
  clams::write_scatterplot_csv(scene.plot, fs::path(dir) / (spec.id + ".csv"));
  clams::write_clustering_csv(scene.labels, fs::path(dir) / (spec.id + "_labels.csv"));
  return 0;
}

int run_ground_truth(const std::string& root, const std::string& evm_name, bool singleton,
                     const std::string& out, const std::string& ranking, bool pretty) {
  const clams::Evm evm = clams::evm_from_string(evm_name);
  const auto policy = singleton ? clams::UnassignedPolicy::Singleton : clams::UnassignedPolicy::Exclude;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  json result = json::object();
  std::vector<std::pair<std::string, double>> scores;
  for (const auto& dir : dirs) {
    std::vector<clams::Clustering> clusterings;
    for (const auto& file : plot_files(dir)) {
      if (file.extension() == ".csv") clusterings.push_back(clams::read_clustering_csv(file));
    }
    const double a = clams::ground_truth_ambiguity(clusterings, evm, policy);
    const std::string id = dir.filename().string();
    result[id] = {{evm_name, clams::json_number(a)}};
    scores.emplace_back(id, a);
  }
  emit(clams::dump(result, pretty), out);
  if (!ranking.empty()) {
    std::stable_sort(scores.begin(), scores.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::ostringstream csv;
    csv << "rank,id,ambiguity\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      csv << i + 1 << ',' << scores[i].first << ',' << clams::format12(clams::round12(scores[i].second)) << '\n';
    }
    clams::write_text(ranking, csv.str());
  }
  return 0;
}

int run_bench(const std::string& manifest, const std::string& metric_name, int budget, std::uint64_t seed,
              const std::string& out, const std::string& ranking, bool pretty) {
  const clams::Metric metric = clams::metric_from_string(metric_name);
  clams::CsvReader csv(manifest);
  csv.expect_header({"path", "group"});
  std::map<std::string, std::vector<clams::Scatterplot>> groups;
  std::vector<std::string> fields;
  const fs::path base = fs::path(manifest).parent_path();
  while (csv.next(fields)) {
    if (fields.size() != 2) csv.fail("expected 2 fields, got " + std::to_string(fields.size()));
    const fs::path p = fs::path(fields[0]).is_absolute() ? fs::path(fields[0]) : base / fields[0];
    groups[fields[1]].push_back(clams::read_scatterplot(p));
  }
  const clams::TechniqueList techniques = clams::default_techniques();
  json result = {{"metric", metric_name}, {"budget", budget}, {"seed", seed}, {"groups", json::object()}};
  std::ostringstream rank_csv;
  rank_csv << "group,dataset,technique,score,rank\n";
  for (const auto& [group, plots] : groups) {
    const clams::BenchReport report = clams::rank_stability(plots, techniques, metric, budget, seed);
    result["groups"][group] = clams::to_json(report);
    for (const auto& d : report.datasets) {
      for (std::size_t t = 0; t < report.techniques.size(); ++t) {
        rank_csv << group << ',' << d.dataset << ',' << report.techniques[t] << ','
                 << clams::format12(clams::round12(d.scores[t])) << ',' << d.ranks[t] << '\n';
      }
    }
  }
  emit(clams::dump(result, pretty), out);
  if (!ranking.empty()) clams::write_text(ranking, rank_csv.str());
  return 0;
}

int run_reduce(const std::string& input, const std::string& model_path, clams::ReducerConfig cfg,
               const std::string& out_dir, bool pretty) {
  const clams::SeparabilityModel model = clams::load_model(model_path);
  const clams::HighDimDataset z = clams::HighDimDataset::from_rows(clams::read_numeric_csv(input));
  const clams::ToyEmbedder embedder;
  const clams::NeighborhoodF1 metric;
  const clams::ReducerReport report = clams::optimize(z, embedder, metric, model, cfg);
  fs::create_directories(out_dir);
  clams::write_scatterplot_csv(report.intermediate, fs::path(out_dir) / "intermediate.csv");
  clams::write_scatterplot_csv(report.final_embedding, fs::path(out_dir) / "final.csv");
  clams::write_text(fs::path(out_dir) / "report.json",
                    clams::dump(clams::reducer_json(report, cfg, "intermediate.csv", "final.csv"), pretty));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster ambiguity of 2-D scatterplots"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "clams 1.0.0 (model format " + std::to_string(clams::kModelFormatVersion) +
                                        ", report format " + std::to_string(clams::kReportFormatVersion) + ")");
  bool pretty = false;
  std::string out;
  std::uint64_t seed = 0;
  app.add_flag("--pretty", pretty, "Indent JSON output");

  // score
  auto* score = app.add_subcommand("score", "Score a scatterplot file or a directory of them");
  std::string score_input, model_path, svg;
  GmmFlags score_gmm;
  score->add_option("input", score_input, "Point file (.csv/.json) or directory")->required();
  score->add_option("--model", model_path, "Trained model JSON")->required();
  score->add_option("--out", out, "Write JSON here instead of stdout");
  score->add_option("--svg", svg, "SVG file (directory in batch mode)");
  score->add_option("--seed", seed, "Seed")->capture_default_str();
  score->add_flag("--pretty", pretty);
  score_gmm.attach(score);

  // train
  auto* train = app.add_subcommand("train", "Fit the separability regressor");
  DataFlags train_data;
  TrainFlags train_flags;
  bool grid = false;
  std::string model_out;
  train_data.attach(train);
  train_flags.attach(train);
  train->add_option("--mask", train_flags.mask, "standard, all, or comma list of features")->capture_default_str();
  train->add_flag("--grid", grid, "Select n_trees and max_depth by CV");
  train->add_option("--model-out", model_out, "Model file to write")->required();
  train->add_option("--out", out, "CV report JSON (default stdout)");
  train->add_option("--seed", seed)->capture_default_str();
  train->add_flag("--pretty", pretty);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Feature ablation table");
  DataFlags ablate_data;
  TrainFlags ablate_flags;
  std::string ablate_json;
  ablate_data.attach(ablate);
  ablate_flags.attach(ablate);
  ablate->add_option("--out", out, "CSV table");
  ablate->add_option("--json", ablate_json, "JSON table");
  ablate->add_option("--seed", seed)->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "Synthetic stimuli");
  generate->require_subcommand(1);
  auto* gen_pairs = generate->add_subcommand("pairs", "Surrogate-labeled training pairs");
  int n_pairs = 1000;
  int mc_samples = 2000;
  bool with_points = false;
  std::string gen_dir;
  gen_pairs->add_option("--n", n_pairs)->capture_default_str();
  gen_pairs->add_option("--mc-samples", mc_samples)->capture_default_str();
  gen_pairs->add_flag("--points", with_points, "Also write each sampled pair to points/ as a point CSV");
  gen_pairs->add_option("--seed", seed)->capture_default_str();
  gen_pairs->add_option("--out", gen_dir, "Output directory")->required();
  auto* gen_scene = generate->add_subcommand("scene", "Multi-component scene with labels");
  clams::SceneSpec scene;
  gen_scene->add_option("--k", scene.k)->capture_default_str();
  gen_scene->add_option("--center-min", scene.center_min)->capture_default_str();
  gen_scene->add_option("--center-max", scene.center_max)->capture_default_str();
  gen_scene->add_option("--sd-min", scene.sd_min)->capture_default_str();
  gen_scene->add_option("--sd-max", scene.sd_max)->capture_default_str();
  gen_scene->add_option("--count-min", scene.count_min)->capture_default_str();
  gen_scene->add_option("--count-max", scene.count_max)->capture_default_str();
  gen_scene->add_option("--id", scene.id)->capture_default_str();
  gen_scene->add_option("--seed", seed)->capture_default_str();
  gen_scene->add_option("--out", gen_dir, "Output directory")->required();

  // ground-truth
  auto* gt = app.add_subcommand("ground-truth", "Ambiguity from several clusterings per plot");
  std::string gt_root, evm_name = "ami", gt_ranking;
  bool singleton = false;
  gt->add_option("clusterings", gt_root, "Directory with one subdirectory of label CSVs per plot")
      ->required()
      ->check(CLI::ExistingDirectory);
  gt->add_option("--evm", evm_name)->check(CLI::IsMember({"ami", "arand", "vm", "homo", "comp"}))->capture_default_str();
  gt->add_flag("--singleton", singleton, "Treat unassigned points as singleton clusters");
  gt->add_option("--out", out);
  gt->add_option("--ranking", gt_ranking, "Ranking CSV");
  gt->add_flag("--pretty", pretty);

  // bench
  auto* bench = app.add_subcommand("bench", "Rank stability of clustering techniques");
  std::string manifest, metric_name = "silhouette", bench_ranking;
  int budget = 20;
  bench->add_option("manifest", manifest, "CSV with header path,group")->required();
  bench->add_option("--metric", metric_name)->check(CLI::IsMember({"silhouette", "ch"}))->capture_default_str();
  bench->add_option("--budget", budget)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--out", out);
  bench->add_option("--ranking", bench_ranking, "Per-dataset ranking CSV");
  bench->add_flag("--pretty", pretty);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Accuracy-constrained ambiguity reduction");
  std::string reduce_input, reduce_out;
  clams::ReducerConfig rcfg;
  rcfg.gmm.k_max = 10;
  rcfg.gmm.restarts = 2;
  reduce->add_option("input", reduce_input, "High-dimensional CSV, one row per point")->required();
  reduce->add_option("--model", model_path)->required();
  reduce->add_option("--tau", rcfg.tau)->capture_default_str();
  reduce->add_option("--budget1", rcfg.budget_phase1)->capture_default_str();
  reduce->add_option("--budget2", rcfg.budget_phase2)->capture_default_str();
  reduce->add_option("--k-max", rcfg.gmm.k_max)->capture_default_str();
  reduce->add_option("--restarts", rcfg.gmm.restarts)->capture_default_str();
  reduce->add_option("--seed", seed)->capture_default_str();
  reduce->add_option("--out", reduce_out, "Output directory")->required();
  reduce->add_flag("--pretty", pretty);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*score) {
      score_gmm.cfg.seed = seed;
      return run_score(score_input, model_path, score_gmm, out, svg, pretty);
    }
    if (*train) {
      train_flags.cfg.seed = seed;
      return run_train(train_data, train_flags, grid, model_out, out, pretty);
    }
    if (*ablate) {
      ablate_flags.cfg.seed = seed;
      return run_ablate(ablate_data, ablate_flags, out, ablate_json);
    }
    if (*gen_pairs) return run_generate_pairs(n_pairs, seed, mc_samples, with_points, gen_dir);
    if (*gen_scene) {
      scene.seed = seed;
      return run_generate_scene(scene, gen_dir);
    }
    if (*gt) return run_ground_truth(gt_root, evm_name, singleton, out, gt_ranking, pretty);
    if (*bench) return run_bench(manifest, metric_name, budget, seed, out, bench_ranking, pretty);
    if (*reduce) {
      rcfg.seed = seed;
      rcfg.gmm.seed = seed;
      return run_reduce(reduce_input, model_path, rcfg, reduce_out, pretty);
    }
  } catch (const clams::Error& e) {
    std::cerr << "clams: " << e.what() << '\n';
    return clams::is_input_error(e.code()) ? kExitInput : kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "clams: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitUsage;
}
