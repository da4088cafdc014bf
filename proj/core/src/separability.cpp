#include "clams/separability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "clams/errors.hpp"
#include "clams/random.hpp"

namespace clams {

using nlohmann::json;

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::ClustMe: return "clustme";
    case Provenance::SyntheticSurrogate: return "synthetic-surrogate";
    case Provenance::External: return "external";
  }
  return "external";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "clustme") return Provenance::ClustMe;
  if (s == "synthetic-surrogate") return Provenance::SyntheticSurrogate;
  if (s == "external") return Provenance::External;
  throw Error(ErrorCode::InvalidArgument, "unknown provenance '" + s + "'");
}

void TrainingSet::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double l = rows[i].label;
    if (!(l >= 0.0 && l <= 1.0)) {
      throw Error(ErrorCode::RangeError, "label of row " + std::to_string(i) + " outside [0, 1]");
    }
  }
  if (rows.size() < 20) {
    throw Error(ErrorCode::TooFewRows,
                "training needs at least 20 rows, got " + std::to_string(rows.size()));
  }
}

void TrainConfig::validate() const {
  if (n_trees < 1 || max_depth < 1 || min_leaf < 1 || !(learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tree counts, depth, leaf size and rate must be positive");
  }
  if (!(subsample > 0.0) || subsample > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "subsample must lie in (0, 1]");
  }
  if (cv_folds < 2) throw Error(ErrorCode::InvalidArgument, "cv_folds must be >= 2");
}

BoostingParams TrainConfig::boosting() const {
  return {n_trees, max_depth, learning_rate, subsample, min_leaf, seed};
}

SeparabilityModel::SeparabilityModel(TreeEnsemble ensemble, FeatureMask mask, TrainingMeta meta)
    : ensemble_(std::move(ensemble)), mask_(mask), meta_(meta) {
  const int arity = static_cast<int>(mask_.count());
  if (arity == 0) throw Error(ErrorCode::InvalidArgument, "model mask enables no feature");
  for (const RegressionTree& t : ensemble_.trees) {
    for (const TreeNode& n : t.nodes) {
      if (n.feature_index >= arity) {
        throw Error(ErrorCode::InvalidArgument, "tree references a feature outside the mask");
      }
      const int size = static_cast<int>(t.nodes.size());
      if (n.feature_index >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size)) {
        throw Error(ErrorCode::InvalidArgument, "tree node has an invalid child index");
      }
    }
  }
}

double SeparabilityModel::predict(const PairFeatures& f) const {
  const std::vector<double> x = feature_vector(f, mask_);
  return std::clamp(ensemble_.predict_raw(x), 0.0, 1.0);
}

double r_squared(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw Error(ErrorCode::LengthMismatch, "r_squared: length mismatch");
  }
  // Constant truth has no variance to explain; the summed mean can be off by
  // rounding, so test the values themselves.
  const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
  if (*lo == *hi) return 0.0;
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / truth.size();
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
    ss_res += (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
  }
  if (ss_tot == 0.0) return 0.0;
  return 1.0 - ss_res / ss_tot;
}

namespace {

FeatureMatrix design_matrix(const TrainingSet& data, std::span<const std::size_t> rows,
                            const FeatureMask& mask) {
  FeatureMatrix x;
  x.rows = rows.size();
  x.cols = mask.count();
  x.values.reserve(x.rows * x.cols);
  for (std::size_t r : rows) {
    for (double v : feature_vector(data.rows[r].features, mask)) x.values.push_back(v);
  }
  return x;
}

std::vector<double> labels_of(const TrainingSet& data, std::span<const std::size_t> rows) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (std::size_t r : rows) y.push_back(data.rows[r].label);
  return y;
}

std::vector<std::size_t> all_rows(const TrainingSet& data) {
  std::vector<std::size_t> rows(data.rows.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

double cross_validate(const TrainingSet& data, const TrainConfig& cfg, const FeatureMask& mask) {
  cfg.validate();
  data.validate();
  if (mask.count() == 0) throw Error(ErrorCode::InvalidArgument, "feature mask enables nothing");
  const std::size_t n = data.rows.size();
  const std::size_t folds = static_cast<std::size_t>(cfg.cv_folds);
  if (folds > n) throw Error(ErrorCode::TooFewRows, "more folds than rows");

  std::vector<std::size_t> order = all_rows(data);
  Rng rng(derive_seed(cfg.seed, 0x0cf0));
  rng.shuffle(order);

  double total = 0.0;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < n; ++i) {
      (i % folds == fold ? test_rows : train_rows).push_back(order[i]);
    }
    BoostingParams params = cfg.boosting();
    params.seed = derive_seed(cfg.seed, fold + 1);
    const TreeEnsemble model =
        fit_boosted_trees(design_matrix(data, train_rows, mask), labels_of(data, train_rows), params);
    const FeatureMatrix test_x = design_matrix(data, test_rows, mask);
    std::vector<double> predicted(test_rows.size());
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      predicted[i] = std::clamp(model.predict_raw(test_x.row(i)), 0.0, 1.0);
    }
    total += r_squared(labels_of(data, test_rows), predicted);
  }
  return total / static_cast<double>(folds);
}

SeparabilityModel train(const TrainingSet& data, const TrainConfig& cfg, const FeatureMask& mask) {
  cfg.validate();
  data.validate();
  const std::vector<std::size_t> rows = all_rows(data);
  TreeEnsemble ensemble =
      fit_boosted_trees(design_matrix(data, rows, mask), labels_of(data, rows), cfg.boosting());
  TrainingMeta meta{data.provenance, cross_validate(data, cfg, mask), cfg.seed};
  return SeparabilityModel(std::move(ensemble), mask, meta);
}

TrainConfig select_by_cv(const TrainingSet& data, const TrainConfig& base, const FeatureMask& mask) {
  TrainConfig best = base;
  double best_r2 = -std::numeric_limits<double>::infinity();
  for (int n_trees : {100, 300}) {
    for (int depth : {2, 3, 4}) {
      TrainConfig candidate = base;
      candidate.n_trees = n_trees;
      candidate.max_depth = depth;
      const double r2 = cross_validate(data, candidate, mask);
      if (r2 > best_r2) {
        best_r2 = r2;
        best = candidate;
      }
    }
  }
  return best;
}

AblationTable ablate(const TrainingSet& data, const TrainConfig& cfg) {
  AblationTable table;
  const FeatureMask full = FeatureMask::all();
  table.full_r2 = cross_validate(data, cfg, full);
  auto change = [&](double r2) {
    return table.full_r2 == 0.0 ? 0.0 : (r2 - table.full_r2) / table.full_r2 * 100.0;
  };
  for (Feature f : kAllFeatures) {
    const double r2 = cross_validate(data, cfg, full.without(f));
    table.single.push_back({{f}, r2, change(r2)});
  }
  for (std::size_t i = 0; i < kAllFeatures.size(); ++i) {
    for (std::size_t j = i + 1; j < kAllFeatures.size(); ++j) {
      const double r2 =
          cross_validate(data, cfg, full.without(kAllFeatures[i]).without(kAllFeatures[j]));
      table.pairs.push_back({{kAllFeatures[i], kAllFeatures[j]}, r2, change(r2)});
    }
  }
  return table;
}

namespace {

auto component_key(const GaussianComponent& c) {
  return std::make_tuple(c.center().x, c.center().y, c.major_sd(), c.minor_sd(), c.angle(),
                         c.soft_count());
}

Point draw(const GaussianComponent& c, Rng& rng) {
  const double u = c.major_sd() * rng.normal();
  const double v = c.minor_sd() * rng.normal();
  const double cs = std::cos(c.angle());
  const double sn = std::sin(c.angle());
  return {c.center().x + cs * u - sn * v, c.center().y + sn * u + cs * v};
}

}  // namespace

double surrogate_separability(const GaussianComponent& c1, const GaussianComponent& c2,
                              int mc_samples, std::uint64_t seed) {
  if (mc_samples < 100) throw Error(ErrorCode::InvalidArgument, "mc_samples must be >= 100");
  // Canonical argument order makes the estimate symmetric at a fixed seed.
  const bool swap = component_key(c2) < component_key(c1);
  const GaussianComponent& a = swap ? c2 : c1;
  const GaussianComponent& b = swap ? c1 : c2;

  const double total = a.soft_count() + b.soft_count();
  const double wa = total > 0.0 ? a.soft_count() / total : 0.5;
  const double wb = total > 0.0 ? b.soft_count() / total : 0.5;
  const double log_wa = std::log(wa);
  const double log_wb = std::log(wb);

  Rng rng(seed);
  double errors = 0.0;
  auto tally = [&](const GaussianComponent& source, bool from_a) {
    for (int i = 0; i < mc_samples; ++i) {
      const Point p = draw(source, rng);
      const double la = log_wa + a.log_density(p);
      const double lb = log_wb + b.log_density(p);
      if (la == lb) {
        errors += 0.5;
      } else if ((la < lb) == from_a) {
        errors += 1.0;
      }
    }
  };
  tally(a, true);
  tally(b, false);
  const double error_rate = errors / (2.0 * mc_samples);
  return std::clamp(1.0 - 2.0 * error_rate, 0.0, 1.0);
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json trees_payload(const TreeEnsemble& e) {
  json trees = json::array();
  for (const RegressionTree& t : e.trees) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes) {
      nodes.push_back({{"feature_index", n.feature_index},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"leaf_value", n.leaf_value}});
    }
    trees.push_back({{"weight", t.weight}, {"nodes", std::move(nodes)}});
  }
  return trees;
}

}  // namespace

std::string model_to_json(const SeparabilityModel& model) {
  json mask = json::array();
  for (Feature f : model.mask().features()) mask.push_back(feature_name(f));
  json trees = trees_payload(model.ensemble());
  const std::string checksum = hex64(fnv1a(trees.dump()));
  json doc = {
      {"format_version", kModelFormatVersion},
      {"mask", std::move(mask)},
      {"base_score", model.ensemble().base_score},
      {"training_meta",
       {{"provenance", to_string(model.meta().provenance)},
        {"cv_r2", model.meta().cv_r2},
        {"seed", model.meta().seed}}},
      {"trees", std::move(trees)},
      {"checksum", checksum},
  };
  return doc.dump(1);
}

SeparabilityModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatVersionMismatch, std::string("unreadable model file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format_version") ||
      !doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kModelFormatVersion) {
    throw Error(ErrorCode::FormatVersionMismatch,
                "expected model format_version " + std::to_string(kModelFormatVersion));
  }
  try {
    const json& trees = doc.at("trees");
    if (hex64(fnv1a(trees.dump())) != doc.at("checksum").get<std::string>()) {
      throw Error(ErrorCode::ChecksumMismatch, "tree payload does not match its checksum");
    }
    FeatureMask mask{{false, false, false, false, false, false}};
    for (const json& name : doc.at("mask")) {
      mask.enabled[static_cast<std::size_t>(feature_from_name(name.get<std::string>()))] = true;
    }
    TreeEnsemble ensemble;
    ensemble.base_score = doc.at("base_score").get<double>();
    for (const json& t : trees) {
      RegressionTree tree;
      tree.weight = t.at("weight").get<double>();
      for (const json& n : t.at("nodes")) {
        tree.nodes.push_back({n.at("feature_index").get<int>(), n.at("threshold").get<double>(),
                              n.at("left").get<int>(), n.at("right").get<int>(),
                              n.at("leaf_value").get<double>()});
      }
      ensemble.trees.push_back(std::move(tree));
    }
    const json& meta = doc.at("training_meta");
    TrainingMeta m{provenance_from_string(meta.at("provenance").get<std::string>()),
                   meta.at("cv_r2").get<double>(), meta.at("seed").get<std::uint64_t>()};
    return SeparabilityModel(std::move(ensemble), mask, m);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatVersionMismatch, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const SeparabilityModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << model_to_json(model) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

SeparabilityModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace clams
