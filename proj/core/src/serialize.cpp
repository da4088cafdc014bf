#include "clams/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "clams/io.hpp"

namespace clams {

using nlohmann::json;

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round12(v);
}

json to_json(const GaussianComponent& c) {
  return {{"center", {json_number(c.center().x), json_number(c.center().y)}},
          {"major_sd", json_number(c.major_sd())},
          {"minor_sd", json_number(c.minor_sd())},
          {"angle", json_number(c.angle())},
          {"soft_count", json_number(c.soft_count())},
          {"weight", json_number(c.weight())}};
}

json to_json(const Decomposition& d) {
  json comps = json::array();
  for (const auto& c : d.components) comps.push_back(to_json(c));
  json curve = json::array();
  for (const auto& e : d.bic_curve) curve.push_back({{"k", e.k}, {"bic", json_number(e.bic)}});
  return {{"k_opt", d.k_opt},
          {"log_likelihood", json_number(d.log_likelihood)},
          {"components", comps},
          {"bic_curve", curve}};
}

json to_json(const PairFeatures& f) {
  return {{"dc", json_number(f.dc)}, {"dsr", json_number(f.dsr)}, {"dd", json_number(f.dd)},
          {"sd", json_number(f.sd)}, {"ed", json_number(f.ed)},   {"ac", json_number(f.ac)}};
}

json to_json(const GmmFitConfig& cfg) {
  return {{"k_max", cfg.k_max},
          {"restarts", cfg.restarts},
          {"max_iters", cfg.max_iters},
          {"loglik_tol", json_number(cfg.loglik_tol)},
          {"covariance_floor", json_number(cfg.covariance_floor)},
          {"kneedle_sensitivity", json_number(cfg.kneedle_sensitivity)},
          {"seed", cfg.seed}};
}

json to_json(const HyperParams& h) {
  json out = json::object();
  for (const auto& [name, value] : h.values()) out[name] = json_number(value);
  return out;
}

json to_json(const TrainConfig& cfg) {
  return {{"n_trees", cfg.n_trees},
          {"max_depth", cfg.max_depth},
          {"learning_rate", json_number(cfg.learning_rate)},
          {"subsample", json_number(cfg.subsample)},
          {"min_leaf", cfg.min_leaf},
          {"cv_folds", cfg.cv_folds},
          {"seed", cfg.seed}};
}

json to_json(const AblationTable& table) {
  auto rows = [](const std::vector<AblationRow>& in) {
    json out = json::array();
    for (const auto& r : in) {
      json removed = json::array();
      for (Feature f : r.removed) removed.push_back(feature_name(f));
      out.push_back({{"removed", removed},
                     {"r2", json_number(r.r2)},
                     {"change_percent", json_number(r.change_percent)}});
    }
    return out;
  };
  return {{"full_r2", json_number(table.full_r2)},
          {"single", rows(table.single)},
          {"pairs", rows(table.pairs)}};
}

json to_json(const BenchReport& report) {
  json datasets = json::array();
  for (const auto& d : report.datasets) {
    json scores = json::object();
    json ranks = json::object();
    for (std::size_t t = 0; t < report.techniques.size(); ++t) {
      scores[report.techniques[t]] = json_number(d.scores[t]);
      ranks[report.techniques[t]] = static_cast<int>(d.ranks[t]);
    }
    datasets.push_back({{"id", d.dataset}, {"scores", scores}, {"ranks", ranks}});
  }
  return {{"metric", to_string(report.metric)},
          {"budget", report.budget},
          {"seed", report.seed},
          {"techniques", report.techniques},
          {"datasets", datasets},
          {"mean_rho", json_number(report.mean_rho)}};
}

json report_json(const std::string& plot_id, const AmbiguityReport& report,
                 const SeparabilityModel& model, const GmmFitConfig& cfg) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"pair", {p.pair[0], p.pair[1]}},
                     {"separability", json_number(p.separability)},
                     {"ambiguity", json_number(p.ambiguity)},
                     {"features", to_json(p.features)}});
  }
  return {{"format_version", kReportFormatVersion},
          {"id", plot_id},
          {"score", json_number(report.score)},
          {"pairs", pairs},
          {"decomposition", to_json(report.decomposition)},
          {"model",
           {{"provenance", to_string(model.meta().provenance)},
            {"cv_r2", json_number(model.meta().cv_r2)},
            {"mask", model.mask().to_string()}}},
          {"config", to_json(cfg)}};
}

json reducer_json(const ReducerReport& report, const ReducerConfig& cfg,
                  const std::string& intermediate_path, const std::string& final_path) {
  json candidates = json::array();
  for (const auto& c : report.candidates) {
    candidates.push_back({{"phase", c.phase},
                          {"index", c.index},
                          {"params", to_json(c.params)},
                          {"accuracy", json_number(c.accuracy)},
                          {"loss", json_number(c.loss)}});
  }
  return {{"format_version", kReportFormatVersion},
          {"tau", json_number(cfg.tau)},
          {"budget_phase1", cfg.budget_phase1},
          {"budget_phase2", cfg.budget_phase2},
          {"seed", cfg.seed},
          {"gmm", to_json(cfg.gmm)},
          {"h1", to_json(report.h1)},
          {"h2", to_json(report.h2)},
          {"accuracy_intermediate", json_number(report.accuracy_intermediate)},
          {"accuracy_final", json_number(report.accuracy_final)},
          {"clams_intermediate", json_number(report.clams_intermediate)},
          {"clams_final", json_number(report.clams_final)},
          {"intermediate_embedding", intermediate_path},
          {"final_embedding", final_path},
          {"candidates", candidates}};
}

std::string dump(const json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

std::string render_svg(const Scatterplot& plot, const AmbiguityReport& report) {
  constexpr double kSize = 800.0;
  constexpr double kMargin = 40.0;
  double xmin = plot[0].x, xmax = plot[0].x, ymin = plot[0].y, ymax = plot[0].y;
  for (const Point& p : plot.points()) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double scale = (kSize - 2.0 * kMargin) / span;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  auto sx = [&](double x) { return kSize / 2.0 + (x - cx) * scale; };
  auto sy = [&](double y) { return kSize / 2.0 - (y - cy) * scale; };
  auto f = [](double v) { return format12(std::round(v * 100.0) / 100.0); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">CLAMS score "
      << format12(round12(report.score)) << "</text>\n<g fill=\"#444\" fill-opacity=\"0.5\">\n";
  for (const Point& p : plot.points()) {
    out << "<circle cx=\"" << f(sx(p.x)) << "\" cy=\"" << f(sy(p.y)) << "\" r=\"1.5\"/>\n";
  }
  out << "</g>\n<g fill=\"none\" stroke=\"#d62728\">\n";
  for (const auto& c : report.decomposition.components) {
    const double deg = -c.angle() * 180.0 / std::numbers::pi;
    for (int k = 1; k <= 2; ++k) {
      out << "<ellipse cx=\"" << f(sx(c.center().x)) << "\" cy=\"" << f(sy(c.center().y))
          << "\" rx=\"" << f(k * c.major_sd() * scale) << "\" ry=\"" << f(k * c.minor_sd() * scale)
          << "\" transform=\"rotate(" << f(deg) << ' ' << f(sx(c.center().x)) << ' '
          << f(sy(c.center().y)) << ")\" stroke-width=\"" << (k == 1 ? "2" : "1")
          << "\"" << (k == 2 ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
    }
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f4e9c\">\n";
  const auto& comps = report.decomposition.components;
  for (const auto& p : report.pairs) {
    const Point a = comps[p.pair[0]].center();
    const Point b = comps[p.pair[1]].center();
    out << "<line x1=\"" << f(sx(a.x)) << "\" y1=\"" << f(sy(a.y)) << "\" x2=\"" << f(sx(b.x))
        << "\" y2=\"" << f(sy(b.y)) << "\" stroke=\"#1f4e9c\" stroke-opacity=\"0.4\"/>\n"
        << "<text x=\"" << f(sx(0.5 * (a.x + b.x))) << "\" y=\"" << f(sy(0.5 * (a.y + b.y)))
        << "\">A=" << format12(std::round(p.ambiguity * 1000.0) / 1000.0) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace clams
