#include "clams/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clams/clustering.hpp"
#include "clams/errors.hpp"
#include "clams/kneedle.hpp"
#include "clams/random.hpp"

namespace clams {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Working parameters of one component, in data centered on the global mean.
struct Working {
  double weight = 1.0;
  double mx = 0.0;
  double my = 0.0;
  Cov2 cov;
};

// Per-component constants of the log-density.
struct Cached {
  double log_norm = 0.0;
  double mx = 0.0;
  double my = 0.0;
  double ixx = 1.0;
  double ixy = 0.0;
  double iyy = 1.0;
};

// Responsibility-weighted moments about the component's current mean.
struct Moments {
  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
};

Cov2 floor_covariance(const Cov2& cov, double floor) {
  const Eigen2 e = eigen_decompose(cov);
  if (e.minor >= floor) return cov;
  return compose_covariance(std::max(e.major, floor), floor, e.angle);
}

Cached cache_component(const Working& w) {
  const double det = w.cov.xx * w.cov.yy - w.cov.xy * w.cov.xy;
  Cached c;
  c.mx = w.mx;
  c.my = w.my;
  c.ixx = w.cov.yy / det;
  c.ixy = -w.cov.xy / det;
  c.iyy = w.cov.xx / det;
  c.log_norm = std::log(w.weight) - kLog2Pi - 0.5 * std::log(det);
  return c;
}

// One E-step: returns the total log-likelihood and fills the moments that
// the following M-step needs.
double expectation(std::span<const Point> pts, std::span<const Cached> comps,
                   std::span<Moments> moments, std::vector<double>& scratch) {
  const std::size_t k = comps.size();
  std::fill(moments.begin(), moments.end(), Moments{});
  double total = 0.0;
  for (const Point& p : pts) {
    double best = -kInf;
    for (std::size_t j = 0; j < k; ++j) {
      const Cached& c = comps[j];
      const double dx = p.x - c.mx;
      const double dy = p.y - c.my;
      const double q = c.ixx * dx * dx + 2.0 * c.ixy * dx * dy + c.iyy * dy * dy;
      const double lp = c.log_norm - 0.5 * q;
      scratch[j] = lp;
      best = std::max(best, lp);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      // Terms below e^-40 relative to the largest cannot change the sum.
      const double d = scratch[j] - best;
      scratch[j] = d < -40.0 ? 0.0 : std::exp(d);
      sum += scratch[j];
    }
    total += best + std::log(sum);
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < k; ++j) {
      if (scratch[j] == 0.0) continue;
      const double r = scratch[j] * inv;
      const double dx = p.x - comps[j].mx;
      const double dy = p.y - comps[j].my;
      Moments& m = moments[j];
      m.n += r;
      m.sx += r * dx;
      m.sy += r * dy;
      m.sxx += r * dx * dx;
      m.sxy += r * dx * dy;
      m.syy += r * dy * dy;
    }
  }
  return total;
}

// Returns false when a component has collapsed below the minimum mass.
bool maximization(std::span<const Moments> moments, std::span<Working> comps, double n_points,
                  double min_mass, double floor) {
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const Moments& m = moments[j];
    if (!(m.n >= min_mass)) return false;
    const double ox = m.sx / m.n;
    const double oy = m.sy / m.n;
    Working& w = comps[j];
    w.weight = m.n / n_points;
    w.mx += ox;
    w.my += oy;
    w.cov = floor_covariance({m.sxx / m.n - ox * ox, m.sxy / m.n - ox * oy, m.syy / m.n - oy * oy},
                             floor);
  }
  return true;
}

struct RunResult {
  bool ok = false;
  std::vector<Working> comps;
  std::vector<double> soft_counts;
  double log_likelihood = -kInf;
  std::vector<double> trace;
};

RunResult run_em(std::span<const Point> pts, int k, const Cov2& pooled, const GmmFitConfig& cfg,
                 Rng& rng) {
  const double n = static_cast<double>(pts.size());
  const double min_mass = 0.1;  // weight 1/(10N) expressed as a point count

  RunResult run;
  run.comps.resize(k);
  const std::vector<Point> centers = kmeanspp_init(pts, k, rng);
  for (int j = 0; j < k; ++j) {
    run.comps[j].weight = 1.0 / k;
    run.comps[j].mx = centers[j].x;
    run.comps[j].my = centers[j].y;
    run.comps[j].cov = pooled;
  }

  std::vector<Cached> cached(k);
  std::vector<Moments> moments(k);
  std::vector<double> scratch(k);
  double previous = -kInf;
  for (int iter = 0;; ++iter) {
    for (int j = 0; j < k; ++j) cached[j] = cache_component(run.comps[j]);
    const double ll = expectation(pts, cached, moments, scratch);
    if (!std::isfinite(ll)) return run;
    run.trace.push_back(ll);
    run.log_likelihood = ll;
    if (iter > 0 && ll - previous < cfg.loglik_tol * n) break;
    if (iter >= cfg.max_iters) break;
    previous = ll;
    if (!maximization(moments, run.comps, n, min_mass, cfg.covariance_floor)) return run;
  }
  run.soft_counts.resize(k);
  for (int j = 0; j < k; ++j) {
    if (!(moments[j].n >= min_mass)) return run;
    run.soft_counts[j] = moments[j].n;
  }
  run.ok = true;
  return run;
}

}  // namespace

void GmmFitConfig::validate() const {
  if (k_max < 1) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 1");
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (!(loglik_tol > 0.0) || !(covariance_floor > 0.0) || !(kneedle_sensitivity > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "GMM tolerances must be positive");
  }
}

GmmFit fit_gmm(const Scatterplot& plot, int k, const GmmFitConfig& cfg) {
  cfg.validate();
  const std::size_t n = plot.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::InvalidArgument, "fit_gmm: k=" + std::to_string(k) +
                                                " must lie in [1, " + std::to_string(n) + "]");
  }

  // Fit in coordinates centered on the sample mean for numerical range.
  double mx = 0.0;
  double my = 0.0;
  for (const Point& p : plot.points()) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  std::vector<Point> pts;
  pts.reserve(n);
  Cov2 pooled{0.0, 0.0, 0.0};
  for (const Point& p : plot.points()) {
    const Point c{p.x - mx, p.y - my};
    pts.push_back(c);
    pooled.xx += c.x * c.x;
    pooled.xy += c.x * c.y;
    pooled.yy += c.y * c.y;
  }
  pooled.xx /= static_cast<double>(n);
  pooled.xy /= static_cast<double>(n);
  pooled.yy /= static_cast<double>(n);
  pooled = floor_covariance(pooled, cfg.covariance_floor);

  RunResult best;
  int best_restart = -1;
  const std::uint64_t k_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(k));
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(k_seed, static_cast<std::uint64_t>(r)));
    RunResult run = run_em(pts, k, pooled, cfg, rng);
    if (run.ok && (best_restart < 0 || run.log_likelihood > best.log_likelihood)) {
      best = std::move(run);
      best_restart = r;
    }
  }
  if (best_restart < 0) {
    throw Error(ErrorCode::DegenerateFit,
                "every EM restart collapsed a component for k=" + std::to_string(k));
  }

  GmmFit fit;
  fit.log_likelihood = best.log_likelihood;
  fit.loglik_trace = std::move(best.trace);
  fit.restart = best_restart;
  fit.components.reserve(k);
  for (int j = 0; j < k; ++j) {
    const Working& w = best.comps[j];
    fit.components.push_back(GaussianComponent::from_covariance(
        {w.mx + mx, w.my + my}, w.cov, best.soft_counts[j], w.weight));
  }
  std::sort(fit.components.begin(), fit.components.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) {
              if (a.center().x != b.center().x) return a.center().x < b.center().x;
              return a.center().y < b.center().y;
            });
  return fit;
}

std::vector<std::vector<double>> responsibilities(std::span<const Point> points,
                                                  std::span<const GaussianComponent> components) {
  std::vector<std::vector<double>> out(points.size(), std::vector<double>(components.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = -kInf;
    for (std::size_t j = 0; j < components.size(); ++j) {
      out[i][j] = std::log(components[j].weight()) + components[j].log_density(points[i]);
      best = std::max(best, out[i][j]);
    }
    double sum = 0.0;
    for (double& v : out[i]) {
      v = std::exp(v - best);
      sum += v;
    }
    for (double& v : out[i]) v /= sum;
  }
  return out;
}

double mixture_log_likelihood(std::span<const Point> points,
                              std::span<const GaussianComponent> components) {
  double total = 0.0;
  std::vector<double> lp(components.size());
  for (const Point& p : points) {
    double best = -kInf;
    for (std::size_t j = 0; j < components.size(); ++j) {
      lp[j] = std::log(components[j].weight()) + components[j].log_density(p);
      best = std::max(best, lp[j]);
    }
    double sum = 0.0;
    for (double v : lp) sum += std::exp(v - best);
    total += best + std::log(sum);
  }
  return total;
}

double bic(double log_likelihood, int k, std::size_t n) {
  const double params = 6.0 * k - 1.0;
  return params * std::log(static_cast<double>(n)) - 2.0 * log_likelihood;
}

std::optional<int> kneedle_elbow(std::span<const BicEntry> curve, double sensitivity) {
  if (curve.size() < 3) throw Error(ErrorCode::TooShort, "kneedle needs at least 3 curve points");
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(curve.size());
  y.reserve(curve.size());
  for (const BicEntry& e : curve) {
    x.push_back(e.k);
    y.push_back(e.bic);
  }
  const auto idx = kneedle_knee(x, y, sensitivity);
  if (!idx) return std::nullopt;
  return curve[*idx].k;
}

Decomposition decompose(const Scatterplot& plot, const GmmFitConfig& cfg) {
  cfg.validate();
  const int k_max = static_cast<int>(std::min<std::size_t>(cfg.k_max, plot.size()));

  Decomposition out;
  std::vector<GmmFit> fits(k_max);
  std::vector<BicEntry> valid;
  for (int k = 1; k <= k_max; ++k) {
    double score = kInf;
    try {
      fits[k - 1] = fit_gmm(plot, k, cfg);
      score = bic(fits[k - 1].log_likelihood, k, plot.size());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFit) throw;
    }
    out.bic_curve.push_back({k, score});
    if (std::isfinite(score)) valid.push_back({k, score});
  }
  if (valid.empty() || (valid.size() < 2 && k_max >= 2)) {
    throw Error(ErrorCode::DegenerateFit, "fewer than two non-degenerate fits in the k sweep");
  }

  // The elbow is searched on the curve up to its minimum: past the minimum
  // BIC rises again and the curve is no longer decreasing-convex.
  const auto minimum = std::min_element(valid.begin(), valid.end(),
                                        [](const BicEntry& a, const BicEntry& b) { return a.bic < b.bic; });
  const std::span<const BicEntry> descent(valid.data(), static_cast<std::size_t>(minimum - valid.begin()) + 1);
  std::optional<int> chosen;
  if (descent.size() >= 3) chosen = kneedle_elbow(descent, cfg.kneedle_sensitivity);
  if (!chosen) chosen = minimum->k;
  out.k_opt = *chosen;
  out.components = std::move(fits[*chosen - 1].components);
  out.log_likelihood = fits[*chosen - 1].log_likelihood;
  return out;
}

}  // namespace clams
