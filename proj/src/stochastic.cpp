#include "ssns/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssns/rng.hpp"

namespace ssns {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double BrownianPath::at(double t) const {
  require(t >= 0.0 && t <= times.back() + 1e-15,
          "path: time outside the sampled range");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  size_t i = static_cast<size_t>(it - times.begin());
  if (i < times.size() && times[i] == t) return values[i];
  require(i > 0 && i < times.size(), "path: time outside the sampled range");
  const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return values[i - 1] + w * (values[i] - values[i - 1]);
}

std::vector<double> default_time_grid(double horizon, double t_geo_start,
                                      const std::vector<double>& extra_times) {
  require(horizon > 0 && t_geo_start > 0 && t_geo_start < horizon,
          "time grid: bad range");
  std::vector<double> g;
  g.push_back(0.0);
  const double uniform_from = std::min(0.01, horizon);
  for (double t = t_geo_start; t < uniform_from; t *= 1.05) g.push_back(t);
  for (double t = uniform_from; t < horizon + 0.5e-3; t += 1e-3)
    g.push_back(std::min(t, horizon));
  for (double t : extra_times)
    if (t > 0 && t <= horizon) g.push_back(t);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-18; }),
          g.end());
  if (g.back() < horizon) g.push_back(horizon);
  return g;
}

BrownianPath sample_bm(std::uint64_t seed, std::vector<double> grid,
                       double gamma) {
  require(!grid.empty() && grid.front() == 0.0,
          "sample_bm: grid must start at 0");
  for (size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "sample_bm: grid must be strictly increasing");
  BrownianPath p;
  p.seed = seed;
  p.gamma = gamma;
  p.times = std::move(grid);
  p.values.resize(p.times.size());
  p.values[0] = 0.0;
  Rng rng(substream_seed(seed, 0));
  for (size_t i = 1; i < p.times.size(); ++i)
    p.values[i] =
        p.values[i - 1] + std::sqrt(p.times[i] - p.times[i - 1]) * rng.normal();
  return p;
}

BrownianPath refine_bridge(const BrownianPath& path, int per_cell) {
  require(per_cell >= 1, "refine_bridge: per_cell must be >= 1");
  BrownianPath out;
  out.seed = path.seed;
  out.gamma = path.gamma;
  Rng rng(substream_seed(path.seed, 1));
  for (size_t i = 0; i + 1 < path.times.size(); ++i) {
    double t0 = path.times[i], t1 = path.times[i + 1];
    double b0 = path.values[i], b1 = path.values[i + 1];
    out.times.push_back(t0);
    out.values.push_back(b0);
    // Sequential bridge fill: conditionally Gaussian given the endpoints.
    double tl = t0, bl = b0;
    for (int q = 1; q <= per_cell; ++q) {
      const double t = t0 + (t1 - t0) * q / (per_cell + 1.0);
      const double mean = bl + (b1 - bl) * (t - tl) / (t1 - tl);
      const double var = (t - tl) * (t1 - t) / (t1 - tl);
      const double b = mean + std::sqrt(var) * rng.normal();
      out.times.push_back(t);
      out.values.push_back(b);
      tl = t;
      bl = b;
    }
  }
  out.times.push_back(path.times.back());
  out.values.push_back(path.values.back());
  return out;
}

double weight_h(const BrownianPath& path, double t) {
  return std::exp(-path.gamma * path.at(t) + 0.5 * path.gamma * path.gamma * t);
}

double weight_H(const BrownianPath& path, double tau) {
  return 1.0 / weight_h(path, std::exp(tau));
}

namespace {

// First strictly positive crossing of f(t) > 0 on the grid, with linear
// interpolation inside the crossing cell. Returns +inf if none.
template <class F>
double first_crossing(const BrownianPath& p, F f) {
  for (size_t i = 1; i < p.times.size(); ++i) {
    const double fi = f(p.times[i], p.values[i]);
    if (fi > 0.0) {
      const double fprev = f(p.times[i - 1], p.values[i - 1]);
      if (fprev >= 0.0) return p.times[i - 1];  // already at the barrier
      return p.times[i - 1] - fprev * (p.times[i] - p.times[i - 1]) / (fi - fprev);
    }
  }
  return kInf;
}

}  // namespace

StoppingReport stopping_times(const BrownianPath& path, int d, double alpha) {
  const double kappa = stopping_kappa(d, alpha);
  require(kappa > 0.0 && kappa < 1.0,
          "stopping_times: kappa must lie in (0, 1)");
  StoppingReport r;
  r.kappa = kappa;
  r.horizon = path.back_time();
  r.rho = first_crossing(
      path, [&](double t, double b) { return b - std::pow(t, kappa); });
  r.rho_abs = first_crossing(
      path, [&](double t, double b) { return std::abs(b) - std::pow(t, kappa); });
  const double g = path.gamma;
  if (g == 0.0) {
    r.rho_prime = kInf;
  } else {
    r.rho_prime = first_crossing(path, [&](double t, double b) {
      return std::abs(g * b - 0.5 * g * g * t) - 1.0;
    });
  }
  r.t1 = std::min(r.rho, r.rho_prime);
  return r;
}

double exp_factor(const BrownianPath& path, double t, int direction) {
  require(direction == 1 || direction == -1, "exp_transform: direction is +-1");
  const double h = weight_h(path, t);
  return direction == 1 ? 1.0 / h : h;
}

VectorField exp_transform(const VectorField& v, const BrownianPath& path,
                          double t, int direction) {
  const double f = exp_factor(path, t, direction);
  State s = v.coeffs();
  for (auto& c : s) c *= f;
  return VectorField::from_coeffs(v.grid(), std::move(s));
}

double weight_bound_ratio(const BrownianPath& path, int d, double alpha) {
  StoppingReport stop = stopping_times(path, d, alpha);
  const double tstop = std::min(stop.rho_abs, stop.rho_prime);
  const double g = path.gamma;
  double worst = 0.0;
  for (size_t i = 1; i < path.times.size(); ++i) {
    const double t = path.times[i];
    if (t >= tstop) break;
    const double H = 1.0 / weight_h(path, t);
    const double lhs = std::abs(H - 1.0) + std::abs(1.0 / H - 1.0);
    const double rhs =
        6.0 * g * std::pow(t, stop.kappa) + 4.0 * g * g * t;
    if (rhs > 0) worst = std::max(worst, lhs / rhs);
  }
  return worst;
}

}  // namespace ssns
