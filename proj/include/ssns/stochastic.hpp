#pragma once

#include <cstdint>
#include <vector>

#include "ssns/field.hpp"

namespace ssns {

/// Seeded Brownian sample path on a strictly increasing grid starting at 0.
/// Bit-reproducible from (seed, grid) on a fixed platform.
struct BrownianPath {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  std::vector<double> times;   // t_0 = 0 < t_1 < ...
  std::vector<double> values;  // B(t_i), B(0) = 0

  double back_time() const { return times.back(); }
  /// B at a grid node (exact) or linearly interpolated inside a cell.
  double at(double t) const;
};

/// Geometric grid (ratio 1.05) from t_geo_start to 0.01, then uniform with
/// step 1e-3 up to the horizon; 0 prepended; extra_times merged in.
std::vector<double> default_time_grid(double horizon, double t_geo_start = 1e-6,
                                      const std::vector<double>& extra_times = {});

BrownianPath sample_bm(std::uint64_t seed, std::vector<double> grid,
                       double gamma);

/// Insert `per_cell` bridge midpoints into every cell; existing values are
/// kept verbatim, so the coarse path is a subsequence of the fine one.
BrownianPath refine_bridge(const BrownianPath& path, int per_cell);

/// h(t) = exp(-gamma B_t + gamma^2 t / 2); H(tau) = h(e^tau)^{-1}.
double weight_h(const BrownianPath& path, double t);
double weight_H(const BrownianPath& path, double tau);

struct StoppingReport {
  double rho = 0.0;        // first t with B(t) > t^kappa (+inf sentinel)
  double rho_abs = 0.0;    // first t with |B(t)| > t^kappa
  double rho_prime = 0.0;  // first t with |gamma B_t - gamma^2 t / 2| >= 1
  double t1 = 0.0;         // min(rho, rho_prime) within the horizon
  double horizon = 0.0;
  double kappa = 0.0;
};

inline double stopping_kappa(int d, double alpha) {
  return (2.0 + d - 2.0 * alpha) / (4.0 * alpha);
}

/// Grid-resolved crossings with one-cell linear interpolation; +inf sentinel
/// when no crossing occurs within the horizon.
StoppingReport stopping_times(const BrownianPath& path, int d, double alpha);

/// u = e^{gamma B_t - gamma^2 t/2} v (direction +1) and its inverse (-1).
double exp_factor(const BrownianPath& path, double t, int direction);
VectorField exp_transform(const VectorField& v, const BrownianPath& path,
                          double t, int direction);

/// Pathwise check of |H-1| + |H^-1-1| <= 6 gamma e^{kappa tau} + 4 gamma^2
/// e^tau for tau <= log min(rho_abs, rho_prime); returns the worst
/// bound-to-margin ratio (<= 1 means the bound held).
double weight_bound_ratio(const BrownianPath& path, int d, double alpha);

}  // namespace ssns
