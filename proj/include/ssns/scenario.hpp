#pragma once

#include <filesystem>
#include <map>

#include "ssns/spectrum.hpp"
#include "ssns/stochastic.hpp"

namespace ssns {

struct PairConfig {
  double tau_min = -45.0;
  double T0 = 0.0;           // shrunk to min(T0, log rho, log rho') if gamma > 0
  int steps = 2000;
  double amplitude = 3e-7;   // U_l amplitude epsilon
  double gamma = 0.0;
  std::uint64_t seed = 1;
  int snapshot_stride = 100; // kept snapshot triples and SSNF dumps
  double nu = 1.0;
};

struct PairSnapshot {
  int index = 0;                  // tau-grid index of the middle sample
  VectorField U1m, U1, U1p;       // triples at tau_{i-1}, tau_i, tau_{i+1}
  VectorField U2m, U2, U2p;
  VectorField F;                  // shared forcing at tau_i
};

/// A complete non-uniqueness certificate: background, eigenpair, the two
/// solutions on a tau grid, the shared forcing, and the residual report.
/// Trajectories are streamed (scalars per tau; field snapshots at a stride).
struct ScenarioBundle {
  GridPtr grid;
  VectorField Ubar;
  Eigenpair eig;
  PairConfig cfg;
  double kappa2 = 0.0;            // (2 + d - 2 alpha) / (2 alpha)

  std::vector<double> tau;
  std::vector<double> H;          // weight samples (1 when gamma = 0)
  std::vector<double> n_U1, n_U2, n_diff, n_Ul, n_F;   // L2 norms
  std::vector<double> trace1, trace2;  // e^{kappa2 tau} ||U_i - Ubar||
  std::vector<double> resid1, resid2;  // relative FD residuals
  std::vector<double> resid1_alg, resid2_alg;  // analytic-d_tau residuals
  std::vector<PairSnapshot> snapshots;

  double stopping_rho = 0.0, stopping_rho_prime = 0.0;  // +inf when gamma = 0
  double weight_bound_worst = 0.0;  // pathwise |H-1|+|H^-1-1| bound ratio

  double max_resid() const;
  /// Log-slope of ||U2 - U1|| sampled at half-periods of Im z; equals Re z.
  double diff_log_slope() const;
  /// trace ratio tau_min / T0 (vanishing initial trace diagnostic).
  double trace_ratio() const;
};

/// U_l(tau) = Re(e^{z tau} eta), the unstable linear mode.
VectorField linear_mode(const Eigenpair& eig, double tau);
State linear_mode_state(const Grid& g, const Eigenpair& eig, double tau);

/// Deterministic two-solution certificate (exact-algebra operators):
///   U1 = Ubar - Ul/2, U2 = Ubar + Ul/2,
///   F  = -P_alpha Ubar - B(Ubar, Ubar) - B(Ul, Ul)/4.
ScenarioBundle build_pair_deterministic(const LinearizedOperator& op,
                                        const Eigenpair& eig,
                                        const PairConfig& cfg);

/// Stochastic variant: U_l solves d_tau Ul = L Ul + (H-1) B~(Ubar, Ul) along
/// the sampled path, F = H(-P_alpha Ubar - H B(Ubar,Ubar) - H B(Ul,Ul)/4);
/// gamma = 0 reduces bit-for-bit to the deterministic build.
ScenarioBundle build_pair_stochastic(const LinearizedOperator& op,
                                     const Eigenpair& eig,
                                     const PairConfig& cfg);

/// Relative residual of the discrete similarity equation
///   d_tau U - P_alpha U + H P(U.grad U) - H^{-1} F
/// with centered differences in tau (one-sided would be the endpoints; the
/// builders only report interior samples). Normalized by ||F||_{L2}.
double pair_residual(const LinearizedOperator& op, const VectorField& Um,
                     const VectorField& U0, const VectorField& Up,
                     const VectorField& F, double H, double dtau);

/// Physical-frame profiles via the exact similarity norm law. Field
/// snapshots are additionally resampled for inspection.
struct PhysicalProfiles {
  std::vector<double> t;
  std::vector<double> l2_u1, l2_u2, l2_f;
  double min_gap = 0.0;       // min_t | ||u1|| - ||u2|| |
  double f_slope = 0.0;       // fitted log-log slope of ||f(t)||
  double f_slope_target = 0.0;
};

PhysicalProfiles to_physical(const ScenarioBundle& bundle);

// Bundle persistence: a directory with meta (key = value), residuals.csv,
// norms.csv, physical_profiles.csv and SSNF snapshots per recorded tau.
void save_bundle(const std::filesystem::path& dir, const ScenarioBundle& b);
/// Recompute the residual table of a saved bundle from its snapshots; the
/// bytes must reproduce residuals.csv exactly.
bool verify_bundle(const std::filesystem::path& dir, std::string* report);

}  // namespace ssns
