#pragma once

#include <functional>
#include <vector>

#include "ssns/operators.hpp"
#include "ssns/similarity.hpp"

namespace ssns {

struct FlowConfig {
  double dt = 1e-3;
  enum class Scheme { IFRK4, IMEX } scheme = Scheme::IFRK4;
  double t_final = 1.0;
  int record_stride = 0;   // 0: keep only the final state
  bool exact_linear = true;  // diagonal part by exact Fourier factor
};

/// Exact fractional heat flow e^{t nu Lambda^alpha} (multiplier e^{-t nu |k|^a}).
VectorField heat_flow(const VectorField& u, double t, double alpha,
                      double nu = 1.0);
void heat_flow_inplace(const Grid& g, State& u, double t, double alpha,
                       double nu = 1.0);

/// e^{tau P_alpha}, realization A: fractional heat from t = 1 to e^tau,
/// dilation by e^{tau/alpha}, amplitude t^{1-1/alpha}.
VectorField palpha_flow_exact(const VectorField& u, double tau,
                              ResampleReport* report = nullptr);

/// e^{tau P_alpha}, realization B: time-stepping the discrete operator
/// (windowed drift + sponge), independent of realization A.
VectorField palpha_flow_stepped(const LinearizedOperator& op,
                                const VectorField& u, double tau,
                                const FlowConfig& cfg = {});

/// Nonautonomous weight profile H(tau); {} means H == 1 identically.
using WeightFn = std::function<double(double)>;

/// One integrating-factor RK4 (or IMEX) stepper for
///   d_tau U = diag U + offdiag(U; H(tau)),
/// i.e. the flow of L_Ubar when H == 1 and of
/// L_Ubar + (H-1) B~(Ubar, .) otherwise.
class LinearStepper {
public:
  LinearStepper(const LinearizedOperator& op, const FlowConfig& cfg);

  void step(State& u, double tau) const;           // H == 1
  void step(State& u, double tau, const WeightFn& H) const;
  /// March from tau0 over `nsteps` steps; aborts on norm explosion > 1e6.
  void advance(State& u, double tau0, int nsteps,
               const WeightFn& H = {}) const;

  double dt() const { return dt_; }

private:
  const LinearizedOperator* op_;
  FlowConfig cfg_;
  double dt_;
  Array e_half_, e_full_;  // exp(diag dt/2), exp(diag dt)
};

struct Trajectory {
  std::vector<double> tau;
  std::vector<State> states;
};

/// Flow of d_tau U = L_Ubar U + (H-1) B~(Ubar, U) over [tau0, tau1],
/// recording every cfg.record_stride steps (and always the endpoints).
Trajectory evolve_L(const LinearizedOperator& op, const State& u0, double tau0,
                    double tau1, const FlowConfig& cfg, const WeightFn& H = {});

struct DecayRow {
  double t = 0, value = 0, bound = 0, ratio = 0;
  bool violated = false;
};

/// Ratio table value/bound with violation flags beyond `slack`.
std::vector<DecayRow> decay_report(const std::vector<double>& t,
                                   const std::vector<double>& values,
                                   const std::function<double(double)>& bound,
                                   double slack = 1.05);

/// Least-squares slope of log(value) against log(t).
double loglog_slope(const std::vector<double>& t,
                    const std::vector<double>& values);

}  // namespace ssns
