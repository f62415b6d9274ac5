#pragma once

#include "ssns/scenario.hpp"

namespace ssns {

/// Time-dependent data of the abstract equation
///   d_tau U = L U + H B(U, U) + B~(U, Utilde) + Ftilde.
struct PicardData {
  std::function<State(double)> Utilde;  // {} means 0
  std::function<State(double)> Ftilde;  // {} means 0
  WeightFn H;                           // {} means 1
};

struct PicardConfig {
  double tau_min = 0.0;  // 0: derived from the tail rule below
  double T0 = 0.0;
  double dtau = 0.1;
  double a0 = 0.04;      // growth bound / Re z of the eigenpair
  double eps = 0.0;      // 0: delta0/2 from the configured p0, eps0
  double a1 = 0.0;       // 0: a0 + eps/2
  double p0 = 4.8;
  double eps0 = 0.5;
  double tol = 1e-8;     // final weighted update
  int max_iter = 25;
  int max_shrink = 5;    // T0-shrink retries when the contraction factor >= 1
  double shrink_step = 2.0;
  int substeps = 2;      // RK4 substeps per dtau for e^{dtau L}
  double tail_target = 1e-10;
};

/// delta0 = min{(2+d-2alpha)/(4alpha), 1 - (p0+d)/(alpha p0), eps0}.
double picard_delta0(int d, double alpha, double p0, double eps0);

struct PicardResult {
  bool converged = false;
  int iterations = 0;
  double contraction = 0.0;    // last ratio of successive update norms
  double final_update = 0.0;   // weighted norm of the last update
  double tail_estimate = 0.0;  // truncation estimate at tau_min
  double T0_effective = 0.0;
  int shrinks = 0;
  std::vector<double> tau;
  std::vector<State> U;
  std::vector<double> weighted_vprime;  // e^{-a1 tau} ||U||_{V'}
  std::vector<double> update_history;   // weighted update per iteration
  PicardConfig cfg;
};

/// Fixed-point iteration on the truncated Duhamel map
///   U <- int_{tau_min}^tau e^{(tau-s)L} (H B(U,U) + B~(U, Utilde) + Ftilde) ds
/// (composite trapezoid, semigroup factors by checkpointed stepping).
PicardResult picard_solve(const LinearizedOperator& op, const PicardData& data,
                          const PicardConfig& cfg);

struct SecondSolution {
  PicardResult up;                    // the U_p leg
  std::vector<double> weighted_gap;   // e^{-a0 tau} ||(Ul + Up) - Ur||
  std::vector<double> weighted_ur;    // e^{-a0 tau} ||Ur||
  double march_resid_r = 0.0;   // marching-form residual of U_r
  double march_resid_2 = 0.0;   // marching-form residual of Ul + Up
  double mode_floor = 0.0;      // min over phase of ||Re(e^{i phi} eta)||
  double ul_amplitude = 0.0;
};

/// Solve the U_p system (forcing F_p = H B(Ul,Ul) + B~(Ul, Utilde) + Ftilde,
/// drift Utilde + H Ul) and assemble the second solution Ul + Up sharing the
/// discrete equation with U_r.
SecondSolution second_solution(const LinearizedOperator& op,
                               const PicardResult& ur, const Eigenpair& eig,
                               double ul_amplitude, const PicardData& data);

/// Local (per-step) residual of the marching trapezoid recursion
///   X_{i+1} = e^{dtau L}(X_i + dtau/2 Q_i) + dtau/2 Q_{i+1},
/// weighted by e^{-a1 tau}/dtau and normalized by the trajectory scale.
double march_residual(const LinearizedOperator& op,
                      const std::vector<double>& tau,
                      const std::vector<State>& X,
                      const std::function<State(double, const State&)>& Q,
                      double a1, int substeps);

}  // namespace ssns
