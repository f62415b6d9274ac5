#pragma once

#include <optional>

#include "ssns/background.hpp"
#include "ssns/semigroup.hpp"

namespace ssns {

/// Refined eigenpair of the discrete linearized operator.
struct Eigenpair {
  Complex z{0.0, 0.0};   // eigenvalue, per-tau units
  ComplexField eta;      // eigenfunction, ||eta||_{L2} = 1
  double residual = 1.0; // ||L eta - z eta|| / ||eta||
  double t0 = 1.0;       // flow-map horizon that produced the guess
  bool converged = false;

  State eta_state() const { return eta.state(); }
};

struct RitzPair {
  Complex lambda;        // eigenvalue of the time-t0 flow map
  double residual_estimate = 0.0;
  State vec;             // complex Ritz vector
};

struct ArnoldiResult {
  std::vector<RitzPair> ritz;  // sorted by |lambda| descending
  double t0 = 1.0;
  int matvecs = 0;
  int restarts = 0;
};

struct SpectrumConfig {
  double t0 = 1.0;       // flow-map horizon
  int krylov = 28;       // Krylov dimension
  double dt = 4e-3;      // stepper dt for the flow map
  std::uint64_t seed = 7;
  int max_restarts = 3;  // on Krylov breakdown
};

/// Leading eigenvalues of e^{t0 L} by matrix-free Arnoldi; the matvec is the
/// time-t0 flow of evolve_L.
ArnoldiResult flow_map_spectrum(const LinearizedOperator& op,
                                const SpectrumConfig& cfg);

/// w0 = (1/t0) log |lambda_max(e^{t0 L})|.
double growth_bound(const LinearizedOperator& op, const SpectrumConfig& cfg);
double growth_bound(const ArnoldiResult& a);

/// Rayleigh-quotient iteration with GMRES inner solves on the direct
/// operator; residual target 1e-8. Non-convergence returns the best iterate
/// with converged = false.
Eigenpair refine_eigenpair(const LinearizedOperator& op, Complex z_guess,
                           const State& eta_guess, double tol = 1e-8,
                           int max_iter = 40);

/// Leading eigenpair: Arnoldi guess then refinement.
Eigenpair leading_eigenpair(const LinearizedOperator& op,
                            const SpectrumConfig& cfg, double tol = 1e-8);

struct GrowthCurve {
  std::vector<double> betas;
  std::vector<double> w0;
  std::vector<std::optional<Eigenpair>> found_eigs;
  std::vector<std::string> errors;           // per-beta solver failures
  std::optional<std::pair<double, double>> crossing;  // bracketing interval
  double modulus_of_continuity = 0.0;        // max |w0_{i+1} - w0_i|
};

/// w0(beta) for L_{beta g} = P_alpha + beta L'_g over a beta grid in [0, 1].
GrowthCurve beta_sweep(const VectorField& g_field,
                       const std::vector<double>& betas,
                       const SpectrumConfig& cfg,
                       const OperatorSettings& set = {},
                       bool refine_unstable = false);

struct SearchResult {
  bool found = false;
  VectorField Ubar;      // beta* g of the successful candidate
  double beta_star = 0.0;
  double amplitude = 0.0;  // family amplitude of the successful candidate
  Eigenpair eig;
  double w0 = 0.0;
  GrowthCurve curve;     // sweep of the successful (or last) candidate
  std::string report;
};

/// Scan family amplitudes for an unstable background, then bisect beta to
/// land the growth bound in (A/2, A). Failure is an explicit report, not an
/// error: the paper guarantees existence only for its specific profile.
SearchResult unstable_search(GridPtr grid, FlowFamily family,
                             const std::vector<double>& amplitudes,
                             double a_target_max, const SpectrumConfig& cfg,
                             const OperatorSettings& set = {});

/// Dense assembly of the projected operator P L P on the coefficient basis;
/// small-grid oracle for the matrix-free path (O(N^2) applications).
Eigen::MatrixXcd assemble_dense(const LinearizedOperator& op);

}  // namespace ssns
