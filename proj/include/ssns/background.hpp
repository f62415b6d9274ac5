#pragma once

#include "ssns/operators.hpp"

namespace ssns {

/// Compactly supported 2D background family: stream function
///   psi(r, theta) = A0 (r/R)^m exp(-1/(1 - (r/R)^2)) cos(m theta),  r < R,
/// zero outside; velocity grad^perp psi is divergence-free by construction.
/// The (r/R)^m factor makes the multipole smooth at the origin.
struct FlowFamily {
  int m = 2;          // angular symmetry order >= 2
  double R = 0.0;     // support radius; 0 means L/4
  double A0 = 1.0;    // amplitude
};

VectorField make_background(GridPtr grid, const FlowFamily& family);

/// Compactly supported 3D divergence-free test field (curl of a bump vector
/// potential); exercises the d = 3 operators and the forcing-decay
/// diagnostic, not the eigenvalue search.
VectorField make_background_3d(GridPtr grid, double R, double A0);

/// F0 = -P_alpha Ubar - B(Ubar, Ubar): the forcing that makes Ubar a steady
/// state of the similarity equation; divergence-free without projection
/// because div(xi . grad Ubar) = 0 for divergence-free Ubar.
VectorField forcing_F0(const LinearizedOperator& op);

/// Least-squares log-log slope of a ||f(t)||_{L2} profile; rejects
/// nonpositive samples. Compare against (2 + d - 4 alpha)/(2 alpha).
double forcing_decay_exponent(const std::vector<double>& t,
                              const std::vector<double>& l2_norms);
inline double forcing_decay_target(int d, double alpha) {
  return (2.0 + d - 4.0 * alpha) / (2.0 * alpha);
}

/// Largest relative deviation of the spectral tail from C |k|^-8 beyond the
/// mid band; the family's smoothness diagnostic.
double spectral_tail_excess(const VectorField& u);

}  // namespace ssns
