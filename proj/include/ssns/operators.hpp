#pragma once

#include "ssns/calculus.hpp"

namespace ssns {

struct OperatorSettings {
  double nu = 1.0;      // coefficient of Lambda^alpha
  bool dealias = true;  // 2/3 rule on quadratic products; off = exact algebra
  bool window = true;   // windowed coordinate multiplier chi(xi) xi
  bool sponge = true;   // taper damping (zero on the identity region)
  bool project = true;  // outer Leray projection of the non-diagonal part
};

/// The linearization L_Ubar = P_alpha + B~(Ubar, .) around a steady
/// divergence-free background, together with its pieces. Immutable after
/// construction; apply is pure and reentrant. All applications are C-linear,
/// so complex states (eigenfunctions) go through the same code path.
class LinearizedOperator {
public:
  LinearizedOperator(GridPtr grid, VectorField Ubar, OperatorSettings s = {});

  const GridPtr& grid() const { return grid_; }
  const VectorField& background() const { return Ubar_; }
  const OperatorSettings& settings() const { return set_; }
  bool has_background() const { return has_Ubar_; }

  /// Diagonal-in-k part (alpha-1)/alpha - nu |k|^alpha, shared by all
  /// components; the integrating-factor piece of the time steppers.
  const Array& diag() const { return diag_; }

  /// B(u, v) = -P(u . grad v).
  State bilinear(const State& u, const State& v) const;
  /// B~(u, v) = B(u, v) + B(v, u).
  State bilinear_sym(const State& u, const State& v) const;

  /// P_alpha u = ((alpha-1)/alpha) u + (1/alpha) xi.grad u + nu Lambda^a u,
  /// with the windowed multiplier and sponge on the taper.
  State apply_Palpha(const State& u) const;
  /// L'_Ubar u = -P(Ubar.grad u + u.grad Ubar) = B~(Ubar, u).
  State apply_Lprime(const State& u) const;
  /// L_Ubar u = P_alpha u + L'_Ubar u.
  State apply_L(const State& u) const;

  /// Everything except diag(): one fused evaluation
  ///   P[(1/alpha) psi.grad u - sigma u] + h_weight * B~(Ubar, u).
  /// h_weight = 1 gives L - diag; the time-dependent weight realizes
  /// d_tau u = L u + (H-1) B~(Ubar, u).
  State apply_offdiag(const State& u, double h_weight = 1.0) const;

  // VectorField wrappers for the real-field public surface.
  VectorField apply_Palpha(const VectorField& u) const;
  VectorField apply_L(const VectorField& u) const;
  VectorField bilinear(const VectorField& u, const VectorField& v) const;
  VectorField bilinear_sym(const VectorField& u, const VectorField& v) const;

  /// L-inf of the field outside the window identity region relative to its
  /// global L-inf (support-breach diagnostic).
  double support_breach(const State& u) const;

private:
  State real_field(const VectorField& f) const;
  GridPtr grid_;
  VectorField Ubar_;
  OperatorSettings set_;
  bool has_Ubar_ = false;
  Array diag_;
  std::vector<Array> ubar_real_;              // Ubar components, samples
  std::vector<std::vector<Array>> dubar_real_; // [axis][comp] grad Ubar samples
};

/// Free-function spellings of the spec surface.
VectorField advect_project(const LinearizedOperator& op, const VectorField& u,
                           const VectorField& v);
VectorField bilinear_sym(const LinearizedOperator& op, const VectorField& u,
                         const VectorField& v);

/// 2D vorticity-side operators: the conjugation Curl L'_g Curl^-1 and its
/// K/M split (S = 0 in 2D). Scalar states are single coefficient arrays of
/// zero-mean vorticities.
struct VorticitySplit {
  CArray K;     // -(Curl^-1 w) . grad Curl g
  CArray M;     // -g . grad w
  CArray conj;  // Curl(L'_g(Curl^-1 w))
};
VorticitySplit vorticity_conjugate(const LinearizedOperator& op_g,
                                   const CArray& omega);

}  // namespace ssns
