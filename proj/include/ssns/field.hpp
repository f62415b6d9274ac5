#pragma once

#include <optional>
#include <vector>

#include "ssns/fourier.hpp"
#include "ssns/grid.hpp"

namespace ssns {

/// Spectral state: d complex coefficient arrays, one per component. The raw
/// currency of the integrators and operators; may represent a real field
/// (conjugate-symmetric) or a genuinely complex one (eigenfunctions).
using State = std::vector<CArray>;

State zero_state(const Grid& g);
State axpy(const State& x, double a, const State& y);  // x + a*y
void add_scaled(State& x, Complex a, const State& y);
State scaled(const State& x, Complex a);
/// L2 inner product (2L)^d sum_k conj(x).y, summed over components.
Complex dot(const Grid& g, const State& x, const State& y);
double norm_l2(const Grid& g, const State& x);

/// A d-component real vector field with synchronized sample/coefficient
/// representations. Whichever representation the field was built from is kept
/// verbatim (SSNF round trips must be bit-exact); the other is derived.
class VectorField {
public:
  VectorField() = default;

  static VectorField from_real(GridPtr g, std::vector<Array> comps);
  static VectorField from_coeffs(GridPtr g, State coeffs);

  const GridPtr& grid() const { return grid_; }
  int components() const { return grid_ ? grid_->spec.d : 0; }
  bool empty() const { return grid_ == nullptr; }

  const CArray& coeff(int c) const;
  const Array& real(int c) const;
  const State& coeffs() const;

  /// max_k |k.c(k)| / max_k |c(k)|; 0 for the zero field.
  double divergence_residual() const;
  bool is_divfree(double tol = 1e-10) const {
    return divergence_residual() <= tol;
  }

  /// L-inf of the field outside |xi|_inf > r, relative to the global L-inf.
  double support_excess(double r) const;

private:
  GridPtr grid_;
  mutable State coeffs_;
  mutable std::vector<Array> real_;
  mutable bool have_coeffs_ = false;
  mutable bool have_real_ = false;
};

/// Complex vector field stored as real and imaginary parts, per the on-disk
/// format used for eigenfunctions.
struct ComplexField {
  VectorField re, im;

  State state() const;  // re + i*im as a complex State
  static ComplexField from_state(GridPtr g, const State& z);
};

}  // namespace ssns
