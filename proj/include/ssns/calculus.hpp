#pragma once

#include <vector>

#include "ssns/field.hpp"

namespace ssns {

// State-level kernels. All are C-linear in the state, so they apply verbatim
// to complex fields (eigenfunctions).

/// Multiply coefficients by -|k|^alpha (Lambda^alpha; zero mode unchanged).
void fractional_laplacian_inplace(const Grid& g, State& u, double alpha);
State fractional_laplacian_state(const Grid& g, const State& u, double alpha);

/// Leray projection v -> v - k (k.v)/|k|^2; zero mode passed through.
void leray_inplace(const Grid& g, State& u);
State leray(const Grid& g, const State& u);

/// d/dxi_axis in coefficient space (Nyquist zeroed).
CArray derivative(const Grid& g, const CArray& c, int axis);

void dealias_inplace(const Grid& g, State& u);

/// (a.grad b)_i = sum_j a_j d_j b_i, products in real space, optionally
/// dealiased (2/3 rule). Inputs/result in coefficient space.
State advect(const Grid& g, const State& a, const State& b, bool dealias);

/// Pointwise multiply every component by a real sample-space array.
State multiply_real(const Grid& g, const State& u, const Array& f);

// VectorField conveniences.
VectorField fractional_laplacian(const VectorField& u, double alpha);
VectorField fractional_laplacian(const VectorField& u);  // grid's alpha
VectorField leray_project(const VectorField& u);

// 2D scalar (vorticity) calculus.
CArray curl2d(const Grid& g, const State& u);            // d1 u2 - d2 u1
State curl2d_inverse(const Grid& g, const CArray& omega); // zero-mean stream fn

/// Norm report per the composite-norm convention: vector magnitude is
/// Euclidean across components, gradients Frobenius.
struct NormRequest {
  std::vector<double> hdot_s;  // homogeneous Sobolev orders
  std::vector<double> lp_p;    // Lebesgue exponents, p in [1, inf)
  double p0 = 4.0;             // W^{1,p0} entering the V' norm
};

struct NormReport {
  double l2 = 0.0;
  double l2_quadrature = 0.0;  // real-space trapezoid cross-check
  std::vector<std::pair<double, double>> hdot;  // (s, value)
  std::vector<std::pair<double, double>> lp;    // (p, value)
  double w1p = 0.0;     // ||u||_{L^p0} + ||grad u||_{L^p0}
  double vprime = 0.0;  // l2 + w1p(p0) + hdot(max(alpha/2, 1))
};

NormReport norms(const VectorField& u, const NormRequest& req);

double norm_l2(const VectorField& u);
double norm_hdot(const VectorField& u, double s);
double norm_lp(const VectorField& u, double p);
double norm_w1p(const VectorField& u, double p);
double norm_vprime(const Grid& g, const State& u, double p0);

}  // namespace ssns
