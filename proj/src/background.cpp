#include "ssns/background.hpp"

#include <cmath>

namespace ssns {

namespace {

double bump(double q) {  // exp(-1/(1-q)) for q < 1, else 0
  return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
}

}  // namespace

VectorField make_background(GridPtr grid, const FlowFamily& family) {
  const Grid& g = *grid;
  require(g.spec.d == 2, "background: the bump family is 2D");
  require(family.m >= 2, "background: m must be >= 2");
  const double R = family.R > 0 ? family.R : 0.25 * g.spec.L;
  require(R <= 0.25 * g.spec.L + 1e-12,
          "background: support radius must satisfy R <= L/4");

  Array psi(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.xi(0)[j], y = g.xi(1)[j];
    const double r2 = (x * x + y * y) / (R * R);
    if (r2 >= 1.0) {
      psi[j] = 0.0;
      continue;
    }
    // (r/R)^m cos(m theta) = Re[((x + i y)/R)^m], entire in (x, y).
    const Complex zm = std::pow(Complex(x / R, y / R), family.m);
    psi[j] = family.A0 * bump(r2) * zm.real();
  }
  CArray psic = real_to_coeffs(g, psi);
  State u(2);
  u[0] = -derivative(g, psic, 1);
  u[1] = derivative(g, psic, 0);
  return VectorField::from_coeffs(grid, std::move(u));
}

VectorField make_background_3d(GridPtr grid, double R, double A0) {
  const Grid& g = *grid;
  require(g.spec.d == 3, "background_3d: d must be 3");
  require(R > 0 && R <= 0.25 * g.spec.L + 1e-12,
          "background_3d: support radius must satisfy R <= L/4");
  // Vector potential (0, 0, phi) with phi = A0 * x * bump(r^2/R^2):
  // U = curl A = (d_y phi, -d_x phi, 0).
  Array phi(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.xi(0)[j], y = g.xi(1)[j], z = g.xi(2)[j];
    phi[j] = A0 * (x / R) * bump((x * x + y * y + z * z) / (R * R));
  }
  CArray phic = real_to_coeffs(g, phi);
  State u(3);
  u[0] = derivative(g, phic, 1);
  u[1] = -derivative(g, phic, 0);
  u[2] = CArray::Zero(g.size());
  return VectorField::from_coeffs(grid, std::move(u));
}

VectorField forcing_F0(const LinearizedOperator& op) {
  const VectorField& ub = op.background();
  require(!ub.empty(), "forcing_F0: operator has no background");
  State f = op.apply_Palpha(ub.coeffs());
  add_scaled(f, 1.0, op.bilinear(ub.coeffs(), ub.coeffs()));
  for (auto& c : f) c = -c;
  return VectorField::from_coeffs(op.grid(), std::move(f));
}

double forcing_decay_exponent(const std::vector<double>& t,
                              const std::vector<double>& l2_norms) {
  for (double v : l2_norms)
    require(v > 0.0, "forcing_decay_exponent: nonpositive norm sample");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  require(t.size() == l2_norms.size() && t.size() >= 2,
          "forcing_decay_exponent: need at least two samples");
  for (size_t i = 0; i < t.size(); ++i) {
    const double x = std::log(t[i]), y = std::log(l2_norms[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double spectral_tail_excess(const VectorField& u) {
  const Grid& g = *u.grid();
  const double kmid = 0.5 * kPi / g.spec.L * (g.spec.n / 2);
  // C calibrated at the mid band; exceedance measured beyond it.
  double C = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    const CArray& co = u.coeff(c);
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double k = std::sqrt(g.kmag2()[j]);
      if (k >= 0.9 * kmid && k <= 1.1 * kmid)
        C = std::max(C, std::abs(co[j]) * std::pow(k, 8.0));
    }
  }
  double excess = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    const CArray& co = u.coeff(c);
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double k = std::sqrt(g.kmag2()[j]);
      if (k > 1.1 * kmid && C > 0)
        excess = std::max(excess, std::abs(co[j]) * std::pow(k, 8.0) / C);
    }
  }
  return excess;
}

}  // namespace ssns
