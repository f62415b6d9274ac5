#include "ssns/calculus.hpp"

#include <cmath>

namespace ssns {

void fractional_laplacian_inplace(const Grid& g, State& u, double alpha) {
  Array mult = (alpha == g.spec.alpha) ? g.kalpha() : g.kpow(alpha);
  for (auto& c : u) c *= -mult.cast<Complex>();
}

State fractional_laplacian_state(const Grid& g, const State& u, double alpha) {
  State out = u;
  fractional_laplacian_inplace(g, out, alpha);
  return out;
}

void leray_inplace(const Grid& g, State& u) {
  const int d = g.spec.d;
  CArray kdotu = CArray::Zero(g.size());
  for (int c = 0; c < d; ++c) kdotu += g.k(c).cast<Complex>() * u[c];
  const Array& k2 = g.kmag2_deriv();
  Array inv = (k2 > 0.0).select(k2.inverse(), Array::Zero(g.size()));
  kdotu *= inv.cast<Complex>();
  for (int c = 0; c < d; ++c) u[c] -= g.k(c).cast<Complex>() * kdotu;
}

State leray(const Grid& g, const State& u) {
  State out = u;
  leray_inplace(g, out);
  return out;
}

CArray derivative(const Grid& g, const CArray& c, int axis) {
  return Complex(0, 1) * g.k(axis).cast<Complex>() * c;
}

void dealias_inplace(const Grid& g, State& u) {
  for (auto& c : u) c *= g.dealias_mask().cast<Complex>();
}

State advect(const Grid& g, const State& a, const State& b, bool dealias) {
  const int d = g.spec.d;
  State af = a, out(d);
  if (dealias) dealias_inplace(g, af);
  std::vector<CArray> areal(d);
  for (int c = 0; c < d; ++c) areal[c] = to_samples(g, af[c]);
  for (int i = 0; i < d; ++i) {
    CArray acc = CArray::Zero(g.size());
    for (int j = 0; j < d; ++j) {
      CArray dbi = derivative(g, b[i], j);
      if (dealias) dbi *= g.dealias_mask().cast<Complex>();
      acc += areal[j] * to_samples(g, dbi);
    }
    dft_forward(g.spec.d, g.spec.n, acc);
    if (dealias) acc *= g.dealias_mask().cast<Complex>();
    out[i] = std::move(acc);
  }
  return out;
}

State multiply_real(const Grid& g, const State& u, const Array& f) {
  State out(u.size());
  for (size_t c = 0; c < u.size(); ++c) {
    CArray s = to_samples(g, u[c]);
    s *= f.cast<Complex>();
    dft_forward(g.spec.d, g.spec.n, s);
    out[c] = std::move(s);
  }
  return out;
}

VectorField fractional_laplacian(const VectorField& u, double alpha) {
  require(alpha > 0.0, "fractional_laplacian: alpha must be positive");
  return VectorField::from_coeffs(
      u.grid(), fractional_laplacian_state(*u.grid(), u.coeffs(), alpha));
}

VectorField fractional_laplacian(const VectorField& u) {
  return fractional_laplacian(u, u.grid()->spec.alpha);
}

VectorField leray_project(const VectorField& u) {
  return VectorField::from_coeffs(u.grid(), leray(*u.grid(), u.coeffs()));
}

CArray curl2d(const Grid& g, const State& u) {
  require(g.spec.d == 2, "curl2d: d must be 2");
  return derivative(g, u[1], 0) - derivative(g, u[0], 1);
}

State curl2d_inverse(const Grid& g, const CArray& omega) {
  require(g.spec.d == 2, "curl2d_inverse: d must be 2");
  require(std::abs(omega[0]) <= 1e-10 * (omega.abs().maxCoeff() + 1e-300),
          "curl2d_inverse: vorticity must have zero mean");
  // U = grad^perp psi with psi_hat = -omega_hat / |k|^2.
  const Array& k2 = g.kmag2_deriv();
  Array inv = (k2 > 0.0).select(k2.inverse(), Array::Zero(g.size()));
  CArray psi = -omega * inv.cast<Complex>();
  State u(2);
  u[0] = -derivative(g, psi, 1);
  u[1] = derivative(g, psi, 0);
  return u;
}

namespace {

// Pointwise Euclidean magnitude over components plus, optionally, the
// Frobenius magnitude of the Jacobian.
Array magnitude(const VectorField& u, bool gradient) {
  const Grid& g = *u.grid();
  Array m = Array::Zero(g.size());
  for (int c = 0; c < u.components(); ++c) {
    if (!gradient) {
      m += u.real(c).square();
    } else {
      for (int a = 0; a < g.spec.d; ++a)
        m += to_real_samples(g, derivative(g, u.coeff(c), a)).square();
    }
  }
  return m.sqrt();
}

double lp_of(const Grid& g, const Array& mag, double p) {
  return std::pow((mag.pow(p)).sum() * g.cell_volume(), 1.0 / p);
}

}  // namespace

double norm_l2(const VectorField& u) {
  return norm_l2(*u.grid(), u.coeffs());
}

double norm_hdot(const VectorField& u, double s) {
  const Grid& g = *u.grid();
  Array w = g.kpow(2.0 * s);
  double acc = 0.0;
  for (int c = 0; c < u.components(); ++c)
    acc += (w * u.coeff(c).abs2()).sum();
  return std::sqrt(acc * g.box_volume());
}

double norm_lp(const VectorField& u, double p) {
  require(p >= 1.0, "norms: p must be >= 1");
  return lp_of(*u.grid(), magnitude(u, false), p);
}

double norm_w1p(const VectorField& u, double p) {
  return norm_lp(u, p) + lp_of(*u.grid(), magnitude(u, true), p);
}

double norm_vprime(const Grid& g, const State& u, double p0) {
  // Callers hand complex states; V' is evaluated on |.| magnitudes, which for
  // a complex state means the modulus field (used by the Picard weights).
  Array mag = Array::Zero(g.size());
  Array gmag = Array::Zero(g.size());
  double l2acc = 0.0, hacc = 0.0;
  const double s = std::max(0.5 * g.spec.alpha, 1.0);
  Array w = g.kpow(2.0 * s);
  for (size_t c = 0; c < u.size(); ++c) {
    mag += to_samples(g, u[c]).abs2();
    l2acc += u[c].abs2().sum();
    hacc += (w * u[c].abs2()).sum();
    for (int a = 0; a < g.spec.d; ++a)
      gmag += to_samples(g, derivative(g, u[c], a)).abs2();
  }
  mag = mag.sqrt();
  gmag = gmag.sqrt();
  const double l2 = std::sqrt(l2acc * g.box_volume());
  const double hs = std::sqrt(hacc * g.box_volume());
  const double w1p = lp_of(g, mag, p0) + lp_of(g, gmag, p0);
  return l2 + w1p + hs;
}

NormReport norms(const VectorField& u, const NormRequest& req) {
  const Grid& g = *u.grid();
  NormReport r;
  r.l2 = norm_l2(u);
  Array mag = magnitude(u, false);
  r.l2_quadrature = std::sqrt(mag.square().sum() * g.cell_volume());
  for (double s : req.hdot_s) r.hdot.emplace_back(s, norm_hdot(u, s));
  for (double p : req.lp_p) {
    require(p >= 1.0, "norms: p must be >= 1");
    r.lp.emplace_back(p, lp_of(g, mag, p));
  }
  r.w1p = norm_w1p(u, req.p0);
  r.vprime = r.l2 + r.w1p + norm_hdot(u, std::max(0.5 * g.spec.alpha, 1.0));
  return r;
}

}  // namespace ssns
