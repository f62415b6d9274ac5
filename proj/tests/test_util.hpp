#pragma once

#include <cmath>

#include "ssns/calculus.hpp"
#include "ssns/rng.hpp"

namespace ssns::test {

/// Random real divergence-free field, effectively compactly supported and
/// band-limited: the curl of a few randomly placed Gaussian bump potentials
/// (spectra decay like exp(-(k sigma)^2/2), spatial tails below 1e-12 at the
/// identity-region edge). Exactly divergence-free in the discrete calculus.
inline VectorField random_compact_divfree(GridPtr grid, std::uint64_t seed,
                                          int bumps = 3,
                                          double sigma_frac = 0.07) {
  const Grid& g = *grid;
  const int d = g.spec.d;
  Rng rng(seed);
  const double L = g.spec.L;
  const int npot = d == 2 ? 1 : 3;  // stream function / vector potential
  std::vector<Array> pot(npot, Array::Zero(g.size()));
  for (int p = 0; p < npot; ++p)
    for (int bidx = 0; bidx < bumps; ++bidx) {
      const double a = rng.normal();
      std::vector<double> c(d);
      for (int ax = 0; ax < d; ++ax)
        c[ax] = sigma_frac * L * (2 * rng.uniform01() - 1);
      const double s = (1.0 + 0.25 * rng.uniform01()) * sigma_frac * L;
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        double q = 0.0;
        for (int ax = 0; ax < d; ++ax) {
          const double dx = g.xi(ax)[j] - c[ax];
          q += dx * dx;
        }
        pot[p][j] += a * std::exp(-0.5 * q / (s * s));
      }
    }
  State u(d);
  if (d == 2) {
    CArray psi = real_to_coeffs(g, pot[0]);
    u[0] = -derivative(g, psi, 1);
    u[1] = derivative(g, psi, 0);
  } else {
    std::vector<CArray> A(3);
    for (int p = 0; p < 3; ++p) A[p] = real_to_coeffs(g, pot[p]);
    u[0] = derivative(g, A[2], 1) - derivative(g, A[1], 2);
    u[1] = derivative(g, A[0], 2) - derivative(g, A[2], 0);
    u[2] = derivative(g, A[1], 0) - derivative(g, A[0], 1);
  }
  double nn = norm_l2(g, u);
  for (auto& c : u) c /= nn;
  return VectorField::from_coeffs(grid, std::move(u));
}

/// Field with a single Fourier mode k = (pi/L) m placed in one component
/// (conjugate pair added so the field is real).
inline VectorField single_mode(GridPtr grid, const std::vector<int>& m,
                               int component, Complex amplitude) {
  const Grid& g = *grid;
  State u(g.spec.d, CArray::Zero(g.size()));
  Eigen::Index idx = 0, idx_conj = 0;
  for (int a = 0; a < g.spec.d; ++a) {
    int mm = m[a] >= 0 ? m[a] : m[a] + g.spec.n;
    int mc = (g.spec.n - mm) % g.spec.n;
    idx = idx * g.spec.n + mm;
    idx_conj = idx_conj * g.spec.n + mc;
  }
  u[component][idx] = 0.5 * amplitude;
  u[component][idx_conj] += 0.5 * std::conj(amplitude);
  return VectorField::from_coeffs(grid, std::move(u));
}

/// Brute-force Fourier synthesis at the grid points; O(N^2) oracle for the
/// fast transform path.
inline Array brute_force_synthesis(const Grid& g, const CArray& coeffs) {
  const int n = g.spec.n, d = g.spec.d;
  Array out(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    Complex acc = 0.0;
    for (Eigen::Index q = 0; q < g.size(); ++q) {
      double phase = 0.0;
      Eigen::Index jj = j, qq = q;
      for (int a = d - 1; a >= 0; --a) {
        const int ja = static_cast<int>(jj % n);
        const int ma = static_cast<int>(qq % n);
        jj /= n;
        qq /= n;
        phase += 2.0 * kPi * ja * ma / n;
      }
      acc += coeffs[q] * std::exp(Complex(0.0, phase));
    }
    out[j] = acc.real();
  }
  return out;
}

inline double rel_diff(const VectorField& a, const VectorField& b) {
  State d = a.coeffs();
  add_scaled(d, -1.0, b.coeffs());
  const double nb = norm_l2(b);
  return norm_l2(*a.grid(), d) / (nb > 0 ? nb : 1.0);
}

}  // namespace ssns::test
