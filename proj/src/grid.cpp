#include "ssns/grid.hpp"

#include <cmath>

#include "ssns/fourier.hpp"

namespace ssns {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double a = std::exp(-1.0 / x);
  double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

// Window profile per axis: 1 on |s| <= L/2, 0 for |s| >= 0.96 L.
double chi1(double s, double L) {
  return smoothstep((0.96 * L - std::abs(s)) / (0.46 * L));
}

}  // namespace

Grid::Grid(const GridSpec& s) : spec(s) {
  const int d = s.d, n = s.n;
  const double L = s.L;
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= n;
  vol_cell_ = std::pow(2.0 * L / n, d);
  vol_box_ = std::pow(2.0 * L, d);

  // Per-axis integer frequencies and coordinates, then flattened fields.
  Array m1(n), xi1(n);
  for (int i = 0; i < n; ++i) {
    m1[i] = (i < n / 2) ? i : i - n;
    xi1[i] = -L + i * (2.0 * L / n);
  }

  k_.assign(d, Array(size_));
  xi_.assign(d, Array(size_));
  kmag2_ = Array::Zero(size_);
  kmag2_deriv_ = Array::Zero(size_);
  dealias_ = Array::Ones(size_);
  chi_ = Array::Ones(size_);

  const int mcut = n / 3;  // keep |m| <= n/3
  std::vector<Eigen::Index> stride(d);
  stride[d - 1] = 1;
  for (int a = d - 2; a >= 0; --a) stride[a] = stride[a + 1] * n;

  for (Eigen::Index j = 0; j < size_; ++j) {
    for (int a = 0; a < d; ++a) {
      const int ia = static_cast<int>((j / stride[a]) % n);
      const double m = m1[ia];
      const double kk = kPi / L * m;
      k_[a][j] = (ia == n / 2) ? 0.0 : kk;  // Nyquist zeroed for derivatives
      kmag2_[j] += kk * kk;
      kmag2_deriv_[j] += k_[a][j] * k_[a][j];
      if (std::abs(m) > mcut) dealias_[j] = 0.0;
      xi_[a][j] = xi1[ia];
      chi_[j] *= chi1(xi1[ia], L);
    }
  }

  kalpha_ = Array(size_);
  for (Eigen::Index j = 0; j < size_; ++j)
    kalpha_[j] = kmag2_[j] > 0 ? std::pow(kmag2_[j], 0.5 * s.alpha) : 0.0;

  psi_.assign(d, Array(size_));
  for (int a = 0; a < d; ++a) psi_[a] = chi_ * xi_[a];

  // Sponge strength from the measured div(psi) excursion in the taper: the
  // taper must not host modes with growth above the core's -(2+d-2a)/(2a).
  Array divpsi = Array::Zero(size_);
  for (int a = 0; a < d; ++a) {
    CArray c = real_to_coeffs(*this, psi_[a]);
    c *= k_[a].cast<Complex>() * Complex(0.0, 1.0);
    divpsi += to_real_samples(*this, c);
  }
  const double c0 = (s.alpha - 1.0) / s.alpha;
  const double worst = std::max(0.0, -divpsi.minCoeff());
  sigma0_ = std::max(2.0, c0 + worst / (2.0 * s.alpha) + 1.0);
  sponge_ = sigma0_ * (1.0 - chi_).square();
}

Array Grid::kpow(double p) const {
  Array out(size_);
  for (Eigen::Index j = 0; j < size_; ++j)
    out[j] = kmag2_[j] > 0 ? std::pow(kmag2_[j], 0.5 * p) : 0.0;
  return out;
}

GridPtr Grid::make(const GridSpec& spec, GridUse use) {
  require(spec.d == 2 || spec.d == 3, "grid: d must be 2 or 3");
  require(power_of_two(spec.n) && spec.n >= 8,
          "grid: n must be a power of two >= 8");
  require(spec.L > 0.0, "grid: L must be positive");
  require(spec.alpha > 0.0 && spec.alpha <= 2.0,
          "grid: alpha must lie in (0, 2]");
  if (use == GridUse::Scenario) {
    const double lo = 0.5 + spec.d / 4.0;
    const double hi = 1.0 + spec.d / 2.0;
    require(spec.alpha > lo && spec.alpha < hi,
            "grid: scenario use requires alpha in (1/2 + d/4, 1 + d/2)");
  }
  return GridPtr(new Grid(spec));
}

GridPtr make_grid(int d, int n, double L, double alpha, bool dealias,
                  GridUse use) {
  return Grid::make(GridSpec{d, n, L, alpha, dealias}, use);
}

}  // namespace ssns
