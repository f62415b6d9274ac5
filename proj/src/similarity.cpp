#include "ssns/similarity.hpp"

#include <cmath>

namespace ssns {

namespace {

// 1D evaluation matrix E[j][m] = exp(i k_m (lambda xi_j + L)).
Eigen::MatrixXcd eval_matrix(const Grid& g, double lambda) {
  const int n = g.spec.n;
  const double L = g.spec.L;
  Eigen::MatrixXcd E(n, n);
  for (int j = 0; j < n; ++j) {
    const double x = lambda * (-L + j * (2.0 * L / n)) + L;
    for (int m = 0; m < n; ++m) {
      const int mm = (m < n / 2) ? m : m - n;
      E(j, m) = std::exp(Complex(0.0, kPi / L * mm * x));
    }
  }
  return E;
}

}  // namespace

State dilate(const Grid& g, const State& u, double lambda,
             ResampleReport* report) {
  require(lambda > 0.0, "dilate: lambda must be positive");
  const int n = g.spec.n, d = g.spec.d;
  const double L = g.spec.L;
  const Eigen::MatrixXcd E = eval_matrix(g, lambda);

  State out(u.size());
  for (size_t c = 0; c < u.size(); ++c) {
    if (d == 2) {
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
          C(u[c].data(), n, n);
      Eigen::MatrixXcd S = E * C * E.transpose();
      CArray flat(g.size());
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1) flat[i0 * n + i1] = S(i0, i1);
      out[c] = std::move(flat);
    } else {
      // Contract one axis at a time: samples = E (x) E (x) E applied to coeffs.
      CArray work = u[c];
      Eigen::Index inner = 1;
      for (int axis = d - 1; axis >= 0; --axis) {
        const Eigen::Index block = inner * n;
        CArray next(g.size());
        Eigen::VectorXcd line(n);
        for (Eigen::Index b = 0; b < g.size(); b += block)
          for (Eigen::Index off = 0; off < inner; ++off) {
            for (int t = 0; t < n; ++t) line[t] = work[b + off + t * inner];
            Eigen::VectorXcd res = E * line;
            for (int t = 0; t < n; ++t) next[b + off + t * inner] = res[t];
          }
        work = std::move(next);
        inner = block;
      }
      out[c] = std::move(work);
    }
  }

  // Zero samples whose pre-image lambda*xi leaves the primary box.
  double truncated = 0.0;
  if (lambda > 1.0) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      double linf = 0.0;
      for (int a = 0; a < d; ++a)
        linf = std::max(linf, lambda * std::abs(g.xi(a)[j]));
      if (linf > L) {
        for (auto& c : out) {
          truncated = std::max(truncated, std::abs(c[j]));
          c[j] = 0.0;
        }
      }
    }
  }
  for (auto& c : out) dft_forward(d, n, c);

  if (report) {
    report->lambda = lambda;
    report->truncated_linf = truncated;
    double peak = 0.0, tail = 0.0;
    for (size_t c = 0; c < u.size(); ++c) {
      CArray s = to_samples(g, u[c]);
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        double linf = 0.0;
        for (int a = 0; a < d; ++a)
          linf = std::max(linf, std::abs(g.xi(a)[j]));
        double v = std::abs(s[j]);
        peak = std::max(peak, v);
        if (linf > 0.75 * L) tail = std::max(tail, v);
      }
    }
    report->boundary_tail = peak > 0 ? tail / peak : 0.0;
  }
  return out;
}

VectorField similarity_map(const VectorField& f, double t,
                           MapDirection direction, double weight,
                           ResampleReport* report) {
  require(t > 0.0, "similarity_map: t must be positive");
  const Grid& g = *f.grid();
  const double inv_alpha = 1.0 / g.spec.alpha;
  double lambda, amp;
  if (direction == MapDirection::ToSimilarity) {
    lambda = std::pow(t, inv_alpha);       // U(xi) = t^w u(t^{1/alpha} xi)
    amp = std::pow(t, weight);
  } else {
    lambda = std::pow(t, -inv_alpha);      // u(x) = t^{-w} U(t^{-1/alpha} x)
    amp = std::pow(t, -weight);
  }
  State s = dilate(g, f.coeffs(), lambda, report);
  for (auto& c : s) c *= amp;
  return VectorField::from_coeffs(f.grid(), std::move(s));
}

State change_resolution_state(const Grid& from, const Grid& to, const State& u) {
  require(from.spec.d == to.spec.d && from.spec.L == to.spec.L,
          "change_resolution: d and L must match");
  const int d = from.spec.d, nf = from.spec.n, nt = to.spec.n;
  const int keep = std::min(nf, nt) / 2;  // |m| < keep, Nyquist dropped
  State out(u.size(), CArray::Zero(to.size()));
  std::vector<int> m(d, 0);
  for (Eigen::Index jf = 0; jf < from.size(); ++jf) {
    Eigen::Index rem = jf;
    bool ok = true;
    for (int a = d - 1; a >= 0; --a) {
      int ia = static_cast<int>(rem % nf);
      rem /= nf;
      m[a] = ia < nf / 2 ? ia : ia - nf;
      if (std::abs(m[a]) >= keep) { ok = false; break; }
    }
    if (!ok) continue;
    Eigen::Index jt = 0;
    for (int a = 0; a < d; ++a) {
      int ia = m[a] >= 0 ? m[a] : m[a] + nt;
      jt = jt * nt + ia;
    }
    for (size_t c = 0; c < u.size(); ++c) out[c][jt] = u[c][jf];
  }
  return out;
}

VectorField change_resolution(GridPtr to, const VectorField& f) {
  return VectorField::from_coeffs(
      to, change_resolution_state(*f.grid(), *to, f.coeffs()));
}

State rotate_resample(const Grid& g, const State& u, double theta) {
  require(g.spec.d == 2, "rotate_resample: d must be 2");
  const int n = g.spec.n;
  const double L = g.spec.L;
  const double ct = std::cos(theta), st = std::sin(theta);
  Eigen::VectorXcd e0(n), e1(n);
  State out(u.size(), CArray(g.size()));
  std::vector<Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic,
                                             Eigen::Dynamic, Eigen::RowMajor>>>
      mats;
  for (const auto& c : u) mats.emplace_back(c.data(), n, n);
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double x = g.xi(0)[j], y = g.xi(1)[j];
    const double rx = ct * x + st * y, ry = -st * x + ct * y;
    for (int m = 0; m < n; ++m) {
      const int mm = (m < n / 2) ? m : m - n;
      e0[m] = std::exp(Complex(0.0, kPi / L * mm * (rx + L)));
      e1[m] = std::exp(Complex(0.0, kPi / L * mm * (ry + L)));
    }
    for (size_t c = 0; c < u.size(); ++c)
      out[c][j] = e0.transpose() * (mats[c] * e1);
  }
  for (auto& c : out) dft_forward(2, n, c);
  return out;
}

}  // namespace ssns
