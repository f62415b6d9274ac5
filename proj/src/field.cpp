#include "ssns/field.hpp"

namespace ssns {

State zero_state(const Grid& g) {
  return State(g.spec.d, CArray::Zero(g.size()));
}

State axpy(const State& x, double a, const State& y) {
  State out(x.size());
  for (size_t c = 0; c < x.size(); ++c) out[c] = x[c] + a * y[c];
  return out;
}

void add_scaled(State& x, Complex a, const State& y) {
  for (size_t c = 0; c < x.size(); ++c) x[c] += a * y[c];
}

State scaled(const State& x, Complex a) {
  State out(x.size());
  for (size_t c = 0; c < x.size(); ++c) out[c] = a * x[c];
  return out;
}

Complex dot(const Grid& g, const State& x, const State& y) {
  Complex s = 0.0;
  for (size_t c = 0; c < x.size(); ++c)
    s += (x[c].conjugate() * y[c]).sum();
  return s * g.box_volume();
}

double norm_l2(const Grid& g, const State& x) {
  double s = 0.0;
  for (const auto& c : x) s += c.abs2().sum();
  return std::sqrt(s * g.box_volume());
}

VectorField VectorField::from_real(GridPtr g, std::vector<Array> comps) {
  require(static_cast<int>(comps.size()) == g->spec.d,
          "field: component count must equal d");
  for (auto& a : comps)
    require(a.size() == g->size() && a.allFinite(),
            "field: component size mismatch or non-finite data");
  VectorField f;
  f.grid_ = std::move(g);
  f.real_ = std::move(comps);
  f.have_real_ = true;
  return f;
}

VectorField VectorField::from_coeffs(GridPtr g, State coeffs) {
  require(static_cast<int>(coeffs.size()) == g->spec.d,
          "field: component count must equal d");
  for (auto& a : coeffs)
    require(a.size() == g->size() && a.allFinite(),
            "field: component size mismatch or non-finite data");
  VectorField f;
  f.grid_ = std::move(g);
  f.coeffs_ = std::move(coeffs);
  f.have_coeffs_ = true;
  return f;
}

const State& VectorField::coeffs() const {
  if (!have_coeffs_) {
    coeffs_.resize(real_.size());
    for (size_t c = 0; c < real_.size(); ++c)
      coeffs_[c] = real_to_coeffs(*grid_, real_[c]);
    have_coeffs_ = true;
  }
  return coeffs_;
}

const CArray& VectorField::coeff(int c) const { return coeffs()[c]; }

const Array& VectorField::real(int c) const {
  if (!have_real_) {
    real_.resize(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i)
      real_[i] = to_real_samples(*grid_, coeffs_[i]);
    have_real_ = true;
  }
  return real_[c];
}

double VectorField::divergence_residual() const {
  const Grid& g = *grid_;
  CArray div = CArray::Zero(g.size());
  double peak = 0.0;
  for (int c = 0; c < components(); ++c) {
    div += Complex(0, 1) * g.k(c).cast<Complex>() * coeff(c);
    peak = std::max(peak, coeff(c).abs().maxCoeff());
  }
  double dv = div.abs().maxCoeff();
  return peak > 0 ? dv / peak : 0.0;
}

double VectorField::support_excess(double r) const {
  const Grid& g = *grid_;
  Array mag = Array::Zero(g.size());
  for (int c = 0; c < components(); ++c) mag += real(c).square();
  mag = mag.sqrt();
  double global = mag.maxCoeff();
  if (global == 0.0) return 0.0;
  double outer = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    double linf = 0.0;
    for (int a = 0; a < g.spec.d; ++a)
      linf = std::max(linf, std::abs(g.xi(a)[j]));
    if (linf > r) outer = std::max(outer, mag[j]);
  }
  return outer / global;
}

State ComplexField::state() const {
  State z = re.coeffs();
  for (size_t c = 0; c < z.size(); ++c) z[c] += Complex(0, 1) * im.coeff(c);
  return z;
}

ComplexField ComplexField::from_state(GridPtr g, const State& z) {
  // Split via samples so that re/im are genuinely real fields.
  ComplexField f;
  std::vector<Array> re(z.size()), im(z.size());
  for (size_t c = 0; c < z.size(); ++c) {
    CArray s = to_samples(*g, z[c]);
    re[c] = s.real();
    im[c] = s.imag();
  }
  f.re = VectorField::from_real(g, std::move(re));
  f.im = VectorField::from_real(g, std::move(im));
  return f;
}

}  // namespace ssns
