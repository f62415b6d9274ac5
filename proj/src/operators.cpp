#include "ssns/operators.hpp"

namespace ssns {

LinearizedOperator::LinearizedOperator(GridPtr grid, VectorField Ubar,
                                       OperatorSettings s)
    : grid_(std::move(grid)), Ubar_(std::move(Ubar)), set_(s) {
  const Grid& g = *grid_;
  const double c0 = (g.spec.alpha - 1.0) / g.spec.alpha;
  diag_ = c0 - set_.nu * g.kalpha();

  if (!Ubar_.empty()) {
    require(Ubar_.grid().get() == grid_.get(),
            "operator: background lives on a different grid");
    require(Ubar_.is_divfree(1e-10),
            "operator: background must be divergence-free");
    double peak = 0.0;
    for (int c = 0; c < g.spec.d; ++c)
      peak = std::max(peak, Ubar_.real(c).abs().maxCoeff());
    has_Ubar_ = peak > 0.0;
  }
  if (has_Ubar_) {
    // Cache the background samples with the same dealias treatment the
    // bilinear forms use, so apply_L == apply_Palpha + apply_Lprime exactly.
    const int d = g.spec.d;
    ubar_real_.resize(d);
    dubar_real_.assign(d, std::vector<Array>(d));
    for (int c = 0; c < d; ++c) {
      CArray uc = Ubar_.coeff(c);
      if (set_.dealias) uc *= g.dealias_mask().cast<Complex>();
      ubar_real_[c] = to_real_samples(g, uc);
      for (int a = 0; a < d; ++a) {
        CArray duc = derivative(g, Ubar_.coeff(c), a);
        if (set_.dealias) duc *= g.dealias_mask().cast<Complex>();
        dubar_real_[a][c] = to_real_samples(g, duc);
      }
    }
  }
}

State LinearizedOperator::bilinear(const State& u, const State& v) const {
  State w = advect(*grid_, u, v, set_.dealias);
  leray_inplace(*grid_, w);
  for (auto& c : w) c = -c;
  return w;
}

State LinearizedOperator::bilinear_sym(const State& u, const State& v) const {
  State w = bilinear(u, v);
  add_scaled(w, 1.0, bilinear(v, u));
  return w;
}

State LinearizedOperator::apply_offdiag(const State& u, double h_weight) const {
  const Grid& g = *grid_;
  const int d = g.spec.d;
  const double inv_alpha = 1.0 / g.spec.alpha;
  const Array& mask = g.dealias_mask();

  // Sample-space ingredients: u_i and d_a u_i.
  std::vector<CArray> ur(d);
  std::vector<std::vector<CArray>> du(d, std::vector<CArray>(d));
  for (int i = 0; i < d; ++i) {
    CArray ci = u[i];
    if (set_.dealias) ci *= mask.cast<Complex>();
    ur[i] = to_samples(g, ci);
    for (int a = 0; a < d; ++a)
      du[a][i] = to_samples(g, derivative(g, ci, a));
  }

  State out(d);
  for (int i = 0; i < d; ++i) {
    CArray acc = CArray::Zero(g.size());
    for (int a = 0; a < d; ++a) {
      const Array& coord =
          set_.window ? g.psi(a) : g.xi(a);  // windowed coordinate multiplier
      acc += inv_alpha * coord.cast<Complex>() * du[a][i];
    }
    if (set_.sponge) acc -= g.sponge().cast<Complex>() * ur[i];
    if (has_Ubar_ && h_weight != 0.0) {
      CArray adv = CArray::Zero(g.size());
      for (int a = 0; a < d; ++a)
        adv += ubar_real_[a].cast<Complex>() * du[a][i] +
               dubar_real_[a][i].cast<Complex>() * ur[a];
      acc -= h_weight * adv;
    }
    dft_forward(g.spec.d, g.spec.n, acc);
    if (set_.dealias) acc *= mask.cast<Complex>();
    out[i] = std::move(acc);
  }
  if (set_.project) leray_inplace(g, out);
  return out;
}

State LinearizedOperator::apply_Palpha(const State& u) const {
  State out = apply_offdiag(u, 0.0);
  for (size_t c = 0; c < out.size(); ++c)
    out[c] += diag_.cast<Complex>() * u[c];
  return out;
}

State LinearizedOperator::apply_Lprime(const State& u) const {
  if (!has_Ubar_) return zero_state(*grid_);
  const Grid& g = *grid_;
  State adv = advect(g, Ubar_.coeffs(), u, set_.dealias);
  add_scaled(adv, 1.0, advect(g, u, Ubar_.coeffs(), set_.dealias));
  leray_inplace(g, adv);
  for (auto& c : adv) c = -c;
  return adv;
}

State LinearizedOperator::apply_L(const State& u) const {
  State out = apply_offdiag(u, 1.0);
  for (size_t c = 0; c < out.size(); ++c)
    out[c] += diag_.cast<Complex>() * u[c];
  return out;
}

State LinearizedOperator::real_field(const VectorField& f) const {
  require(f.grid().get() == grid_.get(), "operator: grid mismatch");
  return f.coeffs();
}

VectorField LinearizedOperator::apply_Palpha(const VectorField& u) const {
  return VectorField::from_coeffs(grid_, apply_Palpha(real_field(u)));
}

VectorField LinearizedOperator::apply_L(const VectorField& u) const {
  return VectorField::from_coeffs(grid_, apply_L(real_field(u)));
}

VectorField LinearizedOperator::bilinear(const VectorField& u,
                                         const VectorField& v) const {
  return VectorField::from_coeffs(grid_, bilinear(real_field(u), real_field(v)));
}

VectorField LinearizedOperator::bilinear_sym(const VectorField& u,
                                             const VectorField& v) const {
  return VectorField::from_coeffs(grid_,
                                  bilinear_sym(real_field(u), real_field(v)));
}

double LinearizedOperator::support_breach(const State& u) const {
  const Grid& g = *grid_;
  const double r = g.identity_halfwidth();
  double global = 0.0, outer = 0.0;
  for (const auto& comp : u) {
    CArray s = to_samples(g, comp);
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      double linf = 0.0;
      for (int a = 0; a < g.spec.d; ++a)
        linf = std::max(linf, std::abs(g.xi(a)[j]));
      const double v = std::abs(s[j]);
      global = std::max(global, v);
      if (linf > r) outer = std::max(outer, v);
    }
  }
  return global > 0 ? outer / global : 0.0;
}

VectorField advect_project(const LinearizedOperator& op, const VectorField& u,
                           const VectorField& v) {
  return op.bilinear(u, v);
}

VectorField bilinear_sym(const LinearizedOperator& op, const VectorField& u,
                         const VectorField& v) {
  return op.bilinear_sym(u, v);
}

VorticitySplit vorticity_conjugate(const LinearizedOperator& op_g,
                                   const CArray& omega) {
  const Grid& g = *op_g.grid();
  require(g.spec.d == 2, "vorticity_conjugate: d must be 2");
  const bool dealias = op_g.settings().dealias;
  const Array& mask = g.dealias_mask();

  if (!op_g.has_background()) {
    VorticitySplit zero;
    zero.K = CArray::Zero(g.size());
    zero.M = CArray::Zero(g.size());
    zero.conj = CArray::Zero(g.size());
    return zero;
  }

  CArray w = omega;
  if (dealias) w *= mask.cast<Complex>();
  State U = curl2d_inverse(g, w);
  const State& gb = op_g.background().coeffs();
  CArray wg = curl2d(g, gb);

  auto gradprod = [&](const State& a, const CArray& s) {
    // -(a . grad s) with real-space products.
    CArray acc = CArray::Zero(g.size());
    for (int c = 0; c < 2; ++c) {
      CArray ds = derivative(g, s, c);
      CArray ac = a[c];
      if (dealias) {
        ds *= mask.cast<Complex>();
        ac *= mask.cast<Complex>();
      }
      acc += to_samples(g, ac) * to_samples(g, ds);
    }
    dft_forward(2, g.spec.n, acc);
    if (dealias) acc *= mask.cast<Complex>();
    return CArray(-acc);
  };

  VorticitySplit out;
  out.K = gradprod(U, wg);
  out.M = gradprod(gb, w);
  out.conj = curl2d(g, op_g.apply_Lprime(U));
  return out;
}

}  // namespace ssns
