#include <doctest.h>

#include "ssns/background.hpp"
#include "ssns/operators.hpp"
#include "ssns/similarity.hpp"
#include "test_util.hpp"

using namespace ssns;
using namespace ssns::test;

namespace {

VectorField band_limited_random(GridPtr grid, std::uint64_t seed, int mmax) {
  // Random divergence-free field with |m|_inf <= mmax (exactly band-limited).
  const Grid& g = *grid;
  Rng rng(seed);
  CArray psi = CArray::Zero(g.size());
  const int n = g.spec.n;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    Eigen::Index rem = j;
    bool keep = true;
    for (int a = g.spec.d - 1; a >= 0; --a) {
      int ia = static_cast<int>(rem % n);
      rem /= n;
      int m = ia < n / 2 ? ia : ia - n;
      if (std::abs(m) > mmax) keep = false;
    }
    if (keep && g.kmag2()[j] > 0) psi[j] = Complex(rng.normal(), rng.normal());
  }
  psi = real_to_coeffs(g, to_real_samples(g, psi));  // enforce realness
  State u(2);
  u[0] = -derivative(g, psi, 1);
  u[1] = derivative(g, psi, 0);
  double nn = norm_l2(g, u);
  for (auto& c : u) c /= nn;
  return VectorField::from_coeffs(grid, std::move(u));
}

}  // namespace

TEST_CASE("advection bilinear form: zeros, shear, FD oracle") {
  GridPtr g = make_grid(2, 8, kPi, 1.5, true);
  LinearizedOperator op(g, {}, {});

  VectorField U = band_limited_random(g, 1, 1);
  VectorField V = band_limited_random(g, 2, 1);
  VectorField zero = VectorField::from_coeffs(g, zero_state(*g));

  CHECK(norm_l2(*g, op.bilinear(zero.coeffs(), V.coeffs())) == 0.0);
  CHECK(norm_l2(*g, op.bilinear(U.coeffs(), zero.coeffs())) == 0.0);

  // Unidirectional shear: U = (f(xi2), 0) has U . grad U = 0.
  GridPtr gs = make_grid(2, 32, kPi, 1.5, true);
  LinearizedOperator ops(gs, {}, {});
  State shear(2, CArray::Zero(gs->size()));
  for (int m : {1, 2, 3}) {
    VectorField mode = single_mode(gs, {0, m}, 0, Complex(0.3 / m, 0.1));
    add_scaled(shear, 1.0, mode.coeffs());
  }
  State bs = ops.bilinear(shear, shear);
  CHECK(norm_l2(*gs, bs) < 1e-14);

  // Centered-difference + projection oracle on a 256^2 refinement
  // (h = 2 pi / 256 for the 2 pi wide box).
  GridPtr gf = make_grid(2, 256, kPi, 1.5, true);
  State uf = change_resolution_state(*g, *gf, U.coeffs());
  State vf = change_resolution_state(*g, *gf, V.coeffs());
  const int n = gf->spec.n;
  const double h = 2.0 * gf->spec.L / n;
  auto shift = [&](const Array& a, int da0, int da1) {
    Array out(gf->size());
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        out[i0 * n + i1] = a[((i0 + da0 + n) % n) * n + ((i1 + da1 + n) % n)];
    return out;
  };
  State oracle(2);
  std::vector<Array> ur(2), vr(2);
  for (int c = 0; c < 2; ++c) {
    ur[c] = to_real_samples(*gf, uf[c]);
    vr[c] = to_real_samples(*gf, vf[c]);
  }
  for (int i = 0; i < 2; ++i) {
    Array dv0 = (shift(vr[i], 1, 0) - shift(vr[i], -1, 0)) / (2.0 * h);
    Array dv1 = (shift(vr[i], 0, 1) - shift(vr[i], 0, -1)) / (2.0 * h);
    oracle[i] = real_to_coeffs(*gf, Array(ur[0] * dv0 + ur[1] * dv1));
  }
  leray_inplace(*gf, oracle);
  for (auto& c : oracle) c = -c;
  State oracle_coarse = change_resolution_state(*gf, *g, oracle);

  State got = op.bilinear(U.coeffs(), V.coeffs());
  State diff = got;
  add_scaled(diff, -1.0, oracle_coarse);
  CHECK(norm_l2(*g, diff) / norm_l2(*g, got) < 1e-3);
}

TEST_CASE("bilinear_sym: definition, symmetry, composition") {
  GridPtr g = make_grid(2, 32, kPi, 1.5, true);
  LinearizedOperator op(g, {}, {});
  VectorField U = random_compact_divfree(g, 5);
  VectorField V = random_compact_divfree(g, 6);

  State b2 = op.bilinear(U.coeffs(), U.coeffs());
  State bs = op.bilinear_sym(U.coeffs(), U.coeffs());
  State d = bs;
  add_scaled(d, -2.0, b2);
  CHECK(norm_l2(*g, d) < 1e-13 * norm_l2(*g, bs));

  State ab = op.bilinear_sym(U.coeffs(), V.coeffs());
  State ba = op.bilinear_sym(V.coeffs(), U.coeffs());
  State s = ab;
  add_scaled(s, -1.0, ba);
  CHECK(norm_l2(*g, s) < 1e-13 * norm_l2(*g, ab));

  State sum = op.bilinear(U.coeffs(), V.coeffs());
  add_scaled(sum, 1.0, op.bilinear(V.coeffs(), U.coeffs()));
  add_scaled(sum, -1.0, ab);
  CHECK(norm_l2(*g, sum) == 0.0);  // implemented as that sum
}

TEST_CASE("apply_Palpha: zero, window identity on core fields") {
  // Exact-algebra mode: the coordinate-multiplier identity is stated without
  // the 2/3 truncation, whose spectral floor would otherwise dominate.
  GridPtr g = make_grid(2, 128, 2.0 * kPi, 1.5, false);
  OperatorSettings wset;
  wset.dealias = false;
  LinearizedOperator windowed(g, {}, wset);
  OperatorSettings raw;
  raw.window = false;
  raw.sponge = false;
  raw.dealias = false;
  LinearizedOperator unwindowed(g, {}, raw);

  State zero = zero_state(*g);
  CHECK(norm_l2(*g, windowed.apply_Palpha(zero)) == 0.0);

  VectorField u = random_compact_divfree(g, 17, 3, 0.045);
  State a = windowed.apply_Palpha(u.coeffs());
  State b = unwindowed.apply_Palpha(u.coeffs());
  State d = a;
  add_scaled(d, -1.0, b);
  CHECK(norm_l2(*g, d) < 1e-11 * norm_l2(*g, a));
}

TEST_CASE("apply_L: reduction, linearity, divergence preservation") {
  GridPtr g = make_grid(2, 64, 2.0 * kPi, 1.5, true);
  VectorField ub = make_background(g, {.m = 2, .R = 0.25 * g->spec.L, .A0 = 1.0});
  LinearizedOperator op(g, ub, {});
  LinearizedOperator op0(g, {}, {});

  VectorField u = random_compact_divfree(g, 23);
  // Ubar = 0 reduces to P_alpha exactly (same code path, zero advection).
  State a1 = op0.apply_L(u.coeffs());
  State a2 = op0.apply_Palpha(u.coeffs());
  State d = a1;
  add_scaled(d, -1.0, a2);
  CHECK(norm_l2(*g, d) == 0.0);

  // L = P_alpha + L'.
  State full = op.apply_L(u.coeffs());
  State split = op.apply_Palpha(u.coeffs());
  add_scaled(split, 1.0, op.apply_Lprime(u.coeffs()));
  State ds = full;
  add_scaled(ds, -1.0, split);
  CHECK(norm_l2(*g, ds) < 1e-12 * norm_l2(*g, full));

  // Linearity on random a, b, U, V.
  VectorField v = random_compact_divfree(g, 29);
  const double ca = 0.7, cb = -1.3;
  State lin = u.coeffs();
  for (auto& c : lin) c *= ca;
  add_scaled(lin, cb, v.coeffs());
  State lhs = op.apply_L(lin);
  State rhs = op.apply_L(u.coeffs());
  for (auto& c : rhs) c *= ca;
  add_scaled(rhs, cb, op.apply_L(v.coeffs()));
  State dl = lhs;
  add_scaled(dl, -1.0, rhs);
  CHECK(norm_l2(*g, dl) < 1e-12 * norm_l2(*g, lhs));

  // Divergence-free output for divergence-free input.
  VectorField lu = VectorField::from_coeffs(g, full);
  CHECK(lu.divergence_residual() < 1e-10);
}

TEST_CASE("energy identity: advection is L2-orthogonal to the state") {
  GridPtr g = make_grid(2, 64, 2.0 * kPi, 1.5, true);
  VectorField ub = make_background(g, {.m = 2, .R = 0.25 * g->spec.L, .A0 = 2.0});
  VectorField u = band_limited_random(g, 31, g->spec.n / 3 - 1);
  // <P(Ubar . grad U), U> = 0 for divergence-free Ubar.
  State adv = advect(*g, ub.coeffs(), u.coeffs(), true);
  leray_inplace(*g, adv);
  const double ip = std::abs(dot(*g, adv, u.coeffs()).real());
  CHECK(ip <= 1e-9 * norm_l2(*g, adv) * norm_l2(u));
}

TEST_CASE("div(xi . grad U) = 0 for divergence-free core-supported U") {
  GridPtr g = make_grid(2, 128, 2.0 * kPi, 1.5, true);
  VectorField u = random_compact_divfree(g, 37, 3, 0.045);
  State drift(2);
  for (int i = 0; i < 2; ++i) {
    CArray acc = CArray::Zero(g->size());
    for (int a = 0; a < 2; ++a)
      acc += g->psi(a).cast<Complex>() *
             to_samples(*g, derivative(*g, u.coeff(i), a));
    dft_forward(2, g->spec.n, acc);
    drift[i] = std::move(acc);
  }
  VectorField df = VectorField::from_coeffs(g, std::move(drift));
  CHECK(df.divergence_residual() < 1e-10);
}

TEST_CASE("vorticity conjugation and the K/M split") {
  GridPtr g = make_grid(2, 64, 2.0 * kPi, 1.5, true);
  VectorField gb = make_background(g, {.m = 2, .R = 0.25 * g->spec.L, .A0 = 1.5});
  LinearizedOperator op(g, gb, {});

  // Zero-mean band-limited test vorticity.
  VectorField w2 = band_limited_random(g, 41, g->spec.n / 3 - 1);
  CArray omega = curl2d(*g, w2.coeffs());

  VorticitySplit s = vorticity_conjugate(op, omega);

  // g = 0 gives 0.
  LinearizedOperator op0(g, {}, {});
  VorticitySplit s0 = vorticity_conjugate(op0, omega);
  CHECK(s0.K.abs().maxCoeff() == 0.0);
  CHECK(s0.M.abs().maxCoeff() == 0.0);

  // Skew-adjointness of M: <M w, w> = 0.
  const double box = g->box_volume();
  const double ip = std::abs((box * (s.M.conjugate() * omega).sum()).real());
  const double nw2 = box * omega.abs2().sum();
  CHECK(ip <= 1e-10 * nw2 * 10.0);

  // Conjugation identity: Curl L'_g Curl^-1 = K + M.
  CArray sum = s.K + s.M - s.conj;
  CHECK(std::sqrt(sum.abs2().sum()) <= 1e-10 * std::sqrt(s.conj.abs2().sum()));

  // Nonzero-mean vorticity is rejected.
  CArray bad = omega;
  bad[0] = 1.0;
  CHECK_THROWS(curl2d_inverse(*g, bad));
}

TEST_CASE("support breach diagnostic") {
  GridPtr g = make_grid(2, 64, 2.0 * kPi, 1.5, true);
  LinearizedOperator op(g, {}, {});
  VectorField core = random_compact_divfree(g, 3, 3, 0.07);
  CHECK(op.support_breach(core.coeffs()) < 1e-6);
  VectorField wide = single_mode(g, {1, 0}, 1, Complex(1.0, 0.0));
  CHECK(op.support_breach(wide.coeffs()) > 0.5);
}
