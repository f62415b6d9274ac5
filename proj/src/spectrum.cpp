#include "ssns/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "ssns/rng.hpp"

namespace ssns {

namespace {

// Random divergence-free field supported in the identity region: random
// band-limited coefficients masked by a core bump, then projected.
State random_start(const Grid& g, std::uint64_t seed) {
  Rng rng(seed);
  const int d = g.spec.d, n = g.spec.n;
  State u(d, CArray::Zero(g.size()));
  const double kcut = kPi / g.spec.L * std::max(2, n / 8);
  for (int c = 0; c < d; ++c)
    for (Eigen::Index j = 0; j < g.size(); ++j)
      if (g.kmag2()[j] > 0 && std::sqrt(g.kmag2()[j]) <= kcut)
        u[c][j] = Complex(rng.normal(), rng.normal());
  // Make real, localize, project.
  Array mask(g.size());
  const double r = 0.45 * g.identity_halfwidth() * 2.0;  // 0.45 L
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    double q = 0.0;
    for (int a = 0; a < d; ++a) q += g.xi(a)[j] * g.xi(a)[j];
    q /= r * r;
    mask[j] = q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
  }
  for (int c = 0; c < d; ++c) {
    Array s = to_real_samples(g, u[c]);
    u[c] = real_to_coeffs(g, Array(s * mask));
  }
  leray_inplace(g, u);
  double nn = norm_l2(g, u);
  require(nn > 0, "spectrum: degenerate random start");
  for (auto& c : u) c /= nn;
  return u;
}

struct FlowMap {
  const LinearizedOperator* op;
  double t0;
  double dt;
  int nsteps;

  State operator()(const State& u) const {
    LinearStepper stepper(*op, FlowConfig{.dt = t0 / nsteps});
    State v = u;
    stepper.advance(v, 0.0, nsteps);
    return v;
  }
};

}  // namespace

ArnoldiResult flow_map_spectrum(const LinearizedOperator& op,
                                const SpectrumConfig& cfg) {
  const Grid& g = *op.grid();
  require(cfg.t0 > 0 && cfg.krylov >= 1, "spectrum: need t0 > 0 and k >= 1");
  const int nsteps = std::max(1, static_cast<int>(std::ceil(cfg.t0 / cfg.dt)));
  FlowMap M{&op, cfg.t0, cfg.t0 / nsteps, nsteps};

  ArnoldiResult result;
  result.t0 = cfg.t0;

  for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
    const int k = cfg.krylov;
    std::vector<State> Q;
    Q.reserve(k + 1);
    Q.push_back(random_start(g, cfg.seed + attempt));
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k + 1, k);
    bool breakdown = false;
    int j = 0;
    for (; j < k; ++j) {
      State w = M(Q[j]);
      ++result.matvecs;
      // Modified Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          double hij = dot(g, Q[i], w).real();
          add_scaled(w, -hij, Q[i]);
          if (pass == 0) H(i, j) = hij;
          else H(i, j) += hij;
        }
      const double hnext = norm_l2(g, w);
      H(j + 1, j) = hnext;
      if (hnext < 1e-12 * std::max(1.0, H.topLeftCorner(j + 1, j + 1).norm())) {
        breakdown = true;
        ++j;
        break;
      }
      for (auto& c : w) c /= hnext;
      Q.push_back(std::move(w));
    }
    if (breakdown && j < std::min(4, k) && attempt < cfg.max_restarts) {
      ++result.restarts;
      continue;  // degenerate start, retry with a fresh seed
    }

    const int m = j;
    Eigen::MatrixXd Hm = H.topLeftCorner(m, m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hm);
    require(es.info() == Eigen::Success, "spectrum: Hessenberg eig failed");

    std::vector<RitzPair> pairs;
    for (int i = 0; i < m; ++i) {
      RitzPair p;
      p.lambda = es.eigenvalues()[i];
      Eigen::VectorXcd y = es.eigenvectors().col(i);
      p.residual_estimate = H(m, m - 1) * std::abs(y[m - 1]);
      State v(g.spec.d, CArray::Zero(g.size()));
      for (int q = 0; q < m; ++q)
        for (int c = 0; c < g.spec.d; ++c) v[c] += y[q] * Q[q][c];
      p.vec = std::move(v);
      pairs.push_back(std::move(p));
    }
    std::sort(pairs.begin(), pairs.end(), [](const RitzPair& a, const RitzPair& b) {
      if (std::abs(std::abs(a.lambda) - std::abs(b.lambda)) > 1e-12)
        return std::abs(a.lambda) > std::abs(b.lambda);
      // tie-break: larger Re(log lambda) then smaller |Im(log lambda)|
      return std::abs(std::arg(a.lambda)) < std::abs(std::arg(b.lambda));
    });
    result.ritz = std::move(pairs);
    return result;
  }
  fail("spectrum: Krylov breakdown persisted across restarts");
}

double growth_bound(const ArnoldiResult& a) {
  require(!a.ritz.empty(), "growth_bound: empty spectrum");
  return std::log(std::abs(a.ritz.front().lambda)) / a.t0;
}

double growth_bound(const LinearizedOperator& op, const SpectrumConfig& cfg) {
  return growth_bound(flow_map_spectrum(op, cfg));
}

namespace {

// Restarted GMRES for (L - z) x = b with diagonal preconditioning
// (diag - z)^{-1}; matrix-free, complex arithmetic.
State gmres_shifted(const LinearizedOperator& op, Complex z, const State& b,
                    int restart, int max_outer, double tol) {
  const Grid& g = *op.grid();
  CArray precond = (op.diag().cast<Complex>() - z).inverse();
  auto apply = [&](const State& x) {
    State y = op.apply_L(x);
    add_scaled(y, -z, x);
    for (size_t c = 0; c < y.size(); ++c) y[c] *= precond;
    return y;
  };
  State pb = b;
  for (auto& c : pb) c *= precond;

  State x = zero_state(g);
  double bnorm = norm_l2(g, pb);
  if (bnorm == 0) return x;

  for (int outer = 0; outer < max_outer; ++outer) {
    State r = apply(x);
    for (size_t c = 0; c < r.size(); ++c) r[c] = pb[c] - r[c];
    double beta = norm_l2(g, r);
    if (beta / bnorm < tol) break;

    std::vector<State> V;
    V.push_back(scaled(r, 1.0 / beta));
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(restart + 1, restart);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(restart + 1);
    rhs[0] = beta;
    int m = 0;
    for (; m < restart; ++m) {
      State w = apply(V[m]);
      for (int i = 0; i <= m; ++i) {
        Complex hij = dot(g, V[i], w);
        H(i, m) = hij;
        add_scaled(w, -hij, V[i]);
      }
      double hnext = norm_l2(g, w);
      H(m + 1, m) = hnext;
      if (hnext < 1e-14 * beta) { ++m; break; }
      V.push_back(scaled(w, 1.0 / hnext));
    }
    Eigen::MatrixXcd Hm = H.topLeftCorner(m + 1, m);
    Eigen::VectorXcd y =
        Hm.colPivHouseholderQr().solve(rhs.head(m + 1));
    for (int i = 0; i < m; ++i) add_scaled(x, y[i], V[i]);
  }
  return x;
}

void normalize_phase(const Grid& g, State& eta) {
  // L2 = 1 and the largest coefficient made real positive.
  double nn = norm_l2(g, eta);
  Complex piv = 0.0;
  double best = 0.0;
  for (const auto& c : eta)
    for (Eigen::Index j = 0; j < c.size(); ++j)
      if (std::abs(c[j]) > best) { best = std::abs(c[j]); piv = c[j]; }
  Complex phase = best > 0 ? piv / best : Complex(1.0, 0.0);
  for (auto& c : eta) c /= nn * phase;
}

}  // namespace

Eigenpair refine_eigenpair(const LinearizedOperator& op, Complex z_guess,
                           const State& eta_guess, double tol, int max_iter) {
  const Grid& g = *op.grid();
  State eta = leray(g, eta_guess);
  normalize_phase(g, eta);
  Complex z = z_guess;

  Eigenpair best;
  best.residual = std::numeric_limits<double>::infinity();
  int worse = 0;
  for (int it = 0; it < max_iter; ++it) {
    State le = op.apply_L(eta);
    z = dot(g, eta, le);  // Rayleigh quotient (eta normalized)
    State r = le;
    add_scaled(r, -z, eta);
    double res = norm_l2(g, r);
    if (res < best.residual) {
      best.z = z;
      best.eta = ComplexField::from_state(op.grid(), eta);
      best.residual = res;
      worse = 0;
    } else if (++worse >= 3) {
      break;
    }
    if (res <= tol) {
      best.converged = true;
      break;
    }
    State w = gmres_shifted(op, z, eta, 40, 4, 1e-10);
    leray_inplace(g, w);
    double wn = norm_l2(g, w);
    if (!(wn > 0) || !std::isfinite(wn)) break;
    eta = std::move(w);
    normalize_phase(g, eta);
  }
  if (!best.converged && best.residual <= tol) best.converged = true;
  return best;
}

Eigenpair leading_eigenpair(const LinearizedOperator& op,
                            const SpectrumConfig& cfg, double tol) {
  ArnoldiResult a = flow_map_spectrum(op, cfg);
  require(!a.ritz.empty(), "leading_eigenpair: empty spectrum");
  const RitzPair& lead = a.ritz.front();
  // Principal branch: Im(z) in (-pi/t0, pi/t0]; refinement re-centers via
  // the Rayleigh quotient, which is branch-free.
  Complex z0 = std::log(lead.lambda) / cfg.t0;
  Eigenpair e = refine_eigenpair(op, z0, lead.vec, tol);
  e.t0 = cfg.t0;
  return e;
}

GrowthCurve beta_sweep(const VectorField& g_field,
                       const std::vector<double>& betas,
                       const SpectrumConfig& cfg, const OperatorSettings& set,
                       bool refine_unstable) {
  GrowthCurve curve;
  for (size_t i = 1; i < betas.size(); ++i)
    require(betas[i] > betas[i - 1], "beta_sweep: betas must increase");
  GridPtr grid = g_field.grid();
  for (double b : betas) {
    curve.betas.push_back(b);
    try {
      State s = scaled(g_field.coeffs(), b);
      VectorField ub = VectorField::from_coeffs(grid, std::move(s));
      LinearizedOperator op(grid, std::move(ub), set);
      ArnoldiResult a = flow_map_spectrum(op, cfg);
      double w0 = growth_bound(a);
      curve.w0.push_back(w0);
      if (refine_unstable && w0 > 0) {
        Eigenpair e = refine_eigenpair(
            op, std::log(a.ritz.front().lambda) / cfg.t0, a.ritz.front().vec);
        e.t0 = cfg.t0;
        curve.found_eigs.emplace_back(std::move(e));
      } else {
        curve.found_eigs.emplace_back(std::nullopt);
      }
      curve.errors.emplace_back();
    } catch (const std::exception& ex) {
      curve.w0.push_back(std::numeric_limits<double>::quiet_NaN());
      curve.found_eigs.emplace_back(std::nullopt);
      curve.errors.emplace_back(ex.what());
    }
  }
  for (size_t i = 0; i + 1 < curve.w0.size(); ++i) {
    if (!std::isfinite(curve.w0[i]) || !std::isfinite(curve.w0[i + 1])) continue;
    curve.modulus_of_continuity = std::max(
        curve.modulus_of_continuity, std::abs(curve.w0[i + 1] - curve.w0[i]));
    if (curve.w0[i] <= 0.0 && curve.w0[i + 1] > 0.0 && !curve.crossing)
      curve.crossing = std::make_pair(curve.betas[i], curve.betas[i + 1]);
  }
  return curve;
}

SearchResult unstable_search(GridPtr grid, FlowFamily family,
                             const std::vector<double>& amplitudes,
                             double a_target_max, const SpectrumConfig& cfg,
                             const OperatorSettings& set) {
  require(a_target_max > 0, "unstable_search: A must be positive");
  SearchResult out;
  std::string report;

  for (double A0 : amplitudes) {
    FlowFamily fam = family;
    fam.A0 = A0;
    VectorField gf = make_background(grid, fam);
    LinearizedOperator op(grid, gf, set);
    double w0;
    try {
      w0 = growth_bound(op, cfg);
    } catch (const std::exception& ex) {
      report += "A0=" + std::to_string(A0) + " failed: " + ex.what() + "\n";
      continue;
    }
    report += "A0=" + std::to_string(A0) + " w0=" + std::to_string(w0) + "\n";
    if (w0 <= 1e-3) continue;

    // Unstable at beta = 1. Bisect w0(beta) into (A/2, A) (or accept w0 < A).
    double lo = 0.0, hi = 1.0, w_hi = w0;
    double beta = 1.0, w_beta = w0;
    for (int it = 0; it < 12 && !(w_beta > 0 && w_beta < a_target_max); ++it) {
      beta = 0.5 * (lo + hi);
      State s = scaled(gf.coeffs(), beta);
      LinearizedOperator opb(grid,
                             VectorField::from_coeffs(grid, std::move(s)), set);
      w_beta = growth_bound(opb, cfg);
      report += "  beta=" + std::to_string(beta) +
                " w0=" + std::to_string(w_beta) + "\n";
      if (w_beta >= a_target_max) { hi = beta; w_hi = w_beta; }
      else if (w_beta <= 0.5 * a_target_max) lo = beta;
      else break;
    }
    if (!(w_beta > 0 && w_beta < a_target_max)) {
      // Accept the smallest bracketed unstable sample.
      beta = hi;
      w_beta = w_hi;
      if (!(w_beta > 0 && w_beta < a_target_max)) {
        report += "  bisection did not land in (0, A); keeping beta=1\n";
        beta = 1.0;
        w_beta = w0;
      }
    }

    State s = scaled(gf.coeffs(), beta);
    VectorField ub = VectorField::from_coeffs(grid, std::move(s));
    LinearizedOperator opb(grid, ub, set);
    out.eig = leading_eigenpair(opb, cfg);
    out.found = true;
    out.Ubar = ub;
    out.beta_star = beta;
    out.amplitude = A0;
    out.w0 = w_beta;
    out.curve = beta_sweep(gf, {0.0, 0.25, 0.5, 0.75, 1.0}, cfg, set);
    out.report = report;
    return out;
  }
  out.report = report + "no unstable member found in the sampled family\n";
  return out;
}

Eigen::MatrixXcd assemble_dense(const LinearizedOperator& op) {
  const Grid& g = *op.grid();
  const int d = g.spec.d;
  const Eigen::Index N = g.size() * d;
  require(N <= 4096, "assemble_dense: grid too large for the dense oracle");
  Eigen::MatrixXcd M(N, N);
  for (Eigen::Index col = 0; col < N; ++col) {
    State e(d, CArray::Zero(g.size()));
    e[col / g.size()][col % g.size()] = 1.0;
    leray_inplace(g, e);
    State le = op.apply_L(e);
    leray_inplace(g, le);
    for (int c = 0; c < d; ++c)
      M.block(c * g.size(), col, g.size(), 1) = le[c].matrix();
  }
  return M;
}

}  // namespace ssns
