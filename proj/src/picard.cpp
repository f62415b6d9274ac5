#include "ssns/picard.hpp"

#include <cmath>

namespace ssns {

double picard_delta0(int d, double alpha, double p0, double eps0) {
  const double k2 = (2.0 + d - 2.0 * alpha) / (4.0 * alpha);
  const double heat = 1.0 - (p0 + d) / (alpha * p0);
  const double d0 = std::min({k2, heat, eps0});
  require(d0 > 0.0,
          "picard: delta0 <= 0; p0 must satisfy p0 > d/(alpha-1) and the "
          "scenario alpha range");
  return d0;
}

namespace {

PicardConfig resolve(const Grid& g, PicardConfig cfg) {
  const double d0 = picard_delta0(g.spec.d, g.spec.alpha, cfg.p0, cfg.eps0);
  if (cfg.eps == 0.0) cfg.eps = 0.5 * d0;
  if (cfg.a1 == 0.0) cfg.a1 = cfg.a0 + 0.5 * cfg.eps;
  require(cfg.a1 > cfg.a0, "picard: need a1 > a0");
  if (cfg.tau_min == 0.0) {
    // Tail rule: data decays like e^{(a1+eps)s}, so the truncated tail at
    // tau_min contributes ~ e^{(a1+eps-a0) tau_min} in the weighted norm.
    const double rate = cfg.a1 + cfg.eps - cfg.a0;
    cfg.tau_min = cfg.T0 + std::log(cfg.tail_target) / rate;
  }
  require(cfg.tau_min < cfg.T0, "picard: empty span");
  return cfg;
}

struct DuhamelSweep {
  const LinearizedOperator* op;
  double dtau;
  int substeps;

  // One marching sweep of the trapezoid recursion with integrand samples Q_i:
  //   I_{i+1} = e^{dtau L}(I_i + dtau/2 Q_i) + dtau/2 Q_{i+1}.
  std::vector<State> run(const std::vector<State>& Q) const {
    const Grid& g = *op->grid();
    LinearStepper stepper(*op, FlowConfig{.dt = dtau / substeps});
    std::vector<State> I(Q.size());
    I[0] = zero_state(g);
    State carry = zero_state(g);
    for (size_t i = 0; i + 1 < Q.size(); ++i) {
      carry = I[i];
      add_scaled(carry, 0.5 * dtau, Q[i]);
      stepper.advance(carry, 0.0, substeps);  // autonomous semigroup factor
      add_scaled(carry, 0.5 * dtau, Q[i + 1]);
      I[i + 1] = carry;
    }
    return I;
  }
};

}  // namespace

PicardResult picard_solve(const LinearizedOperator& op, const PicardData& data,
                          const PicardConfig& cfg_in) {
  const Grid& g = *op.grid();
  PicardConfig cfg = resolve(g, cfg_in);

  auto H_of = [&](double tau) { return data.H ? data.H(tau) : 1.0; };
  auto Ut_of = [&](double tau) -> State {
    return data.Utilde ? data.Utilde(tau) : zero_state(g);
  };
  auto Ft_of = [&](double tau) -> State {
    return data.Ftilde ? data.Ftilde(tau) : zero_state(g);
  };

  PicardResult res;
  res.cfg = cfg;
  double T0 = cfg.T0;

  for (int attempt = 0; attempt <= cfg.max_shrink; ++attempt) {
    const int n = std::max(8, static_cast<int>(std::round((T0 - cfg.tau_min) / cfg.dtau)));
    const double dtau = (T0 - cfg.tau_min) / n;
    std::vector<double> tau(n + 1);
    for (int i = 0; i <= n; ++i) tau[i] = cfg.tau_min + i * dtau;

    // Precompute data samples.
    std::vector<State> Ut(n + 1), Ft(n + 1);
    std::vector<double> H(n + 1);
    for (int i = 0; i <= n; ++i) {
      Ut[i] = Ut_of(tau[i]);
      Ft[i] = Ft_of(tau[i]);
      H[i] = H_of(tau[i]);
    }

    DuhamelSweep sweep{&op, dtau, cfg.substeps};
    std::vector<State> U(n + 1, zero_state(g));
    std::vector<State> Q(n + 1);
    res.update_history.clear();
    double prev_update = -1.0;
    bool converged = false, diverged = false;

    for (int it = 0; it < cfg.max_iter; ++it) {
      for (int i = 0; i <= n; ++i) {
        Q[i] = op.bilinear(U[i], U[i]);
        for (auto& c : Q[i]) c *= H[i];
        add_scaled(Q[i], 1.0, op.bilinear_sym(U[i], Ut[i]));
        add_scaled(Q[i], 1.0, Ft[i]);
      }
      std::vector<State> Unew = sweep.run(Q);
      // Weighted norm of the update.
      double upd = 0.0;
      for (int i = 0; i <= n; ++i) {
        State d = Unew[i];
        add_scaled(d, -1.0, U[i]);
        upd = std::max(upd, std::exp(-cfg.a1 * tau[i]) *
                                norm_vprime(g, d, cfg.p0));
      }
      res.update_history.push_back(upd);
      U = std::move(Unew);
      res.iterations = it + 1;
      if (prev_update > 0.0) {
        res.contraction = upd / prev_update;
        if (res.contraction >= 1.0 && upd > cfg.tol) {
          diverged = true;
          break;
        }
      }
      prev_update = upd;
      res.final_update = upd;
      if (upd <= cfg.tol) {
        converged = true;
        break;
      }
    }

    if (diverged && attempt < cfg.max_shrink) {
      T0 -= cfg.shrink_step;  // the paper's smallness mechanism on T0
      ++res.shrinks;
      require(T0 > cfg.tau_min + 4 * cfg.dtau,
              "picard: T0 shrank into tau_min without contraction");
      continue;
    }

    res.converged = converged;
    res.T0_effective = T0;
    res.tau = std::move(tau);
    res.U = std::move(U);
    res.weighted_vprime.resize(n + 1);
    for (int i = 0; i <= n; ++i)
      res.weighted_vprime[i] = std::exp(-cfg.a1 * res.tau[i]) *
                               norm_vprime(g, res.U[i], cfg.p0);
    // Truncation estimate: sup of the data envelope below tau_min.
    double fdat = 0.0;
    for (int i = 0; i <= n; ++i)
      fdat = std::max(fdat, std::exp(-(cfg.a1 + cfg.eps) * res.tau[i]) *
                                norm_l2(g, Ft[i]));
    const double rate = cfg.a1 + cfg.eps - cfg.a0;
    res.tail_estimate = fdat * std::exp(rate * cfg.tau_min) / rate;
    return res;
  }
  fail("picard: contraction factor >= 1 after max shrinks");
}

SecondSolution second_solution(const LinearizedOperator& op,
                               const PicardResult& ur, const Eigenpair& eig,
                               double ul_amplitude, const PicardData& data) {
  const Grid& g = *op.grid();
  SecondSolution out;
  out.ul_amplitude = ul_amplitude;

  auto H_of = [&](double tau) { return data.H ? data.H(tau) : 1.0; };
  auto Ut_of = [&](double tau) -> State {
    return data.Utilde ? data.Utilde(tau) : zero_state(g);
  };
  auto Ft_of = [&](double tau) -> State {
    return data.Ftilde ? data.Ftilde(tau) : zero_state(g);
  };
  auto Ul_of = [&](double tau) {
    return scaled(linear_mode_state(g, eig, tau), ul_amplitude);
  };

  // U_p system: drift Utilde + H Ul, forcing H B(Ul,Ul) + B~(Ul,Utilde) + Ft.
  PicardData pdata;
  pdata.H = data.H;
  pdata.Utilde = [=, &g, &op](double tau) {
    State ut = Ut_of(tau);
    add_scaled(ut, H_of(tau), Ul_of(tau));
    return ut;
  };
  pdata.Ftilde = [=, &g, &op](double tau) {
    State ul = Ul_of(tau);
    State f = op.bilinear(ul, ul);
    for (auto& c : f) c *= H_of(tau);
    add_scaled(f, 1.0, op.bilinear_sym(ul, Ut_of(tau)));
    add_scaled(f, 1.0, Ft_of(tau));
    return f;
  };
  PicardConfig pcfg = ur.cfg;
  pcfg.tau_min = ur.tau.front();
  pcfg.T0 = ur.tau.back();
  out.up = picard_solve(op, pdata, pcfg);

  // Shared-equation integrand Q(tau, X) = H B(X,X) + B~(X, Utilde) + Ftilde.
  auto Q_shared = [&](double tau, const State& X) {
    State q = op.bilinear(X, X);
    for (auto& c : q) c *= H_of(tau);
    add_scaled(q, 1.0, op.bilinear_sym(X, Ut_of(tau)));
    add_scaled(q, 1.0, Ft_of(tau));
    return q;
  };

  const auto& tau = out.up.tau;
  std::vector<State> X2(tau.size());
  for (size_t i = 0; i < tau.size(); ++i) {
    X2[i] = Ul_of(tau[i]);
    add_scaled(X2[i], 1.0, out.up.U[i]);
  }
  out.march_resid_2 = march_residual(op, tau, X2, Q_shared, ur.cfg.a1,
                                     ur.cfg.substeps);
  // U_r interpolated onto the (identical) grid.
  require(tau.size() == ur.tau.size(), "second_solution: grid mismatch");
  out.march_resid_r = march_residual(op, ur.tau, ur.U, Q_shared, ur.cfg.a1,
                                     ur.cfg.substeps);

  out.weighted_gap.resize(tau.size());
  out.weighted_ur.resize(tau.size());
  for (size_t i = 0; i < tau.size(); ++i) {
    State gap = X2[i];
    add_scaled(gap, -1.0, ur.U[i]);
    out.weighted_gap[i] = std::exp(-ur.cfg.a0 * tau[i]) * norm_l2(g, gap);
    out.weighted_ur[i] = std::exp(-ur.cfg.a0 * tau[i]) * norm_l2(g, ur.U[i]);
  }

  // min over phase of ||Re(e^{i phi} eta)||: Gram eigenvalue of (re, im).
  {
    const State er = eig.eta.re.coeffs(), ei = eig.eta.im.coeffs();
    const double a = std::pow(norm_l2(g, er), 2);
    const double b = std::pow(norm_l2(g, ei), 2);
    const double c = dot(g, er, ei).real();
    const double tr = 0.5 * (a + b);
    const double det = std::sqrt(std::max(0.0, 0.25 * (a - b) * (a - b) + c * c));
    out.mode_floor = ul_amplitude * std::sqrt(std::max(0.0, tr - det));
  }
  return out;
}

double march_residual(const LinearizedOperator& op,
                      const std::vector<double>& tau,
                      const std::vector<State>& X,
                      const std::function<State(double, const State&)>& Q,
                      double a1, int substeps) {
  const Grid& g = *op.grid();
  require(tau.size() == X.size() && tau.size() >= 2, "march_residual: sizes");
  const double dtau = tau[1] - tau[0];
  LinearStepper stepper(op, FlowConfig{.dt = dtau / substeps});
  double scale = 1e-300;
  for (size_t i = 0; i < tau.size(); ++i)
    scale = std::max(scale, std::exp(-a1 * tau[i]) * norm_l2(g, X[i]));
  double worst = 0.0;
  State q0 = Q(tau[0], X[0]);
  for (size_t i = 0; i + 1 < tau.size(); ++i) {
    State pred = X[i];
    add_scaled(pred, 0.5 * dtau, q0);
    stepper.advance(pred, 0.0, substeps);
    State q1 = Q(tau[i + 1], X[i + 1]);
    add_scaled(pred, 0.5 * dtau, q1);
    add_scaled(pred, -1.0, X[i + 1]);
    worst = std::max(worst, std::exp(-a1 * tau[i + 1]) * norm_l2(g, pred) /
                                (dtau * scale));
    q0 = std::move(q1);
  }
  return worst;
}

}  // namespace ssns
