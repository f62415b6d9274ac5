#include "ssns/semigroup.hpp"

#include <cmath>

namespace ssns {

void heat_flow_inplace(const Grid& g, State& u, double t, double alpha,
                       double nu) {
  require(t >= 0.0, "heat_flow: t must be nonnegative");
  Array mult =
      (-t * nu * (alpha == g.spec.alpha ? g.kalpha() : g.kpow(alpha))).exp();
  for (auto& c : u) c *= mult.cast<Complex>();
}

VectorField heat_flow(const VectorField& u, double t, double alpha, double nu) {
  State s = u.coeffs();
  heat_flow_inplace(*u.grid(), s, t, alpha, nu);
  return VectorField::from_coeffs(u.grid(), std::move(s));
}

VectorField palpha_flow_exact(const VectorField& u, double tau,
                              ResampleReport* report) {
  require(tau >= 0.0, "palpha_flow: tau must be nonnegative");
  const Grid& g = *u.grid();
  const double alpha = g.spec.alpha;
  const double t = std::exp(tau);
  State s = u.coeffs();
  heat_flow_inplace(g, s, t - 1.0, alpha);
  s = dilate(g, s, std::pow(t, 1.0 / alpha), report);
  const double amp = std::pow(t, 1.0 - 1.0 / alpha);
  for (auto& c : s) c *= amp;
  return VectorField::from_coeffs(u.grid(), std::move(s));
}

VectorField palpha_flow_stepped(const LinearizedOperator& op,
                                const VectorField& u, double tau,
                                const FlowConfig& cfg) {
  require(tau >= 0.0, "palpha_flow: tau must be nonnegative");
  require(!op.has_background(), "palpha_flow: operator must have zero background");
  int nsteps = std::max(1, static_cast<int>(std::ceil(tau / cfg.dt - 1e-12)));
  FlowConfig c = cfg;
  c.dt = tau / nsteps;
  LinearStepper stepper(op, c);
  State s = u.coeffs();
  stepper.advance(s, 0.0, nsteps);
  return VectorField::from_coeffs(u.grid(), std::move(s));
}

LinearStepper::LinearStepper(const LinearizedOperator& op, const FlowConfig& cfg)
    : op_(&op), cfg_(cfg), dt_(cfg.dt) {
  require(dt_ > 0.0, "stepper: dt must be positive");
  e_half_ = (0.5 * dt_ * op.diag()).exp();
  e_full_ = (dt_ * op.diag()).exp();
}

void LinearStepper::step(State& u, double tau) const { step(u, tau, {}); }

void LinearStepper::step(State& u, double tau, const WeightFn& H) const {
  auto weight = [&](double s) { return H ? H(s) : 1.0; };
  const double h = dt_;

  if (cfg_.scheme == FlowConfig::Scheme::IMEX) {
    // CN on the diagonal part, explicit Euler on the rest (fallback scheme).
    State n0 = op_->apply_offdiag(u, weight(tau));
    Array num = (1.0 + 0.5 * h * op_->diag());
    Array den = (1.0 - 0.5 * h * op_->diag()).inverse();
    for (size_t c = 0; c < u.size(); ++c)
      u[c] = (num.cast<Complex>() * u[c] + h * n0[c]) * den.cast<Complex>();
    return;
  }

  // Integrating-factor RK4 on d_tau u = D u + N(tau, u).
  const auto& E = e_half_;
  const auto& E2 = e_full_;
  State a = op_->apply_offdiag(u, weight(tau));

  State ua(u.size());
  for (size_t c = 0; c < u.size(); ++c)
    ua[c] = E.cast<Complex>() * (u[c] + 0.5 * h * a[c]);
  State b = op_->apply_offdiag(ua, weight(tau + 0.5 * h));

  State ub(u.size());
  for (size_t c = 0; c < u.size(); ++c)
    ub[c] = E.cast<Complex>() * u[c] + 0.5 * h * b[c];
  State cc = op_->apply_offdiag(ub, weight(tau + 0.5 * h));

  State uc(u.size());
  for (size_t c = 0; c < u.size(); ++c)
    uc[c] = E.cast<Complex>() * (E.cast<Complex>() * u[c] + h * cc[c]);
  State d = op_->apply_offdiag(uc, weight(tau + h));

  for (size_t c = 0; c < u.size(); ++c)
    u[c] = E2.cast<Complex>() * u[c] +
           (h / 6.0) * (E2.cast<Complex>() * a[c] +
                        2.0 * E.cast<Complex>() * (b[c] + cc[c]) + d[c]);
}

void LinearStepper::advance(State& u, double tau0, int nsteps,
                            const WeightFn& H) const {
  const double guard = 1e6 * (norm_l2(*op_->grid(), u) + 1e-300);
  for (int i = 0; i < nsteps; ++i) {
    step(u, tau0 + i * dt_, H);
    if (!(norm_l2(*op_->grid(), u) < guard))
      fail("evolve: norm explosion, reduce dt (step " + std::to_string(i) + ")");
  }
}

Trajectory evolve_L(const LinearizedOperator& op, const State& u0, double tau0,
                    double tau1, const FlowConfig& cfg, const WeightFn& H) {
  require(tau1 >= tau0, "evolve_L: empty span");
  int nsteps = std::max(1, static_cast<int>(std::ceil((tau1 - tau0) / cfg.dt - 1e-12)));
  FlowConfig c = cfg;
  c.dt = (tau1 - tau0) / nsteps;
  LinearStepper stepper(op, c);

  Trajectory out;
  State u = u0;
  out.tau.push_back(tau0);
  out.states.push_back(u);
  const int stride = cfg.record_stride > 0 ? cfg.record_stride : nsteps;
  const double guard = 1e6 * (norm_l2(*op.grid(), u) + 1e-300);
  for (int i = 0; i < nsteps; ++i) {
    stepper.step(u, tau0 + i * c.dt, H);
    if (!(norm_l2(*op.grid(), u) < guard))
      fail("evolve_L: norm explosion, reduce dt (step " + std::to_string(i) + ")");
    if ((i + 1) % stride == 0 || i + 1 == nsteps) {
      out.tau.push_back(tau0 + (i + 1) * c.dt);
      out.states.push_back(u);
    }
  }
  return out;
}

std::vector<DecayRow> decay_report(const std::vector<double>& t,
                                   const std::vector<double>& values,
                                   const std::function<double(double)>& bound,
                                   double slack) {
  require(t.size() == values.size(), "decay_report: size mismatch");
  std::vector<DecayRow> rows(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    rows[i].t = t[i];
    rows[i].value = values[i];
    rows[i].bound = bound(t[i]);
    rows[i].ratio = rows[i].bound > 0 ? values[i] / rows[i].bound : 0.0;
    rows[i].violated = rows[i].ratio > slack;
  }
  return rows;
}

double loglog_slope(const std::vector<double>& t,
                    const std::vector<double>& values) {
  require(t.size() == values.size() && t.size() >= 2,
          "loglog_slope: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    require(t[i] > 0 && values[i] > 0, "loglog_slope: nonpositive sample");
    const double x = std::log(t[i]), y = std::log(values[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ssns
