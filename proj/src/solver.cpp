#include "orlisov/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlisov/errors.hpp"
#include "orlisov/gauss.hpp"
#include "orlisov/modular.hpp"

namespace orlisov {

namespace {

// 2^-1000 is still a normal double; squares underflow well before that.
constexpr int kMaxStartShift = 1000;

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vec axpy(const Vec& x, double a, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
  return r;
}

Vec scaled(const Vec& x, double a) {
  Vec r(x);
  for (double& v : r) v *= a;
  return r;
}

class Energy {
 public:
  Energy(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda)
      : ctx_(ctx), nl_(nl), lambda_(lambda) {}

  GridFunction fn(const Vec& x) const { return GridFunction::from_dofs(ctx_.domain(), x); }
  EnergyValue value(const Vec& x) const { return energy(ctx_, nl_, lambda_, fn(x)); }
  double total(const Vec& x) const { return value(x).total; }
  Vec grad(const Vec& x) const { return energy_gradient(ctx_, nl_, lambda_, fn(x)); }

 private:
  const WeakFormContext& ctx_;
  const Nonlinearity& nl_;
  double lambda_;
};

double initial_step(const Vec& x, const Vec& g) {
  const double gi = norm_inf(g);
  const double xi = norm_inf(x);
  return (xi > 0.0 ? 0.1 * xi : 1.0) / gi;
}

double bb_step(const Vec& x0, const Vec& x1, const Vec& g0, const Vec& g1, double fallback) {
  Vec s(x0.size()), y(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    s[i] = x1[i] - x0[i];
    y[i] = g1[i] - g0[i];
  }
  const double sy = dot(s, y);
  if (!(sy > 0.0) || !std::isfinite(sy)) return 2.0 * fallback;
  return dot(s, s) / sy;
}

// Maximizer t > 0 of t -> I(t x) via a sign change of <I'(t x), x>.
struct RayMax {
  bool ok = false;
  double t = 0.0;
};

RayMax ray_max(const Energy& E, const Vec& x) {
  auto dphi = [&](double t) { return dot(E.grad(scaled(x, t)), x); };
  double lo = 1.0;
  double hi = 1.0;
  double dlo = dphi(1.0);
  double dhi = dlo;
  if (dlo > 0.0) {
    for (int k = 0; dhi > 0.0; ++k) {
      if (k > 60) return {};
      lo = hi;
      dlo = dhi;
      hi *= 2.0;
      dhi = dphi(hi);
    }
  } else {
    for (int k = 0; dlo <= 0.0; ++k) {
      if (k > 60) return {};
      hi = lo;
      dhi = dlo;
      lo *= 0.5;
      dlo = dphi(lo);
    }
  }
  // Illinois regula falsi on [lo, hi] with dphi(lo) > 0 >= dphi(hi).
  int side = 0;
  double t = lo;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    t = (lo * dhi - hi * dlo) / (dhi - dlo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double d = dphi(t);
    if (d == 0.0) return {true, t};
    if (d > 0.0) {
      lo = t;
      dlo = d;
      if (side == 1) dhi *= 0.5;
      side = 1;
    } else {
      hi = t;
      dhi = d;
      if (side == -1) dlo *= 0.5;
      side = -1;
    }
  }
  return {true, t};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(grad_tol > 0.0)) throw ConfigError("solver.grad_tol must be positive");
  if (path_points < 8) throw ConfigError("solver.path_points must be at least 8");
  if (max_iters < 1) throw ConfigError("solver.max_iters must be positive");
  if (deform_steps < 0) throw ConfigError("solver.deform_steps must be nonnegative");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("solver.armijo_c must lie in (0, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ConfigError("solver.backtrack must lie in (0, 1)");
  if (!(probe_lambda > 0.0)) throw ConfigError("solver.probe_lambda must be positive");
  if (c1_samples < 1) throw ConfigError("solver.c1_samples must be positive");
}

MinimizeResult minimize(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                        const SolverConfig& cfg, const GridFunction* start) {
  if (!(lambda > 0.0)) throw DomainError("minimize: lambda must be positive");
  cfg.validate();
  const Energy E(ctx, nl, lambda);
  MinimizeResult r;

  Vec x;
  double fx = 0.0;
  if (start != nullptr) {
    ctx.check(*start);
    x = start->dofs();
    fx = E.total(x);
  } else {
    const Vec v = bubble(ctx.domain()).dofs();
    double best = 0.0;
    for (int k = 0; k <= kMaxStartShift; ++k) {
      const Vec trial = scaled(v, std::ldexp(1.0, -k));
      const double f = E.total(trial);
      if (f < best) {
        best = f;
        x = trial;
      } else if (best < 0.0) {
        break;
      }
    }
    if (x.empty()) {
      r.u = GridFunction::zero(ctx.domain());
      r.failure = "no negative-energy start among 2^-k * bubble, k = 0.." + std::to_string(kMaxStartShift);
      return r;
    }
    fx = best;
  }
  r.start_energy = fx;
  r.energies.push_back(fx);

  Vec g = E.grad(x);
  double tau = initial_step(x, g);
  for (r.iterations = 0; r.iterations < cfg.max_iters; ++r.iterations) {
    r.residual = norm_inf(g);
    if (r.residual <= cfg.grad_tol * std::min(1.0, norm_inf(x))) {
      r.converged = true;
      break;
    }
    const double gg = dot(g, g);
    bool accepted = false;
    Vec xn;
    double fn = 0.0;
    for (int bt = 0; bt < 60; ++bt, tau *= cfg.backtrack) {
      xn = axpy(x, -tau, g);
      fn = E.total(xn);
      if (fn <= fx - cfg.armijo_c * tau * gg) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.failure = "line search stalled";
      break;
    }
    Vec gn = E.grad(xn);
    tau = bb_step(x, xn, g, gn, tau);
    x = std::move(xn);
    g = std::move(gn);
    fx = fn;
    r.energies.push_back(fx);
  }
  r.residual = norm_inf(g);
  r.converged = r.residual <= cfg.grad_tol * std::min(1.0, norm_inf(x));
  if (!r.converged && r.failure.empty()) r.failure = "iteration limit reached";
  r.u = E.fn(x);
  r.energy = E.value(x);
  return r;
}

MountainPassResult mountain_pass(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                                 const GridFunction& u1, double alpha, const SolverConfig& cfg) {
  if (!(lambda > 0.0)) throw DomainError("mountain_pass: lambda must be positive");
  cfg.validate();
  ctx.check(u1);
  const Energy E(ctx, nl, lambda);
  MountainPassResult r;

  const int P = cfg.path_points;
  const Vec end = u1.dofs();
  std::vector<Vec> path(P);
  Vec f(P);
  for (int k = 0; k < P; ++k) {
    path[k] = scaled(end, static_cast<double>(k) / (P - 1));
    f[k] = E.total(path[k]);
  }
  auto argmax = [&](const Vec& vals) {
    return static_cast<int>(std::max_element(vals.begin() + 1, vals.end() - 1) - vals.begin());
  };

  std::vector<double> taus(P, 0.0);
  for (r.sweeps = 0; r.sweeps < cfg.deform_steps; ++r.sweeps) {
    const int k = argmax(f);
    r.path_max.push_back(f[k]);
    const Vec g = E.grad(path[k]);
    if (norm_inf(g) <= cfg.grad_tol) break;
    double tau = taus[k] > 0.0 ? 2.0 * taus[k] : initial_step(path[k], g);
    const double gg = dot(g, g);
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt, tau *= cfg.backtrack) {
      Vec xn = axpy(path[k], -tau, g);
      const double fn = E.total(xn);
      if (fn <= f[k] - cfg.armijo_c * tau * gg) {
        path[k] = std::move(xn);
        f[k] = fn;
        taus[k] = tau;
        moved = true;
        break;
      }
    }
    if (!moved) break;

    // Re-equidistribute by arclength; keep it only if the maximum does not grow.
    Vec arc(P, 0.0);
    for (int j = 1; j < P; ++j) {
      Vec d = axpy(path[j], -1.0, path[j - 1]);
      arc[j] = arc[j - 1] + std::sqrt(dot(d, d));
    }
    if (arc.back() > 0.0) {
      std::vector<Vec> np(P);
      np.front() = path.front();
      np.back() = path.back();
      int seg = 0;
      for (int j = 1; j < P - 1; ++j) {
        const double target = arc.back() * j / (P - 1);
        while (seg < P - 2 && arc[seg + 1] < target) ++seg;
        const double len = arc[seg + 1] - arc[seg];
        const double th = len > 0.0 ? (target - arc[seg]) / len : 0.0;
        np[j] = axpy(scaled(path[seg], 1.0 - th), th, path[seg + 1]);
      }
      Vec nf(P);
      nf.front() = f.front();
      nf.back() = f.back();
      for (int j = 1; j < P - 1; ++j) nf[j] = E.total(np[j]);
      if (nf[argmax(nf)] <= f[argmax(f)]) {
        path = std::move(np);
        f = std::move(nf);
        std::fill(taus.begin(), taus.end(), 0.0);
      }
    }
  }

  const int k = argmax(f);
  const double pmax = f[k];
  Vec x = path[k];
  r.u = E.fn(x);
  r.energy = E.value(x);
  r.residual = norm_inf(E.grad(x));
  if (pmax < 0.5 * alpha || (alpha == 0.0 && pmax < 0.0) || !(pmax > 0.0)) {
    r.geometry_violation = true;
    std::ostringstream os;
    os << "path maximum " << pmax << " below the geometric level " << 0.5 * alpha;
    r.failure = os.str();
    return r;
  }

  // Descent restricted to ray maximizers.
  RayMax rm = ray_max(E, x);
  if (!rm.ok) {
    r.failure = "energy has no maximum along the ray of the path maximizer";
    return r;
  }
  x = scaled(x, rm.t);
  double fx = E.total(x);
  Vec g = E.grad(x);
  double tau = 0.0;
  Vec prev_x, prev_gp;
  for (r.refine_iterations = 0; r.refine_iterations < cfg.max_iters; ++r.refine_iterations) {
    r.residual = norm_inf(g);
    if (r.residual <= cfg.grad_tol) break;
    const double radial = dot(g, x) / dot(x, x);
    const Vec gp = axpy(g, -radial, x);
    if (tau <= 0.0) tau = initial_step(x, gp);
    const double gg = dot(gp, gp);
    bool accepted = false;
    Vec xn;
    double fn = 0.0;
    for (int bt = 0; bt < 60; ++bt, tau *= cfg.backtrack) {
      Vec trial = axpy(x, -tau, gp);
      const RayMax m = ray_max(E, trial);
      if (!m.ok) continue;
      trial = scaled(trial, m.t);
      const double ft = E.total(trial);
      if (ft <= fx - cfg.armijo_c * tau * gg) {
        xn = std::move(trial);
        fn = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.failure = "constrained line search stalled";
      break;
    }
    Vec gn = E.grad(xn);
    const Vec gpn = axpy(gn, -dot(gn, xn) / dot(xn, xn), xn);
    tau = bb_step(x, xn, gp, gpn, tau);
    x = std::move(xn);
    g = std::move(gn);
    fx = fn;
  }
  r.residual = norm_inf(g);
  r.converged = r.residual <= cfg.grad_tol * std::min(1.0, norm_inf(x));
  if (!r.converged && r.failure.empty()) r.failure = "iteration limit reached";
  r.u = E.fn(x);
  r.energy = E.value(x);
  return r;
}

C1Estimate estimate_c1(const WeakFormContext& ctx, double q, std::size_t n_samples,
                       std::uint64_t seed) {
  C1Estimate out;
  auto ratio = [&](const GridFunction& u) {
    const double lq = lq_norm(ctx, u, q);
    const double sn = seminorm_gagliardo(ctx.M(), u, Scope::extended, ctx.quadrature()).norm;
    out.ratios.push_back(lq / sn);
    out.raw = std::max(out.raw, out.ratios.back());
  };
  ratio(bubble(ctx.domain()));
  ratio(hat(ctx.domain()));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const GridFunction u = random_function(ctx.domain(), seed + i);
    if (!u.is_zero()) ratio(u);
  }
  out.value = 1.1 * out.raw;
  return out;
}

LambdaStar lambda_star(const YoungFunction& M, const Nonlinearity& nl, double rho, double c1) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("lambda_star: rho must be positive");
  if (!(c1 > 0.0)) throw DomainError("lambda_star: c1 must be positive");
  LambdaStar out;
  out.exponent = rho < 1.0 ? M.m_sup() : M.m0();
  const double lead = std::pow(rho, out.exponent - nl.q);
  out.alpha = lead / 3.0;
  out.lambda_star = lead / (3.0 * nl.C2 * std::pow(c1, nl.q));
  return out;
}

bool SolutionReport::u1_ok(double grad_tol) const {
  return I1.total < 0.0 && residual1 <= grad_tol && !u1.is_zero();
}

bool SolutionReport::u2_ok(double grad_tol) const {
  return !geometry_violation && I2.total > 0.0 && residual2 <= grad_tol &&
         distance > 1e-6 * std::max(u1.max_abs(), u2.max_abs());
}

SolutionReport solve_two(const WeakFormContext& ctx, const Nonlinearity& nl_in, LambdaChoice choice,
                         const SolverConfig& cfg, bool force) {
  cfg.validate();
  SolutionReport rep;
  rep.forced = force;
  rep.u1 = rep.u2 = GridFunction::zero(ctx.domain());
  const Nonlinearity nl = with_estimated_constants(nl_in);

  rep.hypotheses = validate_hypotheses(nl, ctx.M(), ctx.domain().dim);
  if (!rep.hypotheses.pass) {
    rep.messages.push_back("hypotheses fail: " + rep.hypotheses.note);
    if (!force) {
      rep.gate_refused = true;
      rep.partial = true;
      return rep;
    }
  }

  const MinimizeResult probe = minimize(ctx, nl, cfg.probe_lambda, cfg);
  if (!probe.failure.empty() && probe.u.is_zero()) {
    rep.messages.push_back("provisional minimization failed: " + probe.failure);
    rep.partial = true;
    return rep;
  }
  rep.rho = 0.5 * seminorm_gagliardo(ctx.M(), probe.u, Scope::extended, ctx.quadrature()).norm;

  const C1Estimate c1 = estimate_c1(ctx, nl.q, cfg.c1_samples, cfg.seed);
  rep.c1_estimate = c1.value;
  const LambdaStar ls = lambda_star(ctx.M(), nl, rep.rho, c1.value);
  rep.lambda_star = ls.lambda_star;
  rep.alpha = ls.alpha;
  rep.exponent = ls.exponent;

  switch (choice.mode) {
    case LambdaChoice::Mode::value:
      rep.lambda = choice.value;
      break;
    case LambdaChoice::Mode::automatic:
      rep.lambda = std::min(0.5 * rep.lambda_star, 0.1);
      break;
    case LambdaChoice::Mode::relative:
      rep.lambda = choice.value * rep.lambda_star;
      break;
  }
  if (!(rep.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(rep.lambda < rep.lambda_star)) {
    std::ostringstream os;
    os << "lambda = " << rep.lambda << " is not below the estimated threshold " << rep.lambda_star;
    rep.messages.push_back(os.str());
    if (!force) {
      rep.gate_refused = true;
      rep.partial = true;
      return rep;
    }
  }

  const MinimizeResult m = minimize(ctx, nl, rep.lambda, cfg);
  rep.u1 = m.u;
  rep.I1 = m.energy;
  rep.residual1 = m.residual;
  rep.iterations1 = m.iterations;
  if (!m.failure.empty()) rep.messages.push_back("minimize: " + m.failure);
  if (m.u.is_zero()) {
    rep.partial = true;
    return rep;
  }

  const MountainPassResult mp = mountain_pass(ctx, nl, rep.lambda, m.u, rep.alpha, cfg);
  rep.u2 = mp.u;
  rep.I2 = mp.energy;
  rep.residual2 = mp.residual;
  rep.iterations2 = mp.refine_iterations;
  rep.sweeps = mp.sweeps;
  rep.path_max = mp.path_max;
  rep.geometry_violation = mp.geometry_violation;
  if (!mp.failure.empty()) rep.messages.push_back("mountain pass: " + mp.failure);

  double dist = 0.0;
  for (std::size_t k = 0; k < rep.u1.nodal().size(); ++k) {
    dist = std::max(dist, std::abs(rep.u1[k] - rep.u2[k]));
  }
  rep.distance = dist;
  rep.partial = !(rep.u1_ok(cfg.grad_tol) && rep.u2_ok(cfg.grad_tol));
  return rep;
}

}  // namespace orlisov
