#include "orlisov/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "orlisov/errors.hpp"
#include "orlisov/modular.hpp"
#include "orlisov/operator.hpp"
#include "orlisov/problem.hpp"
#include "orlisov/solver.hpp"

namespace orlisov {

namespace {

// Row whose margin is the minimum of all observed margins; passes iff the
// minimum stays >= 0.
struct Row {
  AuditReport r;

  explicit Row(std::string name) {
    r.name = std::move(name);
    r.worst_margin = std::numeric_limits<double>::infinity();
  }
  void observe(double margin) {
    ++r.samples;
    r.worst_margin = std::min(r.worst_margin, margin);
  }
  AuditReport done() {
    if (r.samples == 0) r.worst_margin = 0.0;
    r.pass = r.worst_margin >= 0.0;
    return r;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

struct Env {
  const RunConfig& cfg;
  YoungFunction M;
  WeakFormContext ctx;

  explicit Env(const RunConfig& c)
      : cfg(c), M(c.young.build()), ctx(M, c.s, c.domain, c.scheme) {}

  const PairQuadrature& quad() const { return ctx.quadrature(); }
  GridFunction random(std::uint64_t k) const { return random_function(cfg.domain, cfg.seed * 7919 + k); }
  double F(const GridFunction& u) const { return modular_F(ctx, u); }
  double seminorm(const GridFunction& u) const {
    return seminorm_gagliardo(M, u, Scope::extended, quad()).norm;
  }
};

using Group = std::function<std::vector<AuditReport>(const Env&)>;

// ---------------------------------------------------------------------------
// Young function

std::vector<AuditReport> young_group(const Env& e) {
  const YoungFunction& M = e.M;
  std::vector<AuditReport> out;

  Row idx("young_indices");
  const GrowthIndices sampled = growth_indices(M);
  if (M.kind() != YoungKind::custom) {
    idx.observe(1e-4 - std::abs(sampled.m0 - M.m0()));
    idx.observe(1e-4 - std::abs(sampled.m_sup - M.m_sup()));
  }
  SampleSpec spec;
  spec.points = 512;
  for (int k = 0; k < spec.points; ++k) {
    const double t = spec.t_min * std::pow(spec.t_max / spec.t_min, double(k) / (spec.points - 1));
    const double r = t * M.density(t) / M.value(t);
    idx.observe(std::min(r - M.m0() + 1e-12 * r, M.m_sup() - r + 1e-12 * r));
  }
  idx.r.values = {{"m0", M.m0()}, {"m_sup", M.m_sup()}, {"sampled_m0", sampled.m0},
                  {"sampled_m_sup", sampled.m_sup}};
  out.push_back(idx.done());

  out.push_back(audit_growth_condition(M));
  out.back().name = "young_growth_condition";
  out.push_back(audit_delta2(M));
  out.back().name = "young_delta2";
  out.push_back(audit_S_condition(M));
  out.back().name = "young_S_condition";
  out.push_back(audit_scaling_inequalities(M, e.cfg.verify.young_samples, e.cfg.seed));
  out.back().name = "young_scaling";
  out.push_back(audit_convexity(M, e.cfg.verify.young_samples, e.cfg.seed + 1));
  out.back().name = "young_convexity";
  out.push_back(audit_representation(M));
  out.back().name = "young_representation";
  return out;
}

// sup_r (t r - M(r)) by Brent search on [0, 4 s_hint], independent of the
// inverse density.
double conjugate_by_sup(const YoungFunction& M, double t, double s_hint) {
  auto neg = [&](double r) { return M.value(r) - t * r; };
  const auto [r, v] = boost::math::tools::brent_find_minima(neg, 0.0, 4.0 * s_hint + 1.0, 52);
  (void)r;
  return -v;
}

std::vector<AuditReport> young_inequality_group(const Env& e) {
  const YoungFunction& M = e.M;
  std::mt19937_64 rng(e.cfg.seed + 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Row ineq("young_inequality");
  for (std::size_t i = 0; i < e.cfg.verify.young_samples; ++i) {
    const double s = 10.0 * (1.0 - unit(rng));
    const double t = 10.0 * (1.0 - unit(rng));
    ineq.observe(M.value(s) + conjugate_eval(M, t) + 1e-8 - s * t);
  }
  Row eq("young_equality");
  for (std::size_t i = 0; i < std::min<std::size_t>(e.cfg.verify.young_samples, 1000); ++i) {
    const double s = 10.0 * (1.0 - unit(rng));
    const double t = M.density(s);
    const double gap = std::abs(M.value(s) + conjugate_by_sup(M, t, s) - s * t);
    eq.observe(1e-6 * std::max(1.0, s * t) - gap);
  }
  Row inv("young_conjugate_involution");
  const YoungFunction C = conjugate(M);
  const YoungFunction CC = conjugate(C);
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) inv.observe(1e-6 - rel(CC.value(t), M.value(t)));
  return {ineq.done(), eq.done(), inv.done()};
}

// ---------------------------------------------------------------------------
// modular

std::vector<AuditReport> luxemburg_group(const Env& e) {
  if (e.M.kind() != YoungKind::power) return {};
  const double p = e.M.p();
  Row lm("luxemburg_LM_power");
  Row sn("luxemburg_seminorm_power");
  for (std::size_t k = 0; k < e.cfg.verify.fixtures; ++k) {
    const GridFunction u = e.random(100 + k);
    const double n = norm_LM(e.M, u, e.cfg.scheme.gauss_order).norm;
    lm.observe(1e-8 - rel(n, std::pow(modular_LM(e.M, u, e.cfg.scheme.gauss_order), 1.0 / p)));
    sn.observe(1e-8 - rel(e.seminorm(u), std::pow(e.F(u), 1.0 / p)));
  }
  return {lm.done(), sn.done()};
}

std::vector<AuditReport> lemma2_group(const Env& e) {
  Row r1("lemma2_i");
  Row r2("lemma2_ii");
  Row r3("lemma2_iii");
  const double m0 = e.M.m0();
  const double m1 = e.M.m_sup();
  std::mt19937_64 rng(e.cfg.seed + 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < e.cfg.verify.lemma2_samples; ++k) {
    const GridFunction dir = random_unit_direction(e.M, e.quad(), e.cfg.seed * 7919 + 200 + k);
    const double target = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const GridFunction u = dir.scaled(target);
    const double sn = e.seminorm(u);
    const double F = e.F(u);
    r1.observe(1e-9 - (e.F(u.scaled(1.0 / sn)) - 1.0));
    const double a = std::pow(sn, m0);
    const double b = std::pow(sn, m1);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    Row& row = sn > 1.0 ? r2 : r3;
    row.observe(std::min(F - lo * (1.0 - 1e-8), hi * (1.0 + 1e-8) - F) / std::max(F, 1e-300));
  }
  return {r1.done(), r2.done(), r3.done()};
}

std::vector<AuditReport> norm_axioms_group(const Env& e) {
  Row hom("norm_homogeneity");
  Row tri("norm_triangle");
  std::mt19937_64 rng(e.cfg.seed + 4);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (std::size_t k = 0; k < e.cfg.verify.fixtures; ++k) {
    const GridFunction u = e.random(300 + 2 * k);
    const GridFunction v = e.random(301 + 2 * k);
    const double a = std::pow(10.0, unit(rng)) * (k % 2 == 0 ? 1.0 : -1.0);
    const double nu = e.seminorm(u);
    hom.observe(1e-8 - rel(e.seminorm(u.scaled(a)), std::abs(a) * nu));
    const double nv = e.seminorm(v);
    tri.observe(((nu + nv) * (1.0 + 1e-8) - e.seminorm(u + v)) / (nu + nv));
  }
  return {hom.done(), tri.done()};
}

std::vector<AuditReport> poincare_group(const Env& e) {
  Row valid("poincare_max");
  Row stable("poincare_seed_stability");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const PoincareEstimate p =
        poincare_estimate(e.M, e.quad(), e.cfg.verify.poincare_samples, e.cfg.seed * 7919 + 1000 * (s + 1));
    valid.observe(std::isfinite(p.mu) && p.mu > 0.0 ? 0.0 : -1.0);
    for (double r : p.ratios) valid.observe(p.mu - r);
    lo = std::min(lo, p.mu);
    hi = std::max(hi, p.mu);
  }
  stable.observe(0.1 - (hi / lo - 1.0));
  stable.r.values = {{"min_mu", lo}, {"max_mu", hi}};
  valid.r.values = {{"mu", hi}};
  return {valid.done(), stable.done()};
}

// ---------------------------------------------------------------------------
// operator

std::vector<AuditReport> gradient_group(const Env& e) {
  Row fd("gradient_fd");
  Row order("gradient_order");
  Row assembly("gradient_assembly");
  const auto dofs = e.cfg.domain.dof_nodes();
  for (std::size_t k = 0; k < e.cfg.verify.fixtures; ++k) {
    const GridFunction u = e.random(400 + 2 * k);
    const GridFunction v = e.random(401 + 2 * k);
    const double aw = apply_weak(e.ctx, u, v);
    auto cd = [&](double h) { return (e.F(u + v.scaled(h)) - e.F(u - v.scaled(h))) / (2.0 * h); };
    fd.observe(1e-6 - std::abs(aw - cd(1e-5)) / (1.0 + std::abs(aw)));
    const double e3 = std::abs(aw - cd(1e-3));
    const double e4 = std::abs(aw - cd(1e-4));
    // Only meaningful where truncation dominates rounding.
    if (e3 > 1e-9 * (1.0 + std::abs(aw))) order.observe(std::log10(e3 / e4) - 1.5);

    const Covector g = gradient_F(e.ctx, u);
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    if (k < 3) {
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        std::vector<double> unitv(e.cfg.domain.node_count(), 0.0);
        unitv[dofs[i]] = 1.0;
        const GridFunction phi(e.cfg.domain, unitv, true);
        assembly.observe(1e-12 - std::abs(g[i] - apply_weak(e.ctx, u, phi)) / std::max(gmax, 1e-300));
      }
    }
  }
  if (order.r.samples == 0) order.r.note = "central differences exact to rounding (F quadratic along lines)";
  return {fd.done(), order.done(), assembly.done()};
}

std::vector<AuditReport> monotonicity_group(const Env& e) {
  Row mono("monotonicity");
  Row conv("convexity_inequality");
  for (std::size_t k = 0; k < e.cfg.verify.pairs; ++k) {
    const GridFunction u = e.random(600 + 2 * k);
    const GridFunction v = e.random(601 + 2 * k);
    mono.observe(monotonicity_probe(e.ctx, u, v) + 1e-9);
    conv.observe(e.F(v) - e.F(u) - apply_weak(e.ctx, u, v - u) + 1e-9);
  }
  return {mono.done(), conv.done()};
}

// ---------------------------------------------------------------------------
// problem and solver

std::vector<AuditReport> hypotheses_group(const Env& e) {
  if (!e.cfg.nonlinearity.present) return {};
  AuditReport r = validate_hypotheses(e.cfg.nonlinearity.build(), e.M, e.cfg.domain.dim);
  r.name = "hypotheses";
  return {r};
}

std::vector<AuditReport> energy_group(const Env& e) {
  if (!e.cfg.nonlinearity.present) return {};
  const Nonlinearity nl = with_estimated_constants(e.cfg.nonlinearity.build());
  const double lambda = e.cfg.lambda.mode == LambdaChoice::Mode::value ? e.cfg.lambda.value
                                                                       : e.cfg.solver.probe_lambda;
  Row fd("energy_gradient_fd");
  for (std::size_t k = 0; k < e.cfg.verify.fixtures; ++k) {
    const GridFunction u = e.random(700 + 2 * k);
    const GridFunction v = e.random(701 + 2 * k);
    const Covector g = energy_gradient(e.ctx, nl, lambda, u);
    const auto vd = v.dofs();
    double pair = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) pair += g[i] * vd[i];
    const double h = 1e-5;
    const double cd =
        (energy(e.ctx, nl, lambda, u + v.scaled(h)).total - energy(e.ctx, nl, lambda, u - v.scaled(h)).total) /
        (2.0 * h);
    fd.observe(1e-6 - std::abs(pair - cd) / (1.0 + std::abs(pair)));
  }

  Row coerc("coercivity");
  if (nl.q < e.M.m0()) {
    for (std::size_t k = 0; k < 20; ++k) {
      const GridFunction v = random_unit_direction(e.M, e.quad(), e.cfg.seed * 7919 + 800 + k);
      std::vector<double> I;
      for (int j = 0; j <= 7; ++j) I.push_back(energy(e.ctx, nl, lambda, v.scaled(std::ldexp(1.0, j))).total);
      const double last = I.back();
      coerc.observe(std::min(last - I[6], last - 10.0 * std::abs(I[0])) / std::max(1.0, std::abs(last)));
    }
  }

  Row neg("negative_infimum");
  const GridFunction b = bubble(e.cfg.domain);
  for (double lam : {1e-3, 1e-2, 1e-1, 1.0, lambda}) {
    double best = 0.0;
    for (int k = 0; k <= 60 && best >= 0.0; ++k) best = std::min(best, energy(e.ctx, nl, lam, b.scaled(std::ldexp(1.0, -k))).total);
    neg.observe(best < 0.0 ? 0.0 : -1.0);
  }
  std::vector<AuditReport> out{fd.done()};
  if (coerc.r.samples > 0) out.push_back(coerc.done());
  out.push_back(neg.done());
  return out;
}

std::vector<AuditReport> ring_group(const Env& e) {
  if (!e.cfg.nonlinearity.present) return {};
  const Nonlinearity nl = with_estimated_constants(e.cfg.nonlinearity.build());
  const MinimizeResult probe = minimize(e.ctx, nl, e.cfg.solver.probe_lambda, e.cfg.solver);
  Row ring("ring_positivity");
  if (probe.u.is_zero()) {
    ring.observe(-1.0);
    ring.r.note = "provisional minimization failed";
    return {ring.done()};
  }
  const double rho = 0.5 * e.seminorm(probe.u);
  const C1Estimate c1 = estimate_c1(e.ctx, nl.q, e.cfg.solver.c1_samples, e.cfg.seed);
  const LambdaStar ls = lambda_star(e.M, nl, rho, c1.value);
  const double lambda = 0.5 * ls.lambda_star;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < e.cfg.verify.ring_samples; ++k) {
    const GridFunction u = random_unit_direction(e.M, e.quad(), e.cfg.seed * 7919 + 900 + k).scaled(rho);
    const double I = energy(e.ctx, nl, lambda, u).total;
    worst = std::min(worst, I);
    ring.observe((I - 0.5 * ls.alpha) / ls.alpha);
  }
  ring.r.values = {{"rho", rho}, {"alpha", ls.alpha}, {"lambda", lambda}, {"lambda_star", ls.lambda_star},
                   {"min_energy", worst}};
  return {ring.done()};
}

const std::vector<std::pair<std::string, Group>>& groups() {
  static const std::vector<std::pair<std::string, Group>> g = {
      {"young", young_group},
      {"young_inequality", young_inequality_group},
      {"luxemburg", luxemburg_group},
      {"lemma2", lemma2_group},
      {"norm", norm_axioms_group},
      {"poincare", poincare_group},
      {"gradient", gradient_group},
      {"monotonicity", monotonicity_group},
      {"hypotheses", hypotheses_group},
      {"energy", energy_group},
      {"ring", ring_group},
  };
  return g;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

std::vector<std::string> property_groups() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : groups()) out.push_back(name);
  return out;
}

std::vector<AuditReport> run_property_suite(const RunConfig& cfg, const std::vector<std::string>& filters) {
  const Env env(cfg);
  std::vector<AuditReport> out;
  for (const auto& [name, fn] : groups()) {
    const bool wanted = filters.empty() || std::any_of(filters.begin(), filters.end(), [&](const std::string& f) {
                          return starts_with(name, f) || starts_with(f, name);
                        });
    if (!wanted) continue;
    std::vector<AuditReport> rows;
    try {
      rows = fn(env);
    } catch (const std::exception& ex) {
      AuditReport r;
      r.name = name;
      r.pass = false;
      r.worst_margin = -std::numeric_limits<double>::infinity();
      r.note = ex.what();
      rows = {r};
    }
    for (auto& r : rows) {
      const bool row_wanted = filters.empty() || std::any_of(filters.begin(), filters.end(), [&](const std::string& f) {
                                return starts_with(r.name, f) || f == name;
                              });
      if (row_wanted) out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace orlisov
