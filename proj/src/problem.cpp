#include "orlisov/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlisov/errors.hpp"
#include "orlisov/gauss.hpp"

namespace orlisov {

namespace {

constexpr double kSafety = 1.05;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> log_grid(const SampleSpec& spec) {
  std::vector<double> t(spec.points);
  const double a = std::log(spec.t_min);
  const double b = std::log(spec.t_max);
  for (int k = 0; k < spec.points; ++k) t[k] = std::exp(a + (b - a) * k / (spec.points - 1));
  return t;
}

struct Ratios {
  double g_max = 0.0;
  double G_min = std::numeric_limits<double>::infinity();
  double G_max = 0.0;
};

Ratios sample_ratios(const Nonlinearity& nl, const SampleSpec& spec, const std::vector<Point>& xs) {
  Ratios r;
  for (const Point& x : xs) {
    for (double t : log_grid(spec)) {
      for (double st : {t, -t}) {
        const double tq = std::pow(t, nl.q);
        r.g_max = std::max(r.g_max, std::abs(nl.g(x, st)) * t / tq);
        const double G = nl.G(x, st) / tq;
        r.G_min = std::min(r.G_min, G);
        r.G_max = std::max(r.G_max, G);
      }
    }
  }
  return r;
}

}  // namespace

Nonlinearity Nonlinearity::pure_power(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw ConfigError("pure_power: need q > 1");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::pure_power;
  nl.q = q;
  nl.C0 = q;
  nl.C1 = 1.0;
  nl.C2 = 1.0;
  nl.label = "pure_power";
  nl.g = [q](const Point&, double t) {
    const double a = std::abs(t);
    return a == 0.0 ? 0.0 : q * std::pow(a, q - 1.0) * (t < 0.0 ? -1.0 : 1.0);
  };
  nl.G = [q](const Point&, double t) { return std::pow(std::abs(t), q); };
  return nl;
}

Nonlinearity Nonlinearity::log_power(double q) {
  if (!(q > 4.0) || !std::isfinite(q)) throw ConfigError("log_power: need q > 4");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::log_power;
  nl.q = q;
  nl.C0 = nl.C1 = nl.C2 = kNaN;
  nl.label = "log_power";
  nl.G = [q](const Point&, double t) {
    const double a = std::abs(t);
    return std::log1p(a * a) * std::pow(a, q - 2.0);
  };
  nl.g = [q](const Point&, double t) {
    const double a = std::abs(t);
    if (a == 0.0) return 0.0;
    const double v = (q - 2.0) * std::log1p(a * a) * std::pow(a, q - 3.0) +
                     2.0 * std::pow(a, q - 1.0) / (1.0 + a * a);
    return t < 0.0 ? -v : v;
  };
  return nl;
}

Nonlinearity Nonlinearity::custom(double q, Rule g, Rule G, std::string label) {
  if (!(q > 1.0)) throw ConfigError("custom nonlinearity: need q > 1");
  if (!g || !G) throw ConfigError("custom nonlinearity needs both g and G");
  Nonlinearity nl;
  nl.kind = NonlinearityKind::custom;
  nl.q = q;
  nl.C0 = nl.C1 = nl.C2 = kNaN;
  nl.label = std::move(label);
  nl.g = std::move(g);
  nl.G = std::move(G);
  return nl;
}

double eval_g(const Nonlinearity& nl, const Point& x, double t) {
  if (!std::isfinite(t) || !std::isfinite(x[0]) || !std::isfinite(x[1])) {
    throw DomainError("eval_g: non-finite input");
  }
  return nl.g(x, t);
}

double eval_G(const Nonlinearity& nl, const Point& x, double t) {
  if (!std::isfinite(t) || !std::isfinite(x[0]) || !std::isfinite(x[1])) {
    throw DomainError("eval_G: non-finite input");
  }
  return nl.G(x, t);
}

Nonlinearity with_estimated_constants(const Nonlinearity& nl, const SampleSpec& spec,
                                      const std::vector<Point>& xs) {
  if (!std::isnan(nl.C0) && !std::isnan(nl.C1) && !std::isnan(nl.C2)) return nl;
  const Ratios r = sample_ratios(nl, spec, xs);
  Nonlinearity out = nl;
  if (std::isnan(out.C0)) out.C0 = kSafety * r.g_max;
  if (std::isnan(out.C1)) out.C1 = r.G_min / kSafety;
  if (std::isnan(out.C2)) out.C2 = kSafety * r.G_max;
  out.constants_estimated = true;
  return out;
}

double critical_exponent(int dim, double p) {
  if (p < dim) return dim * p / (dim - p);
  return std::numeric_limits<double>::infinity();
}

AuditReport validate_hypotheses(const Nonlinearity& nl_in, const YoungFunction& M, int dim,
                                const SampleSpec& spec, const std::vector<Point>& xs) {
  const Nonlinearity nl = with_estimated_constants(nl_in, spec, xs);
  const Ratios r = sample_ratios(nl, spec, xs);
  AuditReport rep;
  rep.name = "hypotheses";

  const double tol = 1e-12;
  const bool a_ok = r.g_max <= nl.C0 * (1.0 + tol);
  const bool b_lo = r.G_min >= nl.C1 * (1.0 - tol) && nl.C1 > 0.0;
  const bool b_hi = r.G_max <= nl.C2 * (1.0 + tol);

  const AuditReport Q = audit_Q_condition(M, nl.q);

  // Primitive consistency on a coarse grid.
  double g_consistency = 0.0;
  for (const Point& x : xs) {
    for (double t : {1e-3, 1e-1, 0.5, 1.0, 2.0, 10.0}) {
      const double I = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double s) { return nl.g(x, s); }, 0.0, t, 15, 1e-13);
      const double G = nl.G(x, t);
      g_consistency = std::max(g_consistency, std::abs(I - G) / std::max(std::abs(G), 1e-300));
    }
  }
  const bool g_ok = g_consistency <= 1e-8;

  const double p = M.m0();
  const double p_star = critical_exponent(dim, p);
  const bool guard_active = p < dim;
  const bool gate = nl.q < std::min(p_star, M.m0());

  rep.samples = static_cast<std::size_t>(spec.points) * 2 * xs.size();
  rep.values = {{"q", nl.q},
                {"C0", nl.C0},
                {"C1", nl.C1},
                {"C2", nl.C2},
                {"sup_g_ratio", r.g_max},
                {"inf_G_ratio", r.G_min},
                {"sup_G_ratio", r.G_max},
                {"G_consistency", g_consistency},
                {"Q_pass", Q.pass ? 1.0 : 0.0},
                {"m0", M.m0()},
                {"p_star", p_star},
                {"gate_pass", gate ? 1.0 : 0.0}};
  rep.pass = a_ok && b_lo && b_hi && Q.pass && g_ok && gate;
  rep.worst_margin = std::min({nl.C0 - r.g_max, r.G_min - nl.C1, nl.C2 - r.G_max,
                               std::min(p_star, M.m0()) - nl.q});

  std::ostringstream note;
  if (!a_ok) note << "growth bound on g fails; ";
  if (!b_lo || !b_hi) note << "sandwich bound on G fails; ";
  if (!Q.pass) note << "q is not dominated by M at infinity; ";
  if (!g_ok) note << "G is not a primitive of g; ";
  if (!gate) note << "gate q < min(p*, m0) fails; ";
  if (!guard_active) note << "p* guard inactive; ";
  if (nl.constants_estimated) note << "constants estimated; ";
  rep.note = note.str();
  if (rep.note.size() >= 2) rep.note.resize(rep.note.size() - 2);
  return rep;
}

EnergyValue energy(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                   const GridFunction& u) {
  if (!(lambda >= 0.0)) throw DomainError("energy: lambda must be nonnegative");
  ctx.check(u);
  EnergyValue e;
  if (u.is_zero()) return e;
  e.modular_part = modular_F(ctx, u);
  CompensatedSum pot;
  const Domain& d = ctx.domain();
  for (const CellPoint& p : ctx.quadrature().cell_points()) {
    const auto nodes = d.cell_nodes(p.cell);
    double v = 0.0;
    for (int a = 0; a < d.nodes_per_cell(); ++a) v += p.phi[a] * u[nodes[a]];
    pot.add(p.w * nl.G(p.x, v));
  }
  e.potential_part = pot.value();
  e.total = e.modular_part - lambda * e.potential_part;
  return e;
}

Covector energy_gradient(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                         const GridFunction& u) {
  if (!(lambda >= 0.0)) throw DomainError("energy_gradient: lambda must be nonnegative");
  ctx.check(u);
  const Domain& d = ctx.domain();
  std::vector<double> nodal = ctx.quadrature().gradient(ctx.M(), u.nodal(), Scope::extended);
  if (lambda != 0.0) {
    std::vector<double> load(d.node_count(), 0.0);
    for (const CellPoint& p : ctx.quadrature().cell_points()) {
      const auto nodes = d.cell_nodes(p.cell);
      double v = 0.0;
      for (int a = 0; a < d.nodes_per_cell(); ++a) v += p.phi[a] * u[nodes[a]];
      const double f = p.w * nl.g(p.x, v);
      for (int a = 0; a < d.nodes_per_cell(); ++a) load[nodes[a]] += f * p.phi[a];
    }
    for (std::size_t k = 0; k < nodal.size(); ++k) nodal[k] -= lambda * load[k];
  }
  return restrict_to_dofs(d, nodal);
}

double lq_norm(const WeakFormContext& ctx, const GridFunction& u, double q) {
  ctx.check(u);
  const Domain& d = ctx.domain();
  CompensatedSum s;
  for (const CellPoint& p : ctx.quadrature().cell_points()) {
    const auto nodes = d.cell_nodes(p.cell);
    double v = 0.0;
    for (int a = 0; a < d.nodes_per_cell(); ++a) v += p.phi[a] * u[nodes[a]];
    s.add(p.w * std::pow(std::abs(v), q));
  }
  return std::pow(s.value(), 1.0 / q);
}

}  // namespace orlisov
