// Acceptance checks, one criterion per invocation: `acceptance <1..11>`.
// Prints a single "[PASS]" or "[FAIL]" line and exits 0 or 1.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "orlisov/cli.hpp"
#include "orlisov/modular.hpp"
#include "orlisov/operator.hpp"
#include "orlisov/solver.hpp"
#include "orlisov/verify.hpp"

using namespace orlisov;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<YoungFunction> families() {
  return {YoungFunction::power(3), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)};
}

RunConfig canonical() {
  RunConfig c;
  c.young.kind = "power";
  c.young.p = 2.0;
  c.nonlinearity.present = true;
  c.nonlinearity.kind = "pure_power";
  c.nonlinearity.q = 1.5;
  c.lambda = {LambdaChoice::Mode::automatic, 0.0};
  return c;
}

RunConfig with_young(RunConfig c, const YoungFunction& M) {
  switch (M.kind()) {
    case YoungKind::power:
      c.young.kind = "power";
      c.young.p = M.p();
      break;
    case YoungKind::power_sum:
      c.young.kind = "power_sum";
      c.young.p = M.p();
      c.young.q = M.q();
      break;
    default:
      c.young.kind = "bump_power";
      c.young.gamma = M.gamma();
      break;
  }
  return c;
}

bool rows_pass(const std::vector<AuditReport>& rows, Outcome& o) {
  bool all = true;
  for (const auto& r : rows) {
    o.detail << ' ' << r.name << '=' << (r.pass ? "ok" : "fail") << "(" << r.worst_margin << ")";
    all = all && r.pass;
  }
  return all && !rows.empty();
}

// 1. Young calculus on the three families.
void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  for (const auto& M : families()) {
    const GrowthIndices g = growth_indices(M);
    const double err = std::max(std::abs(g.m0 - M.m0()), std::abs(g.m_sup - M.m_sup()));
    o.detail << ' ' << M.describe() << " index_err=" << err;
    o.require(err <= 1e-4, "indices " + M.describe());
    o.require(audit_delta2(M).pass, "delta2 " + M.describe());
    o.require(audit_S_condition(M).pass, "S " + M.describe());
    o.require(audit_scaling_inequalities(M, 10000, 7).pass, "scaling " + M.describe());
  }
  const double t = seconds_since(t0);
  o.detail << " runtime=" << t << "s";
  o.require(t < 5.0, "runtime < 5 s");
}

// 2. Young inequality and its equality case.
void criterion2(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (const auto& M : families()) {
    double worst_ineq = INFINITY;
    double worst_eq = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double s = u(rng);
      const double t = u(rng);
      worst_ineq = std::min(worst_ineq, M.value(s) + conjugate_eval(M, t) + 1e-8 - s * t);
    }
    for (int i = 0; i < 1000; ++i) {
      const double s = u(rng);
      const double t = M.density(s);
      worst_eq = std::max(worst_eq, std::abs(M.value(s) + conjugate_eval(M, t) - s * t) / std::max(1.0, s * t));
    }
    o.detail << ' ' << M.describe() << " ineq_margin=" << worst_ineq << " eq_gap=" << worst_eq;
    o.require(worst_ineq >= 0.0, "inequality " + M.describe());
    o.require(worst_eq <= 1e-6, "equality " + M.describe());
  }
  const double t = seconds_since(t0);
  o.detail << " runtime=" << t << "s";
  o.require(t < 10.0, "runtime < 10 s");
}

// 3. Luxemburg norms of power modulars.
void criterion3(Outcome& o) {
  const auto t0 = Clock::now();
  const Domain d = Domain::interval(0.0, 1.0, 32);
  for (double p : {2.0, 3.0}) {
    const auto M = YoungFunction::power(p);
    const auto quad = PairQuadrature::shared(d, 0.5, QuadratureScheme::defaults(1));
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
      const GridFunction u = random_function(d, 3000 + k).scaled(std::pow(10.0, double(k % 5) - 2.0));
      const double lm = norm_LM(M, u).norm;
      const double sn = seminorm_gagliardo(M, u, Scope::extended, *quad).norm;
      const double F = modular_gagliardo(M, u, Scope::extended, *quad).value;
      worst = std::max(worst, std::abs(lm - std::pow(modular_LM(M, u), 1.0 / p)) / lm);
      worst = std::max(worst, std::abs(sn - std::pow(F, 1.0 / p)) / sn);
    }
    o.detail << " p=" << p << " max_rel=" << worst;
    o.require(worst <= 1e-8, "p=" + std::to_string(p));
  }
  const double t = seconds_since(t0);
  o.detail << " runtime=" << t << "s";
  o.require(t < 30.0, "runtime < 30 s");
}

// 4. Modular/norm sandwich on 100 rescaled fixtures per family.
void criterion4(Outcome& o) {
  const auto t0 = Clock::now();
  for (const auto& M : families()) {
    RunConfig c = with_young(canonical(), M);
    c.verify.lemma2_samples = 100;
    o.detail << ' ' << M.describe() << ':';
    o.require(rows_pass(run_property_suite(c, {"lemma2"}), o), M.describe());
  }
  const double t = seconds_since(t0);
  o.detail << " runtime=" << t << "s";
  o.require(t < 120.0, "runtime < 2 min");
}

// 5. Domain-scope modular of u = x under refinement.
void criterion5(Outcome& o) {
  const Domain d = Domain::interval(0.0, 1.0, 32);
  const GridFunction u = fixture(d, "linear");
  const auto M = YoungFunction::power(2);
  double prev = INFINITY;
  for (int k = 0; k < 4; ++k) {
    QuadratureScheme s;
    s.gauss_order = 3 + k;
    s.diagonal_levels = 6 + k;
    const double v = modular_gagliardo(M, u, Scope::domain, PairQuadrature(d, 0.5, s)).value;
    const double err = std::abs(v - 1.0);
    o.detail << " (" << s.gauss_order << ',' << s.diagonal_levels << ")err=" << err;
    if (k == 0) o.require(err <= 1e-3, "base error <= 1e-3");
    // Rounding-level plateaus count as non-increasing.
    if (k > 0) o.require(err <= prev + 1e-13, "monotone decrease");
    prev = err;
  }
}

// 6. Gradient fidelity against central differences.
void criterion6(Outcome& o) {
  const Domain d = Domain::interval(0.0, 1.0, 32);
  const auto nl = Nonlinearity::pure_power(1.5);
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    const WeakFormContext ctx(M, 0.5, d, QuadratureScheme::defaults(1));
    double worst_F = 0.0;
    double worst_I = 0.0;
    std::vector<double> orders;
    for (std::uint64_t k = 0; k < 20; ++k) {
      const GridFunction u = random_function(d, 4000 + 2 * k);
      const GridFunction v = random_function(d, 4001 + 2 * k);
      auto cdF = [&](double h) {
        return (modular_F(ctx, u + v.scaled(h)) - modular_F(ctx, u - v.scaled(h))) / (2 * h);
      };
      const double aw = apply_weak(ctx, u, v);
      worst_F = std::max(worst_F, std::abs(aw - cdF(1e-5)) / (1.0 + std::abs(aw)));
      const double e3 = std::abs(aw - cdF(1e-2));
      const double e4 = std::abs(aw - cdF(1e-3));
      if (e3 > 1e-9 * (1.0 + std::abs(aw))) orders.push_back(std::log10(e3 / e4));

      const Covector g = energy_gradient(ctx, nl, 0.1, u);
      const auto vd = v.dofs();
      double pair = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) pair += g[i] * vd[i];
      const double h = 1e-5;
      const double cdI =
          (energy(ctx, nl, 0.1, u + v.scaled(h)).total - energy(ctx, nl, 0.1, u - v.scaled(h)).total) / (2 * h);
      worst_I = std::max(worst_I, std::abs(pair - cdI) / (1.0 + std::abs(pair)));
    }
    o.detail << ' ' << M.describe() << " F_rel=" << worst_F << " I_rel=" << worst_I;
    o.require(worst_F < 1e-6, "gradient_F " + M.describe());
    o.require(worst_I < 1e-6, "energy_gradient " + M.describe());
    if (orders.empty()) {
      o.detail << " order=exact";
    } else {
      double lo = INFINITY, hi = -INFINITY;
      for (double r : orders) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      o.detail << " order=[" << lo << ',' << hi << ']';
      o.require(lo > 1.8 && hi < 2.2, "order ~ 2 " + M.describe());
    }
  }
}

// 7. Monotonicity and the convexity inequality.
void criterion7(Outcome& o) {
  for (const auto& M : families()) {
    RunConfig c = with_young(canonical(), M);
    c.verify.pairs = 100;
    o.detail << ' ' << M.describe() << ':';
    o.require(rows_pass(run_property_suite(c, {"monotonicity"}), o), M.describe());
  }
}

// 8. Poincare estimator.
void criterion8(Outcome& o) {
  const Domain d = Domain::interval(0.0, 1.0, 64);
  const auto quad = PairQuadrature::shared(d, 0.5, QuadratureScheme::defaults(1));
  const auto M = YoungFunction::power(2);
  double lo = INFINITY, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PoincareEstimate p = poincare_estimate(M, *quad, 200, 1000 * seed);
    o.require(std::isfinite(p.mu) && p.mu > 0.0, "finite positive");
    for (double r : p.ratios) o.require(r <= p.mu, "ratio <= mu");
    lo = std::min(lo, p.mu);
    hi = std::max(hi, p.mu);
  }
  o.detail << " mu_range=[" << lo << ',' << hi << "] spread=" << hi / lo - 1.0;
  o.require(hi / lo - 1.0 <= 0.1, "seed spread <= 10%");
}

// 9. Energy on the ring of radius rho at lambda = lambda*/2.
void criterion9(Outcome& o) {
  RunConfig c = canonical();
  c.verify.ring_samples = 50;
  const auto rows = run_property_suite(c, {"ring"});
  o.require(rows_pass(rows, o), "ring positivity");
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.values) o.detail << ' ' << k << '=' << v;
  }
}

// 10. End-to-end two-solution runs.
void criterion10(Outcome& o) {
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power_sum(2, 4)}) {
    const auto t0 = Clock::now();
    const RunConfig c = with_young(canonical(), M);
    const WeakFormContext ctx(c.young.build(), c.s, c.domain, c.scheme);
    const Nonlinearity nl = c.nonlinearity.build();
    const SolutionReport a = solve_two(ctx, nl, c.lambda, c.solver);
    const SolutionReport b = solve_two(ctx, nl, c.lambda, c.solver);
    const double t = seconds_since(t0);
    o.detail << ' ' << M.describe() << ": lambda=" << a.lambda << " I1=" << a.I1.total << " I2=" << a.I2.total
             << " res1=" << a.residual1 << " res2=" << a.residual2 << " dist=" << a.distance << " runtime=" << t
             << "s";
    o.require(a.I1.total < 0.0, "I1 < 0 " + M.describe());
    o.require(a.I2.total > 0.0, "I2 > 0 " + M.describe());
    o.require(a.residual1 <= 1e-6 && a.residual2 <= 1e-6, "residuals " + M.describe());
    o.require(a.distance > 1e-6, "distance " + M.describe());
    o.require(a.u1.dofs() == b.u1.dofs() && a.u2.dofs() == b.u2.dofs() && a.I1.total == b.I1.total &&
                  a.I2.total == b.I2.total,
              "bit-identical rerun " + M.describe());
    o.require(t < 1200.0, "runtime " + M.describe());
  }
}

// 11. Negative gates.
void criterion11(Outcome& o) {
  const auto h = validate_hypotheses(Nonlinearity::pure_power(2.5), YoungFunction::power(2), 1);
  o.detail << " q=2.5 hypotheses=" << (h.pass ? "pass" : "fail") << " (" << h.note << ")";
  o.require(!h.pass, "q=2.5 must fail the gate");

  RunConfig c = canonical();
  c.lambda = {LambdaChoice::Mode::relative, 10.0};
  c.out = (std::filesystem::temp_directory_path() / "orlisov_acceptance_11").string();
  std::filesystem::create_directories(c.out);
  std::ostringstream log;
  const int code = cli::cmd_solve(c, {}, log);
  std::filesystem::remove_all(c.out);
  o.detail << " lambda=10*lambda* exit=" << code;
  o.require(code == cli::gate_refused, "exit 3");
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<void(Outcome&)> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8,
                                                    criterion9, criterion10, criterion11};
  const int n = argc > 1 ? std::atoi(argv[1]) : 0;
  if (n < 1 || n > 11) {
    std::fprintf(stderr, "usage: acceptance <1..11>\n");
    return 2;
  }
  Outcome o;
  try {
    criteria[n - 1](o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  std::printf("[%s] criterion %d:%s\n", o.pass ? "PASS" : "FAIL", n, o.detail.str().c_str());
  return o.pass ? 0 : 1;
}
