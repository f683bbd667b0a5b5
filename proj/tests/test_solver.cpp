#include <gtest/gtest.h>

#include <cmath>

#include "orlisov/errors.hpp"
#include "orlisov/solver.hpp"

using namespace orlisov;

namespace {

const Domain kDomain = Domain::interval(0.0, 1.0, 32);

WeakFormContext context(const YoungFunction& M, const Domain& d = kDomain) {
  return WeakFormContext(M, 0.5, d, QuadratureScheme::defaults(1));
}

double sup_norm(const Covector& g) {
  double m = 0.0;
  for (double x : g) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(LambdaStar, FormulaExample) {
  auto nl = Nonlinearity::pure_power(1.5);
  nl.C2 = 1.0;
  const auto ls = lambda_star(YoungFunction::power(2), nl, 0.5, 1.0);
  EXPECT_NEAR(ls.lambda_star, std::sqrt(0.5) / 3.0, 1e-15);
  EXPECT_NEAR(ls.alpha, std::sqrt(0.5) / 3.0, 1e-15);
  EXPECT_EQ(ls.exponent, 2.0);
  EXPECT_LT(lambda_star(YoungFunction::power(2), nl, 0.1, 1.0).lambda_star, ls.lambda_star);
  // rho >= 1 switches the exponent to m0.
  EXPECT_EQ(lambda_star(YoungFunction::power_sum(2, 4), nl, 2.0, 1.0).exponent, 2.0);
  EXPECT_EQ(lambda_star(YoungFunction::power_sum(2, 4), nl, 0.5, 1.0).exponent, 4.0);
  EXPECT_THROW(lambda_star(YoungFunction::power(2), nl, 0.0, 1.0), DomainError);
}

TEST(EstimateC1, PositiveAndSeedStable) {
  const Domain d = Domain::interval(0.0, 1.0, 64);
  const auto ctx = context(YoungFunction::power(2), d);
  const auto a = estimate_c1(ctx, 1.5, 50, 1);
  const auto b = estimate_c1(ctx, 1.5, 50, 2);
  EXPECT_GT(a.raw, 0.0);
  EXPECT_TRUE(std::isfinite(a.raw));
  EXPECT_DOUBLE_EQ(a.value, 1.1 * a.raw);
  EXPECT_LT(std::abs(a.raw / b.raw - 1.0), 0.1);
  const auto c = estimate_c1(ctx, 1.5, 100, 1);
  EXPECT_GE(c.raw, a.raw);
}

TEST(Minimize, SublinearFindsNegativeStationaryPoint) {
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(1.5);
  const SolverConfig cfg;
  const auto r = minimize(ctx, nl, 0.1, cfg);
  EXPECT_TRUE(r.converged) << r.failure;
  EXPECT_LT(r.energy.total, 0.0);
  EXPECT_LE(r.residual, cfg.grad_tol);
  EXPECT_LE(sup_norm(energy_gradient(ctx, nl, 0.1, r.u)), cfg.grad_tol);
  EXPECT_FALSE(r.u.is_zero());
  for (std::size_t i = 1; i < r.energies.size(); ++i) EXPECT_LE(r.energies[i], r.energies[i - 1]);
}

TEST(Minimize, Deterministic) {
  const auto ctx = context(YoungFunction::power_sum(2, 4));
  const auto nl = Nonlinearity::pure_power(1.5);
  const auto a = minimize(ctx, nl, 0.05, SolverConfig{});
  const auto b = minimize(ctx, nl, 0.05, SolverConfig{});
  EXPECT_EQ(a.u.dofs(), b.u.dofs());
  EXPECT_EQ(a.energy.total, b.energy.total);
}

TEST(MountainPass, SuperlinearSecondCriticalPoint) {
  // I(u) = F(u) - int |u|^3 has a strict local minimum at 0 and is negative
  // along t * bubble for large t, so the pass level is positive.
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(3.0);
  const GridFunction b = bubble(kDomain);
  GridFunction end = b;
  for (double t = 1.0; energy(ctx, nl, 1.0, end).total >= 0.0; t *= 2.0) end = b.scaled(t);
  SolverConfig cfg;
  const auto r = mountain_pass(ctx, nl, 1.0, end, 0.0, cfg);
  EXPECT_FALSE(r.geometry_violation) << r.failure;
  EXPECT_TRUE(r.converged) << r.failure;
  EXPECT_GT(r.energy.total, 0.0);
  EXPECT_LE(r.residual, cfg.grad_tol);
  EXPECT_LE(sup_norm(energy_gradient(ctx, nl, 1.0, r.u)), cfg.grad_tol);
  // Nehari identity <I'(u), u> = 2 F(u) - 3 int |u|^3 = 0 at a critical point.
  EXPECT_NEAR(r.energy.modular_part, 1.5 * r.energy.potential_part, 1e-5 * r.energy.modular_part);
}

TEST(MountainPass, FlagsMissingGeometry) {
  // Sublinear problem: the segment to a negative minimizer never rises above 0.
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(1.5);
  const auto m = minimize(ctx, nl, 0.1, SolverConfig{});
  const auto r = mountain_pass(ctx, nl, 0.1, m.u, 1e-3, SolverConfig{});
  EXPECT_TRUE(r.geometry_violation);
}

TEST(SolveTwo, GateRefusesLargeLambda) {
  const auto ctx = context(YoungFunction::power(2));
  const auto rep = solve_two(ctx, Nonlinearity::pure_power(1.5), {LambdaChoice::Mode::relative, 10.0}, SolverConfig{});
  EXPECT_TRUE(rep.gate_refused);
  EXPECT_TRUE(rep.partial);
  EXPECT_GT(rep.lambda_star, 0.0);
  EXPECT_FALSE(rep.messages.empty());
}

TEST(SolveTwo, GateRefusesFailedHypotheses) {
  const auto ctx = context(YoungFunction::power(2));
  const auto rep = solve_two(ctx, Nonlinearity::pure_power(2.5), {}, SolverConfig{});
  EXPECT_TRUE(rep.gate_refused);
  EXPECT_FALSE(rep.hypotheses.pass);
}

TEST(SolveTwo, ForceRunsPastGate) {
  const auto ctx = context(YoungFunction::power(2));
  const auto rep =
      solve_two(ctx, Nonlinearity::pure_power(1.5), {LambdaChoice::Mode::relative, 10.0}, SolverConfig{}, true);
  EXPECT_FALSE(rep.gate_refused);
  EXPECT_TRUE(rep.forced);
  EXPECT_NEAR(rep.lambda, 10.0 * rep.lambda_star, 1e-12 * rep.lambda);
}

TEST(SolveTwo, BitIdenticalReruns) {
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(1.5);
  const auto a = solve_two(ctx, nl, {}, SolverConfig{});
  const auto b = solve_two(ctx, nl, {}, SolverConfig{});
  EXPECT_EQ(a.u1.dofs(), b.u1.dofs());
  EXPECT_EQ(a.u2.dofs(), b.u2.dofs());
  EXPECT_EQ(a.I1.total, b.I1.total);
  EXPECT_EQ(a.lambda_star, b.lambda_star);
  EXPECT_EQ(a.lambda, std::min(0.5 * a.lambda_star, 0.1));
  EXPECT_TRUE(a.u1_ok(1e-6));
}

TEST(SolverConfig, Validate) {
  SolverConfig c;
  c.backtrack = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}
