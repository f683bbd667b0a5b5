#include <gtest/gtest.h>

#include <cmath>

#include "orlisov/errors.hpp"
#include "orlisov/problem.hpp"

using namespace orlisov;

namespace {

const Domain kDomain = Domain::interval(0.0, 1.0, 32);
const Point kOrigin{0.0, 0.0};

WeakFormContext context(const YoungFunction& M) {
  return WeakFormContext(M, 0.5, kDomain, QuadratureScheme::defaults(1));
}

}  // namespace

TEST(Nonlinearity, PurePowerValues) {
  const auto nl = Nonlinearity::pure_power(1.5);
  EXPECT_DOUBLE_EQ(eval_g(nl, kOrigin, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(eval_G(nl, kOrigin, 4.0), 8.0);
  EXPECT_DOUBLE_EQ(eval_g(nl, kOrigin, -4.0), -3.0);
  EXPECT_EQ(eval_g(nl, kOrigin, 0.0), 0.0);
  EXPECT_EQ(eval_G(nl, kOrigin, 0.0), 0.0);
  EXPECT_THROW(eval_g(nl, kOrigin, NAN), DomainError);
}

TEST(Nonlinearity, LogPower) {
  const auto nl = Nonlinearity::log_power(5.0);
  EXPECT_NEAR(eval_G(nl, kOrigin, 1.0), std::log(2.0), 1e-15);
  EXPECT_EQ(eval_g(nl, kOrigin, 0.0), 0.0);
  for (double t : {0.3, 1.0, 2.5}) {
    const double h = 1e-6;
    const double cd = (eval_G(nl, kOrigin, t + h) - eval_G(nl, kOrigin, t - h)) / (2 * h);
    EXPECT_NEAR(eval_g(nl, kOrigin, t), cd, 1e-7 * (1.0 + std::abs(cd)));
  }
  EXPECT_THROW(Nonlinearity::log_power(4.0), ConfigError);
}

TEST(Nonlinearity, EstimatedConstants) {
  const auto nl = with_estimated_constants(Nonlinearity::log_power(5.0));
  EXPECT_TRUE(nl.constants_estimated);
  EXPECT_TRUE(std::isfinite(nl.C0));
  // G / |t|^5 = log(1 + t^2) / t^2 lies in (0, 1), so C2 is 1 with a 5% margin.
  EXPECT_NEAR(nl.C2, 1.05, 1e-6);
  EXPECT_GT(nl.C1, 0.0);
  EXPECT_LT(nl.C1, 1e-10);
  const auto pp = with_estimated_constants(Nonlinearity::pure_power(1.5));
  EXPECT_FALSE(pp.constants_estimated);
  EXPECT_EQ(pp.C0, 1.5);
}

TEST(Hypotheses, CriticalExponent) {
  EXPECT_TRUE(std::isinf(critical_exponent(1, 2.0)));
  EXPECT_DOUBLE_EQ(critical_exponent(2, 1.5), 6.0);
}

TEST(Hypotheses, GatePassAndFail) {
  const auto ok = validate_hypotheses(Nonlinearity::pure_power(1.5), YoungFunction::power(2), 1);
  EXPECT_TRUE(ok.pass) << ok.note;
  const auto bad = validate_hypotheses(Nonlinearity::pure_power(2.5), YoungFunction::power(2), 1);
  EXPECT_FALSE(bad.pass);
  EXPECT_NE(bad.note.find("gate"), std::string::npos);
}

TEST(Hypotheses, LogPowerWithSixthPower) {
  const auto r = validate_hypotheses(Nonlinearity::log_power(5.0), YoungFunction::power(6), 1);
  EXPECT_TRUE(r.pass) << r.note;
  EXPECT_NE(r.note.find("constants estimated"), std::string::npos);
}

TEST(Hypotheses, DetectsInconsistentPrimitive) {
  const auto nl = Nonlinearity::custom(
      1.5, [](const Point&, double t) { return 3.0 * std::copysign(std::sqrt(std::abs(t)), t); },
      [](const Point&, double t) { return std::pow(std::abs(t), 1.5); });
  const auto r = validate_hypotheses(nl, YoungFunction::power(2), 1);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.note.find("primitive"), std::string::npos);
}

TEST(Energy, ZeroAndLambdaZero) {
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(1.5);
  EXPECT_EQ(energy(ctx, nl, 0.3, GridFunction::zero(kDomain)).total, 0.0);
  for (double g : energy_gradient(ctx, nl, 0.3, GridFunction::zero(kDomain))) EXPECT_EQ(g, 0.0);
  const auto u = random_function(kDomain, 2);
  EXPECT_EQ(energy_gradient(ctx, nl, 0.0, u), gradient_F(ctx, u));
  EXPECT_THROW(energy(ctx, nl, -1.0, u), DomainError);
}

TEST(Energy, PartsAndDeterminism) {
  const auto ctx = context(YoungFunction::power(2));
  const auto nl = Nonlinearity::pure_power(1.5);
  const auto u = random_function(kDomain, 3);
  const auto e1 = energy(ctx, nl, 0.1, u);
  const auto e2 = energy(ctx, nl, 0.1, u);
  EXPECT_EQ(e1.total, e2.total);
  EXPECT_DOUBLE_EQ(e1.total, e1.modular_part - 0.1 * e1.potential_part);
  EXPECT_DOUBLE_EQ(e1.modular_part, modular_F(ctx, u));
  EXPECT_NEAR(e1.potential_part, std::pow(lq_norm(ctx, u, 1.5), 1.5), 1e-12);
}

TEST(Energy, GradientMatchesDifferences) {
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power_sum(2, 4)}) {
    const auto ctx = context(M);
    const auto nl = Nonlinearity::pure_power(1.5);
    const auto u = random_function(kDomain, 9);
    const Covector g = energy_gradient(ctx, nl, 0.7, u);
    const auto dofs = kDomain.dof_nodes();
    for (std::size_t i = 0; i < dofs.size(); i += 5) {
      std::vector<double> e(kDomain.node_count(), 0.0);
      e[dofs[i]] = 1.0;
      const GridFunction phi(kDomain, e, true);
      const double h = 1e-5;
      const double cd =
          (energy(ctx, nl, 0.7, u + phi.scaled(h)).total - energy(ctx, nl, 0.7, u - phi.scaled(h)).total) / (2 * h);
      EXPECT_NEAR(g[i], cd, 1e-6 * (1.0 + std::abs(cd)));
    }
  }
}

TEST(Energy, LqNormOfBubble) {
  // Interpolant of 4x(1 - x) on 32 cells; the continuum value of int u^2 is 8/15.
  const auto ctx = context(YoungFunction::power(2));
  EXPECT_NEAR(std::pow(lq_norm(ctx, bubble(kDomain), 2.0), 2.0), 8.0 / 15.0, 2e-3);
}
