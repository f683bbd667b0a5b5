#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "orlisov/errors.hpp"
#include "orlisov/young.hpp"

using namespace orlisov;

namespace {

// sup_r (t r - M(r)) by Brent search, independent of the library inverse.
double conjugate_oracle(const YoungFunction& M, double t) {
  auto neg = [&](double r) { return M.value(r) - t * r; };
  return -boost::math::tools::brent_find_minima(neg, 0.0, 1e5, 60).second;
}

YoungFunction corrupted_table() {
  // M(1) raised above the secant through t = 0.5 and t = 2.
  return YoungFunction::tabulated({0.5, 1.0, 2.0}, {0.25, 2.0, 4.0}, {1.0, 2.0, 4.0});
}

}  // namespace

TEST(YoungValue, ClosedForms) {
  EXPECT_DOUBLE_EQ(YoungFunction::power(2).value(3.0), 9.0);
  EXPECT_DOUBLE_EQ(YoungFunction::power_sum(2, 4).value(1.0), 2.0);
  EXPECT_DOUBLE_EQ(YoungFunction::bump_power(2).value(1.0), 3.0);
  EXPECT_DOUBLE_EQ(YoungFunction::power(2).value(-3.0), 9.0);
}

TEST(YoungDensity, ClosedForms) {
  EXPECT_DOUBLE_EQ(YoungFunction::power(2).density(3.0), 6.0);
  EXPECT_DOUBLE_EQ(YoungFunction::bump_power(2).density(1.0), 8.0);
  EXPECT_DOUBLE_EQ(YoungFunction::power(2).density(-3.0), -6.0);
  for (const auto& M : {YoungFunction::power(3), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    EXPECT_EQ(M.density(0.0), 0.0);
    EXPECT_EQ(M.value(0.0), 0.0);
  }
}

TEST(YoungValue, RejectsNonFiniteInput) {
  const auto M = YoungFunction::power(2);
  EXPECT_THROW(eval_M(M, std::nan("")), DomainError);
  EXPECT_THROW(eval_m(M, INFINITY), DomainError);
  EXPECT_THROW(YoungFunction::power(1.0), InvalidFunctionError);
  EXPECT_THROW(YoungFunction::power_sum(3, 2), InvalidFunctionError);
}

TEST(YoungIndices, ClosedFormAndSampledAgree) {
  struct Case {
    YoungFunction M;
    double m0, m1;
  };
  for (const Case& c : {Case{YoungFunction::power(3), 3, 3}, Case{YoungFunction::power_sum(2, 4), 2, 4},
                        Case{YoungFunction::bump_power(2), 2, 4}}) {
    EXPECT_DOUBLE_EQ(c.M.m0(), c.m0);
    EXPECT_DOUBLE_EQ(c.M.m_sup(), c.m1);
    const GrowthIndices g = growth_indices(c.M);
    EXPECT_NEAR(g.m0, c.m0, 1e-4) << c.M.describe();
    EXPECT_NEAR(g.m_sup, c.m1, 1e-4) << c.M.describe();
  }
}

TEST(YoungIndices, CustomIsSampled) {
  const auto M = YoungFunction::custom([](double t) { return t * t * t; }, [](double t) { return 3 * t * t; });
  EXPECT_NEAR(M.m0(), 3.0, 1e-9);
  EXPECT_NEAR(M.m_sup(), 3.0, 1e-9);
}

TEST(YoungConjugate, PowerTwoExample) {
  EXPECT_NEAR(conjugate_eval(YoungFunction::power(2), 2.0), 1.0, 1e-14);
  EXPECT_EQ(conjugate_eval(YoungFunction::power(2), 0.0), 0.0);
}

TEST(YoungConjugate, PowerClosedForm) {
  for (double p : {1.5, 3.0, 4.5}) {
    const auto M = YoungFunction::power(p);
    for (double t : {1e-3, 0.2, 1.0, 7.0, 300.0}) {
      const double exact = (p - 1.0) * std::pow(t / p, p / (p - 1.0));
      EXPECT_NEAR(conjugate_eval(M, t), exact, 1e-12 * exact) << "p=" << p << " t=" << t;
    }
  }
}

TEST(YoungConjugate, MatchesSupremumOracle) {
  for (const auto& M : {YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2), YoungFunction::bump_power(0.75)}) {
    for (double t : {0.1, 1.0, 5.0, 40.0}) {
      const double o = conjugate_oracle(M, t);
      EXPECT_NEAR(conjugate_eval(M, t), o, 1e-9 * std::max(1.0, o)) << M.describe() << " t=" << t;
    }
  }
}

TEST(YoungConjugate, InequalityAndEqualityCase) {
  const auto M = YoungFunction::power(2);
  EXPECT_DOUBLE_EQ(1.0 * 2.0, M.value(1.0) + conjugate_eval(M, 2.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (const auto& F : {YoungFunction::power(3), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    for (int i = 0; i < 2000; ++i) {
      const double s = u(rng);
      const double t = u(rng);
      EXPECT_LE(s * t, F.value(s) + conjugate_eval(F, t) + 1e-8);
    }
  }
}

TEST(YoungConjugate, InverseDensityRoundTrip) {
  for (const auto& M : {YoungFunction::power(2.5), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    for (double s : {1e-6, 0.3, 1.0, 50.0, 1e6}) {
      EXPECT_NEAR(M.density(inverse_density(M, s)), s, 1e-12 * s) << M.describe();
    }
  }
}

TEST(YoungConjugate, RejectsNonStrictDensity) {
  const auto flat = YoungFunction::custom([](double t) { return t * t; },
                                          [](double t) { return t < 1.0 ? 2.0 * t : 2.0; }, "flat");
  EXPECT_FALSE(flat.strictly_increasing_density());
  EXPECT_THROW(conjugate(flat), DomainError);
}

TEST(YoungAudit, Delta2) {
  const auto p2 = audit_delta2(YoungFunction::power(2));
  EXPECT_TRUE(p2.pass);
  EXPECT_NEAR(p2.value("max_ratio"), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(p2.value("K"), 4.0);
  for (const auto& M : {YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    const auto r = audit_delta2(M);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.value("max_ratio"), 16.0 * (1 + 1e-12));
  }
}

TEST(YoungAudit, SCondition) {
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power(4), YoungFunction::power_sum(2, 4)}) {
    EXPECT_TRUE(audit_S_condition(M).pass) << M.describe();
  }
  // M(sqrt t) = t^{0.75} is concave.
  EXPECT_FALSE(audit_S_condition(YoungFunction::power(1.5)).pass);
}

TEST(YoungAudit, ScalingInequalities) {
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    EXPECT_TRUE(audit_scaling_inequalities(M).pass) << M.describe();
  }
  const auto M = YoungFunction::power_sum(2, 4);
  EXPECT_DOUBLE_EQ(M.value(2.0), 20.0);
  EXPECT_GE(M.value(2.0), 4.0 * M.value(1.0));
  EXPECT_LE(M.value(2.0), 16.0 * M.value(1.0));
}

TEST(YoungAudit, ScalingDetectsWrongIndices) {
  // Claimed indices (2, 2) for t^2 + t^4 are too narrow.
  const auto ps = YoungFunction::power_sum(2, 4);
  const auto liar = YoungFunction::custom([ps](double t) { return ps.value(t); },
                                          [ps](double t) { return ps.density(t); }, "liar",
                                          GrowthIndices{2.0, 2.0, 1.0, 1.0});
  EXPECT_FALSE(audit_scaling_inequalities(liar).pass);
}

TEST(YoungAudit, QCondition) {
  EXPECT_TRUE(audit_Q_condition(YoungFunction::power(2), 1.5).pass);
  EXPECT_FALSE(audit_Q_condition(YoungFunction::power(2), 2.5).pass);
  EXPECT_TRUE(audit_Q_condition(YoungFunction::power_sum(2, 4), 3.0).pass);
}

TEST(YoungAudit, GrowthCondition) {
  EXPECT_TRUE(audit_growth_condition(YoungFunction::bump_power(2)).pass);
  const auto M = YoungFunction::custom([](double t) { return t * t; }, [](double t) { return 2 * t; }, "m",
                                       GrowthIndices{1.0, 2.0, 1.0, 1.0});
  EXPECT_FALSE(audit_growth_condition(M).pass);
}

TEST(YoungAudit, ConvexityAndRepresentation) {
  for (const auto& M : {YoungFunction::power(2), YoungFunction::power_sum(2, 4), YoungFunction::bump_power(2)}) {
    EXPECT_TRUE(audit_convexity(M).pass) << M.describe();
    EXPECT_TRUE(audit_representation(M).pass) << M.describe();
  }
  EXPECT_FALSE(audit_convexity(corrupted_table()).pass);
}

TEST(YoungTabulated, InterpolatesKnots) {
  const auto M = YoungFunction::tabulated({0.5, 1.0, 2.0}, {0.25, 1.0, 4.0}, {1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(M.value(1.0), 1.0);
  EXPECT_NEAR(M.value(1.5), 2.25, 1e-12);
  EXPECT_NEAR(M.value(4.0), 16.0, 1e-12);
  EXPECT_NEAR(M.density(0.25), 0.5, 1e-12);
  EXPECT_NEAR(M.m0(), 2.0, 1e-6);
  EXPECT_THROW(YoungFunction::tabulated({1.0, 0.5}, {1, 2}, {1, 2}), InvalidFunctionError);
}
