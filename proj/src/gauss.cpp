#include "orlisov/gauss.hpp"

#include <array>
#include <mutex>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

#include "orlisov/audit.hpp"

namespace orlisov {

namespace {

constexpr int kMaxOrder = 64;

GaussRule build_rule(int n) {
  // Zeros of P_n on [-1, 1]; boost returns the nonnegative half.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  x.reserve(n);
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it != 0.0) x.push_back(-*it);
  }
  for (double z : half) x.push_back(z);

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double dp = boost::math::legendre_p_prime<double>(n, x[i]);
    const double w = 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
    rule.nodes[i] = 0.5 * (x[i] + 1.0);
    rule.weights[i] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("gauss_legendre: order must be in [1, 64]");
  }
  static std::array<GaussRule, kMaxOrder + 1> cache;
  static std::array<std::once_flag, kMaxOrder + 1> flags;
  std::call_once(flags[order], [order] { cache[order] = build_rule(order); });
  return cache[order];
}

double AuditReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw std::out_of_range("AuditReport: no value named " + key);
}

}  // namespace orlisov
