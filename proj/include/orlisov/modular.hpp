#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "orlisov/grid.hpp"
#include "orlisov/quadrature.hpp"
#include "orlisov/young.hpp"

namespace orlisov {

struct ModularValue {
  /// Domain part plus, for the extended scope, the exterior part inside B_R.
  double value = 0.0;
  QuadratureScheme scheme;
  /// Exterior part inside B_R (0 for the domain scope).
  double tail_contribution = 0.0;
  /// Bound on the exterior part beyond B_R, not included in `value`.
  double remainder_bound = 0.0;
};

struct LuxemburgResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;
  int bisection_iters = 0;
};

/// inf { lambda > 0 : rho(u / lambda) <= 1 } for a modular given as a
/// function of the scale 1 / lambda. Geometric bisection to |rho - 1| <=
/// 1e-10. Throws OverflowError when no bracket is found in 200 steps.
LuxemburgResult luxemburg(const std::function<double(double)>& rho_of_scale);

/// int_Omega M(u) by cell Gauss quadrature of the given order.
double modular_LM(const YoungFunction& M, const GridFunction& u, int gauss_order = 3);
LuxemburgResult norm_LM(const YoungFunction& M, const GridFunction& u, int gauss_order = 3);

/// Gagliardo modular over Omega x Omega (domain) or R^N x R^N truncated to
/// the tail ball (extended). Throws ConfigError if u lives on another grid.
ModularValue modular_gagliardo(const YoungFunction& M, const GridFunction& u, Scope scope,
                               const PairQuadrature& quad);
LuxemburgResult seminorm_gagliardo(const YoungFunction& M, const GridFunction& u, Scope scope,
                                   const PairQuadrature& quad);
/// norm_LM + seminorm_gagliardo, with the cell rule of the same order.
double full_norm(const YoungFunction& M, const GridFunction& u, Scope scope,
                 const PairQuadrature& quad);

/// Random interior values rescaled to unit extended seminorm.
GridFunction random_unit_direction(const YoungFunction& M, const PairQuadrature& quad,
                                   std::uint64_t seed);

struct PoincareEstimate {
  /// Max of ||u||_(M) / [u]_(s,M) over the sample set; a lower bound for
  /// the optimal constant.
  double mu = 0.0;
  std::vector<double> ratios;
};

/// Samples: bubble, hat, then n_samples random functions with seeds
/// seed, seed + 1, ...
PoincareEstimate poincare_estimate(const YoungFunction& M, const PairQuadrature& quad,
                                   std::size_t n_samples, std::uint64_t seed);

}  // namespace orlisov
