#pragma once

#include <memory>
#include <vector>

#include "orlisov/grid.hpp"
#include "orlisov/quadrature.hpp"
#include "orlisov/young.hpp"

namespace orlisov {

/// Values indexed by degree of freedom (interior node, lexicographic order).
using Covector = std::vector<double>;

/// Young function, fractional order and the shared pair quadrature for one
/// (domain, scheme, s). Immutable and shareable across threads.
class WeakFormContext {
 public:
  WeakFormContext(YoungFunction M, double s, const Domain& domain, const QuadratureScheme& scheme);

  const YoungFunction& M() const { return M_; }
  double s() const { return quad_->s(); }
  const Domain& domain() const { return quad_->domain(); }
  const QuadratureScheme& scheme() const { return quad_->scheme(); }
  const PairQuadrature& quadrature() const { return *quad_; }

  /// Throws ConfigError when u lives on a different grid.
  void check(const GridFunction& u) const;

 private:
  YoungFunction M_;
  std::shared_ptr<const PairQuadrature> quad_;
};

/// F(u): extended-scope Gagliardo modular inside the tail ball.
double modular_F(const WeakFormContext& ctx, const GridFunction& u);

/// sum over samples of w m(D u) D v, i.e. <F'(u), v>.
double apply_weak(const WeakFormContext& ctx, const GridFunction& u, const GridFunction& v);

/// <F'(u), phi_i> for every interior basis function, in one pair sweep.
Covector gradient_F(const WeakFormContext& ctx, const GridFunction& u);

/// <F'(u) - F'(v), u - v>.
double monotonicity_probe(const WeakFormContext& ctx, const GridFunction& u, const GridFunction& v);

/// Restriction of a nodal vector to the degrees of freedom.
Covector restrict_to_dofs(const Domain& domain, const std::vector<double>& nodal);

}  // namespace orlisov
