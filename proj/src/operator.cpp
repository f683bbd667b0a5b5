#include "orlisov/operator.hpp"

#include "orlisov/errors.hpp"

namespace orlisov {

WeakFormContext::WeakFormContext(YoungFunction M, double s, const Domain& domain,
                                 const QuadratureScheme& scheme)
    : M_(std::move(M)), quad_(PairQuadrature::shared(domain, s, scheme)) {}

void WeakFormContext::check(const GridFunction& u) const {
  if (!(u.domain() == domain())) throw ConfigError("grid function does not match the context domain");
}

double modular_F(const WeakFormContext& ctx, const GridFunction& u) {
  ctx.check(u);
  if (u.is_zero()) return 0.0;
  const ModularParts p = ctx.quadrature().modular(ctx.M(), u.nodal(), Scope::extended);
  return p.domain + p.tail;
}

double apply_weak(const WeakFormContext& ctx, const GridFunction& u, const GridFunction& v) {
  ctx.check(u);
  ctx.check(v);
  return ctx.quadrature().pairing(ctx.M(), u.nodal(), v.nodal(), Scope::extended);
}

Covector restrict_to_dofs(const Domain& domain, const std::vector<double>& nodal) {
  Covector out;
  out.reserve(domain.dof_count());
  for (std::size_t k : domain.dof_nodes()) out.push_back(nodal[k]);
  return out;
}

Covector gradient_F(const WeakFormContext& ctx, const GridFunction& u) {
  ctx.check(u);
  return restrict_to_dofs(ctx.domain(), ctx.quadrature().gradient(ctx.M(), u.nodal(), Scope::extended));
}

double monotonicity_probe(const WeakFormContext& ctx, const GridFunction& u, const GridFunction& v) {
  const GridFunction d = u - v;
  return apply_weak(ctx, u, d) - apply_weak(ctx, v, d);
}

}  // namespace orlisov
