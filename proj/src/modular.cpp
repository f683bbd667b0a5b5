#include "orlisov/modular.hpp"

#include <algorithm>
#include <cmath>

#include "orlisov/errors.hpp"
#include "orlisov/gauss.hpp"

namespace orlisov {

namespace {

constexpr double kLuxTol = 1e-10;
constexpr int kLuxMaxIter = 200;

void check_grid(const GridFunction& u, const PairQuadrature& quad) {
  if (!(u.domain() == quad.domain())) {
    throw ConfigError("grid function and quadrature live on different domains");
  }
}

// Weights and values of u at cell Gauss points.
DifferenceSamples cell_samples(const GridFunction& u, int gauss_order) {
  const Domain& d = u.domain();
  const GaussRule& g = gauss_legendre(gauss_order);
  const double hx = d.h(0);
  const double hy = d.dim == 2 ? d.h(1) : 1.0;
  const int ny = d.dim == 2 ? g.order() : 1;
  DifferenceSamples out;
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    const auto nodes = d.cell_nodes(c);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < g.order(); ++i) {
        const double eta = d.dim == 2 ? g.nodes[j] : 0.0;
        const auto phi = local_basis(d.dim, g.nodes[i], eta);
        double v = 0.0;
        for (int a = 0; a < d.nodes_per_cell(); ++a) v += phi[a] * u[nodes[a]];
        out.w.push_back(g.weights[i] * (d.dim == 2 ? g.weights[j] : 1.0) * hx * hy);
        out.D.push_back(v);
      }
    }
  }
  out.tail_begin = out.w.size();
  return out;
}

}  // namespace

LuxemburgResult luxemburg(const std::function<double(double)>& rho_of_scale) {
  auto rho = [&](double lambda) { return rho_of_scale(1.0 / lambda); };
  double lo = 1.0;  // rho(lo) > 1
  double hi = 1.0;  // rho(hi) <= 1
  double r = rho(1.0);
  LuxemburgResult res;
  if (std::abs(r - 1.0) <= kLuxTol) return {1.0, r, 0};
  int n = 0;
  if (r > 1.0) {
    while (r > 1.0) {
      lo = hi;
      hi *= 2.0;
      r = rho(hi);
      if (++n > kLuxMaxIter) throw OverflowError("Luxemburg norm: no bracket after 200 doublings");
    }
  } else {
    while (r < 1.0) {
      hi = lo;
      lo *= 0.5;
      r = rho(lo);
      if (++n > kLuxMaxIter) throw OverflowError("Luxemburg norm: no bracket after 200 halvings");
    }
  }
  double mid = std::sqrt(lo * hi);
  double rm = rho(mid);
  int it = 0;
  while (std::abs(rm - 1.0) > kLuxTol && it < kLuxMaxIter) {
    if (rm > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = std::sqrt(lo * hi);
    if (next == mid) break;
    mid = next;
    rm = rho(mid);
    ++it;
  }
  res.norm = mid;
  res.modular_at_norm = rm;
  res.bisection_iters = it + n;
  return res;
}

double modular_LM(const YoungFunction& M, const GridFunction& u, int gauss_order) {
  if (u.is_zero()) return 0.0;
  return modular_sum(cell_samples(u, gauss_order), M, 1.0);
}

LuxemburgResult norm_LM(const YoungFunction& M, const GridFunction& u, int gauss_order) {
  if (u.is_zero()) return {};
  const DifferenceSamples s = cell_samples(u, gauss_order);
  return luxemburg([&](double scale) { return modular_sum(s, M, scale); });
}

ModularValue modular_gagliardo(const YoungFunction& M, const GridFunction& u, Scope scope,
                               const PairQuadrature& quad) {
  check_grid(u, quad);
  ModularValue out;
  out.scheme = quad.scheme();
  if (u.is_zero()) return out;
  const ModularParts p = quad.modular(M, u.nodal(), scope);
  out.value = p.domain + p.tail;
  out.tail_contribution = p.tail;
  if (scope == Scope::extended) out.remainder_bound = quad.remainder_bound(M, u.nodal());
  return out;
}

LuxemburgResult seminorm_gagliardo(const YoungFunction& M, const GridFunction& u, Scope scope,
                                   const PairQuadrature& quad) {
  check_grid(u, quad);
  if (u.is_zero()) return {};
  const DifferenceSamples s = quad.samples(u.nodal(), scope);
  return luxemburg([&](double scale) { return modular_sum(s, M, scale); });
}

double full_norm(const YoungFunction& M, const GridFunction& u, Scope scope,
                 const PairQuadrature& quad) {
  return norm_LM(M, u, quad.scheme().gauss_order).norm + seminorm_gagliardo(M, u, scope, quad).norm;
}

GridFunction random_unit_direction(const YoungFunction& M, const PairQuadrature& quad,
                                   std::uint64_t seed) {
  for (std::uint64_t k = 0;; ++k) {
    const GridFunction u = random_function(quad.domain(), seed + k);
    if (u.is_zero()) continue;
    const double n = seminorm_gagliardo(M, u, Scope::extended, quad).norm;
    return u.scaled(1.0 / n);
  }
}

PoincareEstimate poincare_estimate(const YoungFunction& M, const PairQuadrature& quad,
                                   std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("poincare_estimate: need at least one sample");
  PoincareEstimate out;
  auto ratio = [&](const GridFunction& u) {
    const double lm = norm_LM(M, u, quad.scheme().gauss_order).norm;
    const double sn = seminorm_gagliardo(M, u, Scope::extended, quad).norm;
    out.ratios.push_back(lm / sn);
    out.mu = std::max(out.mu, out.ratios.back());
  };
  ratio(bubble(quad.domain()));
  ratio(hat(quad.domain()));
  for (std::size_t i = 0; i < n_samples; ++i) {
    const GridFunction u = random_function(quad.domain(), seed + i);
    if (!u.is_zero()) ratio(u);
  }
  return out;
}

}  // namespace orlisov
