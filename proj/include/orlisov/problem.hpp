#pragma once

#include <functional>
#include <string>

#include "orlisov/audit.hpp"
#include "orlisov/grid.hpp"
#include "orlisov/operator.hpp"
#include "orlisov/young.hpp"

namespace orlisov {

enum class NonlinearityKind { pure_power, log_power, custom };

/// Right-hand side g(x, t) with primitive G(x, t) = int_0^t g(x, s) ds and
/// the sandwich constants |g| <= C0 |t|^{q-1}, C1 |t|^q <= G <= C2 |t|^q.
/// A NaN constant means "estimate by sampling".
struct Nonlinearity {
  using Rule = std::function<double(const Point&, double)>;

  NonlinearityKind kind = NonlinearityKind::pure_power;
  double q = 1.5;
  double C0 = 1.5;
  double C1 = 1.0;
  double C2 = 1.0;
  bool constants_estimated = false;
  std::string label = "pure_power";
  Rule g;
  Rule G;

  /// g = q |t|^{q-2} t, G = |t|^q, constants (q, 1, 1).
  static Nonlinearity pure_power(double q);
  /// G = log(1 + t^2) |t|^{q-2} and g = G'; needs q > 4. Constants NaN.
  static Nonlinearity log_power(double q);
  static Nonlinearity custom(double q, Rule g, Rule G, std::string label = "custom");
};

/// Checked pointwise evaluation; throws DomainError on non-finite input.
double eval_g(const Nonlinearity& nl, const Point& x, double t);
double eval_G(const Nonlinearity& nl, const Point& x, double t);

/// Copy with every NaN constant replaced by its extremal sampled ratio with
/// a 5% safety margin.
Nonlinearity with_estimated_constants(const Nonlinearity& nl, const SampleSpec& spec = {},
                                      const std::vector<Point>& xs = {Point{0.0, 0.0}});

/// Critical Sobolev exponent N p / (N - p) for p < N, infinity otherwise.
double critical_exponent(int dim, double p);

/// Sandwich bounds (A) and (B), the (Q) limit, G consistency and the gate
/// q < min(p*, m0) with p = m0. Estimates missing constants first.
AuditReport validate_hypotheses(const Nonlinearity& nl, const YoungFunction& M, int dim,
                                const SampleSpec& spec = {},
                                const std::vector<Point>& xs = {Point{0.0, 0.0}});

struct EnergyValue {
  double total = 0.0;
  double modular_part = 0.0;
  double potential_part = 0.0;
};

/// F(u) - lambda int_Omega G(x, u) dx; lambda >= 0.
EnergyValue energy(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                   const GridFunction& u);
/// gradient_F(u) - lambda (int g(x, u) phi_i)_i.
Covector energy_gradient(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                         const GridFunction& u);

/// (int_Omega |u|^q)^{1/q} by the cell rule of the context.
double lq_norm(const WeakFormContext& ctx, const GridFunction& u, double q);

}  // namespace orlisov
