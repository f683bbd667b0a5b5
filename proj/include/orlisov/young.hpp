#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orlisov/audit.hpp"

namespace orlisov {

enum class YoungKind { power, power_sum, bump_power, custom };

/// inf and sup of t m(t) / M(t) over t > 0, with the sample points where the
/// extremes were observed.
struct GrowthIndices {
  double m0 = 0.0;
  double m_sup = 0.0;
  double argmin_t = 0.0;
  double argmax_t = 0.0;
};

/// Logarithmic sampling grid used by index estimation and the audits.
struct SampleSpec {
  double t_min = 1e-8;
  double t_max = 1e8;
  int points = 4096;
};

/// An N-function M(t) = int_0^|t| m, together with its density m.
///
/// Built-in families carry closed-form growth indices:
///   power(p)        M = |t|^p                     (p, p)
///   power_sum(p, q) M = |t|^p + |t|^q              (p, q)
///   bump_power(g)   M = (1 + t^2)^g - 1            (min(2, 2g), max(2, 2g))
/// Custom functions wrap user rules for M and m on t >= 0; their indices are
/// estimated by sampling at construction. Values are immutable and cheap to
/// copy.
class YoungFunction {
 public:
  using Rule = std::function<double(double)>;

  static YoungFunction power(double p);
  static YoungFunction power_sum(double p, double q);
  static YoungFunction bump_power(double gamma);
  /// M and m are evaluated on t >= 0 only; evenness/oddness is applied here.
  static YoungFunction custom(Rule M, Rule m, std::string label = "custom");
  /// As above with indices known in advance (no sampling).
  static YoungFunction custom(Rule M, Rule m, std::string label, const GrowthIndices& known);
  /// Custom function from knots t_i > 0 with values M_i and slopes m_i:
  /// cubic Hermite between knots, power-law extension outside.
  static YoungFunction tabulated(std::vector<double> t, std::vector<double> M,
                                 std::vector<double> m);

  YoungKind kind() const { return kind_; }
  double p() const { return p_; }
  double q() const { return q_; }
  double gamma() const { return gamma_; }
  const std::string& label() const { return label_; }
  std::string describe() const;

  /// M(|t|), unchecked.
  double value(double t) const;
  /// sign(t) m(|t|), unchecked.
  double density(double t) const;

  /// Cached indices: closed form for built-ins, sampled for custom.
  const GrowthIndices& indices() const { return indices_; }
  double m0() const { return indices_.m0; }
  double m_sup() const { return indices_.m_sup; }

  /// Strictly increasing, unbounded density (required by the conjugate).
  bool strictly_increasing_density() const { return kind_ != YoungKind::custom || strict_; }

 private:
  YoungKind kind_ = YoungKind::power;
  double p_ = 2.0;
  double q_ = 0.0;
  double gamma_ = 0.0;
  std::string label_;
  std::shared_ptr<const Rule> M_;
  std::shared_ptr<const Rule> m_;
  bool strict_ = true;
  GrowthIndices indices_;
};

/// Checked evaluation of M; throws DomainError on non-finite t.
double eval_M(const YoungFunction& M, double t);
/// Checked evaluation of the odd density.
double eval_m(const YoungFunction& M, double t);

/// Sampled inf/sup of t m(t) / M(t) with golden-section refinement around
/// the extreme samples. Throws InvalidFunctionError if M vanishes at a sample.
GrowthIndices growth_indices(const YoungFunction& M, const SampleSpec& spec = {});

/// m^{-1}(s) for s >= 0 by monotone bisection to full precision (closed form
/// for pure powers).
double inverse_density(const YoungFunction& M, double s);

/// Conjugate function value |t| s - M(s) with s = m^{-1}(|t|), which equals
/// int_0^|t| m^{-1}. Throws DomainError when m does not reach |t|.
double conjugate_eval(const YoungFunction& M, double t);

/// The conjugate as a custom Young function (value = conjugate_eval,
/// density = inverse_density). Used for double-inversion checks.
YoungFunction conjugate(const YoungFunction& M);

AuditReport audit_delta2(const YoungFunction& M, const SampleSpec& spec = {});
AuditReport audit_S_condition(const YoungFunction& M);
AuditReport audit_scaling_inequalities(const YoungFunction& M, std::size_t samples = 10000,
                                       unsigned long long seed = 7);
AuditReport audit_Q_condition(const YoungFunction& M, double q);

/// 1 < m0 <= m_sup < infinity.
AuditReport audit_growth_condition(const YoungFunction& M);
/// M(theta a + (1 - theta) b) <= theta M(a) + (1 - theta) M(b) on random triples.
AuditReport audit_convexity(const YoungFunction& M, std::size_t samples = 10000,
                            unsigned long long seed = 11);
/// M(t) = int_0^t m at sampled t (relative tolerance 1e-8), and m monotone.
AuditReport audit_representation(const YoungFunction& M);

}  // namespace orlisov
