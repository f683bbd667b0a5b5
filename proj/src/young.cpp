#include "orlisov/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlisov/errors.hpp"
#include "orlisov/gauss.hpp"

namespace orlisov {

namespace {


double power_of(double a, double e) {
  if (e == 2.0) return a * a;
  if (e == 4.0) {
    const double a2 = a * a;
    return a2 * a2;
  }
  if (e == 1.0) return a;
  if (e == 3.0) return a * a * a;
  return std::pow(a, e);
}

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw DomainError(std::string(what) + ": non-finite argument");
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> t(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int k = 0; k < n; ++k) {
    t[k] = std::exp(a + (b - a) * k / (n - 1));
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

double index_ratio(const YoungFunction& M, double t) {
  const double Mt = M.value(t);
  if (!(Mt > 0.0) || !std::isfinite(Mt)) {
    std::ostringstream os;
    os << "Young function " << M.describe() << " degenerates at t=" << t << " (M=" << Mt << ")";
    throw InvalidFunctionError(os.str());
  }
  return t * M.density(t) / Mt;
}

// Golden-section search for a minimum of f on [a, b].
template <class F>
std::pair<double, double> golden_min(F f, double a, double b, int iters = 80) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

template <class F>
double integrate(F f, double a, double b, double tol, unsigned max_depth = 20) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol);
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidFunctionError("power: need p > 1");
  YoungFunction f;
  f.kind_ = YoungKind::power;
  f.p_ = p;
  f.label_ = "power";
  f.indices_ = {p, p, 1.0, 1.0};
  return f;
}

YoungFunction YoungFunction::power_sum(double p, double q) {
  if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) {
    throw InvalidFunctionError("power_sum: need 1 < p <= q");
  }
  YoungFunction f;
  f.kind_ = YoungKind::power_sum;
  f.p_ = p;
  f.q_ = q;
  f.label_ = "power_sum";
  f.indices_ = {p, q, 0.0, std::numeric_limits<double>::infinity()};
  return f;
}

YoungFunction YoungFunction::bump_power(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidFunctionError("bump_power: need gamma > 0");
  YoungFunction f;
  f.kind_ = YoungKind::bump_power;
  f.gamma_ = gamma;
  f.label_ = "bump_power";
  const double at0 = 2.0;
  const double atinf = 2.0 * gamma;
  const double inf = std::numeric_limits<double>::infinity();
  f.indices_ = at0 <= atinf ? GrowthIndices{at0, atinf, 0.0, inf} : GrowthIndices{atinf, at0, inf, 0.0};
  return f;
}

YoungFunction YoungFunction::custom(Rule M, Rule m, std::string label) {
  YoungFunction f = custom(std::move(M), std::move(m), std::move(label), GrowthIndices{});
  f.indices_ = growth_indices(f);
  return f;
}

YoungFunction YoungFunction::custom(Rule M, Rule m, std::string label, const GrowthIndices& known) {
  if (!M || !m) throw InvalidFunctionError("custom Young function needs both M and m");
  YoungFunction f;
  f.kind_ = YoungKind::custom;
  f.label_ = std::move(label);
  f.M_ = std::make_shared<const Rule>(std::move(M));
  f.m_ = std::make_shared<const Rule>(std::move(m));
  f.indices_ = known;
  const auto grid = log_grid(1e-8, 1e8, 512);
  double prev = 0.0;
  for (double t : grid) {
    const double v = f.density(t);
    if (!(v > prev)) {
      f.strict_ = false;
      break;
    }
    prev = v;
  }
  return f;
}

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> Mv,
                                       std::vector<double> mv) {
  const std::size_t n = t.size();
  if (n < 2 || Mv.size() != n || mv.size() != n) {
    throw InvalidFunctionError("tabulated: need >= 2 knots with matching t, M, m");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || !(Mv[i] > 0.0) || !(mv[i] > 0.0) || !std::isfinite(t[i]) ||
        !std::isfinite(Mv[i]) || !std::isfinite(mv[i])) {
      throw InvalidFunctionError("tabulated: knots, values and slopes must be positive and finite");
    }
    if (i > 0 && !(t[i] > t[i - 1])) throw InvalidFunctionError("tabulated: t must be increasing");
  }
  struct Table {
    std::vector<double> t, M, m;
    double k_lo, k_hi;

    std::size_t segment(double x) const {
      auto it = std::upper_bound(t.begin(), t.end(), x);
      return static_cast<std::size_t>(it - t.begin()) - 1;
    }
    double value(double x) const {
      if (x <= 0.0) return 0.0;
      if (x <= t.front()) return M.front() * std::pow(x / t.front(), k_lo);
      if (x >= t.back()) return M.back() * std::pow(x / t.back(), k_hi);
      const std::size_t i = segment(x);
      const double h = t[i + 1] - t[i];
      const double s = (x - t[i]) / h;
      const double s2 = s * s;
      const double s3 = s2 * s;
      return (2 * s3 - 3 * s2 + 1) * M[i] + (s3 - 2 * s2 + s) * h * m[i] +
             (-2 * s3 + 3 * s2) * M[i + 1] + (s3 - s2) * h * m[i + 1];
    }
    double slope(double x) const {
      if (x <= 0.0) return 0.0;
      if (x <= t.front()) return k_lo * value(x) / x;
      if (x >= t.back()) return k_hi * value(x) / x;
      const std::size_t i = segment(x);
      const double h = t[i + 1] - t[i];
      const double s = (x - t[i]) / h;
      const double s2 = s * s;
      return ((6 * s2 - 6 * s) * M[i] + (-6 * s2 + 6 * s) * M[i + 1]) / h +
             (3 * s2 - 4 * s + 1) * m[i] + (3 * s2 - 2 * s) * m[i + 1];
    }
  };
  auto table = std::make_shared<Table>();
  table->k_lo = t.front() * mv.front() / Mv.front();
  table->k_hi = t.back() * mv.back() / Mv.back();
  table->t = std::move(t);
  table->M = std::move(Mv);
  table->m = std::move(mv);
  return custom([table](double x) { return table->value(x); },
                [table](double x) { return table->slope(x); }, "tabulated");
}

std::string YoungFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case YoungKind::power:
      os << "power(p=" << p_ << ")";
      break;
    case YoungKind::power_sum:
      os << "power_sum(p=" << p_ << ", q=" << q_ << ")";
      break;
    case YoungKind::bump_power:
      os << "bump_power(gamma=" << gamma_ << ")";
      break;
    case YoungKind::custom:
      os << label_;
      break;
  }
  return os.str();
}

double YoungFunction::value(double t) const {
  const double a = std::abs(t);
  switch (kind_) {
    case YoungKind::power:
      return power_of(a, p_);
    case YoungKind::power_sum:
      return power_of(a, p_) + power_of(a, q_);
    case YoungKind::bump_power:
      return std::expm1(gamma_ * std::log1p(a * a));
    case YoungKind::custom:
      return a == 0.0 ? 0.0 : (*M_)(a);
  }
  return 0.0;
}

double YoungFunction::density(double t) const {
  const double a = std::abs(t);
  double v = 0.0;
  switch (kind_) {
    case YoungKind::power:
      v = p_ == 2.0 ? 2.0 * a : p_ * std::pow(a, p_ - 1.0);
      break;
    case YoungKind::power_sum:
      v = p_ * power_of(a, p_ - 1.0) + q_ * power_of(a, q_ - 1.0);
      break;
    case YoungKind::bump_power:
      v = 2.0 * gamma_ * a * std::pow(1.0 + a * a, gamma_ - 1.0);
      break;
    case YoungKind::custom:
      v = a == 0.0 ? 0.0 : (*m_)(a);
      break;
  }
  return t < 0.0 ? -v : v;
}

// ---------------------------------------------------------------------------
// checked evaluation

double eval_M(const YoungFunction& M, double t) {
  require_finite(t, "eval_M");
  return M.value(t);
}

double eval_m(const YoungFunction& M, double t) {
  require_finite(t, "eval_m");
  return M.density(t);
}

GrowthIndices growth_indices(const YoungFunction& M, const SampleSpec& spec) {
  if (!(spec.t_min > 0.0) || !(spec.t_max > spec.t_min) || spec.points < 3) {
    throw DomainError("growth_indices: invalid sample spec");
  }
  const auto grid = log_grid(spec.t_min, spec.t_max, spec.points);
  std::vector<double> r(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) r[k] = index_ratio(M, grid[k]);

  const auto kmin = static_cast<std::size_t>(std::min_element(r.begin(), r.end()) - r.begin());
  const auto kmax = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());

  auto refine = [&](std::size_t k, double sign) {
    const double lo = std::log(grid[k == 0 ? 0 : k - 1]);
    const double hi = std::log(grid[std::min(k + 1, grid.size() - 1)]);
    auto f = [&](double lt) { return sign * index_ratio(M, std::exp(lt)); };
    auto [lt, fv] = golden_min(f, lo, hi);
    double best_t = grid[k];
    double best = sign * r[k];
    if (fv < best) {
      best = fv;
      best_t = std::exp(lt);
    }
    return std::pair{best_t, sign * best};
  };

  GrowthIndices out;
  std::tie(out.argmin_t, out.m0) = refine(kmin, 1.0);
  std::tie(out.argmax_t, out.m_sup) = refine(kmax, -1.0);
  return out;
}

double inverse_density(const YoungFunction& M, double s) {
  require_finite(s, "inverse_density");
  if (s < 0.0) return -inverse_density(M, -s);
  if (s == 0.0) return 0.0;
  if (!M.strictly_increasing_density()) {
    throw DomainError("inverse_density: density of " + M.describe() + " is not strictly increasing");
  }
  if (M.kind() == YoungKind::power) return std::pow(s / M.p(), 1.0 / (M.p() - 1.0));
  double lo = 0.0;
  double hi = 1.0;
  int n = 0;
  while (M.density(hi) < s) {
    lo = hi;
    hi *= 2.0;
    if (++n > 200) throw DomainError("inverse_density: density does not reach the requested value");
  }
  n = 0;
  while (lo == 0.0 && M.density(0.5 * hi) >= s && n++ < 1000) hi *= 0.5;
  if (lo == 0.0) lo = 0.5 * hi;
  // Bisect to full precision so adaptive quadrature of the inverse sees no noise.
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (M.density(mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double conjugate_eval(const YoungFunction& M, double t) {
  require_finite(t, "conjugate_eval");
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  const double s = inverse_density(M, a);
  return std::max(0.0, a * s - M.value(s));
}

YoungFunction conjugate(const YoungFunction& M) {
  if (!M.strictly_increasing_density()) {
    throw DomainError("conjugate: density of " + M.describe() + " is not strictly increasing");
  }
  auto value = [M](double t) { return conjugate_eval(M, t); };
  auto slope = [M](double t) { return inverse_density(M, t); };
  // Indices of the conjugate are the conjugate exponents of (m_sup, m0).
  const GrowthIndices ci{M.m_sup() / (M.m_sup() - 1.0), M.m0() / (M.m0() - 1.0),
                         M.indices().argmax_t, M.indices().argmin_t};
  return YoungFunction::custom(value, slope, "conjugate(" + M.describe() + ")", ci);
}

// ---------------------------------------------------------------------------
// audits

AuditReport audit_delta2(const YoungFunction& M, const SampleSpec& spec) {
  AuditReport rep;
  rep.name = "delta2";
  const double K = std::pow(2.0, M.m_sup());
  const auto grid = log_grid(spec.t_min, spec.t_max, spec.points);
  double max_ratio = 0.0;
  double at = 0.0;
  for (double t : grid) {
    const double ratio = M.value(2.0 * t) / M.value(t);
    if (!(ratio <= max_ratio)) {
      max_ratio = ratio;
      at = t;
    }
  }
  rep.samples = grid.size();
  rep.worst_margin = (K - max_ratio) / K;
  rep.pass = std::isfinite(max_ratio) && rep.worst_margin >= -1e-12;
  rep.values = {{"max_ratio", max_ratio}, {"K", K}, {"argmax_t", at}};
  return rep;
}

AuditReport audit_S_condition(const YoungFunction& M) {
  AuditReport rep;
  rep.name = "S_condition";
  const auto tau = log_grid(1e-6, 1e6, 1000);
  std::vector<double> phi(tau.size());
  for (std::size_t k = 0; k < tau.size(); ++k) phi[k] = M.value(std::sqrt(tau[k]));
  double worst = std::numeric_limits<double>::infinity();
  double at = 0.0;
  for (std::size_t k = 1; k + 1 < tau.size(); ++k) {
    const double s0 = (phi[k] - phi[k - 1]) / (tau[k] - tau[k - 1]);
    const double s1 = (phi[k + 1] - phi[k]) / (tau[k + 1] - tau[k]);
    const double scale = std::max({std::abs(s0), std::abs(s1), std::numeric_limits<double>::min()});
    const double d = (s1 - s0) / scale;
    if (d < worst) {
      worst = d;
      at = tau[k];
    }
  }
  rep.samples = tau.size();
  rep.worst_margin = worst;
  rep.pass = worst >= -1e-9;
  rep.values = {{"min_second_difference", worst}, {"at_tau", at}};
  return rep;
}

AuditReport audit_scaling_inequalities(const YoungFunction& M, std::size_t samples,
                                       unsigned long long seed) {
  AuditReport rep;
  rep.name = "scaling_inequalities";
  const double m0 = M.m0();
  const double m1 = M.m_sup();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst[4] = {1.0, 1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * unit(rng));
    const double sigma = 1.0 + 9.0 * (1.0 - unit(rng));
    const double tau = 1e-3 + (1.0 - 1e-3) * unit(rng);
    const double Mt = M.value(t);
    const double Ms = M.value(sigma * t);
    const double Mtau = M.value(t / tau);
    const double up = std::pow(sigma, m1) * Mt;
    const double lo = std::pow(sigma, m0) * Mt;
    const double a3 = std::pow(tau, m0) * Mtau;
    const double a4 = std::pow(tau, m1) * Mtau;
    worst[0] = std::min(worst[0], (up - Ms) / up);
    worst[1] = std::min(worst[1], (Ms - lo) / Ms);
    worst[2] = std::min(worst[2], (a3 - Mt) / a3);
    worst[3] = std::min(worst[3], (Mt - a4) / Mt);
  }
  rep.samples = samples;
  rep.worst_margin = *std::min_element(std::begin(worst), std::end(worst));
  rep.pass = rep.worst_margin >= -1e-10;
  rep.values = {{"upper_sigma", worst[0]},
                {"lower_sigma", worst[1]},
                {"upper_tau", worst[2]},
                {"lower_tau", worst[3]}};
  return rep;
}

AuditReport audit_Q_condition(const YoungFunction& M, double q) {
  if (!(q > 1.0)) throw DomainError("audit_Q_condition: need q > 1");
  AuditReport rep;
  rep.name = "Q_condition";
  std::vector<double> v;
  for (int e = 1; e <= 8; ++e) {
    const double t = std::pow(10.0, e);
    v.push_back(std::pow(t, q) / M.value(t));
    rep.values.emplace_back("t=1e" + std::to_string(e), v.back());
  }
  bool decreasing = true;
  for (std::size_t k = v.size() / 2; k + 1 < v.size(); ++k) decreasing = decreasing && v[k + 1] < v[k];
  const double ratio = v.back() / v.front();
  rep.samples = v.size();
  rep.worst_margin = 1e-3 - ratio;
  rep.pass = decreasing && ratio < 1e-3;
  if (!decreasing) rep.note = "t^q/M(t) is not eventually decreasing";
  return rep;
}

AuditReport audit_growth_condition(const YoungFunction& M) {
  AuditReport rep;
  rep.name = "growth_condition";
  rep.samples = 1;
  rep.values = {{"m0", M.m0()}, {"m_sup", M.m_sup()}};
  rep.worst_margin = std::min(M.m0() - 1.0, M.m_sup() - M.m0());
  rep.pass = M.m0() > 1.0 && M.m0() <= M.m_sup() && std::isfinite(M.m_sup());
  return rep;
}

AuditReport audit_convexity(const YoungFunction& M, std::size_t samples, unsigned long long seed) {
  AuditReport rep;
  rep.name = "convexity";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  auto check = [&](double a, double b, double th) {
    const double chord = th * M.value(a) + (1.0 - th) * M.value(b);
    const double mid = M.value(th * a + (1.0 - th) * b);
    const double scale = std::max(chord, std::numeric_limits<double>::min());
    worst = std::min(worst, (chord - mid) / scale);
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = std::pow(10.0, -3.0 + 6.0 * unit(rng)) * (unit(rng) < 0.2 ? -1.0 : 1.0);
    const double b = std::pow(10.0, -3.0 + 6.0 * unit(rng));
    check(a, b, unit(rng));
  }
  // Local secants on a fine grid catch narrow concave bumps.
  const auto grid = log_grid(1e-3, 1e3, 2000);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) check(grid[k], grid[k + 1], 0.5);
  rep.samples = samples + grid.size() - 1;
  rep.worst_margin = worst;
  rep.pass = worst >= -1e-12;
  return rep;
}

AuditReport audit_representation(const YoungFunction& M) {
  AuditReport rep;
  rep.name = "integral_representation";
  double worst_rel = 0.0;
  bool monotone = M.density(0.0) == 0.0;
  double prev = 0.0;
  for (double t : log_grid(1e-4, 1e4, 41)) {
    // Dyadic pieces [t 2^-(k+1), t 2^-k] keep each piece smooth; the rest below
    // t 2^-80 is dropped.
    CompensatedSum acc;
    for (int k = 0; k < 80; ++k) {
      const double b = std::ldexp(t, -k);
      acc.add(integrate([&M](double s) { return M.density(s); }, 0.5 * b, b, 1e-13, 4));
    }
    const double integral = acc.value();
    const double Mt = M.value(t);
    worst_rel = std::max(worst_rel, std::abs(integral - Mt) / std::max(Mt, 1e-300));
  }
  for (double t : log_grid(1e-8, 1e8, 1024)) {
    const double v = M.density(t);
    monotone = monotone && v >= prev;
    prev = v;
  }
  rep.samples = 41;
  rep.worst_margin = 1e-8 - worst_rel;
  rep.pass = worst_rel <= 1e-8 && monotone;
  rep.values = {{"max_relative_error", worst_rel}, {"density_monotone", monotone ? 1.0 : 0.0}};
  return rep;
}

}  // namespace orlisov
