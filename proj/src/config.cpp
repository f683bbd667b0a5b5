#include "orlisov/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "orlisov/errors.hpp"

namespace orlisov {

namespace {

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

void check_keys(const toml::table& t, const std::string& prefix,
                std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> ok(allowed);
  for (const auto& [k, v] : t) {
    if (!ok.contains(k.str())) throw ConfigError(join(prefix, k.str()) + ": unknown key");
  }
}

const toml::table* section(const toml::table& root, std::string_view key) {
  const toml::node* n = root.get(key);
  if (n == nullptr) return nullptr;
  const toml::table* t = n->as_table();
  if (t == nullptr) throw ConfigError(std::string(key) + ": expected a table");
  return t;
}

bool get_number(const toml::table& t, const std::string& prefix, std::string_view key, double& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return false;
  if (auto v = n->value<double>()) {
    if (!std::isfinite(*v)) throw ConfigError(join(prefix, key) + ": must be finite");
    out = *v;
    return true;
  }
  throw ConfigError(join(prefix, key) + ": expected a number");
}

template <class Int>
bool get_int(const toml::table& t, const std::string& prefix, std::string_view key, Int& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return false;
  if (!n->is_integer()) throw ConfigError(join(prefix, key) + ": expected an integer");
  const std::int64_t v = *n->value<std::int64_t>();
  if (v < 0 && std::is_unsigned_v<Int>) throw ConfigError(join(prefix, key) + ": must be nonnegative");
  out = static_cast<Int>(v);
  return true;
}

bool get_string(const toml::table& t, const std::string& prefix, std::string_view key,
                std::string& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return false;
  if (auto v = n->value<std::string>()) {
    out = *v;
    return true;
  }
  throw ConfigError(join(prefix, key) + ": expected a string");
}

bool get_numbers(const toml::table& t, const std::string& prefix, std::string_view key,
                 std::vector<double>& out) {
  const toml::node* n = t.get(key);
  if (n == nullptr) return false;
  const toml::array* a = n->as_array();
  if (a == nullptr) {
    double v = 0.0;
    if (get_number(t, prefix, key, v)) {
      out = {v};
      return true;
    }
  }
  out.clear();
  for (const toml::node& e : *a) {
    auto v = e.value<double>();
    if (!v) throw ConfigError(join(prefix, key) + ": expected an array of numbers");
    out.push_back(*v);
  }
  return true;
}

YoungSpec parse_young(const toml::table& t) {
  const std::string pre = "young";
  check_keys(t, pre, {"kind", "p", "q", "gamma", "t", "M", "m"});
  YoungSpec y;
  if (!get_string(t, pre, "kind", y.kind)) throw ConfigError("young.kind: missing");
  auto need = [&](std::string_view key, double& v) {
    if (!get_number(t, pre, key, v)) throw ConfigError(join(pre, key) + ": missing");
  };
  if (y.kind == "power") {
    need("p", y.p);
  } else if (y.kind == "power_sum") {
    need("p", y.p);
    need("q", y.q);
  } else if (y.kind == "bump_power") {
    need("gamma", y.gamma);
  } else if (y.kind == "tabulated") {
    if (!get_numbers(t, pre, "t", y.t)) throw ConfigError("young.t: missing");
    if (!get_numbers(t, pre, "M", y.M)) throw ConfigError("young.M: missing");
    if (!get_numbers(t, pre, "m", y.m)) throw ConfigError("young.m: missing");
  } else {
    throw ConfigError("young.kind: unknown kind '" + y.kind +
                      "' (expected power, power_sum, bump_power or tabulated)");
  }
  try {
    (void)y.build();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("young: ") + e.what());
  }
  return y;
}

Domain parse_domain(const toml::table& t) {
  const std::string pre = "domain";
  check_keys(t, pre, {"dim", "lo", "hi", "n_cells", "tail_radius"});
  int dim = 1;
  get_int(t, pre, "dim", dim);
  if (dim != 1 && dim != 2) throw ConfigError("domain.dim: must be 1 or 2");
  std::vector<double> lo(dim, 0.0), hi(dim, 1.0), n;
  get_numbers(t, pre, "lo", lo);
  get_numbers(t, pre, "hi", hi);
  if (!get_numbers(t, pre, "n_cells", n)) throw ConfigError("domain.n_cells: missing");
  if (lo.size() != static_cast<std::size_t>(dim)) throw ConfigError("domain.lo: needs one entry per axis");
  if (hi.size() != static_cast<std::size_t>(dim)) throw ConfigError("domain.hi: needs one entry per axis");
  if (n.size() != static_cast<std::size_t>(dim)) throw ConfigError("domain.n_cells: needs one entry per axis");
  for (double v : n) {
    if (v != std::floor(v) || v < 2) throw ConfigError("domain.n_cells: entries must be integers >= 2");
  }
  double R = 0.0;
  get_number(t, pre, "tail_radius", R);
  try {
    if (dim == 1) return Domain::interval(lo[0], hi[0], static_cast<int>(n[0]), R);
    return Domain::rectangle({lo[0], lo[1]}, {hi[0], hi[1]},
                             {static_cast<int>(n[0]), static_cast<int>(n[1])}, R);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

}  // namespace

YoungFunction YoungSpec::build() const {
  if (kind == "power") return YoungFunction::power(p);
  if (kind == "power_sum") return YoungFunction::power_sum(p, q);
  if (kind == "bump_power") return YoungFunction::bump_power(gamma);
  if (kind == "tabulated") return YoungFunction::tabulated(t, M, m);
  throw ConfigError("young.kind: unknown kind '" + kind + "'");
}

Nonlinearity NonlinearitySpec::build() const {
  Nonlinearity nl;
  if (kind == "pure_power") {
    nl = Nonlinearity::pure_power(q);
  } else if (kind == "log_power") {
    nl = Nonlinearity::log_power(q);
  } else {
    throw ConfigError("nonlinearity.kind: unknown kind '" + kind + "'");
  }
  if (!std::isnan(C0)) nl.C0 = C0;
  if (!std::isnan(C1)) nl.C1 = C1;
  if (!std::isnan(C2)) nl.C2 = C2;
  return nl;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, std::string_view(source));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ConfigError(os.str());
  }
  check_keys(root, "",
             {"seed", "out", "s", "lambda", "lambda_over_lambda_star", "young", "domain", "scheme",
              "nonlinearity", "solver", "verify"});

  RunConfig c;
  get_int(root, "", "seed", c.seed);
  get_string(root, "", "out", c.out);
  if (get_number(root, "", "s", c.s) && !(c.s > 0.0 && c.s < 1.0)) {
    throw ConfigError("s: must lie in (0, 1)");
  }

  const toml::table* y = section(root, "young");
  if (y == nullptr) throw ConfigError("young: missing section");
  c.young = parse_young(*y);

  if (const toml::table* d = section(root, "domain")) c.domain = parse_domain(*d);
  c.scheme = QuadratureScheme::defaults(c.domain.dim);
  if (const toml::table* t = section(root, "scheme")) {
    check_keys(*t, "scheme", {"gauss_order", "diagonal_levels", "tail_rings"});
    get_int(*t, "scheme", "gauss_order", c.scheme.gauss_order);
    get_int(*t, "scheme", "diagonal_levels", c.scheme.diagonal_levels);
    get_int(*t, "scheme", "tail_rings", c.scheme.tail_rings);
  }
  c.scheme.validate();

  if (const toml::table* t = section(root, "nonlinearity")) {
    check_keys(*t, "nonlinearity", {"kind", "q", "C0", "C1", "C2"});
    NonlinearitySpec& n = c.nonlinearity;
    n.present = true;
    if (!get_string(*t, "nonlinearity", "kind", n.kind)) throw ConfigError("nonlinearity.kind: missing");
    if (!get_number(*t, "nonlinearity", "q", n.q)) throw ConfigError("nonlinearity.q: missing");
    get_number(*t, "nonlinearity", "C0", n.C0);
    get_number(*t, "nonlinearity", "C1", n.C1);
    get_number(*t, "nonlinearity", "C2", n.C2);
    try {
      (void)n.build();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("nonlinearity: ") + e.what());
    }
  }

  const bool has_rel = root.contains("lambda_over_lambda_star");
  if (const toml::node* l = root.get("lambda")) {
    if (has_rel) throw ConfigError("lambda: conflicts with lambda_over_lambda_star");
    if (auto s = l->value<std::string>()) {
      if (*s != "auto") throw ConfigError("lambda: expected a number or \"auto\"");
      c.lambda.mode = LambdaChoice::Mode::automatic;
    } else if (auto v = l->value<double>()) {
      if (!(*v > 0.0)) throw ConfigError("lambda: must be positive");
      c.lambda = {LambdaChoice::Mode::value, *v};
    } else {
      throw ConfigError("lambda: expected a number or \"auto\"");
    }
  } else if (has_rel) {
    double f = 0.0;
    get_number(root, "", "lambda_over_lambda_star", f);
    if (!(f > 0.0)) throw ConfigError("lambda_over_lambda_star: must be positive");
    c.lambda = {LambdaChoice::Mode::relative, f};
  }

  if (const toml::table* t = section(root, "solver")) {
    const std::string pre = "solver";
    check_keys(*t, pre,
               {"max_iters", "grad_tol", "armijo_c", "backtrack", "path_points", "deform_steps",
                "probe_lambda", "c1_samples"});
    get_int(*t, pre, "max_iters", c.solver.max_iters);
    get_number(*t, pre, "grad_tol", c.solver.grad_tol);
    get_number(*t, pre, "armijo_c", c.solver.armijo_c);
    get_number(*t, pre, "backtrack", c.solver.backtrack);
    get_int(*t, pre, "path_points", c.solver.path_points);
    get_int(*t, pre, "deform_steps", c.solver.deform_steps);
    get_number(*t, pre, "probe_lambda", c.solver.probe_lambda);
    get_int(*t, pre, "c1_samples", c.solver.c1_samples);
  }
  c.solver.seed = c.seed;
  c.solver.validate();

  if (const toml::table* t = section(root, "verify")) {
    const std::string pre = "verify";
    check_keys(*t, pre,
               {"young_samples", "fixtures", "pairs", "lemma2_samples", "poincare_samples",
                "ring_samples"});
    get_int(*t, pre, "young_samples", c.verify.young_samples);
    get_int(*t, pre, "fixtures", c.verify.fixtures);
    get_int(*t, pre, "pairs", c.verify.pairs);
    get_int(*t, pre, "lemma2_samples", c.verify.lemma2_samples);
    get_int(*t, pre, "poincare_samples", c.verify.poincare_samples);
    get_int(*t, pre, "ring_samples", c.verify.ring_samples);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

}  // namespace orlisov
