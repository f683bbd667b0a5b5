#include "orlisov/cli.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

#include "orlisov/csv.hpp"
#include "orlisov/errors.hpp"
#include "orlisov/modular.hpp"
#include "orlisov/operator.hpp"
#include "orlisov/solver.hpp"
#include "orlisov/verify.hpp"

namespace orlisov::cli {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out) / name).string();
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

std::string detail(const AuditReport& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    if (i) os << ';';
    os << r.values[i].first << '=' << csv::format(r.values[i].second);
  }
  if (!r.note.empty()) os << (r.values.empty() ? "" : ";") << "note=" << r.note;
  return sanitize(os.str());
}

}  // namespace

int cmd_young_audit(const RunConfig& cfg, const Options&, std::ostream& log) {
  const YoungFunction M = cfg.young.build();
  std::vector<AuditReport> rows;

  AuditReport idx;
  idx.name = "growth_indices";
  const GrowthIndices g = growth_indices(M);
  idx.values = {{"m0", M.m0()}, {"m_sup", M.m_sup()}, {"sampled_m0", g.m0}, {"sampled_m_sup", g.m_sup}};
  idx.samples = SampleSpec{}.points;
  idx.worst_margin = 1e-4 - std::max(std::abs(g.m0 - M.m0()), std::abs(g.m_sup - M.m_sup()));
  idx.pass = idx.worst_margin >= 0.0;
  rows.push_back(idx);
  rows.push_back(audit_growth_condition(M));
  rows.push_back(audit_delta2(M));
  rows.push_back(audit_S_condition(M));
  rows.push_back(audit_scaling_inequalities(M, cfg.verify.young_samples, cfg.seed));
  rows.push_back(audit_convexity(M, cfg.verify.young_samples, cfg.seed + 1));
  if (cfg.nonlinearity.present) rows.push_back(audit_Q_condition(M, cfg.nonlinearity.q));

  std::ostringstream os;
  os << "audit,pass,worst_margin,samples,detail\n";
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    os << r.name << ',' << (r.pass ? "true" : "false") << ',' << csv::format(r.worst_margin) << ','
       << r.samples << ',' << detail(r) << '\n';
    log << (r.pass ? "PASS " : "FAIL ") << r.name << " (worst margin " << r.worst_margin << ")\n";
  }
  csv::write_atomic(out_path(cfg, "young_audit.csv"), os.str());
  return all ? ok : check_failed;
}

int cmd_modular(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  const YoungFunction M = cfg.young.build();
  const GridFunction u =
      opt.function_csv.empty() ? fixture(cfg.domain, opt.fixture) : read_grid_csv(cfg.domain, opt.function_csv);

  std::ostringstream os;
  os << "quantity,value\n";
  auto emit = [&](const QuadratureScheme& scheme, const std::string& suffix) {
    const auto quad = PairQuadrature::shared(cfg.domain, cfg.s, scheme);
    const ModularValue dom = modular_gagliardo(M, u, Scope::domain, *quad);
    const ModularValue ext = modular_gagliardo(M, u, Scope::extended, *quad);
    const double lm = norm_LM(M, u, scheme.gauss_order).norm;
    const double sn = seminorm_gagliardo(M, u, Scope::extended, *quad).norm;
    const std::pair<const char*, double> rows[] = {
        {"modular_domain", dom.value},     {"modular_extended", ext.value},
        {"tail_contribution", ext.tail_contribution}, {"norm_LM", lm},
        {"seminorm", sn},                  {"full_norm", lm + sn}};
    for (const auto& [k, v] : rows) {
      os << k << suffix << ',' << csv::format(v) << '\n';
      log << k << suffix << " = " << v << '\n';
    }
    return ext;
  };
  const ModularValue ext = emit(cfg.scheme, "");
  for (int r = 1; r <= opt.refine; ++r) {
    QuadratureScheme s = cfg.scheme;
    s.gauss_order += r;
    s.diagonal_levels += r;
    emit(s, "@refine" + std::to_string(r));
  }
  os << "param.s," << csv::format(cfg.s) << '\n'
     << "param.gauss_order," << cfg.scheme.gauss_order << '\n'
     << "param.diagonal_levels," << cfg.scheme.diagonal_levels << '\n'
     << "param.tail_rings," << cfg.scheme.tail_rings << '\n'
     << "param.tail_radius," << csv::format(cfg.domain.tail_radius) << '\n'
     << "diag.remainder_bound," << csv::format(ext.remainder_bound) << '\n';
  csv::write_atomic(out_path(cfg, "modular.csv"), os.str());
  return ok;
}

int cmd_verify(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  const auto rows = run_property_suite(cfg, opt.properties);
  if (rows.empty()) throw ConfigError("--property: no property matches the given filters");
  std::ostringstream os;
  os << "name,samples,worst_margin,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    os << r.name << ',' << r.samples << ',' << csv::format(r.worst_margin) << ',' << (r.pass ? "true" : "false")
       << '\n';
    log << (r.pass ? "PASS " : "FAIL ") << r.name << " samples=" << r.samples << " worst_margin=" << r.worst_margin;
    if (!r.note.empty()) log << " (" << r.note << ")";
    log << '\n';
  }
  csv::write_atomic(out_path(cfg, "verify.csv"), os.str());
  return all ? ok : check_failed;
}

int cmd_solve(const RunConfig& cfg, const Options& opt, std::ostream& log) {
  if (!cfg.nonlinearity.present) throw ConfigError("nonlinearity: missing section (required by solve)");
  const WeakFormContext ctx(cfg.young.build(), cfg.s, cfg.domain, cfg.scheme);
  const SolutionReport rep = solve_two(ctx, cfg.nonlinearity.build(), cfg.lambda, cfg.solver, opt.force);

  const double tol = cfg.solver.grad_tol;
  std::ostringstream os;
  os << "key,value\n";
  auto row = [&](const std::string& k, double v) { os << k << ',' << csv::format(v) << '\n'; };
  row("lambda", rep.lambda);
  row("lambda_star", rep.lambda_star);
  row("rho", rep.rho);
  row("alpha", rep.alpha);
  row("exponent", rep.exponent);
  row("c1_estimate", rep.c1_estimate);
  row("I1", rep.I1.total);
  row("I1_modular", rep.I1.modular_part);
  row("I1_potential", rep.I1.potential_part);
  row("I2", rep.I2.total);
  row("I2_modular", rep.I2.modular_part);
  row("I2_potential", rep.I2.potential_part);
  row("residual1", rep.residual1);
  row("residual2", rep.residual2);
  row("iterations1", rep.iterations1);
  row("iterations2", rep.iterations2);
  row("deform_sweeps", rep.sweeps);
  row("distance", rep.distance);
  row("hypotheses_pass", rep.hypotheses.pass ? 1 : 0);
  row("gate_refused", rep.gate_refused ? 1 : 0);
  row("geometry_violation", rep.geometry_violation ? 1 : 0);
  row("forced", rep.forced ? 1 : 0);
  row("u1_ok", rep.u1_ok(tol) ? 1 : 0);
  row("u2_ok", rep.u2_ok(tol) ? 1 : 0);
  row("partial", rep.partial ? 1 : 0);
  for (const auto& m : rep.messages) os << "message," << sanitize(m) << '\n';
  for (const auto& m : rep.messages) log << m << '\n';

  if (!rep.gate_refused) {
    write_grid_csv(rep.u1, out_path(cfg, "solution_u1.csv"));
    write_grid_csv(rep.u2, out_path(cfg, "solution_u2.csv"));
  }
  csv::write_atomic(out_path(cfg, "report.csv"), os.str());
  log << "lambda=" << rep.lambda << " lambda*=" << rep.lambda_star << " I1=" << rep.I1.total
      << " I2=" << rep.I2.total << " residuals=" << rep.residual1 << "," << rep.residual2 << '\n';
  if (rep.gate_refused) return gate_refused;
  return rep.u1_ok(tol) && rep.u2_ok(tol) ? ok : check_failed;
}

int run(const std::string& command, const RunConfig& cfg, const Options& opt, std::ostream& log) {
  try {
    if (command == "young-audit") return cmd_young_audit(cfg, opt, log);
    if (command == "modular") return cmd_modular(cfg, opt, log);
    if (command == "verify") return cmd_verify(cfg, opt, log);
    if (command == "solve") return cmd_solve(cfg, opt, log);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return config_error;
  }
}

}  // namespace orlisov::cli
