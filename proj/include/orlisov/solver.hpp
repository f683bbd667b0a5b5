#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orlisov/audit.hpp"
#include "orlisov/grid.hpp"
#include "orlisov/operator.hpp"
#include "orlisov/problem.hpp"

namespace orlisov {

struct SolverConfig {
  int max_iters = 20000;
  /// Stationarity threshold on the sup norm of the energy gradient covector.
  double grad_tol = 1e-6;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  int path_points = 16;
  int deform_steps = 400;
  std::uint64_t seed = 1;
  /// lambda of the provisional minimization that fixes rho.
  double probe_lambda = 0.1;
  std::size_t c1_samples = 50;

  void validate() const;
};

struct MinimizeResult {
  GridFunction u;
  EnergyValue energy;
  double start_energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Empty on success.
  std::string failure;
  std::vector<double> energies;
};

/// Armijo steepest descent with Barzilai-Borwein trial steps, started from
/// the lowest negative energy among 2^-k * bubble, k = 0..1000 (or from
/// `start` when given). Stops once the gradient sup norm is at most
/// grad_tol * min(1, max |u|), so tiny minimizers are still resolved.
MinimizeResult minimize(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                        const SolverConfig& cfg, const GridFunction* start = nullptr);

struct MountainPassResult {
  GridFunction u;
  EnergyValue energy;
  double residual = 0.0;
  int sweeps = 0;
  int refine_iterations = 0;
  bool geometry_violation = false;
  bool converged = false;
  std::string failure;
  /// Interior path maximum after each deformation sweep.
  std::vector<double> path_max;
};

/// Deforms the segment t * u1 to lower its maximum, then drives the path
/// maximizer to stationarity by descent along the set where t -> I(t u) is
/// maximal. Reports a geometry violation when the path maximum falls below
/// alpha / 2 (below 0 when alpha == 0).
MountainPassResult mountain_pass(const WeakFormContext& ctx, const Nonlinearity& nl, double lambda,
                                 const GridFunction& u1, double alpha, const SolverConfig& cfg);

struct C1Estimate {
  /// 1.1 times the largest sampled ratio.
  double value = 0.0;
  double raw = 0.0;
  std::vector<double> ratios;
};

/// Largest ||u||_{L^q} / [u]_(s,M) over bubble, hat and n_samples random
/// functions.
C1Estimate estimate_c1(const WeakFormContext& ctx, double q, std::size_t n_samples,
                       std::uint64_t seed);

struct LambdaStar {
  double lambda_star = 0.0;
  double alpha = 0.0;
  /// m_sup when rho < 1, m0 otherwise.
  double exponent = 0.0;
};

/// lambda* = rho^{e-q} / (3 C2 c1^q), alpha = rho^{e-q} / 3.
LambdaStar lambda_star(const YoungFunction& M, const Nonlinearity& nl, double rho, double c1);

struct LambdaChoice {
  enum class Mode { value, automatic, relative };
  Mode mode = Mode::automatic;
  /// The value itself, or the multiple of lambda* for Mode::relative.
  double value = 0.0;
};

struct SolutionReport {
  GridFunction u1;
  GridFunction u2;
  EnergyValue I1;
  EnergyValue I2;
  double lambda = 0.0;
  double lambda_star = 0.0;
  double rho = 0.0;
  double alpha = 0.0;
  double exponent = 0.0;
  double c1_estimate = 0.0;
  double residual1 = 0.0;
  double residual2 = 0.0;
  int iterations1 = 0;
  int iterations2 = 0;
  int sweeps = 0;
  double distance = 0.0;
  AuditReport hypotheses;
  bool gate_refused = false;
  bool geometry_violation = false;
  bool partial = false;
  bool forced = false;
  std::vector<std::string> messages;
  std::vector<double> path_max;

  bool u1_ok(double grad_tol) const;
  bool u2_ok(double grad_tol) const;
};

/// Hypothesis gate, provisional minimization at the probe lambda (rho =
/// ||u1|| / 2), c1 and lambda*, lambda gate, minimization, mountain pass.
/// Gates are bypassed with `force`.
SolutionReport solve_two(const WeakFormContext& ctx, const Nonlinearity& nl, LambdaChoice choice,
                         const SolverConfig& cfg, bool force = false);

}  // namespace orlisov
