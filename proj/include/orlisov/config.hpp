#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "orlisov/grid.hpp"
#include "orlisov/problem.hpp"
#include "orlisov/quadrature.hpp"
#include "orlisov/solver.hpp"
#include "orlisov/young.hpp"

namespace orlisov {

struct YoungSpec {
  std::string kind = "power";
  double p = 2.0;
  double q = 4.0;
  double gamma = 2.0;
  /// Knots for kind = "tabulated".
  std::vector<double> t, M, m;

  YoungFunction build() const;
};

struct NonlinearitySpec {
  bool present = false;
  std::string kind = "pure_power";
  double q = 1.5;
  double C0 = std::numeric_limits<double>::quiet_NaN();
  double C1 = std::numeric_limits<double>::quiet_NaN();
  double C2 = std::numeric_limits<double>::quiet_NaN();

  Nonlinearity build() const;
};

/// Sample counts of the property suite.
struct VerifySpec {
  std::size_t young_samples = 10000;
  std::size_t fixtures = 20;
  std::size_t pairs = 100;
  std::size_t lemma2_samples = 100;
  std::size_t poincare_samples = 200;
  std::size_t ring_samples = 50;
};

struct RunConfig {
  YoungSpec young;
  Domain domain = Domain::interval(0.0, 1.0, 32);
  double s = 0.5;
  QuadratureScheme scheme = QuadratureScheme::defaults(1);
  NonlinearitySpec nonlinearity;
  LambdaChoice lambda;
  SolverConfig solver;
  VerifySpec verify;
  std::uint64_t seed = 1;
  std::string out = ".";
};

/// Parses TOML text. Unknown keys, wrong types and violated cross-field
/// constraints raise ConfigError naming the offending key.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace orlisov
