#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "orlisov/grid.hpp"
#include "orlisov/young.hpp"

namespace orlisov {

enum class Scope { domain, extended };

/// Parameters of the cell-pair rule for the measure dx dy / |x - y|^N.
struct QuadratureScheme {
  /// Gauss points per axis per (sub)cell.
  int gauss_order = 3;
  /// Dyadic grading depth toward the shared set of touching cells, the
  /// diagonal of identical cells and the boundary for exterior integrals.
  int diagonal_levels = 6;
  /// Pieces of the logarithmic radial range out to the tail radius.
  int tail_rings = 8;

  /// 1D: (3, 6, 8). 2D: (3, 2, 8); deeper grading is affordable in 2D
  /// only on very small meshes.
  static QuadratureScheme defaults(int dim);
  /// Throws ConfigError on gauss_order < 2, diagonal_levels < 1 or
  /// tail_rings < 1.
  void validate() const;

  friend bool operator==(const QuadratureScheme&, const QuadratureScheme&) = default;
};

/// Samples D(u) = sum_a c[a] u_a with weights w for all cell pairs (I, J)
/// whose cell-index offset is `offset`. Coefficients have stride 2 * npc:
/// the nodes of I followed by the nodes of J.
struct PairTable {
  std::array<int, 2> offset{0, 0};
  std::vector<double> w;
  std::vector<double> c;
};

/// Gauss point of a cell with its local basis values and physical weight.
struct CellPoint {
  std::size_t cell = 0;
  Point x{0.0, 0.0};
  std::array<double, 4> phi{};
  double w = 0.0;
};

/// A point x in the domain with the exterior samples (w, k) of
/// int M(u(x) |x - y|^{-s}) dy / |x - y|^N over B_R \ domain.
struct TailPoint {
  std::size_t cell = 0;
  std::array<double, 4> phi{};
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

/// Weighted difference values of one function, laid out in a fixed order.
struct DifferenceSamples {
  std::vector<double> w;
  std::vector<double> D;
  /// Samples [tail_begin, size) belong to the exterior part.
  std::size_t tail_begin = 0;
};

/// Modular split into the domain double integral and the exterior part.
struct ModularParts {
  double domain = 0.0;
  double tail = 0.0;
};

/// Discrete Gagliardo modular and its derivatives for one (domain, s,
/// scheme). All quantities are sums of w * M(D) over linear difference
/// samples, so the modular, its gradient and the weak pairing are mutually
/// consistent to rounding. Immutable after construction.
class PairQuadrature {
 public:
  PairQuadrature(const Domain& domain, double s, const QuadratureScheme& scheme);

  /// Process-wide cache keyed by (domain, s, scheme).
  static std::shared_ptr<const PairQuadrature> shared(const Domain& domain, double s,
                                                      const QuadratureScheme& scheme);

  const Domain& domain() const { return domain_; }
  double s() const { return s_; }
  const QuadratureScheme& scheme() const { return scheme_; }
  const std::vector<PairTable>& tables() const { return tables_; }
  const std::vector<CellPoint>& cell_points() const { return cell_points_; }
  std::size_t sample_count(Scope scope) const;

  ModularParts modular(const YoungFunction& M, std::span<const double> nodal, Scope scope) const;
  /// d/du_a of the modular for every node a (boundary nodes included).
  std::vector<double> gradient(const YoungFunction& M, std::span<const double> nodal,
                               Scope scope) const;
  /// sum w m(D(u)) D(v).
  double pairing(const YoungFunction& M, std::span<const double> u, std::span<const double> v,
                 Scope scope) const;
  DifferenceSamples samples(std::span<const double> nodal, Scope scope) const;

  /// Upper bound for the exterior part beyond the tail radius.
  double remainder_bound(const YoungFunction& M, std::span<const double> nodal) const;

 private:
  struct Item {
    std::uint32_t table;
    std::uint32_t I;
    std::uint32_t J;
  };

  void build_tables();
  void build_cell_points();
  void build_tail();
  std::array<std::size_t, 8> item_nodes(const Item& it) const;

  Domain domain_;
  double s_;
  QuadratureScheme scheme_;
  int npc_;
  std::vector<PairTable> tables_;
  std::vector<Item> items_;
  std::vector<CellPoint> cell_points_;
  std::vector<TailPoint> tail_points_;
  std::vector<double> tail_w_;
  std::vector<double> tail_k_;
};

/// sum w M(D * scale) over the samples, with a fixed chunked reduction.
double modular_sum(const DifferenceSamples& samples, const YoungFunction& M, double scale);

}  // namespace orlisov
