#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace orlisov {

using Point = std::array<double, 2>;

/// Interval (dim 1) or rectangle (dim 2) with a uniform mesh. Unused second
/// axis entries are ignored when dim == 1.
struct Domain {
  int dim = 1;
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};
  std::array<int, 2> n_cells{2, 1};
  /// Radius R of the ball B_R(center) used for exterior integrals.
  double tail_radius = 0.0;

  static Domain interval(double a, double b, int n, double tail_radius = 0.0);
  static Domain rectangle(Point lo, Point hi, std::array<int, 2> n, double tail_radius = 0.0);

  double h(int axis) const { return (hi[axis] - lo[axis]) / n_cells[axis]; }
  int nodes_along(int axis) const { return axis < dim ? n_cells[axis] + 1 : 1; }
  int cells_along(int axis) const { return axis < dim ? n_cells[axis] : 1; }
  std::size_t node_count() const;
  std::size_t cell_count() const;
  /// Interior nodes, i.e. degrees of freedom.
  std::size_t dof_count() const;
  int nodes_per_cell() const { return dim == 1 ? 2 : 4; }

  double diameter() const;
  Point center() const;
  double measure() const;

  Point node_coord(std::size_t node) const;
  bool is_boundary_node(std::size_t node) const;
  /// Node indices of a cell, ordered (x0,y0), (x1,y0), (x0,y1), (x1,y1).
  std::array<std::size_t, 4> cell_nodes(std::size_t cell) const;
  Point cell_origin(std::size_t cell) const;
  /// Interior node index for each dof, in lexicographic node order.
  std::vector<std::size_t> dof_nodes() const;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  bool contains(const Point& x) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Local multilinear basis on the unit cell at reference point (xi, eta).
std::array<double, 4> local_basis(int dim, double xi, double eta);

/// Nodal values of a continuous piecewise-multilinear function, extended by
/// zero outside the domain. Conforming functions vanish on the boundary.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Domain domain, std::vector<double> nodal, bool conforming);

  static GridFunction zero(const Domain& domain);
  static GridFunction from_dofs(const Domain& domain, std::span<const double> dofs);

  const Domain& domain() const { return domain_; }
  std::span<const double> nodal() const { return nodal_; }
  double operator[](std::size_t node) const { return nodal_[node]; }
  bool conforming() const { return conforming_; }
  bool is_zero() const;

  std::vector<double> dofs() const;
  double max_abs() const;

  GridFunction scaled(double a) const;
  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;

 private:
  Domain domain_;
  std::vector<double> nodal_;
  bool conforming_ = true;
};

using NodalRule = std::function<double(const Point&)>;

/// Rule applied at interior nodes, boundary forced to zero. Throws
/// DomainError on a non-finite value.
GridFunction make_grid_function(const Domain& domain, const NodalRule& rule);
/// Rule applied at every node, boundary included. Only meaningful for
/// domain-scope diagnostics.
GridFunction make_nonconforming_function(const Domain& domain, const NodalRule& rule);

/// Multilinear interpolation inside the closed domain, 0 outside.
double evaluate(const GridFunction& u, const Point& x);

/// Largest slope of u over all cells.
double lipschitz_constant(const GridFunction& u);

/// Product bubble with peak value 1 at the center.
GridFunction bubble(const Domain& domain);
/// Nodal hat at the interior node nearest to the center.
GridFunction hat(const Domain& domain);
/// Interior values i.i.d. uniform on [-1, 1] (mt19937_64 seeded with `seed`).
GridFunction random_function(const Domain& domain, std::uint64_t seed);
/// Built-in fixture by name: zero, bubble, hat, linear (non-conforming u = x).
GridFunction fixture(const Domain& domain, const std::string& name);

/// CSV with header x[,y],u and one row per node, 17 significant digits.
void write_grid_csv(const GridFunction& u, const std::string& path);
/// Reads a CSV written by write_grid_csv; coordinates must match the domain.
GridFunction read_grid_csv(const Domain& domain, const std::string& path);

}  // namespace orlisov
