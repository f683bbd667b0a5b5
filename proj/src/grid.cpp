#include "orlisov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "orlisov/csv.hpp"
#include "orlisov/errors.hpp"

namespace orlisov {

namespace {

double coord(const Domain& d, int axis, int i) {
  return d.lo[axis] + (d.hi[axis] - d.lo[axis]) * i / d.n_cells[axis];
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::interval(double a, double b, int n, double tail_radius) {
  Domain d;
  d.dim = 1;
  d.lo = {a, 0.0};
  d.hi = {b, 1.0};
  d.n_cells = {n, 1};
  d.tail_radius = tail_radius > 0.0 ? tail_radius : 4.0 * std::abs(b - a);
  d.validate();
  return d;
}

Domain Domain::rectangle(Point lo, Point hi, std::array<int, 2> n, double tail_radius) {
  Domain d;
  d.dim = 2;
  d.lo = lo;
  d.hi = hi;
  d.n_cells = n;
  d.tail_radius = tail_radius > 0.0 ? tail_radius : 4.0 * d.diameter();
  d.validate();
  return d;
}

std::size_t Domain::node_count() const {
  return static_cast<std::size_t>(nodes_along(0)) * nodes_along(1);
}

std::size_t Domain::cell_count() const {
  return static_cast<std::size_t>(cells_along(0)) * cells_along(1);
}

std::size_t Domain::dof_count() const {
  if (dim == 1) return static_cast<std::size_t>(n_cells[0] - 1);
  return static_cast<std::size_t>(n_cells[0] - 1) * (n_cells[1] - 1);
}

double Domain::diameter() const {
  const double a = hi[0] - lo[0];
  if (dim == 1) return a;
  const double b = hi[1] - lo[1];
  return std::hypot(a, b);
}

Point Domain::center() const {
  return {0.5 * (lo[0] + hi[0]), dim == 1 ? 0.0 : 0.5 * (lo[1] + hi[1])};
}

double Domain::measure() const {
  return dim == 1 ? hi[0] - lo[0] : (hi[0] - lo[0]) * (hi[1] - lo[1]);
}

Point Domain::node_coord(std::size_t node) const {
  const int nx = nodes_along(0);
  const int i = static_cast<int>(node % nx);
  const int j = static_cast<int>(node / nx);
  return {coord(*this, 0, i), dim == 1 ? 0.0 : coord(*this, 1, j)};
}

bool Domain::is_boundary_node(std::size_t node) const {
  const int nx = nodes_along(0);
  const int i = static_cast<int>(node % nx);
  const int j = static_cast<int>(node / nx);
  if (i == 0 || i == n_cells[0]) return true;
  return dim == 2 && (j == 0 || j == n_cells[1]);
}

std::array<std::size_t, 4> Domain::cell_nodes(std::size_t cell) const {
  const std::size_t cx = cells_along(0);
  const std::size_t i = cell % cx;
  const std::size_t j = cell / cx;
  const std::size_t nx = nodes_along(0);
  if (dim == 1) return {i, i + 1, 0, 0};
  return {j * nx + i, j * nx + i + 1, (j + 1) * nx + i, (j + 1) * nx + i + 1};
}

Point Domain::cell_origin(std::size_t cell) const {
  const int cx = cells_along(0);
  const int i = static_cast<int>(cell % cx);
  const int j = static_cast<int>(cell / cx);
  return {coord(*this, 0, i), dim == 1 ? 0.0 : coord(*this, 1, j)};
}

std::vector<std::size_t> Domain::dof_nodes() const {
  std::vector<std::size_t> out;
  out.reserve(dof_count());
  for (std::size_t k = 0; k < node_count(); ++k) {
    if (!is_boundary_node(k)) out.push_back(k);
  }
  return out;
}

void Domain::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("domain.dim must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(hi[a] > lo[a])) {
      throw ConfigError("domain.bounds must be finite with lo < hi");
    }
    if (n_cells[a] < 2) throw ConfigError("domain.n_cells must be at least 2 per axis");
  }
  if (!(tail_radius >= diameter()) || !std::isfinite(tail_radius)) {
    throw ConfigError("domain.tail_radius must be at least the domain diameter");
  }
}

bool Domain::contains(const Point& x) const {
  for (int a = 0; a < dim; ++a) {
    if (!(x[a] >= lo[a] && x[a] <= hi[a])) return false;
  }
  return true;
}

std::array<double, 4> local_basis(int dim, double xi, double eta) {
  if (dim == 1) return {1.0 - xi, xi, 0.0, 0.0};
  return {(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), (1.0 - xi) * eta, xi * eta};
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(Domain domain, std::vector<double> nodal, bool conforming)
    : domain_(std::move(domain)), nodal_(std::move(nodal)), conforming_(conforming) {
  if (nodal_.size() != domain_.node_count()) {
    throw ConfigError("GridFunction: nodal vector does not match the domain");
  }
  if (conforming_) {
    for (std::size_t k = 0; k < nodal_.size(); ++k) {
      if (domain_.is_boundary_node(k) && nodal_[k] != 0.0) {
        throw DomainError("GridFunction: conforming function with nonzero boundary value");
      }
    }
  }
}

GridFunction GridFunction::zero(const Domain& domain) {
  return GridFunction(domain, std::vector<double>(domain.node_count(), 0.0), true);
}

GridFunction GridFunction::from_dofs(const Domain& domain, std::span<const double> dofs) {
  const auto nodes = domain.dof_nodes();
  if (dofs.size() != nodes.size()) throw ConfigError("GridFunction: dof vector has the wrong size");
  std::vector<double> nodal(domain.node_count(), 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) nodal[nodes[k]] = dofs[k];
  return GridFunction(domain, std::move(nodal), true);
}

bool GridFunction::is_zero() const {
  return std::all_of(nodal_.begin(), nodal_.end(), [](double v) { return v == 0.0; });
}

std::vector<double> GridFunction::dofs() const {
  std::vector<double> out;
  for (std::size_t k : domain_.dof_nodes()) out.push_back(nodal_[k]);
  return out;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : nodal_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double a) const {
  GridFunction r = *this;
  for (double& v : r.nodal_) v *= a;
  return r;
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
  if (!(domain_ == o.domain_)) throw ConfigError("GridFunction: mismatched domains");
  GridFunction r = *this;
  for (std::size_t k = 0; k < nodal_.size(); ++k) r.nodal_[k] += o.nodal_[k];
  r.conforming_ = conforming_ && o.conforming_;
  return r;
}

GridFunction GridFunction::operator-(const GridFunction& o) const { return *this + o.scaled(-1.0); }

GridFunction make_grid_function(const Domain& domain, const NodalRule& rule) {
  std::vector<double> nodal(domain.node_count(), 0.0);
  for (std::size_t k : domain.dof_nodes()) {
    const double v = rule(domain.node_coord(k));
    if (!std::isfinite(v)) throw DomainError("make_grid_function: non-finite nodal value");
    nodal[k] = v;
  }
  return GridFunction(domain, std::move(nodal), true);
}

GridFunction make_nonconforming_function(const Domain& domain, const NodalRule& rule) {
  std::vector<double> nodal(domain.node_count(), 0.0);
  bool zero_boundary = true;
  for (std::size_t k = 0; k < nodal.size(); ++k) {
    nodal[k] = rule(domain.node_coord(k));
    if (!std::isfinite(nodal[k])) throw DomainError("make_nonconforming_function: non-finite value");
    if (domain.is_boundary_node(k) && nodal[k] != 0.0) zero_boundary = false;
  }
  return GridFunction(domain, std::move(nodal), zero_boundary);
}

double evaluate(const GridFunction& u, const Point& x) {
  const Domain& d = u.domain();
  if (!d.contains(x)) return 0.0;
  int idx[2] = {0, 0};
  double loc[2] = {0.0, 0.0};
  for (int a = 0; a < d.dim; ++a) {
    const double t = (x[a] - d.lo[a]) / d.h(a);
    idx[a] = std::clamp(static_cast<int>(std::floor(t)), 0, d.n_cells[a] - 1);
    loc[a] = t - idx[a];
  }
  const std::size_t cell = static_cast<std::size_t>(idx[1]) * d.cells_along(0) + idx[0];
  const auto nodes = d.cell_nodes(cell);
  const auto phi = local_basis(d.dim, loc[0], loc[1]);
  double v = 0.0;
  for (int a = 0; a < d.nodes_per_cell(); ++a) v += phi[a] * u[nodes[a]];
  return v;
}

double lipschitz_constant(const GridFunction& u) {
  const Domain& d = u.domain();
  double L = 0.0;
  for (std::size_t c = 0; c < d.cell_count(); ++c) {
    const auto n = d.cell_nodes(c);
    if (d.dim == 1) {
      L = std::max(L, std::abs(u[n[1]] - u[n[0]]) / d.h(0));
      continue;
    }
    // The gradient of a bilinear function is extremal at the corners.
    const double gx0 = (u[n[1]] - u[n[0]]) / d.h(0);
    const double gx1 = (u[n[3]] - u[n[2]]) / d.h(0);
    const double gy0 = (u[n[2]] - u[n[0]]) / d.h(1);
    const double gy1 = (u[n[3]] - u[n[1]]) / d.h(1);
    for (double gx : {gx0, gx1}) {
      for (double gy : {gy0, gy1}) L = std::max(L, std::hypot(gx, gy));
    }
  }
  return L;
}

GridFunction bubble(const Domain& domain) {
  return make_grid_function(domain, [&domain](const Point& x) {
    double v = 1.0;
    for (int a = 0; a < domain.dim; ++a) {
      const double len = domain.hi[a] - domain.lo[a];
      v *= 4.0 * (x[a] - domain.lo[a]) * (domain.hi[a] - x[a]) / (len * len);
    }
    return v;
  });
}

GridFunction hat(const Domain& domain) {
  const int i = domain.n_cells[0] / 2;
  const int j = domain.dim == 2 ? domain.n_cells[1] / 2 : 0;
  std::vector<double> nodal(domain.node_count(), 0.0);
  nodal[static_cast<std::size_t>(j) * domain.nodes_along(0) + i] = 1.0;
  return GridFunction(domain, std::move(nodal), true);
}

GridFunction random_function(const Domain& domain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> dofs(domain.dof_count());
  for (double& v : dofs) v = dist(rng);
  return GridFunction::from_dofs(domain, dofs);
}

GridFunction fixture(const Domain& domain, const std::string& name) {
  if (name == "zero") return GridFunction::zero(domain);
  if (name == "bubble") return bubble(domain);
  if (name == "hat") return hat(domain);
  if (name == "linear") return make_nonconforming_function(domain, [](const Point& x) { return x[0]; });
  throw ConfigError("unknown fixture '" + name + "' (expected zero, bubble, hat or linear)");
}

void write_grid_csv(const GridFunction& u, const std::string& path) {
  const Domain& d = u.domain();
  std::ostringstream os;
  os << (d.dim == 1 ? "x,u\n" : "x,y,u\n");
  for (std::size_t k = 0; k < d.node_count(); ++k) {
    const Point x = d.node_coord(k);
    os << csv::format(x[0]);
    if (d.dim == 2) os << ',' << csv::format(x[1]);
    os << ',' << csv::format(u[k]) << '\n';
  }
  csv::write_atomic(path, os.str());
}

GridFunction read_grid_csv(const Domain& domain, const std::string& path) {
  const csv::Table t = csv::read(path);
  const std::vector<std::string> expected =
      domain.dim == 1 ? std::vector<std::string>{"x", "u"} : std::vector<std::string>{"x", "y", "u"};
  if (t.header != expected) throw ConfigError(path + ": header does not match the domain dimension");
  if (t.rows.size() != domain.node_count()) {
    throw ConfigError(path + ": row count does not match the grid");
  }
  std::vector<double> nodal(domain.node_count());
  const double tol = 1e-9 * std::max(1.0, domain.diameter());
  bool zero_boundary = true;
  for (std::size_t k = 0; k < nodal.size(); ++k) {
    const auto& row = t.rows[k];
    const Point x = domain.node_coord(k);
    for (int a = 0; a < domain.dim; ++a) {
      if (std::abs(csv::parse_double(row[a]) - x[a]) > tol) {
        throw ConfigError(path + ": node coordinates do not match the grid at row " +
                          std::to_string(k + 1));
      }
    }
    nodal[k] = csv::parse_double(row.back());
    if (!std::isfinite(nodal[k])) throw ConfigError(path + ": non-finite value");
    if (domain.is_boundary_node(k) && nodal[k] != 0.0) zero_boundary = false;
  }
  return GridFunction(domain, std::move(nodal), zero_boundary);
}

}  // namespace orlisov
