#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "orlisov/errors.hpp"
#include "orlisov/grid.hpp"

using namespace orlisov;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("orlisov_test_" + name)).string();
}

}  // namespace

TEST(Domain, IntervalCounts) {
  const Domain d = Domain::interval(0.0, 1.0, 4);
  EXPECT_EQ(d.node_count(), 5u);
  EXPECT_EQ(d.cell_count(), 4u);
  EXPECT_EQ(d.dof_count(), 3u);
  EXPECT_DOUBLE_EQ(d.h(0), 0.25);
  EXPECT_DOUBLE_EQ(d.tail_radius, 4.0);
  EXPECT_TRUE(d.is_boundary_node(0));
  EXPECT_TRUE(d.is_boundary_node(4));
  EXPECT_FALSE(d.is_boundary_node(2));
}

TEST(Domain, RectangleCounts) {
  const Domain d = Domain::rectangle({0.0, 0.0}, {2.0, 1.0}, {4, 2});
  EXPECT_EQ(d.node_count(), 15u);
  EXPECT_EQ(d.cell_count(), 8u);
  EXPECT_EQ(d.dof_count(), 3u);
  EXPECT_DOUBLE_EQ(d.measure(), 2.0);
  EXPECT_NEAR(d.diameter(), std::sqrt(5.0), 1e-15);
  const auto nodes = d.cell_nodes(5);
  EXPECT_EQ(nodes[0], 6u);
  EXPECT_EQ(nodes[1], 7u);
  EXPECT_EQ(nodes[2], 11u);
  EXPECT_EQ(nodes[3], 12u);
}

TEST(Domain, ValidateRejectsBadInput) {
  Domain d = Domain::interval(0.0, 1.0, 4);
  d.n_cells[0] = 0;
  EXPECT_THROW(d.validate(), ConfigError);
  EXPECT_THROW(Domain::interval(1.0, 0.0, 4), ConfigError);
  EXPECT_THROW(Domain::interval(0.0, 1.0, 4, 0.3), ConfigError);
}

TEST(GridFunction, RuleAtInteriorNodes) {
  const Domain d = Domain::interval(0.0, 1.0, 4);
  const auto u = make_grid_function(d, [](const Point& x) { return x[0] * (1 - x[0]); });
  const std::vector<double> expect{0.0, 0.1875, 0.25, 0.1875, 0.0};
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_DOUBLE_EQ(u[i], expect[i]);
  EXPECT_TRUE(make_grid_function(d, [](const Point&) { return 0.0; }).is_zero());
  EXPECT_THROW(make_grid_function(d, [](const Point&) { return NAN; }), DomainError);
}

TEST(GridFunction, BoundaryIsForcedToZero) {
  const Domain d = Domain::interval(0.0, 1.0, 4);
  const auto u = make_grid_function(d, [](const Point&) { return 1.0; });
  EXPECT_EQ(u[0], 0.0);
  EXPECT_EQ(u[4], 0.0);
  EXPECT_THROW(GridFunction(d, {1, 0, 0, 0, 0}, true), DomainError);
}

TEST(GridFunction, Evaluate) {
  const Domain d = Domain::interval(0.0, 1.0, 4);
  const auto u = make_grid_function(d, [](const Point& x) { return x[0] * (1 - x[0]); });
  EXPECT_DOUBLE_EQ(evaluate(u, {0.5, 0.0}), 0.25);
  EXPECT_EQ(evaluate(u, {2.0 * d.diameter(), 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(u, {0.375, 0.0}), 0.5 * (0.1875 + 0.25));

  const Domain r = Domain::rectangle({0, 0}, {1, 1}, {2, 2});
  const auto lin = make_nonconforming_function(r, [](const Point& x) { return 3 * x[0] + x[1]; });
  EXPECT_NEAR(evaluate(lin, {0.25, 0.25}), 1.0, 1e-15);
  EXPECT_NEAR(evaluate(lin, {0.7, 0.9}), 3.0, 1e-15);
}

TEST(GridFunction, Arithmetic) {
  const Domain d = Domain::interval(0.0, 1.0, 8);
  const auto b = bubble(d);
  EXPECT_DOUBLE_EQ(b.max_abs(), 1.0);
  const auto z = b - b;
  EXPECT_TRUE(z.is_zero());
  EXPECT_DOUBLE_EQ((b + b.scaled(2.0)).max_abs(), 3.0);
  EXPECT_EQ(b.dofs().size(), d.dof_count());
  const auto back = GridFunction::from_dofs(d, b.dofs());
  for (std::size_t i = 0; i < d.node_count(); ++i) EXPECT_EQ(back[i], b[i]);
  EXPECT_NEAR(lipschitz_constant(b), 3.5, 1e-12);
}

TEST(GridFunction, RandomIsSeeded) {
  const Domain d = Domain::interval(0.0, 1.0, 16);
  const auto a = random_function(d, 42);
  const auto b = random_function(d, 42);
  const auto c = random_function(d, 43);
  bool differs = false;
  for (std::size_t i = 0; i < d.node_count(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    differs = differs || a[i] != c[i];
    EXPECT_LE(std::abs(a[i]), 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(GridFunction, Fixtures) {
  const Domain d = Domain::interval(0.0, 1.0, 8);
  EXPECT_TRUE(fixture(d, "zero").is_zero());
  EXPECT_EQ(fixture(d, "hat")[4], 1.0);
  EXPECT_FALSE(fixture(d, "linear").conforming());
  EXPECT_THROW(fixture(d, "nope"), ConfigError);
}

TEST(GridCsv, RoundTripIsBitExact) {
  for (const Domain& d : {Domain::interval(-1.0, 2.0, 7), Domain::rectangle({0, 0}, {1, 2}, {3, 4})}) {
    const auto u = random_function(d, 9);
    const std::string path = temp_path("roundtrip.csv");
    write_grid_csv(u, path);
    const auto v = read_grid_csv(d, path);
    for (std::size_t i = 0; i < d.node_count(); ++i) EXPECT_EQ(u[i], v[i]);
    std::filesystem::remove(path);
  }
}

TEST(GridCsv, RejectsMismatchedGrid) {
  const auto u = random_function(Domain::interval(0, 1, 8), 1);
  const std::string path = temp_path("mismatch.csv");
  write_grid_csv(u, path);
  EXPECT_THROW(read_grid_csv(Domain::interval(0, 1, 4), path), ConfigError);
  std::filesystem::remove(path);
}
