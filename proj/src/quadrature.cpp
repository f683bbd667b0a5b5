#include "orlisov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <tuple>

#include "orlisov/errors.hpp"
#include "orlisov/gauss.hpp"
#include "orlisov/parallel.hpp"

namespace orlisov {

namespace {

constexpr std::size_t kMaxChunks = 64;

struct Box {
  Point lo{0.0, 0.0};
  Point hi{0.0, 0.0};
};

struct Interval {
  double a;
  double b;
};

// Closed boxes share at least one point.
bool touching(const Box& A, const Box& B, int dim, const Point& h) {
  for (int k = 0; k < dim; ++k) {
    const double eps = 1e-9 * h[k];
    if (A.lo[k] > B.hi[k] + eps || B.lo[k] > A.hi[k] + eps) return false;
  }
  return true;
}

std::vector<Box> children(const Box& A, int dim) {
  std::vector<Box> out;
  const Point mid{0.5 * (A.lo[0] + A.hi[0]), 0.5 * (A.lo[1] + A.hi[1])};
  const int n = dim == 1 ? 2 : 4;
  for (int c = 0; c < n; ++c) {
    Box b = A;
    if (c & 1) {
      b.lo[0] = mid[0];
    } else {
      b.hi[0] = mid[0];
    }
    if (dim == 2) {
      if (c & 2) {
        b.lo[1] = mid[1];
      } else {
        b.hi[1] = mid[1];
      }
    }
    out.push_back(b);
  }
  return out;
}

// Tensor Gauss points of a box: (point, weight).
std::vector<std::pair<Point, double>> box_points(const Box& A, int dim, const GaussRule& g) {
  std::vector<std::pair<Point, double>> out;
  const int n = g.order();
  const double lx = A.hi[0] - A.lo[0];
  if (dim == 1) {
    for (int i = 0; i < n; ++i) out.push_back({{A.lo[0] + lx * g.nodes[i], 0.0}, lx * g.weights[i]});
    return out;
  }
  const double ly = A.hi[1] - A.lo[1];
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.push_back({{A.lo[0] + lx * g.nodes[i], A.lo[1] + ly * g.nodes[j]},
                     lx * ly * g.weights[i] * g.weights[j]});
    }
  }
  return out;
}

// Dyadic pieces of [a, b] graded toward `a` (toward_lo) or `b`.
std::vector<Interval> graded(double a, double b, int levels, bool toward_lo) {
  std::vector<Interval> out;
  const double len = b - a;
  for (int k = 0; k < levels; ++k) {
    const double far = len / std::ldexp(1.0, k);
    const double near = len / std::ldexp(1.0, k + 1);
    out.push_back(toward_lo ? Interval{a + near, a + far} : Interval{b - far, b - near});
  }
  const double last = len / std::ldexp(1.0, levels);
  out.push_back(toward_lo ? Interval{a, a + last} : Interval{b - last, b});
  return out;
}

template <class Body>
void chunked(std::size_t n, Body body) {
  const std::size_t chunks = std::min(kMaxChunks, std::max<std::size_t>(n, 1));
  parallel::for_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    body(c, begin, end);
  });
}

std::size_t chunk_count(std::size_t n) { return std::min(kMaxChunks, std::max<std::size_t>(n, 1)); }

class TableBuilder {
 public:
  TableBuilder(PairTable& t, int dim, Point h, double s)
      : t_(t), dim_(dim), h_(h), s_(s), npc_(dim == 1 ? 2 : 4) {}

  std::array<double, 4> basis_I(const Point& x) const {
    return local_basis(dim_, x[0] / h_[0], dim_ == 2 ? x[1] / h_[1] : 0.0);
  }
  std::array<double, 4> basis_J(const Point& y) const {
    const double ox = t_.offset[0] * h_[0];
    const double oy = t_.offset[1] * h_[1];
    return local_basis(dim_, (y[0] - ox) / h_[0], dim_ == 2 ? (y[1] - oy) / h_[1] : 0.0);
  }

  void add(double w, const std::array<double, 4>& cI, const std::array<double, 4>& cJ) {
    t_.w.push_back(w);
    for (int a = 0; a < npc_; ++a) t_.c.push_back(cI[a]);
    for (int a = 0; a < npc_; ++a) t_.c.push_back(cJ[a]);
  }

  // Tensor Gauss on A x B, x in cell I, y in cell J.
  void gauss_pair(const Box& A, const Box& B, const GaussRule& g, double factor) {
    const auto xs = box_points(A, dim_, g);
    const auto ys = box_points(B, dim_, g);
    for (const auto& [x, wx] : xs) {
      const auto px = basis_I(x);
      for (const auto& [y, wy] : ys) {
        const double r = std::hypot(x[0] - y[0], x[1] - y[1]);
        const double ks = std::pow(r, -s_);
        const auto py = basis_J(y);
        std::array<double, 4> cI{}, cJ{};
        for (int a = 0; a < npc_; ++a) {
          cI[a] = px[a] * ks;
          cJ[a] = -py[a] * ks;
        }
        add(factor * wx * wy / std::pow(r, dim_), cI, cJ);
      }
    }
  }

  void refine(const Box& A, const Box& B, int level, int levels, const GaussRule& g, double factor) {
    if (level == levels) {
      gauss_pair(A, B, g, factor);
      return;
    }
    const auto ca = children(A, dim_);
    const auto cb = children(B, dim_);
    for (const Box& a : ca) {
      for (const Box& b : cb) {
        if (touching(a, b, dim_, h_)) {
          refine(a, b, level + 1, levels, g, factor);
        } else {
          gauss_pair(a, b, g, factor);
        }
      }
    }
  }

  // Identical cells in 1D: with z = x - y > 0 the difference quotient of a
  // linear function does not depend on x, so the x integral is exact.
  void self_1d(int levels, const GaussRule& g) {
    const double h = h_[0];
    for (const Interval& piece : graded(0.0, h, levels, true)) {
      for (int i = 0; i < g.order(); ++i) {
        const double z = piece.a + (piece.b - piece.a) * g.nodes[i];
        const double wz = (piece.b - piece.a) * g.weights[i];
        const double ks = std::pow(z, -s_) * z / h;
        add(2.0 * wz * (h - z) / z, {-ks, ks, 0.0, 0.0}, {});
      }
    }
  }

  // Identical cells in 2D: polar coordinates in z = x - y over the half
  // plane, tensor Gauss in x over the overlap of the cell and its shift.
  void self_2d(int levels, const GaussRule& g) {
    const double hx = h_[0];
    const double hy = h_[1];
    const double tc = std::atan2(hy, hx);
    const double pi = std::numbers::pi;
    const Interval sectors[4] = {{0.0, tc}, {tc, 0.5 * pi}, {0.5 * pi, pi - tc}, {pi - tc, pi}};
    for (const Interval& sec : sectors) {
      for (int it = 0; it < g.order(); ++it) {
        const double th = sec.a + (sec.b - sec.a) * g.nodes[it];
        const double wth = (sec.b - sec.a) * g.weights[it];
        const double c = std::cos(th);
        const double sn = std::sin(th);
        const double R = std::min(std::abs(c) > 0.0 ? hx / std::abs(c) : INFINITY,
                                  sn > 0.0 ? hy / sn : INFINITY);
        for (const Interval& piece : graded(0.0, R, levels, true)) {
          for (int ir = 0; ir < g.order(); ++ir) {
            const double r = piece.a + (piece.b - piece.a) * g.nodes[ir];
            const double wr = (piece.b - piece.a) * g.weights[ir];
            const Point z{r * c, r * sn};
            Box overlap;
            overlap.lo = {std::max(0.0, z[0]), z[1]};
            overlap.hi = {std::min(hx, hx + z[0]), hy};
            const double ks = std::pow(r, -s_);
            for (const auto& [x, wx] : box_points(overlap, 2, g)) {
              const auto px = basis_I(x);
              const auto py = basis_I({x[0] - z[0], x[1] - z[1]});
              std::array<double, 4> cI{};
              for (int a = 0; a < 4; ++a) cI[a] = (px[a] - py[a]) * ks;
              add(2.0 * wth * wr * wx / r, cI, {});
            }
          }
        }
      }
    }
  }

 private:
  PairTable& t_;
  int dim_;
  Point h_;
  double s_;
  int npc_;
};

}  // namespace

// ---------------------------------------------------------------------------

QuadratureScheme QuadratureScheme::defaults(int dim) {
  QuadratureScheme s;
  if (dim == 2) s.diagonal_levels = 2;
  return s;
}

void QuadratureScheme::validate() const {
  if (gauss_order < 2 || gauss_order > 64) throw ConfigError("scheme.gauss_order must be in [2, 64]");
  if (diagonal_levels < 1 || diagonal_levels > 30) {
    throw ConfigError("scheme.diagonal_levels must be in [1, 30]");
  }
  if (tail_rings < 1) throw ConfigError("scheme.tail_rings must be at least 1");
}

PairQuadrature::PairQuadrature(const Domain& domain, double s, const QuadratureScheme& scheme)
    : domain_(domain), s_(s), scheme_(scheme), npc_(domain.nodes_per_cell()) {
  domain_.validate();
  scheme_.validate();
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("s must lie in (0, 1)");
  build_tables();
  build_cell_points();
  build_tail();
}

std::shared_ptr<const PairQuadrature> PairQuadrature::shared(const Domain& domain, double s,
                                                             const QuadratureScheme& scheme) {
  static std::mutex mutex;
  static std::vector<std::shared_ptr<const PairQuadrature>> cache;
  std::lock_guard lock(mutex);
  for (const auto& q : cache) {
    if (q->domain() == domain && q->s() == s && q->scheme() == scheme) return q;
  }
  auto q = std::make_shared<const PairQuadrature>(domain, s, scheme);
  if (cache.size() >= 16) cache.erase(cache.begin());
  cache.push_back(q);
  return q;
}

void PairQuadrature::build_tables() {
  const int dim = domain_.dim;
  const int nx = domain_.cells_along(0);
  const int ny = domain_.cells_along(1);
  const Point h{domain_.h(0), dim == 2 ? domain_.h(1) : 1.0};
  const GaussRule& g = gauss_legendre(scheme_.gauss_order);
  const int K = scheme_.diagonal_levels;

  for (int dy = 0; dy < ny; ++dy) {
    for (int dx = dy == 0 ? 0 : -(nx - 1); dx < nx; ++dx) {
      PairTable t;
      t.offset = {dx, dy};
      TableBuilder b(t, dim, h, s_);
      const Box A{{0.0, 0.0}, {h[0], dim == 2 ? h[1] : 0.0}};
      const Box B{{dx * h[0], dy * h[1]}, {(dx + 1) * h[0], dim == 2 ? (dy + 1) * h[1] : 0.0}};
      if (dx == 0 && dy == 0) {
        if (dim == 1) {
          b.self_1d(K, g);
        } else {
          b.self_2d(K, g);
        }
      } else if (std::abs(dx) <= 1 && dy <= 1) {
        b.refine(A, B, 0, K, g, 2.0);
      } else {
        b.gauss_pair(A, B, g, 2.0);
      }
      const auto table = static_cast<std::uint32_t>(tables_.size());
      tables_.push_back(std::move(t));
      for (int j = 0; j + dy < ny; ++j) {
        for (int i = std::max(0, -dx); i < nx && i + dx < nx; ++i) {
          const auto I = static_cast<std::uint32_t>(j * nx + i);
          const auto J = static_cast<std::uint32_t>((j + dy) * nx + i + dx);
          items_.push_back({table, I, J});
        }
      }
    }
  }
}

void PairQuadrature::build_cell_points() {
  const int dim = domain_.dim;
  const GaussRule& g = gauss_legendre(scheme_.gauss_order);
  const double hx = domain_.h(0);
  const double hy = dim == 2 ? domain_.h(1) : 1.0;
  for (std::size_t c = 0; c < domain_.cell_count(); ++c) {
    const Point o = domain_.cell_origin(c);
    const Box unit{{0.0, 0.0}, {1.0, dim == 2 ? 1.0 : 0.0}};
    for (const auto& [xi, w] : box_points(unit, dim, g)) {
      CellPoint p;
      p.cell = c;
      p.x = {o[0] + xi[0] * hx, dim == 2 ? o[1] + xi[1] * hy : 0.0};
      p.phi = local_basis(dim, xi[0], xi[1]);
      p.w = w * hx * (dim == 2 ? hy : 1.0);
      cell_points_.push_back(p);
    }
  }
}

void PairQuadrature::build_tail() {
  const int dim = domain_.dim;
  const GaussRule& g = gauss_legendre(scheme_.gauss_order);
  const int K = scheme_.diagonal_levels;
  const double R = domain_.tail_radius;
  const Point ctr = domain_.center();
  const Point a = domain_.lo;
  const Point b = domain_.hi;
  const double pi = std::numbers::pi;

  // Radial samples along a ray leaving the domain at distance rho and the
  // tail ball at distance Rx.
  auto radial = [&](double rho, double Rx, double weight) {
    const double L = std::log(Rx / rho);
    if (!(L > 0.0)) return;
    for (int ring = 0; ring < scheme_.tail_rings; ++ring) {
      const double t0 = L * ring / scheme_.tail_rings;
      const double t1 = L * (ring + 1) / scheme_.tail_rings;
      for (int i = 0; i < g.order(); ++i) {
        const double tau = t0 + (t1 - t0) * g.nodes[i];
        tail_w_.push_back(weight * (t1 - t0) * g.weights[i]);
        tail_k_.push_back(std::pow(rho * std::exp(tau), -s_));
      }
    }
  };

  auto ray_to_ball = [&](const Point& x, double c, double sn) {
    const double px = x[0] - ctr[0];
    const double py = x[1] - ctr[1];
    const double bb = c * px + sn * py;
    return -bb + std::sqrt(bb * bb - (px * px + py * py - R * R));
  };

  for (std::size_t cell = 0; cell < domain_.cell_count(); ++cell) {
    const Point o = domain_.cell_origin(cell);
    std::vector<Interval> axes[2];
    for (int k = 0; k < dim; ++k) {
      const double lo = o[k];
      const double hi = o[k] + domain_.h(k);
      const int idx = static_cast<int>(k == 0 ? cell % domain_.cells_along(0) : cell / domain_.cells_along(0));
      if (idx == 0) {
        axes[k] = graded(lo, hi, K, true);
      } else if (idx == domain_.n_cells[k] - 1) {
        axes[k] = graded(lo, hi, K, false);
      } else {
        axes[k] = {{lo, hi}};
      }
    }
    if (dim == 1) axes[1] = {{0.0, 0.0}};

    for (const Interval& iy : axes[1]) {
      for (const Interval& ix : axes[0]) {
        const Box sub{{ix.a, iy.a}, {ix.b, iy.b}};
        for (const auto& [x, wx] : box_points(sub, dim, g)) {
          TailPoint tp;
          tp.cell = cell;
          tp.phi = local_basis(dim, (x[0] - o[0]) / domain_.h(0),
                               dim == 2 ? (x[1] - o[1]) / domain_.h(1) : 0.0);
          tp.begin = static_cast<std::uint32_t>(tail_w_.size());
          if (dim == 1) {
            radial(b[0] - x[0], ctr[0] + R - x[0], 2.0 * wx);
            radial(x[0] - a[0], x[0] - (ctr[0] - R), 2.0 * wx);
          } else {
            double t1 = std::atan2(b[1] - x[1], b[0] - x[0]);
            double t2 = std::atan2(b[1] - x[1], a[0] - x[0]);
            double t3 = std::atan2(a[1] - x[1], a[0] - x[0]) + 2.0 * pi;
            double t4 = std::atan2(a[1] - x[1], b[0] - x[0]) + 2.0 * pi;
            const Interval sectors[4] = {{t4 - 2.0 * pi, t1}, {t1, t2}, {t2, t3}, {t3, t4}};
            for (int side = 0; side < 4; ++side) {
              const Interval sec = sectors[side];
              for (int i = 0; i < g.order(); ++i) {
                const double th = sec.a + (sec.b - sec.a) * g.nodes[i];
                const double wth = (sec.b - sec.a) * g.weights[i];
                const double c = std::cos(th);
                const double sn = std::sin(th);
                double rho = 0.0;
                switch (side) {
                  case 0: rho = (b[0] - x[0]) / c; break;
                  case 1: rho = (b[1] - x[1]) / sn; break;
                  case 2: rho = (a[0] - x[0]) / c; break;
                  default: rho = (a[1] - x[1]) / sn; break;
                }
                radial(rho, ray_to_ball(x, c, sn), 2.0 * wx * wth);
              }
            }
          }
          tp.end = static_cast<std::uint32_t>(tail_w_.size());
          tail_points_.push_back(tp);
        }
      }
    }
  }
}

std::size_t PairQuadrature::sample_count(Scope scope) const {
  std::size_t n = 0;
  for (const Item& it : items_) n += tables_[it.table].w.size();
  if (scope == Scope::extended) n += tail_w_.size();
  return n;
}

std::array<std::size_t, 8> PairQuadrature::item_nodes(const Item& it) const {
  std::array<std::size_t, 8> out{};
  const auto nI = domain_.cell_nodes(it.I);
  const auto nJ = domain_.cell_nodes(it.J);
  for (int a = 0; a < npc_; ++a) {
    out[a] = nI[a];
    out[npc_ + a] = nJ[a];
  }
  return out;
}

namespace {

// Runs pair(item_index, nodes, table) and tail(point_index) over fixed
// chunks and returns the per-chunk compensated sums combined in order.
template <class PairFn, class TailFn>
ModularParts reduce(std::size_t n_items, std::size_t n_tail, bool with_tail, PairFn pair_fn,
                    TailFn tail_fn) {
  ModularParts out;
  {
    std::vector<CompensatedSum> parts(chunk_count(n_items));
    chunked(n_items, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) pair_fn(i, parts[c]);
    });
    CompensatedSum total;
    for (const auto& p : parts) total.add(p);
    out.domain = total.value();
  }
  if (with_tail) {
    std::vector<CompensatedSum> parts(chunk_count(n_tail));
    chunked(n_tail, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) tail_fn(i, parts[c]);
    });
    CompensatedSum total;
    for (const auto& p : parts) total.add(p);
    out.tail = total.value();
  }
  return out;
}

}  // namespace

ModularParts PairQuadrature::modular(const YoungFunction& M, std::span<const double> u,
                                     Scope scope) const {
  const int stride = 2 * npc_;
  return reduce(
      items_.size(), tail_points_.size(), scope == Scope::extended,
      [&](std::size_t i, CompensatedSum& acc) {
        const Item& it = items_[i];
        const PairTable& t = tables_[it.table];
        const auto nodes = item_nodes(it);
        double v[8];
        for (int a = 0; a < stride; ++a) v[a] = u[nodes[a]];
        const double* c = t.c.data();
        for (std::size_t q = 0; q < t.w.size(); ++q, c += stride) {
          double D = 0.0;
          for (int a = 0; a < stride; ++a) D += c[a] * v[a];
          acc.add(t.w[q] * M.value(D));
        }
      },
      [&](std::size_t i, CompensatedSum& acc) {
        const TailPoint& tp = tail_points_[i];
        const auto nodes = domain_.cell_nodes(tp.cell);
        double ux = 0.0;
        for (int a = 0; a < npc_; ++a) ux += tp.phi[a] * u[nodes[a]];
        if (ux == 0.0) return;
        for (std::uint32_t q = tp.begin; q < tp.end; ++q) acc.add(tail_w_[q] * M.value(ux * tail_k_[q]));
      });
}

double PairQuadrature::pairing(const YoungFunction& M, std::span<const double> u,
                               std::span<const double> v, Scope scope) const {
  const int stride = 2 * npc_;
  const ModularParts p = reduce(
      items_.size(), tail_points_.size(), scope == Scope::extended,
      [&](std::size_t i, CompensatedSum& acc) {
        const Item& it = items_[i];
        const PairTable& t = tables_[it.table];
        const auto nodes = item_nodes(it);
        double uu[8], vv[8];
        for (int a = 0; a < stride; ++a) {
          uu[a] = u[nodes[a]];
          vv[a] = v[nodes[a]];
        }
        const double* c = t.c.data();
        for (std::size_t q = 0; q < t.w.size(); ++q, c += stride) {
          double Du = 0.0;
          double Dv = 0.0;
          for (int a = 0; a < stride; ++a) {
            Du += c[a] * uu[a];
            Dv += c[a] * vv[a];
          }
          acc.add(t.w[q] * M.density(Du) * Dv);
        }
      },
      [&](std::size_t i, CompensatedSum& acc) {
        const TailPoint& tp = tail_points_[i];
        const auto nodes = domain_.cell_nodes(tp.cell);
        double ux = 0.0;
        double vx = 0.0;
        for (int a = 0; a < npc_; ++a) {
          ux += tp.phi[a] * u[nodes[a]];
          vx += tp.phi[a] * v[nodes[a]];
        }
        if (ux == 0.0 || vx == 0.0) return;
        for (std::uint32_t q = tp.begin; q < tp.end; ++q) {
          const double k = tail_k_[q];
          acc.add(tail_w_[q] * M.density(ux * k) * vx * k);
        }
      });
  return p.domain + p.tail;
}

std::vector<double> PairQuadrature::gradient(const YoungFunction& M, std::span<const double> u,
                                             Scope scope) const {
  const int stride = 2 * npc_;
  const std::size_t nn = domain_.node_count();
  std::vector<double> out(nn, 0.0);

  const std::size_t pc = chunk_count(items_.size());
  std::vector<std::vector<double>> parts(pc, std::vector<double>(nn, 0.0));
  chunked(items_.size(), [&](std::size_t ch, std::size_t b, std::size_t e) {
    std::vector<double>& g = parts[ch];
    for (std::size_t i = b; i < e; ++i) {
      const Item& it = items_[i];
      const PairTable& t = tables_[it.table];
      const auto nodes = item_nodes(it);
      double v[8];
      double acc[8] = {};
      for (int a = 0; a < stride; ++a) v[a] = u[nodes[a]];
      const double* c = t.c.data();
      for (std::size_t q = 0; q < t.w.size(); ++q, c += stride) {
        double D = 0.0;
        for (int a = 0; a < stride; ++a) D += c[a] * v[a];
        const double f = t.w[q] * M.density(D);
        for (int a = 0; a < stride; ++a) acc[a] += f * c[a];
      }
      for (int a = 0; a < stride; ++a) g[nodes[a]] += acc[a];
    }
  });
  for (const auto& g : parts) {
    for (std::size_t k = 0; k < nn; ++k) out[k] += g[k];
  }

  if (scope == Scope::extended) {
    const std::size_t tc = chunk_count(tail_points_.size());
    std::vector<std::vector<double>> tparts(tc, std::vector<double>(nn, 0.0));
    chunked(tail_points_.size(), [&](std::size_t ch, std::size_t b, std::size_t e) {
      std::vector<double>& g = tparts[ch];
      for (std::size_t i = b; i < e; ++i) {
        const TailPoint& tp = tail_points_[i];
        const auto nodes = domain_.cell_nodes(tp.cell);
        double ux = 0.0;
        for (int a = 0; a < npc_; ++a) ux += tp.phi[a] * u[nodes[a]];
        if (ux == 0.0) continue;
        double f = 0.0;
        for (std::uint32_t q = tp.begin; q < tp.end; ++q) {
          const double k = tail_k_[q];
          f += tail_w_[q] * M.density(ux * k) * k;
        }
        for (int a = 0; a < npc_; ++a) g[nodes[a]] += f * tp.phi[a];
      }
    });
    for (const auto& g : tparts) {
      for (std::size_t k = 0; k < nn; ++k) out[k] += g[k];
    }
  }
  return out;
}

DifferenceSamples PairQuadrature::samples(std::span<const double> u, Scope scope) const {
  DifferenceSamples out;
  const int stride = 2 * npc_;
  const std::size_t n = sample_count(scope);
  out.w.reserve(n);
  out.D.reserve(n);
  for (const Item& it : items_) {
    const PairTable& t = tables_[it.table];
    const auto nodes = item_nodes(it);
    double v[8];
    for (int a = 0; a < stride; ++a) v[a] = u[nodes[a]];
    const double* c = t.c.data();
    for (std::size_t q = 0; q < t.w.size(); ++q, c += stride) {
      double D = 0.0;
      for (int a = 0; a < stride; ++a) D += c[a] * v[a];
      out.w.push_back(t.w[q]);
      out.D.push_back(D);
    }
  }
  out.tail_begin = out.w.size();
  if (scope == Scope::extended) {
    for (const TailPoint& tp : tail_points_) {
      const auto nodes = domain_.cell_nodes(tp.cell);
      double ux = 0.0;
      for (int a = 0; a < npc_; ++a) ux += tp.phi[a] * u[nodes[a]];
      for (std::uint32_t q = tp.begin; q < tp.end; ++q) {
        out.w.push_back(tail_w_[q]);
        out.D.push_back(ux * tail_k_[q]);
      }
    }
  }
  return out;
}

double PairQuadrature::remainder_bound(const YoungFunction& M, std::span<const double> u) const {
  const double sphere = domain_.dim == 1 ? 2.0 : 2.0 * std::numbers::pi;
  const double M1 = M.value(1.0);
  const Point ctr = domain_.center();
  std::vector<double> exps{M.m0()};
  if (M.m_sup() != M.m0()) exps.push_back(M.m_sup());
  CompensatedSum total;
  for (const CellPoint& p : cell_points_) {
    const auto nodes = domain_.cell_nodes(p.cell);
    double ux = 0.0;
    for (int a = 0; a < npc_; ++a) ux += p.phi[a] * u[nodes[a]];
    if (ux == 0.0) continue;
    const double Rp = domain_.tail_radius - std::hypot(p.x[0] - ctr[0], p.x[1] - ctr[1]);
    for (double e : exps) {
      total.add(2.0 * p.w * sphere * M1 * std::pow(std::abs(ux), e) * std::pow(Rp, -s_ * e) / (s_ * e));
    }
  }
  return total.value();
}

double modular_sum(const DifferenceSamples& samples, const YoungFunction& M, double scale) {
  const std::size_t n = samples.w.size();
  std::vector<CompensatedSum> parts(chunk_count(n));
  chunked(n, [&](std::size_t c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) parts[c].add(samples.w[i] * M.value(samples.D[i] * scale));
  });
  CompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

}  // namespace orlisov
