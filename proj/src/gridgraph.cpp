#include "boxgap/gridgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "boxgap/eigs.hpp"

namespace boxgap {

namespace {

// edges once each: (i, j) with j the +1 neighbor of i along some axis
template <class F>
void for_each_edge(const GridGraph& g, F&& f) {
  const Eigen::Index v = g.vertex_count();
  for (Eigen::Index i = 0; i < v; ++i) {
    auto k = g.unflat(i);
    for (int a = 0; a < g.d; ++a)
      if (k[a] < g.M - 1) {
        auto kj = k;
        ++kj[a];
        f(i, g.flat(kj));
      }
  }
}

}  // namespace

GridGraph make_grid_graph(int M, int d) {
  if (M < 1) throw std::invalid_argument("make_grid_graph: M must be positive");
  if (d < 1 || d > 3) throw std::invalid_argument("make_grid_graph: d must be 1, 2, or 3");
  return {M, d};
}

QuadraticForm<double> graph_laplacian(const GridGraph& g) {
  using Vec = Eigen::VectorXd;
  return {g.vertex_count(), [g](const Vec& u, Vec& y) {
            y.setZero();
            for_each_edge(g, [&](Eigen::Index i, Eigen::Index j) {
              const double diff = u[i] - u[j];
              y[i] += diff;
              y[j] -= diff;
            });
          }};
}

double spectral_gap(const GridGraph& g) {
  if (g.vertex_count() < 2) throw std::invalid_argument("spectral_gap: need at least 2 vertices");
  return dense_lowest(graph_laplacian(g), 2).values[1];
}

CheegerResult cheeger_constant(const GridGraph& g) {
  const Eigen::Index v = g.vertex_count();
  if (v < 2) throw std::invalid_argument("cheeger_constant: need at least 2 vertices");

  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  for_each_edge(g, [&](Eigen::Index i, Eigen::Index j) { edges.emplace_back(i, j); });

  auto cut_ratio = [&](const std::vector<char>& in_s, Eigen::Index size_s) {
    Eigen::Index cut = 0;
    for (const auto& [i, j] : edges) cut += (in_s[size_t(i)] != in_s[size_t(j)]);
    const Eigen::Index small = std::min(size_s, v - size_s);
    return double(cut) / double(small);
  };

  if (v <= 20) {
    // every bipartition has exactly one side avoiding vertex 0
    double best = double(edges.size());
    std::vector<char> in_s(size_t(v), 0);
    const std::uint32_t lim = std::uint32_t(1) << (v - 1);
    for (std::uint32_t mask = 1; mask < lim; ++mask) {
      Eigen::Index size_s = 0;
      for (Eigen::Index t = 1; t < v; ++t) {
        in_s[size_t(t)] = char((mask >> (t - 1)) & 1u);
        size_s += in_s[size_t(t)];
      }
      best = std::min(best, cut_ratio(in_s, size_s));
    }
    return {best, best, true};
  }

  // Fiedler sweep cut: order vertices by the second eigenvector, try prefixes
  auto eig = dense_lowest(graph_laplacian(g), 2);
  std::vector<Eigen::Index> order(static_cast<size_t>(v));
  for (Eigen::Index i = 0; i < v; ++i) order[size_t(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig.vectors(a, 1) < eig.vectors(b, 1);
  });
  std::vector<char> in_s(size_t(v), 0);
  double upper = double(edges.size());
  for (Eigen::Index t = 0; t + 1 < v; ++t) {
    in_s[size_t(order[size_t(t)])] = 1;
    upper = std::min(upper, cut_ratio(in_s, t + 1));
  }
  return {eig.values[1] / 2.0, upper, false};
}

double vertex_poincare_lhs(const GridGraph& g, const Eigen::VectorXd& u, double p) {
  if (u.size() != g.vertex_count()) throw std::invalid_argument("vertex_poincare_lhs: size");
  if (p <= 1) throw std::invalid_argument("vertex_poincare_lhs: p must exceed 1");
  return std::pow((u.array() - u.mean()).abs().pow(p).sum(), 1.0 / p);
}

double vertex_poincare_rhs(const GridGraph& g, const Eigen::VectorXd& u, double p) {
  if (u.size() != g.vertex_count()) throw std::invalid_argument("vertex_poincare_rhs: size");
  if (p <= 1) throw std::invalid_argument("vertex_poincare_rhs: p must exceed 1");
  double acc = 0;
  for_each_edge(g, [&](Eigen::Index i, Eigen::Index j) { acc += std::pow(std::abs(u[i] - u[j]), p); });
  return std::pow(acc, 1.0 / p);
}

double discrete_poincare_constant(const GridGraph& g, double p, int trials, int seed) {
  if (trials < 1) throw std::invalid_argument("discrete_poincare_constant: trials >= 1");
  if (p == 2.0) return 1.0 / std::sqrt(spectral_gap(g));

  const Eigen::Index v = g.vertex_count();
  double best = 0;
  auto consider = [&](const Eigen::VectorXd& u) {
    const double rhs = vertex_poincare_rhs(g, u, p);
    if (rhs == 0) return;  // constant profile, 0/0
    best = std::max(best, vertex_poincare_lhs(g, u, p) / rhs);
  };

  // linear profile along each axis: the staircase-shaped extremizer family
  for (int a = 0; a < g.d; ++a) {
    Eigen::VectorXd u(v);
    for (Eigen::Index i = 0; i < v; ++i) u[i] = double(g.unflat(i)[a]);
    consider(u);
  }
  consider(dense_lowest(graph_laplacian(g), 2).vectors.col(1));

  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd u(v);
    for (Eigen::Index i = 0; i < v; ++i)
      u[i] = 2.0 * (double(rng() >> 11) * 0x1p-53) - 1.0;
    consider(u);
  }
  return best;
}

}  // namespace boxgap
