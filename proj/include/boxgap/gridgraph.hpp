#pragma once

#include <Eigen/Dense>

#include "boxgap/forms.hpp"

namespace boxgap {

// Face-adjacency graph of the M^d subcube lattice. Vertices are multi-indices
// in [0,M)^d, flattened lexicographically with the first axis slowest.
struct GridGraph {
  int M = 2;
  int d = 1;

  Eigen::Index vertex_count() const {
    Eigen::Index v = 1;
    for (int a = 0; a < d; ++a) v *= M;
    return v;
  }
  std::array<int, 3> unflat(Eigen::Index i) const {
    std::array<int, 3> k{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
      k[a] = int(i % M);
      i /= M;
    }
    return k;
  }
  Eigen::Index flat(const std::array<int, 3>& k) const {
    Eigen::Index i = 0;
    for (int a = 0; a < d; ++a) i = i * M + k[a];
    return i;
  }
  int degree(Eigen::Index i) const {
    auto k = unflat(i);
    int deg = 0;
    for (int a = 0; a < d; ++a) deg += (k[a] > 0) + (k[a] < M - 1);
    return deg;
  }
};

GridGraph make_grid_graph(int M, int d);

// Combinatorial Laplacian u -> deg*u - sum of neighbors. PSD, kernel = constants.
QuadraticForm<double> graph_laplacian(const GridGraph& g);

// Second-smallest Laplacian eigenvalue, computed; closed form 2(1 - cos(pi/M)).
double spectral_gap(const GridGraph& g);

// h = min over cuts of |boundary edges| / |smaller side|. Exhaustive (exact,
// lower == upper) up to 20 vertices; otherwise a Fiedler sweep-cut upper bound
// with the spectral lower bound lambda_2 / 2.
struct CheegerResult {
  double lower = 0;
  double upper = 0;
  bool exact = false;
};
CheegerResult cheeger_constant(const GridGraph& g);

// The two sides of the vertex Poincare inequality, edges counted once:
//   lhs = (sum_i |u_i - mean|^p)^(1/p),  rhs = (sum_edges |u_i - u_j|^p)^(1/p)
double vertex_poincare_lhs(const GridGraph& g, const Eigen::VectorXd& u, double p);
double vertex_poincare_rhs(const GridGraph& g, const Eigen::VectorXd& u, double p);

// Best constant lhs <= c * rhs. Exact 1/sqrt(lambda_2) at p = 2; otherwise the
// max ratio over seeded random trials, axis-linear profiles, and the Fiedler
// vector. Constant vectors (0/0) are excluded from the max.
double discrete_poincare_constant(const GridGraph& g, double p, int trials, int seed = 101);

}  // namespace boxgap
