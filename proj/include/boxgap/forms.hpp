#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "boxgap/grid.hpp"

namespace boxgap {

// Symmetric bilinear form exposed through its matrix-vector action.
// Composition operators build new actions, so expressions like
//   eps * laplacian + C * sum_q - q_global
// assemble without materializing matrices.
template <class Scalar = double>
struct QuadraticForm {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::Index n = 0;
  std::function<void(const Vec&, Vec&)> apply_fn;

  Vec operator*(const Vec& x) const {
    Vec y(n);
    apply_fn(x, y);
    return y;
  }

  Scalar quad(const Vec& x) const { return x.dot(*this * x); }
};

template <class Scalar>
QuadraticForm<Scalar> operator+(const QuadraticForm<Scalar>& a, const QuadraticForm<Scalar>& b) {
  if (a.n != b.n) throw std::invalid_argument("form sum: size mismatch");
  using Vec = typename QuadraticForm<Scalar>::Vec;
  return {a.n, [a, b](const Vec& x, Vec& y) {
            y = a * x;
            y += b * x;
          }};
}

template <class Scalar>
QuadraticForm<Scalar> operator-(const QuadraticForm<Scalar>& a, const QuadraticForm<Scalar>& b) {
  if (a.n != b.n) throw std::invalid_argument("form difference: size mismatch");
  using Vec = typename QuadraticForm<Scalar>::Vec;
  return {a.n, [a, b](const Vec& x, Vec& y) {
            y = a * x;
            y -= b * x;
          }};
}

template <class Scalar>
QuadraticForm<Scalar> operator*(Scalar c, const QuadraticForm<Scalar>& a) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  return {a.n, [c, a](const Vec& x, Vec& y) {
            y = a * x;
            y *= c;
          }};
}

// Dense materialization by basis probes. Oracle path for tests and the
// dense eigensolver; O(n^2) applies, intended for n <= 4096.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense(const QuadraticForm<Scalar>& f) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A(f.n, f.n);
  Vec e = Vec::Zero(f.n), col(f.n);
  for (Eigen::Index j = 0; j < f.n; ++j) {
    e[j] = 1;
    f.apply_fn(e, col);
    A.col(j) = col;
    e[j] = 0;
  }
  return A;
}

// Coordinate-format text export: `row col value`, zero-based, zeros dropped.
template <class Scalar>
void export_coo(const QuadraticForm<Scalar>& f, std::ostream& os) {
  auto A = to_dense(f);
  char buf[32];
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != Scalar(0)) {
        std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(A(i, j)));
        os << i << ' ' << j << ' ' << buf << '\n';
      }
}

namespace detail {

// Applies the 1-D second-difference stencil with reflection closure along
// `axis`, optionally re-closing at internal walls every `block` cells
// (block = 0 means no walls). Reflection at a wall drops the coupling and
// reduces the diagonal, which keeps the operator symmetric PSD.
template <class Scalar>
void axis_stencil(const Grid& g, int axis, int block,
                  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
  const int d = g.box.d;
  const Eigen::Index n = g.n;
  Eigen::Index stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= n;
  Eigen::Index outer = g.size() / (n * stride);
  const Scalar inv_h2 = Scalar(1) / Scalar(g.h() * g.h());
  for (Eigen::Index o = 0; o < outer; ++o) {
    for (Eigen::Index s = 0; s < stride; ++s) {
      const Eigen::Index base = o * n * stride + s;
      for (Eigen::Index k = 0; k < n; ++k) {
        const bool wall_lo = (k == 0) || (block > 0 && k % block == 0);
        const bool wall_hi = (k == n - 1) || (block > 0 && (k + 1) % block == 0);
        Scalar v = 0;
        const Scalar xc = x[base + k * stride];
        if (!wall_lo) v += xc - x[base + (k - 1) * stride];
        if (!wall_hi) v += xc - x[base + (k + 1) * stride];
        y[base + k * stride] += inv_h2 * v;
      }
    }
  }
}

}  // namespace detail

// -Delta with Neumann (ghost-node reflection) closure on the whole box.
// Exact 1-D spectrum (4/h^2) sin^2(k pi h / (2L)); d-dim spectrum is the
// tensor sum over axes.
template <class Scalar = double>
QuadraticForm<Scalar> assemble_neumann_laplacian(const Grid& g) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  return {g.size(), [g](const Vec& x, Vec& y) {
            y.setZero();
            for (int a = 0; a < g.box.d; ++a) detail::axis_stencil<Scalar>(g, a, 0, x, y);
          }};
}

// Direct sum of subcube-local Neumann Laplacians: the global stencil with
// reflection re-closure at every subcube face.
template <class Scalar = double>
QuadraticForm<Scalar> assemble_subcube_laplacian_sum(const SubdivisionScheme& s) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  const Grid g = s.grid;
  const int block = g.n / s.M;
  return {g.size(), [g, block](const Vec& x, Vec& y) {
            y.setZero();
            for (int a = 0; a < g.box.d; ++a) detail::axis_stencil<Scalar>(g, a, block, x, y);
          }};
}

// closed-form 1-D discrete Neumann eigenvalue #k on n cells of box length L
inline double neumann_eigenvalue_1d(int n, double L, int k) {
  const double h = L / n;
  const double s = std::sin(0.5 * M_PI * k * h / L);
  return 4.0 / (h * h) * s * s;
}

// Q_A = 1_A - P_A : removes the mean over the whole box.
template <class Scalar = double>
QuadraticForm<Scalar> projector_Q(const Grid& g) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  return {g.size(), [](const Vec& x, Vec& y) { y = x.array() - x.mean(); }};
}

// Q over one subcube: zero off the cube, mean-removal on it.
template <class Scalar = double>
QuadraticForm<Scalar> projector_Q(const SubdivisionScheme& s, Eigen::Index cube) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  if (cube < 0 || cube >= s.cube_count()) throw std::invalid_argument("projector_Q: bad cube");
  return {s.grid.size(), [s, cube](const Vec& x, Vec& y) {
            y.setZero();
            Scalar acc = 0;
            Eigen::Index cnt = 0;
            for (Eigen::Index i = 0; i < x.size(); ++i)
              if (s.cube_of(i) == cube) { acc += x[i]; ++cnt; }
            const Scalar m = acc / static_cast<Scalar>(cnt);
            for (Eigen::Index i = 0; i < x.size(); ++i)
              if (s.cube_of(i) == cube) y[i] = x[i] - m;
          }};
}

// sum_i Q_{Lambda_i} in one pass: per-subcube mean removal everywhere.
template <class Scalar = double>
QuadraticForm<Scalar> projector_Q_sum(const SubdivisionScheme& s) {
  using Vec = typename QuadraticForm<Scalar>::Vec;
  // precompute the node -> cube map once; the per-apply cost is two sweeps
  std::vector<Eigen::Index> cube(s.grid.size());
  for (Eigen::Index i = 0; i < s.grid.size(); ++i) cube[i] = s.cube_of(i);
  const Eigen::Index nc = s.cube_count();
  const Scalar inv = Scalar(1) / static_cast<Scalar>(s.nodes_per_cube());
  auto map = std::make_shared<std::vector<Eigen::Index>>(std::move(cube));
  return {s.grid.size(), [map, nc, inv](const Vec& x, Vec& y) {
            Vec means = Vec::Zero(nc);
            for (Eigen::Index i = 0; i < x.size(); ++i) means[(*map)[i]] += x[i];
            means *= inv;
            for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = x[i] - means[(*map)[i]];
          }};
}

// phi_0 = 1, phi_{pi k}(t) = sqrt(2) cos(k pi (t + 1/2)) per axis, sampled at
// cell centers. Discrete-orthonormal under h^d quadrature for k < n.
inline double neumann_mode_1d(int k, double t) {
  return k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(M_PI * k * (t + 0.5));
}

template <class Scalar = double>
GridFunction<Scalar> neumann_mode(const Grid& g, const std::array<int, 3>& kmode) {
  for (int a = 0; a < g.box.d; ++a)
    if (kmode[a] < 0) throw std::invalid_argument("neumann_mode: negative index");
  return sample<Scalar>(g, [&](const std::array<double, 3>& x) {
    double v = 1.0;
    for (int a = 0; a < g.box.d; ++a) v *= neumann_mode_1d(kmode[a], x[a]);
    return v;
  });
}

// integral of |grad f|^p (the p-th power, not the norm). p = 2 uses the
// quadratic form h^d <f, -Delta f> (face-based, consistent with the
// eigenvalue checks); general p averages the adjacent face differences per
// node and axis, takes the Euclidean magnitude across axes, and integrates.
template <class Scalar>
double dirichlet_energy(const GridFunction<Scalar>& f, double p) {
  if (p < 1) throw std::invalid_argument("dirichlet_energy: p must be >= 1");
  const Grid& g = f.grid;
  const double hd = std::pow(g.h(), g.box.d);
  if (p == 2.0) {
    auto lap = assemble_neumann_laplacian<Scalar>(g);
    return hd * static_cast<double>(f.values.dot(lap * f.values));
  }
  // per-node gradient magnitude from averaged interior-face differences
  const Eigen::Index nn = g.size();
  Eigen::VectorXd mag = Eigen::VectorXd::Zero(nn);
  const double inv_h = 1.0 / g.h();
  for (Eigen::Index i = 0; i < nn; ++i) {
    auto k = g.unflat(i);
    double s2 = 0;
    for (int a = 0; a < g.box.d; ++a) {
      Eigen::Index stride = 1;
      for (int b = g.box.d - 1; b > a; --b) stride *= g.n;
      double acc = 0;
      int cnt = 0;
      if (k[a] > 0) { acc += (f.values[i] - f.values[i - stride]) * inv_h; ++cnt; }
      if (k[a] < g.n - 1) { acc += (f.values[i + stride] - f.values[i]) * inv_h; ++cnt; }
      const double ga = cnt ? acc / cnt : 0.0;
      s2 += ga * ga;
    }
    mag[i] = std::sqrt(s2);
  }
  return hd * mag.array().pow(p).sum();
}

}  // namespace boxgap
