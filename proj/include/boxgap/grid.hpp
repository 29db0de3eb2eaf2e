#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace boxgap {

// Axis-aligned box in d <= 3 dimensions. Default is the unit box centered
// at the origin.
struct BoxSpec {
  int d = 1;
  double L = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
};

// Uniform cell-centered tensor grid. Nodes never touch the box boundary,
// so subcube membership below is unambiguous.
struct Grid {
  BoxSpec box;
  int n = 0;  // cells per side

  double h() const { return box.L / n; }

  Eigen::Index size() const {
    Eigen::Index s = 1;
    for (int a = 0; a < box.d; ++a) s *= n;
    return s;
  }

  // x_k = center - L/2 + (k + 1/2) h
  double coord(int axis, Eigen::Index k) const {
    return box.center[axis] - 0.5 * box.L + (static_cast<double>(k) + 0.5) * h();
  }

  // flat index is lexicographic in (k1,...,kd), first axis slowest
  Eigen::Index flat(const std::array<Eigen::Index, 3>& k) const {
    Eigen::Index idx = 0;
    for (int a = 0; a < box.d; ++a) idx = idx * n + k[a];
    return idx;
  }

  std::array<Eigen::Index, 3> unflat(Eigen::Index idx) const {
    std::array<Eigen::Index, 3> k{0, 0, 0};
    for (int a = box.d - 1; a >= 0; --a) {
      k[a] = idx % n;
      idx /= n;
    }
    return k;
  }
};

inline Grid make_grid(const BoxSpec& box, int n_per_side) {
  if (box.d < 1 || box.d > 3) throw std::invalid_argument("make_grid: d must be 1, 2 or 3");
  if (box.L <= 0) throw std::invalid_argument("make_grid: L must be positive");
  if (n_per_side < 2) throw std::invalid_argument("make_grid: n_per_side must be >= 2");
  return Grid{box, n_per_side};
}

template <class Scalar = double>
struct GridFunction {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Grid grid;
  Vec values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(Vec::Zero(g.size())) {}
  GridFunction(const Grid& g, Vec v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("GridFunction: value count != node count");
  }
};

// Samples a callable at every node. F takes (x1[,x2[,x3]]) packed in an array.
template <class Scalar = double, class F>
GridFunction<Scalar> sample(const Grid& g, F&& f) {
  GridFunction<Scalar> out(g);
  const Eigen::Index nn = g.size();
  for (Eigen::Index i = 0; i < nn; ++i) {
    auto k = g.unflat(i);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g.box.d; ++a) x[a] = g.coord(a, k[a]);
    out.values[i] = static_cast<Scalar>(f(x));
  }
  return out;
}

// Partition of the box into M^d subcubes of side L/M, half-open per axis
// (last interval closed). With M | n no node sits on an interface, and the
// membership reduces to integer arithmetic on the node index.
struct SubdivisionScheme {
  Grid grid;
  int M = 1;

  double ell() const { return grid.box.L / M; }
  Eigen::Index cube_count() const {
    Eigen::Index c = 1;
    for (int a = 0; a < grid.box.d; ++a) c *= M;
    return c;
  }
  Eigen::Index nodes_per_cube() const { return grid.size() / cube_count(); }

  // subcube index of a node, lexicographic over per-axis block ids
  Eigen::Index cube_of(Eigen::Index node) const {
    auto k = grid.unflat(node);
    Eigen::Index c = 0;
    const Eigen::Index b = grid.n / M;
    for (int a = 0; a < grid.box.d; ++a) c = c * M + k[a] / b;
    return c;
  }
};

inline SubdivisionScheme subdivide(const Grid& g, int M) {
  if (M < 1) throw std::invalid_argument("subdivide: M must be positive");
  if (g.n % M != 0) throw std::invalid_argument("subdivide: M must divide n_per_side");
  return SubdivisionScheme{g, M};
}

// Region selector: whole box, or one subcube of a scheme.
template <class Scalar>
Scalar integrate(const GridFunction<Scalar>& f) {
  const double hd = std::pow(f.grid.h(), f.grid.box.d);
  return static_cast<Scalar>(hd) * f.values.sum();
}

template <class Scalar>
Scalar integrate(const GridFunction<Scalar>& f, const SubdivisionScheme& s, Eigen::Index cube) {
  const double hd = std::pow(f.grid.h(), f.grid.box.d);
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    if (s.cube_of(i) == cube) acc += f.values[i];
  return static_cast<Scalar>(hd) * acc;
}

template <class Scalar>
Scalar mean_over(const GridFunction<Scalar>& f) {
  return f.values.mean();
}

template <class Scalar>
Scalar mean_over(const GridFunction<Scalar>& f, const SubdivisionScheme& s, Eigen::Index cube) {
  Scalar acc = 0;
  Eigen::Index cnt = 0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    if (s.cube_of(i) == cube) { acc += f.values[i]; ++cnt; }
  if (cnt == 0) throw std::invalid_argument("mean_over: empty region");
  return acc / static_cast<Scalar>(cnt);
}

constexpr double kPInf = std::numeric_limits<double>::infinity();

// (h^d sum |f|^p)^{1/p}; max norm for p = inf. Expression-friendly core.
template <class Derived>
double lp_norm_values(const Eigen::MatrixBase<Derived>& v, double p, double hd) {
  if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return v.derived().array().abs().maxCoeff();
  if (p == 2.0) return std::sqrt(hd * v.derived().squaredNorm());
  return std::pow(hd * v.derived().array().abs().pow(p).sum(), 1.0 / p);
}

template <class Scalar>
double lp_norm(const GridFunction<Scalar>& f, double p) {
  return lp_norm_values(f.values, p, std::pow(f.grid.h(), f.grid.box.d));
}

template <class Scalar>
double lp_norm(const GridFunction<Scalar>& f, double p, const SubdivisionScheme& s,
               Eigen::Index cube) {
  if (p < 1) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double hd = std::pow(f.grid.h(), f.grid.box.d);
  double acc = 0, mx = 0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    if (s.cube_of(i) != cube) continue;
    const double a = std::abs(static_cast<double>(f.values[i]));
    if (std::isinf(p)) mx = std::max(mx, a);
    else acc += std::pow(a, p);
  }
  return std::isinf(p) ? mx : std::pow(hd * acc, 1.0 / p);
}

// CSV: header x1[,x2[,x3]],value; one row per node in lexicographic order.
template <class Scalar>
void write_csv(const GridFunction<Scalar>& f, std::ostream& os) {
  const int d = f.grid.box.d;
  os << "x1";
  for (int a = 1; a < d; ++a) os << ",x" << (a + 1);
  os << ",value\n";
  char buf[32];
  const Eigen::Index nn = f.grid.size();
  for (Eigen::Index i = 0; i < nn; ++i) {
    auto k = f.grid.unflat(i);
    for (int a = 0; a < d; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", f.grid.coord(a, k[a]));
      os << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(f.values[i]));
    os << buf << '\n';
  }
}

}  // namespace boxgap
