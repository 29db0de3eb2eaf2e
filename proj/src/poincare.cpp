#include "boxgap/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace boxgap {

namespace {

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

// smallest eigenvalue of a form, warm-starting successive calls
double smallest_eig(const QuadraticForm<double>& form, EigOptions& opts) {
  auto r = eigen_lowest(form, 1, opts);
  if (r.iterations > 0) opts.warm_start = r.vectors;  // reuse across a bisection
  return r.values[0];
}

constexpr double kCertMargin = -1e-6;

}  // namespace

// ---------------------------------------------------------------------------
// ratio of the two sides of the multiscale inequality
// ---------------------------------------------------------------------------

PoincareRatioResult multiscale_ratio(const Grid& grid, const GridFunction<double>& f, int M,
                                     double p) {
  if (!(p > 1.0)) throw std::invalid_argument("multiscale_ratio: p must exceed 1");
  const auto scheme = subdivide(grid, M);

  PoincareRatioResult out;
  out.p = p;
  out.M = M;
  out.d = grid.box.d;
  out.n_per_side = grid.n;

  GridFunction<double> centred(grid, (f.values.array() - mean_over(f)).matrix());
  out.lhs = std::pow(lp_norm(centred, p), p);

  const double grad_norm = std::pow(dirichlet_energy(f, p), 1.0 / p);
  double sub = 0.0;
  for (Eigen::Index c = 0; c < scheme.cube_count(); ++c) {
    GridFunction<double> local(grid, (f.values.array() - mean_over(f, scheme, c)).matrix());
    sub += std::pow(lp_norm(local, p, scheme, c), p);
  }
  const double ell = scheme.ell();
  out.rhs = grad_norm * std::pow(std::pow(ell, -p) * sub, 1.0 - 1.0 / p);

  if (out.rhs > 0) {
    out.ratio = out.lhs / out.rhs;
    out.ratio_defined = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// staircase profile
// ---------------------------------------------------------------------------

GridFunction<double> staircase(int N, const Grid& grid) {
  if (N < 1) throw std::invalid_argument("staircase: N must be positive");
  if (grid.box.L != 1.0 || grid.box.center != std::array<double, 3>{0.0, 0.0, 0.0})
    throw std::invalid_argument("staircase: defined on the unit box centred at 0");
  if (grid.n % (2 * N) != 0) throw std::invalid_argument("staircase: 2N must divide n_per_side");
  if (grid.n < 16 * N * N)
    throw std::invalid_argument("staircase: ramp unresolved, need n_per_side >= " +
                                std::to_string(16 * N * N));

  const double w = 1.0 / (2.0 * N);       // plateau pitch
  const double ramp = 1.0 / (4.0 * N * N);  // ramp width inside each pitch
  auto chi = [&](double t) { return t >= -w && t <= 0.0 ? 1.0 : 0.0; };
  auto psi = [&](double t) { return 2.0 * N * std::max(t + ramp, 0.0) * chi(t); };
  auto profile = [&](double x1) {
    double v = 0.0;
    for (int j = -N; j < N; ++j) {
      const double t = x1 + j * w;
      v += psi(t) - (j * w) * chi(t);
    }
    return v;
  };
  return sample(grid, [&](const std::array<double, 3>& x) { return profile(x[0]); });
}

SharpnessSweep sharpness_sweep(const std::vector<int>& N_list, double p, const Grid& grid) {
  if (N_list.empty()) throw std::invalid_argument("sharpness_sweep: empty N list");
  SharpnessSweep out;
  std::vector<double> lx, ly;
  for (int N : N_list) {
    auto f = staircase(N, grid);
    auto r = multiscale_ratio(grid, f, 2 * N, p);
    out.rows.push_back({N, r});
    if (r.ratio_defined && r.ratio > 0) {
      lx.push_back(std::log(double(N)));
      ly.push_back(std::log(r.ratio));
    }
  }
  const bool distinct = std::adjacent_find(lx.begin(), lx.end()) == lx.end();
  if (lx.size() >= 2 && distinct) {
    out.log_slope = fit_slope(lx, ly);
    out.slope_defined = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// operator-level gap certification
// ---------------------------------------------------------------------------

OperatorGapResult operator_gap(const Grid& grid, int M, double eps, double C,
                               const EigOptions& opts) {
  if (!(eps > 0)) throw std::invalid_argument("operator_gap: eps must be positive");
  if (C < 0) throw std::invalid_argument("operator_gap: C must be nonnegative");
  const auto scheme = subdivide(grid, M);
  auto form = eps * assemble_neumann_laplacian<double>(grid) +
              C * projector_Q_sum<double>(scheme) - projector_Q<double>(grid);
  EigOptions local = opts;
  OperatorGapResult out;
  out.eps = eps;
  out.C = C;
  out.smallest_eigenvalue = smallest_eig(form, local);
  out.pass = out.smallest_eigenvalue >= kCertMargin;
  return out;
}

double least_certifying_constant(const Grid& grid, int M, double eps, const EigOptions& opts) {
  const auto scheme = subdivide(grid, M);

  // The C -> infinity limit of the smallest eigenvalue is the smallest
  // eigenvalue of eps L - Q restricted to subcube-wise constant vectors; if
  // that limit sits below the margin no finite C certifies.
  {
    const auto L = assemble_neumann_laplacian<double>(grid);
    const auto Q = projector_Q<double>(grid);
    const Eigen::Index nc = scheme.cube_count();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(grid.size(), nc);
    const double w = 1.0 / std::sqrt(double(scheme.nodes_per_cube()));
    for (Eigen::Index i = 0; i < grid.size(); ++i) B(i, scheme.cube_of(i)) = w;
    Eigen::MatrixXd R(nc, nc);
    for (Eigen::Index c = 0; c < nc; ++c) {
      Eigen::VectorXd col = B.col(c);
      R.col(c) = B.transpose() * (eps * (L * col) - (Q * col));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (R + R.transpose()));
    if (es.eigenvalues()[0] < kCertMargin) return std::numeric_limits<double>::infinity();
  }

  EigOptions local = opts;
  auto level = [&](double C) {
    auto form = eps * assemble_neumann_laplacian<double>(grid) +
                C * projector_Q_sum<double>(scheme) - projector_Q<double>(grid);
    return smallest_eig(form, local);
  };

  if (level(0.0) >= kCertMargin) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (level(hi) < kCertMargin) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("least_certifying_constant: no bracket below 1e12");
  }
  while (hi - lo > 5e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) >= kCertMargin ? hi : lo) = mid;
  }
  return hi;
}

CalibrationResult calibrate_constant(const Grid& grid, const std::vector<int>& M_list,
                                     const std::vector<double>& eps_list,
                                     const EigOptions& opts) {
  if (M_list.empty() || eps_list.empty())
    throw std::invalid_argument("calibrate_constant: empty sweep lists");
  CalibrationResult out;
  std::vector<double> lx, ly;
  for (int M : M_list)
    for (double eps : eps_list) {
      const double c = least_certifying_constant(grid, M, eps, opts);
      out.points.push_back({M, eps, c});
      if (std::isfinite(c) && c > 0) {
        lx.push_back(std::log(double(M) * double(M) / eps));  // log(1/(eps l^2))
        ly.push_back(std::log(c));
      }
    }
  std::vector<double> ux = lx;
  std::sort(ux.begin(), ux.end());
  ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
  if (ux.size() >= 2) {
    out.slope = fit_slope(lx, ly);
    out.slope_defined = true;
    out.pass = std::abs(out.slope - 1.0) <= 0.25;
  }
  return out;
}

// ---------------------------------------------------------------------------
// kinetic energy localization
// ---------------------------------------------------------------------------

OperatorGapResult kinetic_localization_gap(const Grid& grid, int M, double alpha, double C,
                                           const EigOptions& opts) {
  if (alpha < 0) throw std::invalid_argument("kinetic_localization_gap: alpha must be >= 0");
  if (C < 0) throw std::invalid_argument("kinetic_localization_gap: C must be nonnegative");
  if (M < 3) throw std::invalid_argument("kinetic_localization_gap: needs l = 1/M < 1/2");
  const auto scheme = subdivide(grid, M);
  const double ell = scheme.ell();
  const double weight = 1.0 - C * std::pow(ell, 4.0 + 2.0 * alpha);

  auto lhs = assemble_neumann_laplacian<double>(grid) -
             std::pow(ell, 2.0 + alpha) * projector_Q<double>(grid);
  auto local = assemble_subcube_laplacian_sum<double>(scheme) -
               (M_PI / 8.0) / (ell * ell) * projector_Q_sum<double>(scheme);
  auto form = lhs - weight * local;

  EigOptions eo = opts;
  OperatorGapResult out;
  out.eps = alpha;  // reported in the alpha slot for this family
  out.C = C;
  out.smallest_eigenvalue = smallest_eig(form, eo);
  out.pass = out.smallest_eigenvalue >= kCertMargin;
  return out;
}

double least_kinetic_constant(const Grid& grid, int M, double alpha, const EigOptions& opts) {
  const double ell = 1.0 / M * grid.box.L;
  const double cmax = std::pow(ell, -(4.0 + 2.0 * alpha));
  if (kinetic_localization_gap(grid, M, alpha, 0.0, opts).pass) return 0.0;
  double lo = 0.0, hi = cmax;
  if (!kinetic_localization_gap(grid, M, alpha, hi, opts).pass)
    throw std::runtime_error("least_kinetic_constant: upper bracket fails, form inconsistent");
  while (hi - lo > 5e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    (kinetic_localization_gap(grid, M, alpha, mid, opts).pass ? hi : lo) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

void write_poincare_csv(const std::vector<PoincareCsvRow>& rows, std::ostream& os) {
  os << "check,d,M,p_or_alpha,eps,lhs,rhs,ratio_or_eig,pass\n";
  char buf[160];
  for (const auto& r : rows) {
    os << r.check << ',' << r.d << ',' << r.M << ',';
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,", r.p_or_alpha, r.eps, r.lhs,
                  r.rhs, r.ratio_or_eig);
    os << buf << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace boxgap
