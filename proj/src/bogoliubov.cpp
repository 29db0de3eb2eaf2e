#include "boxgap/bogoliubov.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace boxgap {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

// ---------------------------------------------------------------------------
// single-mode pieces
// ---------------------------------------------------------------------------

double per_mode_deficit(const ModeCoefficients& c) {
  return per_mode_deficit<double>(c.A, c.B);
}

double single_mode_ground_energy(const ModeCoefficients& c, const FockTruncation& t) {
  if (t.n_max < 2)
    throw std::invalid_argument("single_mode_ground_energy: n_max must be at least 2");
  if (!(c.A > std::abs(c.B)))
    throw std::domain_error("single_mode_ground_energy: requires A > |B|");
  const int dim = t.n_max + 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    H(m, m) = c.A * m;
    // a*a* |m> = sqrt((m+1)(m+2)) |m+2>
    if (m + 2 < dim) {
      const double off = 0.5 * c.B * std::sqrt(double(m + 1) * double(m + 2));
      H(m + 2, m) = off;
      H(m, m + 2) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("single_mode_ground_energy: eigensolver failed");
  return solver.eigenvalues()(0);
}

// ---------------------------------------------------------------------------
// mode table over the nonzero Neumann lattice
// ---------------------------------------------------------------------------

QuadraticModeSystem build_mode_system(double n, double ell, const PotentialSpec& V,
                                      double mu, int cutoff) {
  if (!(n > 0.0)) throw std::invalid_argument("build_mode_system: n must be positive");
  if (!(ell >= 2.0)) throw std::invalid_argument("build_mode_system: ell must be at least 2");
  if (cutoff < 1) throw std::invalid_argument("build_mode_system: cutoff must be at least 1");

  const double r_max = std::max(1.0, 2.0 * V.range);
  const RadialScatteringSolution sol = solve_scattering(V, r_max, 4096);

  QuadraticModeSystem sys;
  sys.n = n;
  sys.ell = ell;
  sys.mu = mu;
  sys.cutoff = cutoff;
  sys.a0 = sol.a0;
  sys.window_lo = 16.0 * kPi * sol.a0 * n / ell;
  sys.window_hi = kPi - 8.0 * kPi * sol.a0 * n / ell;
  if (!(sys.window_lo < sys.window_hi))
    throw std::invalid_argument("build_mode_system: admissible window is empty (a0 n / ell too large)");
  if (!(sys.window_lo < mu && mu < sys.window_hi))
    throw std::invalid_argument(
        "build_mode_system: mu = " + std::to_string(mu) + " outside the admissible window (" +
        std::to_string(sys.window_lo) + ", " + std::to_string(sys.window_hi) + ")");

  // (V_l f_l)(r) = l^2 V(l r) (1 - omega(l r)), supported in r <= range/l
  const double scale = ell;
  auto scaled_vf = [&sol, &V, scale](double r) {
    const double rr = scale * r;
    return scale * scale * potential_value(V, rr) * (1.0 - sol.omega(rr));
  };
  const double r_support = V.range / ell;

  // The transform depends on k only through |k|^2, so cache it per integer
  // |k|^2 instead of re-integrating for each of the (cutoff+1)^3 - 1 modes.
  const int max_ksq = 3 * cutoff * cutoff;
  std::vector<double> vf_hat(max_ksq + 1, std::numeric_limits<double>::quiet_NaN());
  auto vf_hat_at = [&](int ksq) {
    double& slot = vf_hat[ksq];
    if (std::isnan(slot)) slot = fourier_radial(scaled_vf, kPi * std::sqrt(double(ksq)), 3, r_support);
    return slot;
  };

  sys.modes.reserve(std::size_t(cutoff + 1) * std::size_t(cutoff + 1) * std::size_t(cutoff + 1) - 1);
  for (int k1 = 0; k1 <= cutoff; ++k1)
    for (int k2 = 0; k2 <= cutoff; ++k2)
      for (int k3 = 0; k3 <= cutoff; ++k3) {
        const int ksq = k1 * k1 + k2 * k2 + k3 * k3;
        if (ksq == 0) continue;
        ModeEntry e;
        e.k = {k1, k2, k3};
        e.psq = kPi * kPi * double(ksq);
        e.Bp = n * vf_hat_at(ksq);
        const double Ap = e.psq - mu;
        if (!(Ap > std::abs(e.Bp)))
          throw std::domain_error("build_mode_system: mode (" + std::to_string(k1) + "," +
                                  std::to_string(k2) + "," + std::to_string(k3) +
                                  ") violates A_p > |B_p|");
        e.deficit = per_mode_deficit<double>(Ap, e.Bp);
        sys.modes.push_back(e);
      }
  return sys;
}

ModeSumResult mode_sum_lower_bound(const QuadraticModeSystem& sys) {
  ModeSumResult res;
  const int half = sys.cutoff / 2;
  double full = 0.0, simplified = 0.0, full_half = 0.0;
  // fixed lexicographic order of sys.modes keeps the reduction deterministic
  for (const ModeEntry& e : sys.modes) {
    full += e.deficit;
    simplified += e.Bp * e.Bp / e.psq;
    if (e.k[0] <= half && e.k[1] <= half && e.k[2] <= half) full_half += e.deficit;
  }
  res.full = -0.5 * full;
  res.simplified = -0.25 * simplified;
  res.tail_estimate = 0.5 * std::abs(full - full_half);
  return res;
}

double lhy_coefficient() { return 128.0 / (15.0 * std::sqrt(kPi)); }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_bogoliubov_csv(const std::vector<ModeEntry>& modes, std::ostream& os) {
  os << "k1,k2,k3,psq,Bp,deficit\n";
  char buf[160];
  for (const ModeEntry& e : modes) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.17g,%.17g,%.17g\n", e.k[0], e.k[1], e.k[2],
                  e.psq, e.Bp, e.deficit);
    os << buf;
  }
}

}  // namespace boxgap
