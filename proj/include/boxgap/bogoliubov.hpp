#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "boxgap/scattering.hpp"

namespace boxgap {

// Coefficients of one quadratic mode A (a*a) + (B/2)(a*a* + aa); the lower
// bound applies on the admissible set A > |B|.
struct ModeCoefficients {
  double A = 1.0;
  double B = 0.0;
};

// Per-mode energy deficit A - sqrt(A^2 - B^2) >= 0 in the cancellation-safe
// form B^2 / (A + sqrt((A-B)(A+B))); the naive difference loses every digit
// for |B| << A. Templated so an extended-precision reference shares the
// exact same formula.
template <class Scalar>
Scalar per_mode_deficit(Scalar A, Scalar B) {
  const Scalar absB = B < Scalar(0) ? -B : B;
  if (!(A > absB)) throw std::domain_error("per_mode_deficit: requires A > |B|");
  const Scalar root = std::sqrt((A - B) * (A + B));
  return B * B / (A + root);
}

double per_mode_deficit(const ModeCoefficients& c);

// Occupation-number truncation for the single-mode oracle.
struct FockTruncation {
  int n_max = 40;
};

// Smallest eigenvalue of A a*a + (B/2)(a*a* + aa) restricted to occupations
// 0..n_max. Decreases monotonically in n_max toward -(A - sqrt(A^2 - B^2))/2,
// and never goes below it (a compression's ground energy dominates the
// operator's).
double single_mode_ground_energy(const ModeCoefficients& c, const FockTruncation& t);

// One nonzero Neumann mode p = pi k of the quadratic Hamiltonian.
struct ModeEntry {
  std::array<int, 3> k{0, 0, 0};
  double psq = 0.0;      // |p|^2 = pi^2 |k|^2
  double Bp = 0.0;       // n (V_l f_l)_hat(pi |k|)
  double deficit = 0.0;  // A_p - sqrt(A_p^2 - Bp^2) with A_p = psq - mu
};

// Mode table over k in {0..cutoff}^3 \ {0}, lexicographic, with the
// admissible chemical-potential window.
struct QuadraticModeSystem {
  double n = 1.0;
  double ell = 2.0;
  double mu = 0.0;
  int cutoff = 64;
  double a0 = 0.0;                       // scattering length of the potential
  double window_lo = 0.0;                // 16 pi a0 n / l
  double window_hi = 0.0;                // pi - 8 pi a0 n / l
  std::vector<ModeEntry> modes;
};

// Solves the potential's scattering problem, evaluates Bp = n (V_l f_l)_hat
// at every mode by the radial Fourier integral (cached per |k|^2), and
// asserts mu inside the admissible window rather than clipping it.
QuadraticModeSystem build_mode_system(double n, double ell, const PotentialSpec& V,
                                      double mu = 1.5707963267948966, int cutoff = 64);

struct ModeSumResult {
  double full = 0.0;        // -(1/2) sum of per-mode deficits
  double simplified = 0.0;  // -(1/4) sum Bp^2 / |p|^2
  double tail_estimate = 0.0;  // |change when the cutoff is halved|
};

// Deterministic ordered reduction of the per-mode bound over the table.
ModeSumResult mode_sum_lower_bound(const QuadraticModeSystem& sys);

// 128 / (15 sqrt(pi)), the universal second-order energy coefficient
double lhy_coefficient();

// CSV schema: k1,k2,k3,psq,Bp,deficit
void write_bogoliubov_csv(const std::vector<ModeEntry>& modes, std::ostream& os);

}  // namespace boxgap
