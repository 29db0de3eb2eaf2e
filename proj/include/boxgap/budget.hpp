#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace boxgap {

// Exact rational arithmetic for exponent bookkeeping. Keeps the feasibility
// frontier sharp at kappa = 2/11 where floats would be ambiguous.
struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0 after normalization

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d);

  double to_double() const { return double(num) / double(den); }
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
bool operator==(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);
inline bool operator>(const Rational& a, const Rational& b) { return b < a; }
inline bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
inline bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

// dilution/localization regime knobs; kappa in [0, 2/3), K >= 1
struct RegimeParams {
  double kappa = 0.0;
  double alpha = 0.0;
  double N = 1.0;
  double K = 20.0;
  double a0 = 1.0;
  double C0 = 1.0;
};
void validate_regime(const RegimeParams& r);

// Exponents of N in the two excitation-fraction terms:
//   e1 = -alpha*kappa/2
//   e2 = (2+alpha)*kappa/2 + (5*kappa-2)/2 + (2-3*kappa)/4
//      = alpha*kappa/2 + 11*kappa/4 - 1/2
template <class T>
struct ExponentPairT {
  T e1, e2;
};
using ExponentPair = ExponentPairT<double>;
using ExponentPairQ = ExponentPairT<Rational>;

ExponentPair excitation_exponents(double kappa, double alpha);
ExponentPairQ excitation_exponents(const Rational& kappa, const Rational& alpha);

// the pre-simplification form, kept separate so tests can compare the two
double excitation_e2_unsimplified(double kappa, double alpha);
Rational excitation_e2_unsimplified(const Rational& kappa, const Rational& alpha);

struct FeasibilityVerdict {
  bool feasible = false;
  double witness_alpha = 0.0;  // some alpha with max(e1, e2) < 0, when feasible
  std::string binding;         // the constraint that blocks, when infeasible
};

// Search alpha > 0 for max(e1, e2) < 0. Geometric grid 1e-3..10 plus the
// analytic midpoint alpha = (1/2 - 11k/4)/k, which keeps the verdict sharp
// at the frontier. Requires kappa in (0, 2/3).
FeasibilityVerdict bec_feasible(double kappa);

// exact frontier test: feasible iff 0 < kappa < 2/11
bool bec_feasible_exact(const Rational& kappa);

// Bisection of the float verdict over (lo, hi); returns the flip point.
double feasibility_frontier(double lo = 1e-6, double hi = 0.5, double tol = 1e-6);

// cell size ell = K^-1 (rho a)^(-1/2) and the occupancy rho ell^3
struct CellSize {
  double ell = 0.0;
  double rho_ell3 = 0.0;
};
CellSize choose_cell_size(double rho, double a, double K);

// energy threshold 4 pi a0 N^(1+kappa) + C0 N^(5k/2 + (2-3k)/4)
double energy_assumption(double N, double kappa, double a0, double C0);

enum class Correction { sqrt_kind, log_kind };

// -4 pi rho^2 a ell^3 - C rho^2 a ell^3 (rho a^3)^(1/2) S((rho a^3)^(-1/2))
double lemma42_bound(double rho, double a, double ell, Correction s, double C = 1.0);

}  // namespace boxgap
