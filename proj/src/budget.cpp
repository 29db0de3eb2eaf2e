#include "boxgap/budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace boxgap {

namespace {

long long check_range(__int128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error(std::string("Rational: overflow in ") + what);
  return static_cast<long long>(v);
}

Rational make_from_128(__int128 num, __int128 den, const char* what) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) { num = -num; den = -den; }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b) { __int128 t = a % b; a = b; b = t; }
  if (a == 0) a = 1;
  Rational r;
  r.num = check_range(num / a, what);
  r.den = check_range(den / a, what);
  return r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  Rational r = make_from_128(n, d, "construction");
  num = r.num;
  den = r.den;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_from_128(__int128(a.num) * b.den + __int128(b.num) * a.den,
                       __int128(a.den) * b.den, "addition");
}
Rational operator-(const Rational& a, const Rational& b) {
  return make_from_128(__int128(a.num) * b.den - __int128(b.num) * a.den,
                       __int128(a.den) * b.den, "subtraction");
}
Rational operator*(const Rational& a, const Rational& b) {
  return make_from_128(__int128(a.num) * b.num, __int128(a.den) * b.den, "multiplication");
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw std::invalid_argument("Rational: division by zero");
  return make_from_128(__int128(a.num) * b.den, __int128(a.den) * b.num, "division");
}
bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
bool operator<(const Rational& a, const Rational& b) {
  return __int128(a.num) * b.den < __int128(b.num) * a.den;
}

void validate_regime(const RegimeParams& r) {
  if (!(r.kappa >= 0.0 && r.kappa < 2.0 / 3.0))
    throw std::invalid_argument("regime: kappa must lie in [0, 2/3)");
  if (r.alpha < 0) throw std::invalid_argument("regime: alpha must be >= 0");
  if (r.N < 1) throw std::invalid_argument("regime: N must be >= 1");
  if (r.K < 1) throw std::invalid_argument("regime: K must be >= 1");
}

ExponentPair excitation_exponents(double kappa, double alpha) {
  if (!(kappa >= 0.0 && kappa < 2.0 / 3.0))
    throw std::invalid_argument("excitation_exponents: kappa in [0, 2/3)");
  if (alpha < 0) throw std::invalid_argument("excitation_exponents: alpha >= 0");
  return {-alpha * kappa / 2.0, alpha * kappa / 2.0 + 11.0 * kappa / 4.0 - 0.5};
}

ExponentPairQ excitation_exponents(const Rational& kappa, const Rational& alpha) {
  Rational e1 = Rational(-1) * alpha * kappa / Rational(2);
  Rational e2 = alpha * kappa / Rational(2) + Rational(11) * kappa / Rational(4) - Rational(1, 2);
  return {e1, e2};
}

double excitation_e2_unsimplified(double kappa, double alpha) {
  return (2.0 + alpha) * kappa / 2.0 + (5.0 * kappa - 2.0) / 2.0 + (2.0 - 3.0 * kappa) / 4.0;
}

Rational excitation_e2_unsimplified(const Rational& kappa, const Rational& alpha) {
  Rational t1 = (Rational(2) + alpha) * kappa / Rational(2);
  Rational t2 = (Rational(5) * kappa - Rational(2)) / Rational(2);
  Rational t3 = (Rational(2) - Rational(3) * kappa) / Rational(4);
  return t1 + t2 + t3;
}

FeasibilityVerdict bec_feasible(double kappa) {
  if (!(kappa > 0.0 && kappa < 2.0 / 3.0))
    throw std::invalid_argument("bec_feasible: kappa in (0, 2/3)");
  auto try_alpha = [&](double alpha) {
    auto [e1, e2] = excitation_exponents(kappa, alpha);
    return std::max(e1, e2) < 0.0;
  };
  // the e2 < 0 window is alpha < (1/2 - 11k/4) * 2/k; probe its midpoint first
  const double threshold = 2.0 * (0.5 - 11.0 * kappa / 4.0) / kappa;
  if (threshold > 0 && try_alpha(threshold / 2.0)) return {true, threshold / 2.0, ""};
  for (double alpha = 1e-3; alpha <= 10.0; alpha *= 1.5)
    if (try_alpha(alpha)) return {true, alpha, ""};
  return {false, 0.0, "e2 >= 0 for every alpha > 0"};
}

bool bec_feasible_exact(const Rational& kappa) {
  return Rational(0) < kappa && kappa < Rational(2, 11);
}

double feasibility_frontier(double lo, double hi, double tol) {
  if (!(bec_feasible(lo).feasible) || bec_feasible(hi).feasible)
    throw std::invalid_argument("feasibility_frontier: bracket does not straddle the flip");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (bec_feasible(mid).feasible ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CellSize choose_cell_size(double rho, double a, double K) {
  if (rho <= 0 || a <= 0) throw std::invalid_argument("choose_cell_size: rho, a must be positive");
  if (K < 1) throw std::invalid_argument("choose_cell_size: K >= 1");
  const double dilute = rho * a * a * a;
  if (dilute >= 1.0) throw std::invalid_argument("choose_cell_size: rho a^3 must be < 1");
  const double ell = 1.0 / (K * std::sqrt(rho * a));
  return {ell, rho * ell * ell * ell};
}

double energy_assumption(double N, double kappa, double a0, double C0) {
  if (N < 1) throw std::invalid_argument("energy_assumption: N >= 1");
  const double e2 = 5.0 * kappa / 2.0 + (2.0 - 3.0 * kappa) / 4.0;
  return 4.0 * M_PI * a0 * std::pow(N, 1.0 + kappa) + C0 * std::pow(N, e2);
}

double lemma42_bound(double rho, double a, double ell, Correction s, double C) {
  const double lead = 4.0 * M_PI * rho * rho * a * ell * ell * ell;
  const double x = rho * a * a * a;
  const double shape = s == Correction::sqrt_kind ? std::sqrt(1.0 / std::sqrt(x))
                                                  : std::log(1.0 / std::sqrt(x));
  return -lead - C * rho * rho * a * ell * ell * ell * std::sqrt(x) * shape;
}

}  // namespace boxgap
