#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boxgap/budget.hpp"

using namespace boxgap;

// ---------------------------------------------------------------------------
// rational arithmetic
// ---------------------------------------------------------------------------

TEST_CASE("rationals normalize and compare exactly") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 11) * Rational(11, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(2, 5));
  CHECK_THROWS(Rational(1, 0));
  CHECK_THROWS(Rational(1, 2) / Rational(0));
}

// ---------------------------------------------------------------------------
// excitation exponents
// ---------------------------------------------------------------------------

TEST_CASE("exponent formula at pinned points") {
  auto [e1, e2] = excitation_exponents(0.1, 0.5);
  CHECK(e1 == doctest::Approx(-0.025).epsilon(1e-15));
  CHECK(e2 == doctest::Approx(-0.2).epsilon(1e-14));

  auto z = excitation_exponents(0.37, 0.0);
  CHECK(z.e1 == 0.0);

  // the frontier point is exactly zero in rationals
  auto q = excitation_exponents(Rational(2, 11), Rational(0));
  CHECK(q.e2 == Rational(0));
  CHECK(q.e1 == Rational(0));
}

TEST_CASE("simplified e2 equals the unsimplified form on a 100-point sweep") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const double kappa = (double(rng() >> 11) * 0x1p-53) * 0.66;
    const double alpha = (double(rng() >> 11) * 0x1p-53) * 10.0;
    const double simplified = excitation_exponents(kappa, alpha).e2;
    CHECK(simplified == doctest::Approx(excitation_e2_unsimplified(kappa, alpha)).epsilon(1e-13));
  }
  // and identically in exact arithmetic
  for (long long p = 0; p < 10; ++p)
    for (long long q = 0; q < 10; ++q) {
      Rational kappa(p, 17), alpha(q, 3);
      CHECK(excitation_exponents(kappa, alpha).e2 == excitation_e2_unsimplified(kappa, alpha));
    }
}

TEST_CASE("monotonicity of the exponents") {
  const double base1 = excitation_exponents(0.2, 1.0).e1;
  const double base2 = excitation_exponents(0.2, 1.0).e2;
  CHECK(excitation_exponents(0.25, 1.0).e1 < base1);
  CHECK(excitation_exponents(0.2, 1.5).e1 < base1);
  CHECK(excitation_exponents(0.25, 1.0).e2 > base2);
  CHECK(excitation_exponents(0.2, 1.5).e2 > base2);
}

// ---------------------------------------------------------------------------
// feasibility frontier
// ---------------------------------------------------------------------------

TEST_CASE("feasible below 2/11, infeasible above") {
  auto v = bec_feasible(0.15);
  CHECK(v.feasible);
  CHECK(v.witness_alpha > 0);
  CHECK(v.witness_alpha < 2.0 * (0.5 - 11.0 * 0.15 / 4.0) / 0.15);
  auto [e1, e2] = excitation_exponents(0.15, v.witness_alpha);
  CHECK(std::max(e1, e2) < 0);

  auto w = bec_feasible(0.19);
  CHECK_FALSE(w.feasible);
  CHECK(w.binding.find("e2") != std::string::npos);
}

TEST_CASE("exact rational frontier") {
  CHECK(bec_feasible_exact(Rational(1, 11)));
  CHECK(bec_feasible_exact(Rational(2, 11) - Rational(1, 1000000000)));
  CHECK_FALSE(bec_feasible_exact(Rational(2, 11)));
  CHECK_FALSE(bec_feasible_exact(Rational(2, 11) + Rational(1, 1000000000)));
  CHECK_FALSE(bec_feasible_exact(Rational(0)));
}

TEST_CASE("float bisection pins the frontier to 1e-6") {
  CHECK(feasibility_frontier() == doctest::Approx(2.0 / 11.0).epsilon(1e-5));
  CHECK(std::abs(feasibility_frontier() - 2.0 / 11.0) < 1e-6);
}

TEST_CASE("small kappa limit") {
  // e2 -> -1/2 as kappa -> 0+ at small alpha
  CHECK(excitation_exponents(1e-9, 1e-3).e2 == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK(bec_feasible(1e-6).feasible);
}

// ---------------------------------------------------------------------------
// cell-size selection
// ---------------------------------------------------------------------------

TEST_CASE("cell size formula and the occupancy identity") {
  CHECK(choose_cell_size(1.0, 0.25, 1.0).ell == doctest::Approx(2.0).epsilon(1e-15));

  // rho a^3 = 1e-4 at K = 20: occupancy K^-3 (rho a^3)^(-1/2) = 100/8000
  const double a = 1e-2, rho = 1e-4 / (a * a * a);
  CHECK(choose_cell_size(rho, a, 20.0).rho_ell3 == doctest::Approx(0.0125).epsilon(1e-12));

  // identity rho ell^3 sqrt(rho a^3) K^3 = 1 across regimes
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const double r = 0.1 + double(rng() >> 11) * 0x1p-53;
    const double aa = 1e-3 + 0.05 * (double(rng() >> 11) * 0x1p-53);
    const double K = 1.0 + 30.0 * (double(rng() >> 11) * 0x1p-53);
    auto c = choose_cell_size(r, aa, K);
    CHECK(c.rho_ell3 * std::sqrt(r * aa * aa * aa) * K * K * K == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("GP scaling makes the cell size N-independent") {
  const double a0 = 0.04, K = 20.0;
  auto c1 = choose_cell_size(100.0, a0 / 100.0, K);
  auto c2 = choose_cell_size(10000.0, a0 / 10000.0, K);
  CHECK(c1.ell == doctest::Approx(c2.ell).epsilon(1e-14));
  CHECK(c1.ell == doctest::Approx(1.0 / (K * std::sqrt(a0))).epsilon(1e-14));
}

TEST_CASE("diluteness is enforced") {
  CHECK_THROWS(choose_cell_size(8.0, 1.0, 20.0));
  CHECK_THROWS(choose_cell_size(-1.0, 0.1, 20.0));
}

// ---------------------------------------------------------------------------
// energy threshold and the lower-bound evaluator
// ---------------------------------------------------------------------------

TEST_CASE("energy assumption at kappa = 0 is the sqrt-N form") {
  const double N = 100, a0 = 0.03, C0 = 2.0;
  CHECK(energy_assumption(N, 0.0, a0, C0) ==
        doctest::Approx(4.0 * M_PI * a0 * N + C0 * std::sqrt(N)).epsilon(1e-14));
  // subleading exponent is exactly 1/2 at kappa = 0
  CHECK(energy_assumption(4.0, 0.0, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(energy_assumption(N, 0.0, a0, 0.0) == doctest::Approx(4.0 * M_PI * a0 * N).epsilon(1e-14));
}

TEST_CASE("energy assumption exponents at the frontier") {
  const double N = 1e6, kappa = 2.0 / 11.0;
  const double expect = 4.0 * M_PI * std::pow(N, 13.0 / 11.0) + std::pow(N, 9.0 / 11.0);
  CHECK(energy_assumption(N, kappa, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("lower bound reduces to the leading term") {
  const double rho = 2.0, a = 0.01, ell = 3.0;
  CHECK(lemma42_bound(rho, a, ell, Correction::sqrt_kind, 0.0) ==
        doctest::Approx(-4.0 * M_PI * rho * rho * a * ell * ell * ell).epsilon(1e-14));
  // sqrt correction equals C rho^2 a ell^3 (rho a^3)^(1/4)
  const double x = rho * a * a * a;
  const double corr = -lemma42_bound(rho, a, ell, Correction::sqrt_kind, 1.0) -
                      4.0 * M_PI * rho * rho * a * ell * ell * ell;
  CHECK(corr == doctest::Approx(rho * rho * a * ell * ell * ell * std::pow(x, 0.25)).epsilon(1e-12));
}

TEST_CASE("correction vanishes relative to the leading term in the dilute limit") {
  const double a = 0.01, ell = 1.0;
  double prev = 1e9;
  for (double x : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double rho = x / (a * a * a);
    for (auto s : {Correction::sqrt_kind, Correction::log_kind}) {
      const double lead = -4.0 * M_PI * rho * rho * a * ell * ell * ell;
      const double rel = std::abs(lemma42_bound(rho, a, ell, s, 1.0) - lead) / std::abs(lead);
      if (s == Correction::sqrt_kind) {
        CHECK(rel < prev);
        prev = rel;
      }
      CHECK(rel < 1.0);
    }
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("regime validation") {
  CHECK_NOTHROW(validate_regime({0.1, 0.5, 100, 20, 0.04, 1.0}));
  CHECK_THROWS(validate_regime({0.7, 0.5, 100, 20, 0.04, 1.0}));
  CHECK_THROWS(validate_regime({0.1, -0.5, 100, 20, 0.04, 1.0}));
  CHECK_THROWS(validate_regime({0.1, 0.5, 0, 20, 0.04, 1.0}));
  CHECK_THROWS(validate_regime({0.1, 0.5, 100, 0.5, 0.04, 1.0}));
  CHECK_THROWS(excitation_exponents(-0.1, 0.0));
  CHECK_THROWS(bec_feasible(0.0));
}
