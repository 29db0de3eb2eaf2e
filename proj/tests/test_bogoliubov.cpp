#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "boxgap/bogoliubov.hpp"

using namespace boxgap;

namespace {

constexpr double kPi = 3.14159265358979323846;

PotentialSpec square_well(double amplitude = 2.0, double range = 0.5) {
  PotentialSpec v;
  v.kind = PotentialKind::square_well;
  v.amplitude = amplitude;
  v.range = range;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// per-mode deficit
// ---------------------------------------------------------------------------

TEST_CASE("per-mode deficit vanishes at B = 0 and reproduces the 3-4-5 closed form") {
  for (double A : {0.5, 1.0, 7.25, 42.0}) CHECK(per_mode_deficit<double>(A, 0.0) == 0.0);
  // A = 5, B = 3: sqrt(25 - 9) = 4, deficit = 5 - 4 = 1
  CHECK(per_mode_deficit(ModeCoefficients{5.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(per_mode_deficit(ModeCoefficients{5.0, -3.0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("per-mode deficit rejects coefficient pairs outside the admissible set") {
  CHECK_THROWS_AS(per_mode_deficit<double>(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(per_mode_deficit<double>(1.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(per_mode_deficit<double>(0.5, 0.7), std::domain_error);
  CHECK_THROWS_AS(per_mode_deficit<double>(-2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(per_mode_deficit<double>(2.0, 2.5), std::domain_error);
}

TEST_CASE("per-mode deficit is exactly even in B") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> ua(0.5, 50.0), ub(0.0, 0.999);
  for (int trial = 0; trial < 200; ++trial) {
    const double A = ua(rng);
    const double B = ub(rng) * A;
    // the formula only touches B through B*B and (A-B)(A+B) = (A+B)(A-B)
    CHECK(per_mode_deficit<double>(A, B) == per_mode_deficit<double>(A, -B));
  }
}

TEST_CASE("per-mode deficit grows with |B| and shrinks with A") {
  for (double A : {1.0, 3.0, 20.0}) {
    for (double bfrac : {0.1, 0.5, 0.9}) {
      const double B = bfrac * A;
      const double d = per_mode_deficit<double>(A, B);
      CHECK(per_mode_deficit<double>(A, B + 1e-4 * A) > d);
      CHECK(per_mode_deficit<double>(A + 1e-4 * A, B) < d);
    }
  }
}

TEST_CASE("cancellation-safe deficit matches an extended-precision evaluation to fourteen digits") {
  // small-coupling regime |B|/A <= 1e-6, where the textbook difference
  // A - sqrt(A^2 - B^2) cancels catastrophically
  for (double bfrac : {1e-6, 1e-7, 1e-9, 1e-12}) {
    for (double A : {0.5, 2.3, 17.0, 50.0}) {
      const double B = bfrac * A;
      const double d = per_mode_deficit<double>(A, B);
      const long double dl = per_mode_deficit<long double>((long double)A, (long double)B);
      CHECK(std::abs((long double)d - dl) / dl < 1e-14L);
    }
  }
  // near-degenerate pair, same double-rounded inputs to both widths
  {
    const double A = 1.0, B = 1.0 - 1e-12;
    const double d = per_mode_deficit<double>(A, B);
    const long double dl = per_mode_deficit<long double>((long double)A, (long double)B);
    CHECK(std::abs((long double)d - dl) / dl < 1e-14L);
  }
  // the naive difference already drops four digits at |B|/A = 1e-6
  {
    const double A = 1.0, B = 1e-6;
    const double naive = A - std::sqrt(A * A - B * B);
    const double safe = per_mode_deficit<double>(A, B);
    CHECK(std::abs(naive - safe) / safe > 1e-6);
    const long double dl = per_mode_deficit<long double>((long double)A, (long double)B);
    CHECK(std::abs((long double)safe - dl) / dl < 1e-14L);
  }
}

// ---------------------------------------------------------------------------
// single-mode Fock oracle
// ---------------------------------------------------------------------------

TEST_CASE("single-mode ground energy validates its truncation and coefficients") {
  CHECK_THROWS_AS(single_mode_ground_energy({5.0, 3.0}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(single_mode_ground_energy({5.0, 3.0}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(single_mode_ground_energy({1.0, 1.0}, {40}), std::domain_error);
}

TEST_CASE("single-mode ground energy is zero for a diagonal Hamiltonian") {
  for (double A : {0.5, 4.0}) {
    CHECK(std::abs(single_mode_ground_energy({A, 0.0}, {30})) <= 1e-12 * A);
  }
}

TEST_CASE("single-mode ground energy converges from above to minus half the deficit") {
  const ModeCoefficients c{5.0, 3.0};
  const double limit = -0.5 * per_mode_deficit(c);  // -1/2
  const double g10 = single_mode_ground_energy(c, {10});
  const double g20 = single_mode_ground_energy(c, {20});
  const double g40 = single_mode_ground_energy(c, {40});
  const double g60 = single_mode_ground_energy(c, {60});
  // enlarging the variational space lowers the ground energy
  CHECK(g10 > g20);
  CHECK(g20 > g40);
  CHECK(std::abs(g10 - limit) > std::abs(g20 - limit));
  CHECK(std::abs(g20 - limit) > std::abs(g40 - limit));
  CHECK(g60 == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("truncated ground energies dominate the closed-form bound across random coefficients") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ua(0.5, 50.0), ub(-0.9, 0.9);
  for (int trial = 0; trial < 60; ++trial) {
    const double A = ua(rng);
    const double B = ub(rng) * A;
    const double g = single_mode_ground_energy({A, B}, {60});
    const double ref = -0.5 * per_mode_deficit<double>(A, B);
    // a compression's ground energy never undershoots the operator's bound
    CHECK(g >= ref - 1e-9);
    CHECK(std::abs(g - ref) <= 1e-8);
  }
}

// ---------------------------------------------------------------------------
// mode table and sums
// ---------------------------------------------------------------------------

TEST_CASE("mode table enumerates the nonzero lattice in fixed lexicographic order") {
  // zero potential: scattering length 0, admissible window (0, pi)
  const QuadraticModeSystem sys = build_mode_system(4.0, 16.0, square_well(0.0), 1.5707963267948966, 3);
  REQUIRE(sys.modes.size() == 63);
  CHECK(sys.modes[0].k == std::array<int, 3>{0, 0, 1});
  CHECK(sys.modes[1].k == std::array<int, 3>{0, 0, 2});
  CHECK(sys.modes[2].k == std::array<int, 3>{0, 0, 3});
  CHECK(sys.modes[62].k == std::array<int, 3>{3, 3, 3});
  CHECK(sys.a0 == 0.0);
  for (const ModeEntry& e : sys.modes) {
    const double ksq = double(e.k[0] * e.k[0] + e.k[1] * e.k[1] + e.k[2] * e.k[2]);
    CHECK(e.psq == kPi * kPi * ksq);
    CHECK(e.Bp == 0.0);
    CHECK(e.deficit == 0.0);
  }
  const ModeSumResult r = mode_sum_lower_bound(sys);
  CHECK(r.full == 0.0);
  CHECK(r.simplified == 0.0);
  CHECK(r.tail_estimate == 0.0);
}

TEST_CASE("mode system rejects invalid shapes and chemical potentials outside the window") {
  CHECK_THROWS_AS(build_mode_system(0.0, 16.0, square_well(), 1.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_mode_system(4.0, 1.0, square_well(), 1.5, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_mode_system(4.0, 16.0, square_well(), 1.5, 0), std::invalid_argument);
  // window for the square well at n = 4, l = 16 is about (0.476, 2.904):
  // both endpoints must reject rather than clip
  CHECK_THROWS_AS(build_mode_system(4.0, 16.0, square_well(), 0.3, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_mode_system(4.0, 16.0, square_well(), 3.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_mode_system(4.0, 16.0, square_well(), -1.0, 8), std::invalid_argument);
}

TEST_CASE("admissible window matches the scattering length of the square well") {
  const QuadraticModeSystem sys = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 8);
  CHECK(sys.a0 == doctest::Approx(0.5 - std::tanh(0.5)).epsilon(1e-6));
  CHECK(sys.window_lo == 16.0 * kPi * sys.a0 * 4.0 / 16.0);
  CHECK(sys.window_hi == kPi - 8.0 * kPi * sys.a0 * 4.0 / 16.0);
  CHECK(sys.window_lo == doctest::Approx(0.476050).epsilon(1e-4));
  CHECK(sys.window_hi == doctest::Approx(2.903567).epsilon(1e-4));
  CHECK(sys.window_lo < 0.5 * kPi);
  CHECK(0.5 * kPi < sys.window_hi);
}

TEST_CASE("mode coefficients are uniformly dominated by the zero-momentum transform") {
  const QuadraticModeSystem sys = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 32);
  double bmax = 0.0;
  for (const ModeEntry& e : sys.modes) bmax = std::max(bmax, std::abs(e.Bp));
  // |(V f)_hat(s)| <= (V f)_hat(0) = 8 pi a0 / l for the nonnegative profile
  CHECK(bmax <= 8.0 * kPi * sys.a0 * 4.0 / 16.0 + 1e-12);
  CHECK(bmax == doctest::Approx(0.237794504759).epsilon(1e-6));
}

TEST_CASE("mode sums agree with a recomputation from the table") {
  const QuadraticModeSystem sys = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 16);
  const ModeSumResult r = mode_sum_lower_bound(sys);
  double full = 0.0, simplified = 0.0;
  for (const ModeEntry& e : sys.modes) {
    full += e.deficit;
    simplified += e.Bp * e.Bp / e.psq;
  }
  CHECK(r.full == -0.5 * full);
  CHECK(r.simplified == -0.25 * simplified);
  CHECK(r.full < 0.0);
  CHECK(r.simplified < 0.0);
  CHECK(r.full < r.simplified);  // the deficit beats its small-B quadratic proxy
}

TEST_CASE("tail estimate equals the change from rerunning at half the cutoff") {
  const QuadraticModeSystem s64 = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 64);
  const QuadraticModeSystem s32 = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 32);
  const ModeSumResult r64 = mode_sum_lower_bound(s64);
  const ModeSumResult r32 = mode_sum_lower_bound(s32);
  // the half-cutoff sub-sum inside the tail estimate is exactly the K/2 table
  CHECK(r64.tail_estimate == doctest::Approx(std::abs(r64.full - r32.full)).epsilon(1e-12));
  CHECK(r64.tail_estimate < 1e-3);
  CHECK(r64.tail_estimate > 0.0);
}

TEST_CASE("doubling the mode cutoff moves the lower bound by less than one percent") {
  const ModeSumResult r64 =
      mode_sum_lower_bound(build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 64));
  const ModeSumResult r32 =
      mode_sum_lower_bound(build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 32));
  CHECK(std::abs(r64.full - r32.full) / std::abs(r64.full) < 0.01);
  CHECK(r64.full == doctest::Approx(-0.0553352319045).epsilon(1e-9));
}

TEST_CASE("difference between full and simplified sums scales like the squared density") {
  // same density n/l = 1/4 at two cell scales; the combination
  // (full - simplified)/(n/l)^2 should be stable between them
  const ModeSumResult r16 =
      mode_sum_lower_bound(build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 64));
  const ModeSumResult r32 =
      mode_sum_lower_bound(build_mode_system(8.0, 32.0, square_well(), 1.5707963267948966, 64));
  const double rho = 0.25;
  const double c16 = (r16.full - r16.simplified) / (rho * rho);
  const double c32 = (r32.full - r32.simplified) / (rho * rho);
  CHECK(c16 == doctest::Approx(-0.0206941467679).epsilon(1e-6));
  CHECK(c32 == doctest::Approx(-0.0209718186175).epsilon(1e-6));
  CHECK(std::abs(c16 - c32) < 0.05 * std::abs(c16));
  CHECK(c16 > -0.03);
  CHECK(c16 < -0.015);
  CHECK(c32 > -0.03);
  CHECK(c32 < -0.015);
}

TEST_CASE("second-order energy coefficient matches its closed form") {
  const double v = lhy_coefficient();
  CHECK(v > 0.0);
  CHECK(std::abs(v - 4.81441777960752031529) / v < 1e-12);
  CHECK(std::abs(15.0 * std::sqrt(kPi) * v - 128.0) / 128.0 < 1e-13);
}

TEST_CASE("mode tables are reproducible bit for bit") {
  const QuadraticModeSystem a = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 16);
  const QuadraticModeSystem b = build_mode_system(4.0, 16.0, square_well(), 1.5707963267948966, 16);
  REQUIRE(a.modes.size() == b.modes.size());
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    CHECK(a.modes[i].k == b.modes[i].k);
    CHECK(a.modes[i].psq == b.modes[i].psq);
    CHECK(a.modes[i].Bp == b.modes[i].Bp);
    CHECK(a.modes[i].deficit == b.modes[i].deficit);
  }
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

TEST_CASE("bogoliubov CSV lists one mode per row") {
  std::vector<ModeEntry> modes(2);
  modes[0].k = {0, 0, 1};
  modes[0].psq = 2.0;
  modes[0].Bp = 0.5;
  modes[0].deficit = 0.25;
  modes[1].k = {1, 2, 3};
  modes[1].psq = 4.0;
  modes[1].Bp = -0.5;
  modes[1].deficit = 0.125;
  std::ostringstream os;
  write_bogoliubov_csv(modes, os);
  CHECK(os.str() ==
        "k1,k2,k3,psq,Bp,deficit\n"
        "0,0,1,2,0.5,0.25\n"
        "1,2,3,4,-0.5,0.125\n");
}
