#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "boxgap/scattering.hpp"

using namespace boxgap;

namespace {

PotentialSpec square_well(double amp, double range) {
  return {PotentialKind::square_well, amp, range, {}, {}};
}

// analytic square-well value: a0 = R - tanh(kR)/k, k = sqrt(amp/2)
double square_well_a0(double amp, double range) {
  const double k = std::sqrt(amp / 2.0);
  return range - std::tanh(k * range) / k;
}

}  // namespace

// ---------------------------------------------------------------------------
// zero-energy solve
// ---------------------------------------------------------------------------

TEST_CASE("free potential gives the trivial solution") {
  auto sol = solve_scattering(square_well(0.0, 0.5), 1.0, 512);
  CHECK(scattering_length(sol) == doctest::Approx(0.0));
  for (double r : {0.0, 0.3, 0.7, 1.0, 2.0}) CHECK(sol.omega(r) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("square well matches the analytic matching formula") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  const double oracle = square_well_a0(2.0, 0.5);  // 0.5 - tanh(0.5)
  CHECK(oracle == doctest::Approx(0.5 - std::tanh(0.5)).epsilon(1e-15));
  CHECK(scattering_length(sol) == doctest::Approx(oracle).epsilon(1e-9));
  // interior solution is sinh(r)/cosh matched: u'(R) continues to the slope c
  CHECK(sol.c == doctest::Approx(std::cosh(0.5)).epsilon(1e-9));
}

TEST_CASE("omega at the origin is 1 - 1/c, not 1") {
  // u(r)/r -> u'(0) = 1, so omega(0) = 1 - 1/u'(rmax); for this well
  // c = cosh(1/2)
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  CHECK(sol.omega(0.0) == doctest::Approx(1.0 - 1.0 / std::cosh(0.5)).epsilon(1e-9));
  // continuity of the evaluator near zero
  CHECK(sol.omega(1e-9) == doctest::Approx(sol.omega(0.0)).epsilon(1e-6));
}

TEST_CASE("omega stays in [0,1], decays like a0/r outside, nonincreasing tail") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  const double a0 = sol.a0;
  double prev = 1.0;
  for (int k = 0; k <= sol.n_r; ++k) {
    const double w = sol.omega(sol.r[k]);
    CHECK(w >= -1e-12);
    CHECK(w <= 1.0 + 1e-12);
    if (sol.r[k] >= 0.5) {
      CHECK(std::abs(w - a0 / sol.r[k]) <= 1e-8);
      CHECK(w <= prev + 1e-12);
      prev = w;
    }
  }
  CHECK(sol.omega(0.5) == doctest::Approx(a0 / 0.5).epsilon(1e-7));
}

TEST_CASE("the two scattering-length routes agree for every shipped potential") {
  for (auto kind : {PotentialKind::square_well, PotentialKind::smooth_bump}) {
    PotentialSpec v{kind, 2.0, 0.5, {}, {}};
    auto sol = solve_scattering(v, 1.0, 4096);
    CHECK_NOTHROW(scattering_length(sol));
    CHECK(scattering_length_integral(sol) == doctest::Approx(sol.a0).epsilon(1e-8));
    CHECK(sol.a0 > 0);
  }
}

TEST_CASE("Born limit at weak coupling") {
  const double amp = 1e-3, R = 0.5;
  auto sol = solve_scattering(square_well(amp, R), 1.0, 4096);
  const double born = amp * R * R * R / 6.0;
  CHECK(std::abs(scattering_length(sol) - born) / born < 0.01);
}

TEST_CASE("scaled potential scales the scattering length by 1/ell") {
  const double ell = 16.0;
  auto base = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  // V_l(x) = l^2 V(l x): amplitude l^2 lambda_V, range R/l
  auto scaled = solve_scattering(square_well(2.0 * ell * ell, 0.5 / ell), 1.0 / ell, 4096);
  CHECK(scattering_length(scaled) ==
        doctest::Approx(scattering_length(base) / ell).epsilon(1e-7));
}

TEST_CASE("potential validation and the strong-well guard") {
  CHECK_THROWS(validate_potential({PotentialKind::square_well, -1.0, 0.5, {}, {}}));
  CHECK_THROWS(validate_potential({PotentialKind::square_well, 1.0, 1.5, {}, {}}));
  CHECK_THROWS(validate_potential({PotentialKind::tabulated, 1.0, 0.5, {0.0, 0.1}, {1.0, -0.5}}));
  CHECK_THROWS(validate_potential({PotentialKind::tabulated, 1.0, 0.5, {0.1, 0.1}, {1.0, 1.0}}));
  CHECK_THROWS(solve_scattering(square_well(1.0, 0.5), 0.8, 4096));
  CHECK_THROWS(solve_scattering(square_well(1.0, 0.5), 1.0, 100));
}

TEST_CASE("tabulated potential reproduces the curve it was sampled from") {
  PotentialSpec bump{PotentialKind::smooth_bump, 2.0, 0.5, {}, {}};
  PotentialSpec tab{PotentialKind::tabulated, 2.0, 0.5, {}, {}};
  const int m = 1500;
  for (int i = 0; i <= m; ++i) {
    const double r = 0.5 * i / m;
    tab.sample_r.push_back(r);
    tab.sample_v.push_back(potential_value(bump, r));
  }
  auto a = solve_scattering(bump, 1.0, 4096);
  auto b = solve_scattering(tab, 1.0, 4096);
  CHECK(scattering_length(b) == doctest::Approx(scattering_length(a)).epsilon(1e-5));
}

TEST_CASE("radial csv export") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 256);
  std::ostringstream os;
  write_radial_csv(sol, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "r,omega");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 257);
}

// ---------------------------------------------------------------------------
// smooth cutoff profile
// ---------------------------------------------------------------------------

TEST_CASE("chi is 1 inside, 0 outside, smooth in the shell") {
  CHECK(cutoff_chi(0.0) == 1.0);
  CHECK(cutoff_chi(0.5) == 1.0);
  CHECK(cutoff_chi(1.0) == 0.0);
  CHECK(cutoff_chi(2.0) == 0.0);
  CHECK(cutoff_chi(0.75) > 0.0);
  CHECK(cutoff_chi(0.75) < 1.0);
  // analytic second derivative against central differences
  const double h = 1e-5;
  for (double t : {0.6, 0.75, 0.9}) {
    const double fd = (cutoff_chi(t + h) - 2.0 * cutoff_chi(t) + cutoff_chi(t - h)) / (h * h);
    CHECK(cutoff_chi_dd(t) == doctest::Approx(fd).epsilon(1e-4));
  }
  // the profile is C^1 only at t = 1/2: chi'' jumps to 4 psi''(0) = -8
  CHECK(cutoff_chi_dd(0.5 + 1e-9) == doctest::Approx(-8.0).epsilon(1e-6));
  CHECK(cutoff_chi_dd(0.5 - 1e-9) == 0.0);
}

TEST_CASE("cutoff pair support and equality regions") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  const double ell = 16.0, lambda = 0.5;
  auto pair = cutoff_pair(sol, ell, lambda);
  CHECK_THROWS(cutoff_pair(sol, 16.0, 0.05));  // 2R/ell = 1/16 > lambda
  CHECK_THROWS(cutoff_pair(sol, 16.0, 1.5));

  CHECK(pair.omega_cut(0.6) == 0.0);
  CHECK(pair.omega_cut3({0.5, 0.5, 0.5}) == 0.0);
  for (double r : {0.01, 0.1, 0.24}) CHECK(pair.omega_cut(r) == doctest::Approx(sol.omega(ell * r)).epsilon(1e-14));
  // eps lives on the annulus only
  CHECK(pair.eps_cut(0.2) == 0.0);
  CHECK(pair.eps_cut(0.55) == 0.0);
  CHECK(pair.eps_cut(0.3) != 0.0);
  // the two published forms of eps agree: (2a0/l) lam^-3 (chi''/t)(r/lam)
  for (double r : {0.27, 0.35, 0.45}) {
    const double alt = 2.0 * (sol.a0 / ell) / (lambda * lambda * lambda) *
                       cutoff_chi_dd(r / lambda) / (r / lambda);
    CHECK(pair.eps_cut(r) == doctest::Approx(alt).epsilon(1e-13));
  }
}

TEST_CASE("Laplacian defect identity holds pointwise off the well boundary") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 2.0, 8192);
  const double ell = 16.0, lambda = 0.5;
  auto pair = cutoff_pair(sol, ell, lambda);
  const double h = 1e-4;
  // -Lap omega_cut = V_l (1 - omega_l)/2 - eps/2 with Lap f = f'' + 2 f'/r
  for (double r : {0.004, 0.012, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
    if (std::abs(r - 0.5 / ell) < 2.5 * h) continue;  // skip the V jump
    const double fpp = (pair.omega_cut(r + h) - 2.0 * pair.omega_cut(r) + pair.omega_cut(r - h)) / (h * h);
    const double fp = (pair.omega_cut(r + h) - pair.omega_cut(r - h)) / (2.0 * h);
    const double lap = fpp + 2.0 * fp / r;
    const double vterm = 0.5 * ell * ell * potential_value(sol.potential, ell * r) *
                         (1.0 - sol.omega(ell * r));
    const double resid = -lap - vterm + 0.5 * pair.eps_cut(r);
    const double scale = std::max({1.0, std::abs(vterm), std::abs(0.5 * pair.eps_cut(r))});
    CHECK(std::abs(resid) / scale < 2e-3);
  }
}

TEST_CASE("pointwise decay bound is lambda-independent in shape") {
  // sup over samples of omega_cut(x) (l |x| + 1) stays put as l varies
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  double sups[3], i = 0;
  for (double ell : {8.0, 16.0, 32.0}) {
    auto pair = cutoff_pair(sol, ell, 0.5);
    double sup = 0;
    for (double r = 1e-4; r <= 0.5; r += 1e-3)
      sup = std::max(sup, pair.omega_cut(r) * (ell * r + 1.0));
    sups[int(i++)] = sup;
  }
  CHECK(sups[1] / sups[0] == doctest::Approx(1.0).epsilon(0.05));
  CHECK(sups[2] / sups[1] == doctest::Approx(1.0).epsilon(0.05));
}

// ---------------------------------------------------------------------------
// radial Fourier transforms
// ---------------------------------------------------------------------------

TEST_CASE("ball indicator transforms to the closed form") {
  const double rho = 0.3;
  auto ball = [rho](double r) { return r <= rho ? 1.0 : 0.0; };
  CHECK(fourier_mode(ball, 0.0, rho) == doctest::Approx(4.0 * M_PI * rho * rho * rho / 3.0).epsilon(1e-9));
  const double s = 5.0;
  const double closed = 4.0 * M_PI * (std::sin(s * rho) - s * rho * std::cos(s * rho)) / (s * s * s);
  CHECK(fourier_mode(ball, s, rho) == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("scaled interaction transform at zero is 8 pi a0 / ell") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  const double ell = 16.0;
  auto pair = cutoff_pair(sol, ell, 0.5);
  auto vf = [&](double r) { return pair.scaled_vf(r); };
  const double expect = 8.0 * M_PI * sol.a0 / ell;
  CHECK(fourier_mode(vf, 0.0, sol.potential.range / ell) == doctest::Approx(expect).epsilon(1e-7));
}

TEST_CASE("cutoff profile transform at zero matches 3-D quadrature and the l-shape") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  const double lambda = 0.5;
  auto pair16 = cutoff_pair(sol, 16.0, lambda);
  auto w16 = [&](double r) { return pair16.omega_cut(r); };
  const double radial = fourier_mode(w16, 0.0, lambda);

  // independent 3-D midpoint quadrature over the support cube
  const int n = 48;
  const double hq = 2.0 * lambda / n;
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = -lambda + (i + 0.5) * hq;
        const double y = -lambda + (j + 0.5) * hq;
        const double z = -lambda + (k + 0.5) * hq;
        acc += pair16.omega_cut3({x, y, z});
      }
  acc *= hq * hq * hq;
  CHECK(radial == doctest::Approx(acc).epsilon(1e-2));

  // shape l * value is pinned by a0 lambda^2 as l grows
  double prev = 0;
  for (double ell : {8.0, 16.0, 32.0}) {
    auto p = cutoff_pair(sol, ell, lambda);
    auto w = [&](double r) { return p.omega_cut(r); };
    const double scaled = ell * fourier_mode(w, 0.0, lambda);
    if (prev != 0) CHECK(scaled == doctest::Approx(prev).epsilon(0.10));
    prev = scaled;
  }
}

TEST_CASE("lower-dimensional kernels") {
  // d=1: transform of 1_[0,rho] twice: 2 sin(s rho)/s
  const double rho = 0.4, s = 3.0;
  auto seg = [rho](double r) { return r <= rho ? 1.0 : 0.0; };
  CHECK(fourier_radial(seg, s, 1, rho) == doctest::Approx(2.0 * std::sin(s * rho) / s).epsilon(1e-9));
  // d=2: disc indicator: 2 pi rho J1(s rho)/s
  const double closed2 = 2.0 * M_PI * rho * std::cyl_bessel_j(1.0, s * rho) / s;
  CHECK(fourier_radial(seg, s, 2, rho) == doctest::Approx(closed2).epsilon(1e-8));
}

TEST_CASE("fourier table interpolates the direct transform") {
  auto sol = solve_scattering(square_well(2.0, 0.5), 1.0, 4096);
  auto pair = cutoff_pair(sol, 16.0, 0.5);
  auto vf = [&](double r) { return pair.scaled_vf(r); };
  const double rs = sol.potential.range / 16.0;
  auto tab = tabulate_fourier(vf, rs, 60.0, 2048);
  for (double s : {0.0, 1.7, 7.3, 25.0, 59.0})
    CHECK(tab(s) == doctest::Approx(fourier_mode(vf, s, rs)).epsilon(1e-5));
  CHECK_THROWS(tab(61.0));
}
