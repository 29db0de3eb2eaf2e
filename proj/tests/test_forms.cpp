#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "boxgap/forms.hpp"

using namespace boxgap;

namespace {

Eigen::VectorXd random_vec(Eigen::Index n, int seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = 2.0 * (double(rng() >> 11) * 0x1p-53) - 1.0;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Neumann Laplacian
// ---------------------------------------------------------------------------

TEST_CASE("two-cell Laplacian is [[1,-1],[-1,1]]/h^2") {
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, 2);  // h = 1/2, 1/h^2 = 4
  auto lap = assemble_neumann_laplacian(g);
  Eigen::MatrixXd A = to_dense(lap);
  CHECK(A(0, 0) == doctest::Approx(4.0));
  CHECK(A(0, 1) == doctest::Approx(-4.0));
  CHECK(A(1, 0) == doctest::Approx(-4.0));
  CHECK(A(1, 1) == doctest::Approx(4.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(8.0));
}

TEST_CASE("constants are in the kernel") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto lap = assemble_neumann_laplacian(g);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(g.size(), 2.5);
  CHECK((lap * c).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("first excited level matches the closed form and approaches pi^2") {
  const int n = 64;
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, n);
  auto lap = assemble_neumann_laplacian(g);
  // phi_pi is an exact discrete eigenvector
  auto phi = neumann_mode(g, {1, 0, 0});
  Eigen::VectorXd Av = lap * phi.values;
  const double lam = neumann_eigenvalue_1d(n, 1.0, 1);
  CHECK((Av - lam * phi.values).norm() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(lam == doctest::Approx(9.8676).epsilon(1e-4));
  CHECK(std::abs(lam - M_PI * M_PI) / (M_PI * M_PI) < 3e-4);
}

TEST_CASE("doubling the box length divides the gap by four") {
  const double lam1 = neumann_eigenvalue_1d(256, 1.0, 1);
  const double lam2 = neumann_eigenvalue_1d(256, 2.0, 1);
  CHECK(lam2 / lam1 == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("form actions are symmetric on random probes") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto s = subdivide(g, 2);
  auto form = 0.37 * assemble_neumann_laplacian(g) + 2.0 * projector_Q_sum(s) - projector_Q(g);
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd u = random_vec(g.size(), 100 + t), v = random_vec(g.size(), 200 + t);
    const double uav = u.dot(form * v), auv = (form * u).dot(v);
    CHECK(uav == doctest::Approx(auv).epsilon(1e-12));
  }
}

// ---------------------------------------------------------------------------
// subcube-closed Laplacian
// ---------------------------------------------------------------------------

TEST_CASE("wall closure decouples the subcubes") {
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, 8);
  auto s = subdivide(g, 2);
  auto lap = assemble_subcube_laplacian_sum(s);
  // a vector supported on the left block stays there
  Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  v.head(4) = random_vec(4, 5);
  Eigen::VectorXd w = lap * v;
  CHECK(w.tail(4).norm() == doctest::Approx(0.0));
  // per-block constants are in the kernel
  Eigen::VectorXd c(8);
  c.head(4).setConstant(1.0);
  c.tail(4).setConstant(-3.0);
  CHECK((lap * c).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("block spectrum is the union of small-box Neumann spectra") {
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, 8);
  auto s = subdivide(g, 2);
  Eigen::MatrixXd A = to_dense(assemble_subcube_laplacian_sum(s));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  // each half-box of length 1/2 with 4 cells: eigenvalues doubled
  std::vector<double> expect;
  for (int k = 0; k < 4; ++k) {
    expect.push_back(neumann_eigenvalue_1d(4, 0.5, k));
    expect.push_back(neumann_eigenvalue_1d(4, 0.5, k));
  }
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 8; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(expect[i]).epsilon(1e-10));
}

// ---------------------------------------------------------------------------
// mean-removal projectors
// ---------------------------------------------------------------------------

TEST_CASE("Q annihilates constants and is idempotent") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto q = projector_Q(g);
  Eigen::VectorXd c = Eigen::VectorXd::Constant(g.size(), 7.0);
  CHECK((q * c).norm() == doctest::Approx(0.0));
  Eigen::VectorXd v = random_vec(g.size(), 1);
  CHECK((q * (q * v) - q * v).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("quadratic form of Q matches the direct formula") {
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, 32);
  auto q = projector_Q(g);
  Eigen::VectorXd v = random_vec(32, 9);
  const double expect = v.squaredNorm() - v.sum() * v.sum() / 32.0;
  CHECK(v.dot(q * v) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("subcube Q acts only on its cube and their sum telescopes") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto s = subdivide(g, 2);
  Eigen::VectorXd v = random_vec(g.size(), 3);

  auto q1 = projector_Q(s, 1);
  Eigen::VectorXd w = q1 * v;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (s.cube_of(i) != 1) CHECK(w[i] == 0.0);
  CHECK((q1 * w - w).norm() == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::VectorXd total = Eigen::VectorXd::Zero(g.size());
  for (Eigen::Index c = 0; c < s.cube_count(); ++c) total += projector_Q(s, c) * v;
  CHECK((projector_Q_sum(s) * v - total).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sum of subcube Qs is dominated by the identity") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto s = subdivide(g, 4);
  auto qs = projector_Q_sum(s);
  for (int t = 0; t < 8; ++t) {
    Eigen::VectorXd v = random_vec(g.size(), 40 + t);
    CHECK(v.dot(qs * v) <= v.squaredNorm() + 1e-12);
    CHECK(v.dot(qs * v) >= -1e-12);
  }
}

TEST_CASE("gap inequality: Q is dominated by the Laplacian over its gap") {
  const int n = 32;
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, n);
  auto q = projector_Q(g);
  auto lap = assemble_neumann_laplacian(g);
  const double lam1 = neumann_eigenvalue_1d(n, 1.0, 1);
  for (int t = 0; t < 8; ++t) {
    Eigen::VectorXd v = random_vec(n, 70 + t);
    CHECK(v.dot(q * v) <= v.dot(lap * v) / lam1 + 1e-10);
  }
}

// ---------------------------------------------------------------------------
// cosine modes
// ---------------------------------------------------------------------------

TEST_CASE("mode zero is the constant and the axis formula holds") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto f = neumann_mode(g, {0, 0, 0});
  CHECK((f.values.array() - 1.0).abs().maxCoeff() == doctest::Approx(0.0));
  CHECK(neumann_mode_1d(1, -0.5) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("modes are discretely orthonormal under midpoint quadrature") {
  const int n = 16;
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, n);
  const double h = g.h();
  for (int k = 0; k <= n / 2 - 1; ++k)
    for (int l = 0; l <= n / 2 - 1; ++l) {
      auto fk = neumann_mode(g, {k, 0, 0});
      auto fl = neumann_mode(g, {l, 0, 0});
      const double ip = h * fk.values.dot(fl.values);
      CHECK(ip == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("tensor modes are orthonormal in d=2") {
  const int n = 8;
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, n);
  const double hd = g.h() * g.h();
  auto f = neumann_mode(g, {1, 2, 0});
  auto gmode = neumann_mode(g, {2, 1, 0});
  CHECK(hd * f.values.dot(f.values) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hd * f.values.dot(gmode.values) == doctest::Approx(0.0).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// gradient energies
// ---------------------------------------------------------------------------

TEST_CASE("constants have zero energy for every p") {
  Grid g = make_grid({2, 1.0, {0, 0, 0}}, 8);
  auto f = sample(g, [](const std::array<double, 3>&) { return 4.0; });
  for (double p : {1.0, 2.0, 3.0}) CHECK(dirichlet_energy(f, p) == doctest::Approx(0.0));
  CHECK_THROWS(dirichlet_energy(f, 0.9));
}

TEST_CASE("energy of the first mode is the exact discrete eigenvalue") {
  const int n = 64;
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, n);
  auto phi = neumann_mode(g, {1, 0, 0});
  CHECK(dirichlet_energy(phi, 2.0) ==
        doctest::Approx(neumann_eigenvalue_1d(n, 1.0, 1)).epsilon(1e-12));
}

TEST_CASE("unit slope has unit energy up to the boundary cells") {
  const int n = 64;
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, n);
  auto f = sample(g, [](const std::array<double, 3>& x) { return x[0]; });
  // form route: (n-1)/n exactly (n-1 interior faces, unit difference quotients)
  CHECK(dirichlet_energy(f, 2.0) == doctest::Approx((n - 1.0) / n).epsilon(1e-13));
  // node-averaged face gradients are exactly 1 everywhere for a linear profile
  CHECK(dirichlet_energy(f, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// exports
// ---------------------------------------------------------------------------

TEST_CASE("coordinate export lists the nonzeros") {
  Grid g = make_grid({1, 1.0, {0, 0, 0}}, 2);
  std::ostringstream os;
  export_coo(assemble_neumann_laplacian(g), os);
  CHECK(os.str() == "0 0 4\n0 1 -4\n1 0 -4\n1 1 4\n");
}
