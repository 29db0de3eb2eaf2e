#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "boxgap/grid.hpp"
#include "boxgap/scattering.hpp"

namespace boxgap {

using Point3 = std::array<double, 3>;
using Mode3 = std::array<int, 3>;

// Mirror image of x in the neighbouring box indexed by z:
// (P_z x)_i = (-1)^(z_i) x_i + z_i.  P_0 is the identity and
// |P_z x - y| >= |x - y| for x, y in the unit box.
Point3 mirror_point(const std::array<int, 3>& z, const Point3& x, int d);

// Reflection-symmetrized kernel on the unit box centred at 0:
//   W~(x, y) = sum_{z in {-1,0,1}^d} g(|P_z x - y|)
// for a radial g supported in a ball of radius < 1 (so only nearest mirrors
// contribute).  The zero-mode-removed kernel subtracts the d-dimensional
// integral of g, which is exactly the (0,0) coefficient of W~ in the Neumann
// cosine basis.
struct SymmetrizedKernel {
  int d = 3;
  double support = 0.0;
  std::function<double(double)> g;
  double g_hat0 = 0.0;

  double tilde(const Point3& x, const Point3& y) const;
  double zero_removed(const Point3& x, const Point3& y) const { return tilde(x, y) - g_hat0; }
};

SymmetrizedKernel symmetrized_kernel(std::function<double(double)> g, double support, int d = 3);

struct ModePair {
  Mode3 p{0, 0, 0};
  Mode3 q{0, 0, 0};
};

struct IdentityCheck {
  Mode3 p{0, 0, 0};
  Mode3 q{0, 0, 0};
  double value = 0.0;      // tensor midpoint quadrature of <phi_p, W~ phi_q>
  double reference = 0.0;  // delta_pq * g_hat(pi |p|)
  double residual = 0.0;
};

// Verifies that the symmetrized kernel is diagonal in the Neumann cosine
// basis with eigenvalues given by the radial transform of g.  Dimensions 1
// and 2 assemble the quadrature kernel matrix once per call; dimension 3
// evaluates the inner integral by FFT convolution on the three-box extension
// (one transform per distinct q).  order = quadrature nodes per unit length
// per axis (capped at 64 for d >= 2).
std::vector<IdentityCheck> verify_diagonal_identity(const SymmetrizedKernel& K,
                                                    const std::vector<ModePair>& pairs, int order);
double verify_diagonal_identity(const SymmetrizedKernel& K, const Mode3& p, const Mode3& q,
                                int order);

// Boundary-effect function
//   h(x) = n int_box V_l(x - y) (1 - W(x, y)) dy - 8 pi a0 n / l
// evaluated on an n_x^3 grid of x.  The y-integral runs over a fixed offset
// lattice of spacing R/(4 l) around x, clipped to the box; the free-space
// reference integral uses the same lattice unclipped so the quadrature bias
// cancels in the difference.
struct BoundaryEffect {
  double n = 0.0;
  double ell = 0.0;
  double lambda = 0.0;
  int n_x = 0;
  GridFunction<double> h;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double integral = 0.0;  // signed integral of h over the box

  double norm_p(double p) const { return lp_norm(h, p); }
};

BoundaryEffect boundary_effect(double n, double ell, double lambda, const PotentialSpec& V,
                               int n_x = 0);

// Residual of the kernel decomposition
//   K~(x,y) = n V_l(x-y) (1 - W(x,y))
//           = K_m + 2 Q2_eps + 2 Q2_bc + n omega_hat(0) V_l(x-y)
// over the given sample pairs.  Two evaluation routes are reported: the
// combined route sums modes of n * (V f)_hat (covering K_m + 2 Q2_eps at
// once), the standalone route sums 2 n |p|^2 omega_hat(p) for K_m and adds
// the closed-form mirror sum of n eps for 2 Q2_eps.  Both truncate their mode
// sums at |k_i| <= k_cut.
struct KernelSplitResult {
  double max_kernel = 0.0;  // max |K~| over the sampled points and their diagonals
  double residual_combined = 0.0;
  double residual_standalone = 0.0;
  int k_cut = 0;
};

KernelSplitResult kernel_split_residual(double n, double ell, double lambda,
                                        const PotentialSpec& V,
                                        const std::vector<std::pair<Point3, Point3>>& pairs,
                                        int k_cut = 48);

// CSV schema shared by residual and norm sweeps:
// check,ell,lambda,n,value,bound_shape,ratio
struct SymmetrizeCsvRow {
  std::string check;
  double ell = 0.0;
  double lambda = 0.0;
  double n = 0.0;
  double value = 0.0;
  double bound_shape = 0.0;
  double ratio = 0.0;
};

void write_symmetrize_csv(const std::vector<SymmetrizeCsvRow>& rows, std::ostream& os);

}  // namespace boxgap
