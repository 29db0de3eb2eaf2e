#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <ostream>
#include <vector>

namespace boxgap {

enum class PotentialKind { square_well, smooth_bump, tabulated };

// Nonnegative radial potential supported inside {r < range}.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::square_well;
  double amplitude = 1.0;  // lambda_V
  double range = 0.5;      // R
  std::vector<double> sample_r, sample_v;  // tabulated kind only, piecewise linear
};

void validate_potential(const PotentialSpec& v);
double potential_value(const PotentialSpec& v, double r);

// Zero-energy radial solution via u(r) = r(1 - omega(r)), u'' = V u / 2,
// u(0) = 0, u'(0) = 1. Outside the support u is linear, u = c (r - a0).
struct RadialScatteringSolution {
  PotentialSpec potential;
  double r_max = 1.0;
  int n_r = 0;
  Eigen::VectorXd r, u, up;  // nodes 0..n_r with r[0] = 0
  double c = 1.0;            // exterior slope u'(r_max)
  double a0 = 0.0;           // asymptotic-route scattering length

  // omega(r) = 1 - u(r)/(c r); cubic Hermite between nodes, series limit at 0,
  // exact a0/r beyond r_max
  double omega(double rr) const;
};

RadialScatteringSolution solve_scattering(const PotentialSpec& v, double r_max, int n_r);

// a0 with the independent integral route 8 pi a0 = integral of V (1 - omega)
// cross-checked; a disagreement beyond 1e-6 relative throws.
double scattering_length(const RadialScatteringSolution& sol);

// the integral route alone: (1/2) int_0^rmax V(r) (1 - omega(r)) r^2 dr
double scattering_length_integral(const RadialScatteringSolution& sol);

void write_radial_csv(const RadialScatteringSolution& sol, std::ostream& os);

// smooth shell profile: 1 on [0,1/2], exp(1 - 1/(1-s^2)) with s = 2t-1 on
// (1/2,1), 0 from 1 on
double cutoff_chi(double t);
double cutoff_chi_dd(double t);  // second derivative, analytic

// omega_cut(x) = omega(l|x|) chi(|x|/lambda) and its Laplacian defect
//   eps(x) = 2 (a0/l) lambda^-2 chi''(|x|/lambda) / |x|
// supported on the shell lambda/2 < |x| < lambda where omega is pure a0/r.
struct CutoffScatteringPair {
  RadialScatteringSolution sol;
  double ell = 1.0;
  double lambda = 1.0;

  double omega_cut(double r) const;                 // radial profile
  double omega_cut3(const std::array<double, 3>& x) const;
  double eps_cut(double r) const;
  double eps_cut3(const std::array<double, 3>& x) const;
  // scaled interaction against the scattering profile: l^2 V(l r)(1 - omega(l r))
  double scaled_vf(double r) const;
};

CutoffScatteringPair cutoff_pair(const RadialScatteringSolution& sol, double ell, double lambda);

// Radial Fourier transforms of compactly supported profiles by adaptive
// Simpson quadrature:
//   dim 3:  4 pi int g(r) sinc(s r) r^2 dr
//   dim 2:  2 pi int g(r) J0(s r) r dr
//   dim 1:  2    int g(r) cos(s r) dr
double fourier_radial(const std::function<double(double)>& g, double s, int dim,
                      double r_support, double tol = 1e-10);

// the 3-D transform at wave vector p (hat f(p) = int f e^{-i x p} dx)
double fourier_mode(const std::function<double(double)>& g, double p_norm, double r_support);
double fourier_mode(const std::function<double(double)>& g, const std::array<int, 3>& mode,
                    double r_support);

// dense uniform table of s -> fourier_radial(g, s), linear interpolation
struct RadialFourierTable {
  double s_max = 0;
  double step = 0;
  Eigen::VectorXd values;
  double operator()(double s) const;
};

RadialFourierTable tabulate_fourier(const std::function<double(double)>& g, double r_support,
                                    double s_max, int n_s, int dim = 3);

}  // namespace boxgap
