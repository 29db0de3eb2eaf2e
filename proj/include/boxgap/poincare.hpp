#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "boxgap/eigs.hpp"
#include "boxgap/forms.hpp"
#include "boxgap/grid.hpp"

namespace boxgap {

// Verification of the multiscale mean-value inequality
//
//   || f - <f>_box ||_p^p  <=  C * ||grad f||_p * ( l^-p sum_i || f - <f>_i ||_p^p )^(1-1/p)
//
// on the unit box split into M^d subcubes of side l = 1/M, together with its
// operator-level consequence and the kinetic-energy localization bound.

struct PoincareRatioResult {
  double lhs = 0.0;    // p-th power of the centred L^p norm over the box
  double rhs = 0.0;    // gradient norm times the subcube defect product
  double ratio = 0.0;  // lhs / rhs, meaningful only when ratio_defined
  bool ratio_defined = false;
  double p = 2.0;
  int M = 1;
  int d = 1;
  int n_per_side = 0;
};

struct OperatorGapResult {
  double eps = 0.0;
  double C = 0.0;
  double smallest_eigenvalue = 0.0;
  bool pass = false;
};

// Both sides of the inequality for one sampled function.  Requires M to
// divide the grid side and p > 1.  A constant f yields lhs = rhs = 0 with the
// ratio flagged undefined; a subcube-wise constant f yields rhs = 0 with
// lhs > 0 (a discrete-only artifact, flagged the same way).
PoincareRatioResult multiscale_ratio(const Grid& grid, const GridFunction<double>& f, int M,
                                     double p);

// The sharp staircase profile along the first axis: 2N plateaus of height
// j/(2N) joined by ramps of width 1/(4N^2) and slope 2N * 1/(2N) ... built
// from the ramp kernel psi_N and the interval indicator chi_N.  Requires the
// unit box centred at 0, 2N | n_per_side and n_per_side >= 16 N^2 so the
// discrete gradient resolves every ramp.
GridFunction<double> staircase(int N, const Grid& grid);

struct SharpnessRow {
  int N = 0;
  PoincareRatioResult check;
};

struct SharpnessSweep {
  std::vector<SharpnessRow> rows;
  double log_slope = 0.0;  // slope of log(ratio) against log(N)
  bool slope_defined = false;
};

// Evaluates multiscale_ratio(staircase(N), M = 2N, p) for each N on the same
// grid and fits the log-log slope of the ratio against N.
SharpnessSweep sharpness_sweep(const std::vector<int>& N_list, double p, const Grid& grid);

// Smallest eigenvalue of  eps * (-Lap_Neumann) + C * sum_i Q_i - Q_box  and
// the certification verdict lambda_min >= -1e-6.
OperatorGapResult operator_gap(const Grid& grid, int M, double eps, double C,
                               const EigOptions& opts = {});

// Least C certifying operator_gap at (M, eps), found by bisection to three
// significant figures.  Returns 0 when C = 0 already certifies and +infinity
// when no finite C can (the form stays negative on subcube-wise constant
// vectors, which C cannot penalise).
double least_certifying_constant(const Grid& grid, int M, double eps, const EigOptions& opts = {});

struct CalibrationPoint {
  int M = 0;
  double eps = 0.0;
  double c_star = 0.0;  // +infinity when not certifiable at this grid
};

struct CalibrationResult {
  std::vector<CalibrationPoint> points;
  double slope = 0.0;  // d log C* / d log(M^2/eps) over the finite points
  bool slope_defined = false;
  bool pass = false;  // slope within 1 +/- 0.25
};

// Sweeps C* over the (M, eps) product set and fits log C* against
// log(1/(eps l^2)), the predicted scaling shape.
CalibrationResult calibrate_constant(const Grid& grid, const std::vector<int>& M_list,
                                     const std::vector<double>& eps_list,
                                     const EigOptions& opts = {});

// Smallest eigenvalue of the localization gap form
//
//   [-Lap - l^(2+alpha) Q_box] - (1 - C l^(4+2a)) [ sum_i (-Lap_i) - (pi/8) l^-2 sum_i Q_i ]
//
// with l = 1/M and subcube Laplacians closed by reflection at internal faces.
// Requires l < 1/2, i.e. M >= 3.
OperatorGapResult kinetic_localization_gap(const Grid& grid, int M, double alpha, double C,
                                           const EigOptions& opts = {});

// Least C certifying kinetic_localization_gap, bisected to three significant
// figures inside [0, l^-(4+2alpha)]; the upper end always certifies because
// the subtracted term vanishes there.
double least_kinetic_constant(const Grid& grid, int M, double alpha, const EigOptions& opts = {});

// CSV row shared by the sweep emitters: check,d,M,p_or_alpha,eps,lhs,rhs,
// ratio_or_eig,pass.
struct PoincareCsvRow {
  std::string check;
  int d = 0;
  int M = 0;
  double p_or_alpha = 0.0;
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio_or_eig = 0.0;
  bool pass = false;
};

void write_poincare_csv(const std::vector<PoincareCsvRow>& rows, std::ostream& os);

}  // namespace boxgap
