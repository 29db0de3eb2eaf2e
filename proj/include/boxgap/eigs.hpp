#pragma once

#include <Eigen/Dense>

#include "boxgap/forms.hpp"

namespace boxgap {

struct EigOptions {
  int seed = 7;                 // start-vector RNG; fixed seed => deterministic runs
  double tol_rel = 1e-8;        // converged when ||Av - tv|| <= tol_rel * max(1, ||A||_est)
  int max_iterations = 3000;
  bool force_iterative = false;
  Eigen::Index dense_threshold = 1024;  // eigen_lowest uses a dense solve up to this size
  Eigen::MatrixXd warm_start;   // optional initial block (n x >=k); pays off in bisections
};

struct LowestEigs {
  Eigen::VectorXd values;       // ascending
  Eigen::MatrixXd vectors;      // column i pairs with values[i], unit norm
  int iterations = 0;           // 0 on the dense path
  Eigen::VectorXd residuals;    // ||Av - tv|| per pair
  double norm_estimate = 0.0;
};

// Full dense eigendecomposition of the probed matrix; the oracle path.
LowestEigs dense_lowest(const QuadraticForm<double>& form, int k);

// Matrix-free blocked Rayleigh-Ritz iteration (LOBPCG scheme, Knyazev 2001)
// with deterministic seeded start vectors. Throws on non-convergence.
LowestEigs lobpcg_lowest(const QuadraticForm<double>& form, int k, const EigOptions& opts = {});

// ||A||_2 estimate by power iteration on the symmetric action.
double operator_norm_estimate(const QuadraticForm<double>& form, int iters = 40, int seed = 11);

// Dispatch: dense up to opts.dense_threshold unless force_iterative.
LowestEigs eigen_lowest(const QuadraticForm<double>& form, int k, const EigOptions& opts = {});

}  // namespace boxgap
