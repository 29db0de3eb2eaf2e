#include "boxgap/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>

namespace boxgap {

namespace {

// Uniform [-1,1) from raw 64-bit draws. std::mt19937_64 output is pinned by
// the standard, while the distribution adaptors are not, so map by hand to
// keep start vectors byte-identical across toolchains.
Eigen::MatrixXd seeded_block(Eigen::Index n, Eigen::Index cols, int seed) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  Eigen::MatrixXd X(n, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = static_cast<double>(rng() >> 11) * 0x1p-53;  // [0,1)
      X(i, j) = 2.0 * u - 1.0;
    }
  return X;
}

Eigen::MatrixXd apply_block(const QuadraticForm<double>& form, const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Y(X.rows(), X.cols());
  Eigen::VectorXd yi(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    Eigen::VectorXd xj = X.col(j);
    form.apply_fn(xj, yi);
    Y.col(j) = yi;
  }
  return Y;
}

// Thin orthonormal basis of the column span, dropping near-dependent columns.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& S) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
  const double thresh = 1e-12 * std::abs(qr.matrixR()(0, 0));
  Eigen::Index r = 0;
  const Eigen::Index rmax = std::min(S.rows(), S.cols());
  while (r < rmax && std::abs(qr.matrixR()(r, r)) > thresh) ++r;
  if (r == 0) throw std::runtime_error("orthonormalize: zero block");
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(S.rows(), r);
  Q = qr.householderQ() * Q;
  return Q;
}

}  // namespace

LowestEigs dense_lowest(const QuadraticForm<double>& form, int k) {
  if (k < 1 || k > form.n) throw std::invalid_argument("dense_lowest: bad k");
  Eigen::MatrixXd A = to_dense(form);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  LowestEigs out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  out.residuals.resize(k);
  for (int i = 0; i < k; ++i)
    out.residuals[i] = (A * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
  out.norm_estimate = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(form.n - 1)));
  return out;
}

double operator_norm_estimate(const QuadraticForm<double>& form, int iters, int seed) {
  Eigen::VectorXd v = seeded_block(form.n, 1, seed).col(0);
  v.normalize();
  Eigen::VectorXd av(form.n);
  double nrm = 0;
  for (int it = 0; it < iters; ++it) {
    form.apply_fn(v, av);
    nrm = av.norm();
    if (nrm == 0) return 0;  // v landed in the kernel of a definite form; norm 0 only if A = 0
    v = av / nrm;
  }
  return nrm;
}

LowestEigs lobpcg_lowest(const QuadraticForm<double>& form, int k, const EigOptions& opts) {
  const Eigen::Index n = form.n;
  if (k < 1 || k > n) throw std::invalid_argument("lobpcg_lowest: bad k");
  const Eigen::Index kb = std::min<Eigen::Index>(n, std::max<Eigen::Index>(k + 2, 3));

  const double norm_est = std::max(operator_norm_estimate(form, 40, opts.seed + 1), 1e-300);
  const double tol = std::max(opts.tol_rel, 50.0 * 1e-16) * std::max(1.0, norm_est);

  Eigen::MatrixXd X;
  if (opts.warm_start.size() > 0) {
    if (opts.warm_start.rows() != n) throw std::invalid_argument("lobpcg_lowest: warm start size");
    X.resize(n, kb);
    const Eigen::Index have = std::min(opts.warm_start.cols(), kb);
    X.leftCols(have) = opts.warm_start.leftCols(have);
    if (have < kb) X.rightCols(kb - have) = seeded_block(n, kb - have, opts.seed);
  } else {
    X = seeded_block(n, kb, opts.seed);
  }
  X = orthonormalize(X);

  Eigen::MatrixXd Xprev;                    // previous Ritz block, for the 3-term subspace
  Eigen::VectorXd theta, theta_prev;
  Eigen::MatrixXd AX = apply_block(form, X);
  int stagnant = 0;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    // Rayleigh-Ritz on span[X, W, Xprev]
    Eigen::MatrixXd T = X.transpose() * AX;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::Index kr = std::min<Eigen::Index>(kb, X.cols());
    Eigen::MatrixXd Y = es.eigenvectors().leftCols(kr);
    Eigen::MatrixXd Xn = X * Y;
    Eigen::MatrixXd AXn = AX * Y;
    theta = es.eigenvalues().head(kr);

    Eigen::MatrixXd R = AXn - Xn * theta.asDiagonal();
    bool done = kr >= k;
    for (int i = 0; i < k && done; ++i) done = R.col(i).norm() <= tol;
    // residual plateau at the round-off floor also counts, provided it is close
    if (!done && theta_prev.size() >= k && kr >= k) {
      double dmax = 0, rmax = 0;
      for (int i = 0; i < k; ++i) {
        dmax = std::max(dmax, std::abs(theta[i] - theta_prev[i]) / std::max(1.0, std::abs(theta[i])));
        rmax = std::max(rmax, R.col(i).norm());
      }
      stagnant = (dmax <= 1e-13 && rmax <= 1e4 * tol) ? stagnant + 1 : 0;
      done = stagnant >= 3;
    }
    if (done) {
      LowestEigs out;
      out.values = theta.head(k);
      out.vectors = Xn.leftCols(k);
      for (int i = 0; i < k; ++i) out.vectors.col(i).normalize();
      out.iterations = it;
      out.residuals.resize(k);
      for (int i = 0; i < k; ++i) out.residuals[i] = R.col(i).norm();
      out.norm_estimate = norm_est;
      return out;
    }

    Eigen::MatrixXd S(n, 3 * kr);
    Eigen::Index sc = 0;
    S.middleCols(sc, kr) = Xn; sc += kr;
    S.middleCols(sc, kr) = R; sc += kr;
    if (Xprev.size() > 0) {
      // conjugate directions: previous block minus its projection on the current one
      Eigen::MatrixXd P = Xprev - Xn * (Xn.transpose() * Xprev);
      S.middleCols(sc, P.cols()) = P; sc += P.cols();
    }
    Xprev = Xn;
    theta_prev = theta;
    X = orthonormalize(S.leftCols(sc));
    AX = apply_block(form, X);
  }
  std::ostringstream msg;
  msg << "lobpcg_lowest: no convergence after " << opts.max_iterations
      << " iterations (n=" << n << ", k=" << k << ", tol=" << tol << ")";
  throw std::runtime_error(msg.str());
}

LowestEigs eigen_lowest(const QuadraticForm<double>& form, int k, const EigOptions& opts) {
  if (!opts.force_iterative && form.n <= opts.dense_threshold) return dense_lowest(form, k);
  return lobpcg_lowest(form, k, opts);
}

}  // namespace boxgap
