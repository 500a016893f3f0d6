#include "mfbose/eigensolvers.hpp"

#include <algorithm>
#include <cmath>

namespace mfbose {

namespace {

/// Orthonormalize the columns of X against Q and among themselves (two passes).
CMat orthonormalize(const CMat& Q, CMat X) {
  for (int pass = 0; pass < 2; ++pass)
    if (Q.cols() > 0) X -= Q * (Q.adjoint() * X);
  Eigen::HouseholderQR<CMat> qr(X);
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  CMat out = qr.householderQ() * CMat::Identity(X.rows(), X.cols());
  // Drop directions that were already in span(Q).
  std::vector<int> keep;
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  for (int j = 0; j < X.cols(); ++j)
    if (std::abs(R(j, j)) > 1e-10 * scale) keep.push_back(j);
  CMat kept(X.rows(), static_cast<int>(keep.size()));
  for (int j = 0; j < static_cast<int>(keep.size()); ++j) kept.col(j) = out.col(keep[j]);
  if (Q.cols() > 0) kept -= Q * (Q.adjoint() * kept);
  for (int j = 0; j < kept.cols(); ++j) kept.col(j).normalize();
  return kept;
}

}  // namespace

EigenPairs lowest_eigenpairs(const SpMat& H, int J, const EigenOptions& opts) {
  const int n = static_cast<int>(H.rows());
  if (J < 1) throw ConfigError("need at least one eigenpair");
  J = std::min(J, n);
  EigenPairs out;
  if (n <= opts.dense_threshold) {
    const CMat D = CMat(H);
    if (D.imag().cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, D.cwiseAbs().maxCoeff())) {
      const RMat R = D.real();
      Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (R + R.transpose()));
      out.values = es.eigenvalues().head(J);
      out.vectors = es.eigenvectors().leftCols(J).cast<cplx>();
    } else {
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (D + D.adjoint()));
      out.values = es.eigenvalues().head(J);
      out.vectors = es.eigenvectors().leftCols(J);
    }
    out.max_residual = (H * out.vectors - out.vectors * out.values.asDiagonal()).colwise().norm().maxCoeff();
    return out;
  }

  out.dense = false;
  // Guard vectors beyond J keep degenerate clusters at the cut inside the block.
  const int b = std::min(n, opts.block > 0 ? opts.block : 2 * J + 4);
  Rng rng = make_stream(opts.seed, 0x4b52594cULL);
  CMat X(n, b);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < b; ++j) X(i, j) = complex_gaussian(rng);
  X = orthonormalize(CMat(n, 0), X);
  double worst = 0.0;
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    CMat V = X, HV = H * X;
    CMat last = X;
    for (int s = 0; s < opts.krylov_steps && V.cols() < n; ++s) {
      CMat next = orthonormalize(V, H * last);
      if (next.cols() == 0) break;
      CMat grown(n, V.cols() + next.cols());
      grown << V, next;
      V = std::move(grown);
      CMat hgrown(n, V.cols());
      hgrown << HV, H * next;
      HV = std::move(hgrown);
      last = next;
    }
    CMat T = V.adjoint() * HV;
    T = 0.5 * (T + T.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(T);
    const int k = std::min<int>(J, static_cast<int>(T.rows()));
    CMat Y = es.eigenvectors().leftCols(k);
    CMat ritz = V * Y, hritz = HV * Y;
    worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const double lam = es.eigenvalues()(j);
      const double r = (hritz.col(j) - lam * ritz.col(j)).norm();
      worst = std::max(worst, r / std::max(1.0, std::abs(lam)));
    }
    if (worst <= opts.tol) {
      out.values = es.eigenvalues().head(k);
      out.vectors = ritz;
      out.max_residual = (H * ritz - ritz * out.values.asDiagonal()).colwise().norm().maxCoeff();
      return out;
    }
    const int keep = std::min<int>(b, static_cast<int>(T.rows()));
    X = orthonormalize(CMat(n, 0), V * es.eigenvectors().leftCols(keep));
  }
  throw ConvergenceFailure("block Krylov eigensolver: relative residual " + std::to_string(worst) +
                           " after " + std::to_string(opts.max_restarts) + " restarts");
}

CVec expm_multiply(const LinearMap& A, const CVec& v, cplx t, double tol, int max_krylov) {
  const double beta = v.norm();
  if (beta == 0.0 || t == 0.0) return v;
  const int n = static_cast<int>(v.size());
  const int mmax = std::min(max_krylov, n);

  // Lanczos basis for the current start vector.
  std::vector<CVec> Q;
  std::vector<double> alpha, offdiag;
  Q.push_back(v / beta);
  double tail = 0.0;
  for (int j = 0; j < mmax; ++j) {
    CVec w = A(Q[j]);
    const double a = Q[j].dot(w).real();
    alpha.push_back(a);
    w -= a * Q[j];
    if (j > 0) w -= offdiag[j - 1] * Q[j - 1];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : Q) w -= q * q.dot(w);
    const double bnext = w.norm();
    tail = bnext;
    if (bnext < 1e-14 * std::max(1.0, std::abs(a)) || j + 1 == mmax) break;
    offdiag.push_back(bnext);
    Q.push_back(w / bnext);
  }
  const int m = static_cast<int>(alpha.size());
  RMat T = RMat::Zero(m, m);
  for (int j = 0; j < m; ++j) T(j, j) = alpha[j];
  for (int j = 0; j + 1 < m; ++j) T(j, j + 1) = T(j + 1, j) = offdiag[j];
  Eigen::SelfAdjointEigenSolver<RMat> es(T);

  auto small = [&](cplx tau) {
    CVec ex = (es.eigenvalues().cast<cplx>() * tau).array().exp();
    return CVec(es.eigenvectors().cast<cplx>() * ex.cwiseProduct(es.eigenvectors().row(0).transpose().cast<cplx>()));
  };
  const bool exact = m < mmax || m == n || tail < 1e-14;
  const CVec y = small(t);
  const double err = exact ? 0.0 : beta * tail * std::abs(y(m - 1));
  if (err <= tol * beta) {
    CVec out = CVec::Zero(n);
    for (int j = 0; j < m; ++j) out += (beta * y(j)) * Q[j];
    return out;
  }
  const CVec half = expm_multiply(A, v, 0.5 * t, tol, max_krylov);
  return expm_multiply(A, half, 0.5 * t, tol, max_krylov);
}

}  // namespace mfbose
