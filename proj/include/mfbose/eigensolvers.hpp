#pragma once

#include <functional>

#include <Eigen/Sparse>

#include "mfbose/common.hpp"

namespace mfbose {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using LinearMap = std::function<CVec(const CVec&)>;

struct EigenOptions {
  /// Dense solver below this dimension.
  int dense_threshold = 2000;
  double tol = 1e-10;
  int block = 0;  ///< Krylov block size; 0 picks 2 J + 4.
  int krylov_steps = 12;
  int max_restarts = 400;
  std::uint64_t seed = 0;
};

struct EigenPairs {
  RVec values;
  CMat vectors;
  /// max_j ||H v_j - lambda_j v_j||.
  double max_residual = 0.0;
  bool dense = true;
};

/// J lowest eigenpairs of a Hermitian sparse matrix.
/// Throws ConvergenceFailure when the Krylov iteration stalls.
EigenPairs lowest_eigenpairs(const SpMat& H, int J, const EigenOptions& opts = {});

/// exp(t A) v for Hermitian A given as a map, t complex (t = -i dt for
/// propagation). Lanczos with adaptive substeps; the a-posteriori error of
/// every substep is kept below tol * ||v||.
CVec expm_multiply(const LinearMap& A, const CVec& v, cplx t, double tol = 1e-12, int max_krylov = 40);

}  // namespace mfbose
