#pragma once

#include <string>
#include <vector>

#include "mfbose/density_matrix.hpp"

namespace mfbose {

/// Bosonic N-particle state on C^dim written in the occupation basis of the
/// symmetric subspace (so the support condition holds by construction).
struct SymmetricState {
  int dim = 2;
  int N = 1;
  CMat matrix;

  FockBasis basis() const { return FockBasis::fixed(dim, N); }
  /// Max of |trace - 1|, negative part of the spectrum and Hermiticity defect.
  double validity_defect() const;
  ReducedDensityMatrix as_density_matrix() const;
};

SymmetricState pure_product_state(const CVec& u, int N);
/// Maximally mixed state on the symmetric subspace.
SymmetricState maximally_mixed_state(int dim, int N);
/// Random mixed state G G^dag / Tr with G a complex Gaussian matrix of the given rank.
SymmetricState random_symmetric_state(int dim, int N, int rank, Rng& rng);

/// Density matrix from a text file with one row per basis state of
/// FockBasis::fixed(dim, N) and comma-separated re,im pairs per entry;
/// lines starting with '#' are skipped. Throws ConfigError on malformed input.
SymmetricState load_symmetric_state(const std::string& path, int dim, int N);

/// c_N = C(N + dim - 1, dim - 1).
double coherent_constant(int dim, int N);

/// Uniform point of the unit sphere of C^dim (normalized complex Gaussian).
CVec uniform_sphere_point(int dim, Rng& rng);

struct MCOptions {
  int samples = 100000;
  int batches = 20;
  std::uint64_t seed = 0;
};

struct ResolutionReport {
  double error = 0.0;  ///< operator norm of c_N E[|u^N><u^N|] - 1
  double sigma = 0.0;  ///< standard error of the estimate (Frobenius, batch based)
  bool within_band = false;
};
ResolutionReport coherent_resolution_check(int dim, int N, const MCOptions& opts);

/// Monte Carlo archive of the Husimi density c_N <u^N, Gamma u^N> under the
/// uniform probability measure on the sphere.
struct HusimiMeasure {
  int dim = 2;
  int N = 1;
  std::vector<CVec> points;
  std::vector<double> density;
  double mass = 0.0;
  double mass_sigma = 0.0;
  std::uint64_t seed = 0;
};
double husimi_density(const SymmetricState& g, const CVec& u);
HusimiMeasure husimi_measure(const SymmetricState& g, const MCOptions& opts);

struct DeFinettiReport {
  int k = 1;
  double error = 0.0;            ///< trace norm via singular values
  double error_eigen = 0.0;      ///< trace norm via eigenvalues of the Hermitian difference
  double sigma = 0.0;            ///< batch standard error of the trace-norm error
  double bound = 0.0;
  bool bound_applicable = false;
  bool within_bound = false;     ///< error <= bound + 3 sigma
  double reconstruction_trace = 0.0;
  double reconstruction_min_eigenvalue = 0.0;
};

/// || Gamma^(k) - int |u^k><u^k| dmu ||_1 against 2 k dim / (N - k dim).
DeFinettiReport definetti_error(const SymmetricState& g, int k, const HusimiMeasure& mu);

/// Trace norm of a Hermitian matrix by singular values and by eigenvalues.
double trace_norm(const CMat& A);
double trace_norm_hermitian(const CMat& A);

}  // namespace mfbose
