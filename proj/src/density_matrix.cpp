#include "mfbose/density_matrix.hpp"

#include <cmath>

namespace mfbose {

double ReducedDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

RVec ReducedDensityMatrix::occupations() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

ReducedDensityMatrix reduced_density_matrix(const FockBasis& basis, const CVec& psi, int k) {
  if (!basis.fixed_number()) throw Error("density matrices need a fixed-N basis");
  const int N = basis.particles();
  const int M = basis.modes();
  if (k < 1 || k > N) throw ConfigError("density matrix order must lie in [1, N]");
  ReducedDensityMatrix g;
  g.order = k;
  g.basis = FockBasis::fixed(M, k);
  const FockBasis rest = FockBasis::fixed(M, N - k);
  const int K = g.basis.size();

  // Column a holds A_a Psi in the (N-k)-particle basis.
  CMat reduced = CMat::Zero(rest.size(), K);
  std::vector<int> r(M);
  for (int s = 0; s < basis.size(); ++s) {
    if (psi(s) == 0.0) continue;
    const auto occ = basis.state(s);
    for (int a = 0; a < K; ++a) {
      const auto alpha = g.basis.state(a);
      double logamp = 0.0;
      bool ok = true;
      for (int m = 0; m < M && ok; ++m) {
        if (alpha[m] > occ[m]) ok = false;
        r[m] = occ[m] - alpha[m];
        logamp += 0.5 * (std::lgamma(occ[m] + 1.0) - std::lgamma(r[m] + 1.0) - std::lgamma(alpha[m] + 1.0));
      }
      if (!ok) continue;
      reduced(rest.find(r), a) += std::exp(logamp) * psi(s);
    }
  }
  const double norm = static_cast<double>(binomial(N, k)) * psi.squaredNorm();
  // Gamma_ab = <A_b Psi, A_a Psi>
  g.matrix = (reduced.adjoint() * reduced).transpose() / norm;
  return g;
}

ReducedDensityMatrix partial_trace(const ReducedDensityMatrix& g) {
  if (g.order < 2) throw Error("partial trace needs order >= 2");
  const int M = g.basis.modes();
  const int k = g.order - 1;
  ReducedDensityMatrix out;
  out.order = k;
  out.basis = FockBasis::fixed(M, k);
  const int K = out.basis.size();
  out.matrix = CMat::Zero(K, K);
  std::vector<int> ap(M), bp(M);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) {
      cplx s = 0.0;
      for (int m = 0; m < M; ++m) {
        const auto alpha = out.basis.state(a), beta = out.basis.state(b);
        std::copy(alpha.begin(), alpha.end(), ap.begin());
        std::copy(beta.begin(), beta.end(), bp.begin());
        ++ap[m];
        ++bp[m];
        s += std::sqrt(static_cast<double>(ap[m]) * bp[m]) * g.matrix(g.basis.find(ap), g.basis.find(bp));
      }
      out.matrix(a, b) = s / static_cast<double>(k + 1);
    }
  return out;
}

double condensate_fraction(const ReducedDensityMatrix& g1) { return g1.occupations()(0); }

}  // namespace mfbose
