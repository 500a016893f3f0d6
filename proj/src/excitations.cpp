#include "mfbose/excitations.hpp"

#include <cmath>

namespace mfbose {

CMat unitary_log(const CMat& U) {
  Eigen::ComplexSchur<CMat> schur(U);
  const CMat& T = schur.matrixT();
  const CMat& Q = schur.matrixU();
  // U is normal, so T is diagonal up to roundoff.
  CVec theta(T.rows());
  for (int i = 0; i < T.rows(); ++i) theta(i) = std::arg(T(i, i));
  CMat G = Q * theta.asDiagonal() * Q.adjoint();
  return 0.5 * (G + G.adjoint());
}

CVec apply_mode_rotation(const FockBasis& basis, const CMat& U, const CVec& psi) {
  const SpMat dG = second_quantize(basis, unitary_log(U));
  return expm_multiply([&](const CVec& v) { return CVec(dG * v); }, psi, cplx(0.0, 1.0), 1e-14);
}

double ExcitationVector::norm2() const {
  double s = 0.0;
  for (const auto& c : components) s += c.squaredNorm();
  return s;
}

std::vector<double> ExcitationVector::weights() const {
  std::vector<double> w;
  for (const auto& c : components) w.push_back(c.squaredNorm());
  return w;
}

ExcitationVector excitation_decompose(const FockBasis& basis, const CVec& psi, const CVec& u0) {
  const int M = basis.modes();
  const int N = basis.particles();
  if (M < 2) throw Error("excitation decomposition needs at least two modes");
  ExcitationVector x;
  x.reference = u0 / u0.norm();
  const CMat F = condensate_frame(x.reference);
  const CVec rotated = apply_mode_rotation(basis, F.adjoint(), psi);
  for (int n = 0; n <= N; ++n) {
    x.sectors.push_back(FockBasis::fixed(M - 1, n));
    x.components.push_back(CVec::Zero(x.sectors.back().size()));
  }
  for (int s = 0; s < basis.size(); ++s) {
    const auto occ = basis.state(s);
    const int n = N - occ[0];
    x.components[n](x.sectors[n].find(occ.subspan(1))) = rotated(s);
  }
  return x;
}

CVec excitation_recompose(const ExcitationVector& x, const FockBasis& basis) {
  const int N = basis.particles();
  CVec rotated = CVec::Zero(basis.size());
  std::vector<int> occ(basis.modes());
  for (int n = 0; n <= N; ++n)
    for (int i = 0; i < x.sectors[n].size(); ++i) {
      const auto e = x.sectors[n].state(i);
      occ[0] = N - n;
      std::copy(e.begin(), e.end(), occ.begin() + 1);
      rotated(basis.find(occ)) = x.components[n](i);
    }
  return apply_mode_rotation(basis, condensate_frame(x.reference), rotated);
}

CVec excitation_on(const ExcitationVector& x, const FockBasis& truncated) {
  CVec out = CVec::Zero(truncated.size());
  for (std::size_t n = 0; n < x.sectors.size(); ++n) {
    if (static_cast<int>(n) > truncated.particles()) break;
    for (int i = 0; i < x.sectors[n].size(); ++i) {
      const int j = truncated.find(x.sectors[n].state(i));
      if (j >= 0) out(j) = x.components[n](i);
    }
  }
  return out;
}

BogoliubovVacuum bogoliubov_vacuum(const QuadraticHamiltonian& q, int n_max, int J,
                                   std::vector<double>* levels) {
  BogoliubovVacuum v;
  auto solve = [&](int nm, int j) {
    const ManyBodyOperator H = quadratic_fock_hamiltonian(q, nm, j == 1);
    return std::make_pair(H.basis, lowest_eigenpairs(H.matrix, std::min(j, H.dimension())));
  };
  auto [basis, ep] = solve(n_max, J);
  v.basis = basis;
  v.phi = ep.vectors.col(0);
  v.energy = ep.values(0);
  if (levels) levels->assign(ep.values.data(), ep.values.data() + ep.values.size());
  if (n_max >= 2) v.truncation_error = std::abs(v.energy - solve(n_max - 2, 1).second.values(0));
  for (int i = 0; i < v.basis.size(); ++i)
    if (v.basis.total(i) >= n_max - 1) v.tail_weight += std::norm(v.phi(i));
  // Phase convention: vacuum amplitude real positive.
  if (std::abs(v.phi(0)) > 0.0) v.phi *= std::abs(v.phi(0)) / v.phi(0);
  return v;
}

}  // namespace mfbose
