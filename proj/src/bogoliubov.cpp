#include "mfbose/bogoliubov.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace mfbose {

CMat QuadraticHamiltonian::doubled() const {
  const int m = modes();
  CMat M(2 * m, 2 * m);
  M.topLeftCorner(m, m) = A;
  M.topRightCorner(m, m) = B;
  M.bottomLeftCorner(m, m) = B.conjugate();
  M.bottomRightCorner(m, m) = A.conjugate();
  return M;
}

CMat condensate_frame(const CVec& psi) {
  const int n = static_cast<int>(psi.size());
  const double nrm = psi.norm();
  if (nrm == 0.0) throw Error("condensate vector is zero");
  const CVec p = psi / nrm;
  const cplx phase = std::abs(p(0)) > 0.0 ? p(0) / std::abs(p(0)) : cplx(1.0, 0.0);
  const cplx alpha = -phase;
  CVec v = p;
  v(0) -= alpha;
  const double vv = v.squaredNorm();
  CMat H = CMat::Identity(n, n) - (2.0 / vv) * v * v.adjoint();
  // H p = alpha e0, so column 0 of H is p / alpha.
  H.col(0) = p;
  return H;
}

CMat complement_basis(const CVec& psi) {
  const CMat F = condensate_frame(psi);
  return F.rightCols(F.cols() - 1);
}

QuadraticHamiltonian make_quadratic(const CMat& A_full, const CMat& B_full, const CVec& psi,
                                    double coupling) {
  QuadraticHamiltonian q;
  q.condensate = psi / psi.norm();
  q.complement = complement_basis(q.condensate);
  const CMat& C = q.complement;
  q.A = C.adjoint() * A_full * C;
  q.B = C.adjoint() * B_full * C.conjugate();
  // Remove roundoff asymmetry.
  q.A = 0.5 * (q.A + q.A.adjoint()).eval();
  q.B = 0.5 * (q.B + q.B.transpose()).eval();
  q.coupling = coupling;
  return q;
}

QuadraticHamiltonian build_hessian(const CVec& u0, const GPProblem& p, double eps0,
                                   double max_residual) {
  const ModelSpace& sp = *p.space();
  const int n = sp.size();
  const double resid = sp.norm(gp_gradient(u0, p));
  if (resid > max_residual)
    throw ResidualTooLarge("GP residual " + std::to_string(resid) + " exceeds " +
                           std::to_string(max_residual));

  const double dv = sp.cell_volume();
  const CVec psi = std::sqrt(dv) * u0;
  const RVec field = p.w.convolve(RVec(u0.cwiseAbs2()));

  CMat h0 = p.h.grid_matrix().cast<cplx>();
  for (int i = 0; i < n; ++i) h0(i, i) += p.g * field(i) - eps0;

  CMat K1(n, n), K2(n, n);
  double kn = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = p.w.pair(i, j);
      K1(i, j) = w * psi(i) * std::conj(psi(j));
      K2(i, j) = w * psi(i) * psi(j);
      kn += w * w * std::norm(psi(i)) * std::norm(psi(j));
    }
  }
  QuadraticHamiltonian q = make_quadratic(h0 + p.g * K1, p.g * K2, psi, p.g);
  q.h0_residual = (h0 * psi).norm();
  q.kernel_norm = kn;
  return q;
}

double check_nondegeneracy(const QuadraticHamiltonian& q) {
  if (q.modes() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(q.doubled(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

BogoliubovSpectrum diagonalize(const QuadraticHamiltonian& q) {
  const int m = q.modes();
  BogoliubovSpectrum s;
  s.eta_min = check_nondegeneracy(q);
  if (!(s.eta_min > 0.0))
    throw DegenerateHessian("Hessian is not positive definite (eta_min = " +
                            std::to_string(s.eta_min) + ")");
  const CMat M = q.doubled();
  Eigen::LLT<CMat> llt(M);
  if (llt.info() != Eigen::Success) throw DegenerateHessian("Cholesky factorization failed");
  const CMat L = llt.matrixL();
  CMat sL = L;
  sL.bottomRows(m) *= -1.0;
  CMat G = L.adjoint() * sL;
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(G, Eigen::EigenvaluesOnly);
  s.excitations = es.eigenvalues().tail(m);
  s.ground_energy = 0.5 * (s.excitations.sum() - q.A.trace().real());
  s.valid = true;
  return s;
}

RVec dynamical_matrix_excitations(const QuadraticHamiltonian& q) {
  const int m = q.modes();
  CMat D = q.doubled();
  D.bottomRows(m) *= -1.0;
  Eigen::ComplexEigenSolver<CMat> es(D, false);
  std::vector<double> ev;
  for (int i = 0; i < 2 * m; ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  RVec out(m);
  for (int i = 0; i < m; ++i) out(i) = ev[m + i];
  return out;
}

std::vector<double> excitation_ladder(const BogoliubovSpectrum& s, int J) {
  // Multisets as non-decreasing index sequences; each has a unique parent
  // (drop the last index if repeated, else decrement it) of no larger energy.
  struct Node {
    double energy;
    std::vector<int> seq;
    bool operator>(const Node& o) const { return energy > o.energy; }
  };
  const int m = static_cast<int>(s.excitations.size());
  std::vector<double> out;
  std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
  pq.push({s.ground_energy, {}});
  while (!pq.empty() && static_cast<int>(out.size()) < J) {
    Node n = pq.top();
    pq.pop();
    out.push_back(n.energy);
    if (m == 0) continue;
    const int last = n.seq.empty() ? 0 : n.seq.back();
    Node a = n;
    a.seq.push_back(last);
    a.energy += s.excitations(last);
    pq.push(std::move(a));
    if (!n.seq.empty() && last + 1 < m) {
      Node b = n;
      b.seq.back() = last + 1;
      b.energy += s.excitations(last + 1) - s.excitations(last);
      pq.push(std::move(b));
    }
  }
  return out;
}

double homogeneous_dispersion(double k, double w_hat, int N, int d, double rho) {
  const double k2 = k * k;
  const double rad = k2 * k2 + 2.0 * std::pow(2.0 * kPi, 0.5 * d) * (N - 1) * rho * w_hat * k2;
  if (rad < 0.0) throw InstabilityAt(k, rad);
  return std::sqrt(rad);
}

std::string to_string(DispersionShape s) {
  return s == DispersionShape::Phonon ? "phonon" : "phonon-maxon-roton";
}

DispersionShape classify_dispersion(const std::vector<double>& k, const std::vector<double>& e) {
  if (k.size() != e.size()) throw Error("dispersion curve: size mismatch");
  const std::size_t n = e.size();
  double scale = 0.0;
  for (double v : e) scale = std::max(scale, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, scale);
  bool maxon = false;
  double peak = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!maxon && e[i] > e[i - 1] && e[i] >= e[i + 1]) {
      maxon = true;
      peak = e[i];
    } else if (maxon && e[i] < e[i - 1] && e[i] <= e[i + 1] && peak - e[i] > tol) {
      return DispersionShape::PhononMaxonRoton;
    }
  }
  return DispersionShape::Phonon;
}

RadialTransform gaussian_transform(double amplitude, double width, int d) {
  return [=](double k) { return amplitude * std::pow(width, d) * std::exp(-0.5 * width * width * k * k); };
}

namespace {

/// |k|^2 + W - |k| sqrt(|k|^2 + 2W) >= 0, written to avoid cancellation.
double correction_integrand(double k, double W) {
  const double k2 = k * k;
  const double rad = k2 + 2.0 * W;
  if (rad < 0.0) throw InstabilityAt(k, k2 * rad);
  const double a = k2 + W, b = k * std::sqrt(rad);
  if (a + b == 0.0) return 0.0;
  return W * W / (a + b);
}

}  // namespace

double second_order_continuum(const RadialTransform& w_hat, int d, double k_max) {
  if (d != 1 && d != 2) throw ConfigError("dimension must be 1 or 2");
  const double c = std::pow(2.0 * kPi, 0.5 * d);
  auto f = [&](double k) {
    const double v = correction_integrand(k, c * w_hat(k));
    return d == 1 ? 2.0 * v : 2.0 * kPi * k * v;  // even extension / angular factor
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double tail = GK::integrate(f, 0.5 * k_max, k_max, 15, 1e-13);
  const double total = GK::integrate(f, 0.0, 0.5 * k_max, 15, 1e-13) + tail;
  if (total == 0.0) return 0.0;
  if (tail > 0.01 * total)
    throw NonIntegrable("last momentum octave carries " + std::to_string(tail / total) +
                        " of the correction integral");
  return -total / (2.0 * std::pow(2.0 * kPi, d));
}

double second_order_torus_sum(const RadialTransform& w_hat, int d, double L, double k_max) {
  if (d != 1 && d != 2) throw ConfigError("dimension must be 1 or 2");
  const double c = std::pow(2.0 * kPi, 0.5 * d);
  const double dk = 2.0 * kPi / L;
  const int nmax = static_cast<int>(std::floor(k_max / dk));
  double sum = 0.0;
  for (int a = -nmax; a <= nmax; ++a) {
    for (int b = (d == 2 ? -nmax : 0); b <= (d == 2 ? nmax : 0); ++b) {
      if (a == 0 && b == 0) continue;
      const double k = dk * std::hypot(a, b);
      if (k >= k_max) continue;
      sum -= correction_integrand(k, c * w_hat(k));
    }
  }
  return sum / (2.0 * std::pow(L, d));
}

SecondOrderReport second_order_correction(const RadialTransform& w_hat, int d,
                                          const std::vector<double>& extents, double k_max) {
  SecondOrderReport r;
  r.continuum = second_order_continuum(w_hat, d, k_max);
  r.extents = extents;
  for (double L : extents) r.torus_sums.push_back(second_order_torus_sum(w_hat, d, L, k_max));
  // Neville table in h = 1/L.
  std::vector<double> t = r.torus_sums;
  const std::size_t n = t.size();
  for (std::size_t lvl = 1; lvl < n; ++lvl)
    for (std::size_t i = n - 1; i >= lvl; --i) {
      const double hi = 1.0 / extents[i], hl = 1.0 / extents[i - lvl];
      t[i] = (hl * t[i] - hi * t[i - 1]) / (hl - hi);
    }
  r.extrapolated = n ? t[n - 1] : 0.0;
  r.relative_mismatch = r.continuum == 0.0
                            ? std::abs(r.extrapolated)
                            : std::abs(r.extrapolated - r.continuum) / std::abs(r.continuum);
  return r;
}

}  // namespace mfbose
