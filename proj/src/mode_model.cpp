#include "mfbose/mode_model.hpp"

#include <algorithm>
#include <cmath>

namespace mfbose {

ModeModel ModeModel::from_modes(const OneBodyOperator& h, const Interaction& w, CMat modes) {
  if (h.space().get() != w.space().get()) throw Error("mode model: h and w live on different spaces");
  const ModelSpace& sp = *h.space();
  const int M = static_cast<int>(modes.cols());
  ModeModel m;
  m.space = h.space();
  m.modes = std::move(modes);
  m.h.resize(M, M);
  for (int p = 0; p < M; ++p) {
    const CVec hp = h.apply(m.modes.col(p));
    for (int a = 0; a < M; ++a) m.h(a, p) = sp.inner(m.modes.col(a), hp);
  }
  m.h = 0.5 * (m.h + m.h.adjoint()).eval();

  // W_mnpq = dV sum_x conj(phi_m) phi_p (x) [w * conj(phi_n) phi_q](x)
  std::vector<CVec> prod(M * M), conv(M * M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      prod[a * M + b] = m.modes.col(a).conjugate().cwiseProduct(m.modes.col(b));
      conv[a * M + b] = w.convolve(prod[a * M + b]);
    }
  const double dv = sp.cell_volume();
  m.W.assign(static_cast<std::size_t>(M) * M * M * M, 0.0);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c)
        for (int d = 0; d < M; ++d)
          m.W[((a * M + b) * M + c) * M + d] =
              dv * (prod[a * M + c].array() * conv[b * M + d].array()).sum();
  m.w_abs_sum = w.spectral_abs_sum();
  if (!sp.periodic()) {
    // Without a Fourier series on the box use w_+(0) + w_-(0) from the sampled splitting.
    m.w_abs_sum = w.positive_part().at_origin() - w.negative_part().at_origin();
  }
  return m;
}

ModeModel ModeModel::plane_waves(const OneBodyOperator& h, const Interaction& w, int M) {
  const ModelSpace& sp = *h.space();
  if (!sp.periodic()) throw ConfigError("plane-wave modes need a periodic space");
  if (M < 1 || M > sp.size()) throw ConfigError("plane-wave mode count out of range");
  std::vector<int> order(sp.size());
  for (int i = 0; i < sp.size(); ++i) order[i] = i;
  auto rank = [&](int f) {
    const auto n = sp.mode_label(f);
    return std::make_tuple(n[0] * n[0] + n[1] * n[1], std::abs(n[0]), n[0] < 0, std::abs(n[1]), n[1] < 0);
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rank(a) < rank(b); });
  CMat modes(sp.size(), M);
  std::vector<std::array<int, 2>> labels;
  for (int i = 0; i < M; ++i) {
    modes.col(i) = sp.mode_function(order[i]);
    labels.push_back(sp.mode_label(order[i]));
  }
  ModeModel m = from_modes(h, w, std::move(modes));
  if (h.has_potential()) return m;  // no momentum conservation
  m.momenta = labels;
  const int G = sp.grid();
  auto conserved = [&](int a, int b, int c, int d) {
    for (int ax = 0; ax < 2; ++ax) {
      const int s = labels[a][ax] + labels[b][ax] - labels[c][ax] - labels[d][ax];
      if (((s % G) + G) % G != 0) return false;
    }
    return true;
  };
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c)
        for (int d = 0; d < M; ++d)
          if (!conserved(a, b, c, d)) m.W[((a * M + b) * M + c) * M + d] = 0.0;
  for (int a = 0; a < M; ++a)
    for (int c = 0; c < M; ++c)
      if (a != c && !conserved(a, 0, c, 0)) m.h(a, c) = 0.0;
  // w is real and even, so the surviving entries are real Fourier coefficients.
  for (auto& x : m.W) x = x.real();
  m.h = m.h.real().cast<cplx>();
  return m;
}

ModeModel ModeModel::eigenmodes(const OneBodyOperator& h, const Interaction& w, int M) {
  const ModelSpace& sp = *h.space();
  if (M < 1 || M > sp.size()) throw ConfigError("eigenmode count out of range");
  Eigen::SelfAdjointEigenSolver<RMat> es(h.grid_matrix());
  CMat modes(sp.size(), M);
  for (int i = 0; i < M; ++i) {
    RVec v = es.eigenvectors().col(i);
    if (v.sum() < 0) v = -v;
    CVec c = v.cast<cplx>();
    sp.normalize(c);
    modes.col(i) = c;
  }
  return from_modes(h, w, std::move(modes));
}

ModeModel ModeModel::grid_localized(const OneBodyOperator& h, const Interaction& w) {
  const ModelSpace& sp = *h.space();
  const int n = sp.size();
  const CMat modes = CMat::Identity(n, n) / std::sqrt(sp.cell_volume());
  ModeModel m = from_modes(h, w, modes);
  m.h = h.finite_difference_matrix().cast<cplx>();
  return m;
}

// ---------------------------------------------------------------------------

CVec ModeFunctional::contract(const CVec& a, const CVec& b, const CVec& c) const {
  const int M = m_.size();
  CVec out = CVec::Zero(M);
  for (int i = 0; i < M; ++i)
    for (int n = 0; n < M; ++n) {
      const cplx an = std::conj(a(n));
      if (an == 0.0) continue;
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) out(i) += m_.w(i, n, p, q) * an * b(p) * c(q);
    }
  return out;
}

cplx ModeFunctional::pair_form(const CMat& P, const CMat& R) const {
  const int M = m_.size();
  cplx s = 0.0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c)
        for (int d = 0; d < M; ++d) s += m_.w(a, b, c, d) * P(a, c) * R(b, d);
  return s;
}

double ModeFunctional::energy(const CVec& c) const {
  const double kin = c.dot(m_.h * c).real();
  if (g_ == 0.0) return kin;
  return kin + 0.5 * g_ * c.dot(contract(c, c, c)).real();
}

CVec ModeFunctional::mean_field_apply(const CVec& c) const {
  CVec out = m_.h * c;
  if (g_ != 0.0) out += g_ * contract(c, c, c);
  return out;
}

LinePolynomial ModeFunctional::line_polynomial(const CVec& u, const CVec& d) const {
  LinePolynomial lp;
  const CVec hu = m_.h * u, hd = m_.h * d;
  lp.one_body = {u.dot(hu).real(), 2.0 * u.dot(hd).real(), d.dot(hd).real()};
  if (g_ == 0.0) return lp;
  // P(t)_mp = conj(c_m) c_p along c = u + t d.
  const CMat P0 = u.conjugate() * u.transpose();
  const CMat P1 = u.conjugate() * d.transpose() + d.conjugate() * u.transpose();
  const CMat P2 = d.conjugate() * d.transpose();
  auto F = [&](const CMat& a, const CMat& b) { return pair_form(a, b).real(); };
  const double h = 0.5 * g_;
  lp.interaction = {h * F(P0, P0), h * 2.0 * F(P0, P1), h * (F(P1, P1) + 2.0 * F(P0, P2)),
                    h * 2.0 * F(P1, P2), h * F(P2, P2)};
  return lp;
}

CVec ModeFunctional::initial_guess() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(m_.h);
  CVec v = es.eigenvectors().col(0);
  int big = 0;
  v.cwiseAbs().maxCoeff(&big);
  return v * (std::abs(v(big)) / v(big));
}

CVec ModeFunctional::random_guess(Rng& rng) const {
  CVec v(m_.size());
  for (int i = 0; i < v.size(); ++i) v(i) = complex_gaussian(rng);
  return v / v.norm();
}

ModeGPSolution solve_mode_gp(const ModeModel& m, double g, int restarts, std::uint64_t seed,
                             double tol_resid) {
  ModeFunctional f(m, g);
  MinimizerOptions mo;
  mo.tol_resid = tol_resid;
  mo.polish_period = 0;
  mo.precondition = false;
  std::vector<MinimizerResult> runs;
  for (int i = 0; i < std::max(1, restarts); ++i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    runs.push_back(minimize_on_sphere(f, i == 0 ? f.initial_guess() : f.random_guess(rng), mo));
  }
  int best = -1;
  ModeGPSolution s;
  for (int i = 0; i < static_cast<int>(runs.size()); ++i) {
    if (!runs[i].converged) continue;
    ++s.converged_restarts;
    if (best < 0 || runs[i].energy < runs[best].energy) best = i;
  }
  if (best < 0) throw NonConvergence("mode GP: no restart converged");
  const auto& b = runs[best];
  s.c = b.u;
  s.e_gp = b.energy;
  s.eps0 = b.multiplier;
  s.residual = b.residual;
  const CMat Pb = b.u * b.u.adjoint();
  for (const auto& r : runs) {
    if (!r.converged || std::abs(r.energy - b.energy) > 1e-8) continue;
    if ((r.u * r.u.adjoint() - Pb).cwiseAbs().maxCoeff() > 1e-4) s.degenerate = true;
  }
  // Fix the global phase: largest component real positive.
  int big = 0;
  s.c.cwiseAbs().maxCoeff(&big);
  s.c *= std::abs(s.c(big)) / s.c(big);
  return s;
}

MeanFieldBlocks mean_field_blocks(const ModeModel& m, const CVec& c) {
  const int M = m.size();
  MeanFieldBlocks k{CMat::Zero(M, M), CMat::Zero(M, M), CMat::Zero(M, M)};
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int p = 0; p < M; ++p)
        for (int q = 0; q < M; ++q) {
          const cplx W = m.w(a, b, p, q);
          if (W == 0.0) continue;
          k.MF(a, p) += W * std::conj(c(b)) * c(q);
          k.K1(a, q) += W * std::conj(c(b)) * c(p);
          k.K2(a, b) += W * c(p) * c(q);
        }
  return k;
}

QuadraticHamiltonian mode_quadratic(const ModeModel& m, double g, const CVec& c, double eps0) {
  const MeanFieldBlocks k = mean_field_blocks(m, c);
  CMat A_full = m.h + g * (k.MF + k.K1);
  A_full.diagonal().array() -= eps0;
  QuadraticHamiltonian qh = make_quadratic(A_full, g * k.K2, c, g);
  CMat h0 = m.h + g * k.MF;
  h0.diagonal().array() -= eps0;
  qh.h0_residual = (h0 * c).norm();
  return qh;
}

}  // namespace mfbose
