#include "mfbose/theorem_checks.hpp"

#include <cmath>

namespace mfbose {

EnergyBoundsReport energy_bounds_check(double E, int N, double e_gp, double w_abs_sum, bool strict) {
  if (N < 4) throw ConfigError("energy bounds need N >= 4");
  EnergyBoundsReport r;
  r.N = N;
  r.energy_per_particle = E / N;
  r.e_gp = e_gp;
  r.upper = e_gp;
  r.lower = e_gp - w_abs_sum / (N - 3);
  r.gap = e_gp - r.energy_per_particle;
  const double tol = 1e-10 * std::max(1.0, std::abs(e_gp));
  r.holds = r.energy_per_particle <= r.upper + tol && r.energy_per_particle >= r.lower - tol;
  if (strict && !r.holds)
    throw BoundViolation("E(N)/N = " + std::to_string(r.energy_per_particle) + " outside [" +
                         std::to_string(r.lower) + ", " + std::to_string(r.upper) + "] at N = " +
                         std::to_string(N));
  return r;
}

double hoffmann_ostenhof_slack(const ReducedDensityMatrix& g1, const CMat& h, int N) {
  if (g1.order != 1) throw Error("Hoffmann-Ostenhof check needs the one-body density matrix");
  const CMat& gamma = g1.matrix;
  const double kinetic = (h * gamma).trace().real();
  const CVec s = gamma.diagonal().real().cwiseMax(0.0).cwiseSqrt().cast<cplx>();
  return N * (kinetic - s.dot(h * s).real());
}

RVec point_masses(const ModelSpace& sp, const std::vector<int>& cells) {
  RVec eta = RVec::Zero(sp.size());
  for (int c : cells) eta(c) += 1.0 / sp.cell_volume();
  return eta;
}

double interaction_lower_bound_slack(const Interaction& w, const RVec& eta, const std::vector<Point>& x) {
  const ModelSpace& sp = *w.space();
  const int N = static_cast<int>(x.size());
  const double dv = sp.cell_volume();
  double pairs = 0.0;
  for (int j = 0; j < N; ++j)
    for (int k = j + 1; k < N; ++k) pairs += w.evaluate({x[j][0] - x[k][0], x[j][1] - x[k][1]});
  double field = 0.0;
  for (int j = 0; j < N; ++j)
    for (int y = 0; y < sp.size(); ++y) {
      if (eta(y) == 0.0) continue;
      const Point p = sp.position(y);
      field += dv * eta(y) * w.evaluate({x[j][0] - p[0], x[j][1] - p[1]});
    }
  const double self = 0.5 * dv * eta.dot(w.convolve(eta));
  return pairs - (field - self - 0.5 * N * w.evaluate({0.0, 0.0}));
}

SpectrumConvergenceReport excitation_spectrum_convergence(const ModeModel& m, const std::vector<int>& Ns,
                                                          int J, int n_max, std::uint64_t seed) {
  const ModeGPSolution gp = solve_mode_gp(m, 1.0, 8, seed);
  if (gp.degenerate) throw DegenerateGP("mode-space GP minimizer is not unique");
  const QuadraticHamiltonian q = mode_quadratic(m, 1.0, gp.c, gp.eps0);
  const BogoliubovSpectrum bs = diagonalize(q);
  const std::vector<double> ladder = excitation_ladder(bs, J);
  const BogoliubovVacuum vac = bogoliubov_vacuum(q, n_max);

  SpectrumConvergenceReport rep;
  rep.eta_min = bs.eta_min;
  rep.gap = bs.excitations.size() ? bs.excitations(0) : 0.0;
  rep.vacuum_truncation = vac.truncation_error;
  for (int N : Ns) {
    LadderPoint pt;
    pt.N = N;
    pt.e_gp = gp.e_gp;
    const std::vector<double> lev = many_body_spectrum(m, N, J);
    for (std::size_t j = 0; j < lev.size() && j < ladder.size(); ++j) {
      pt.levels.push_back(lev[j] - N * gp.e_gp);
      pt.reference.push_back(ladder[j]);
      pt.deltas.push_back(std::abs(pt.levels.back() - ladder[j]));
    }
    const GroundState gs = many_body_ground_state(m, N);
    const ExcitationVector x = excitation_decompose(gs.basis, gs.psi, gp.c);
    const CVec phi_n = excitation_on(x, vac.basis);
    const cplx ov = phi_n.dot(vac.phi);
    pt.overlap = std::abs(ov);
    const cplx phase = pt.overlap > 0.0 ? std::conj(ov) / pt.overlap : cplx(1.0);
    // Components above n_max contribute their full weight.
    double dist2 = (phase * phi_n - vac.phi).squaredNorm();
    const double kept = phi_n.squaredNorm();
    dist2 += std::max(0.0, x.norm2() - kept);
    pt.distance = std::sqrt(dist2);
    rep.ladder.push_back(std::move(pt));
  }
  rep.deltas_decreasing = true;
  rep.overlap_increasing = true;
  for (std::size_t i = 1; i < rep.ladder.size(); ++i) {
    for (std::size_t j = 0; j < rep.ladder[i].deltas.size(); ++j)
      if (rep.ladder[i].deltas[j] > rep.ladder[i - 1].deltas[j] + 1e-12) rep.deltas_decreasing = false;
    if (rep.ladder[i].overlap < rep.ladder[i - 1].overlap - 1e-12) rep.overlap_increasing = false;
  }
  return rep;
}

}  // namespace mfbose
