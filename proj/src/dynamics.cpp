#include "mfbose/dynamics.hpp"

#include <cmath>

namespace mfbose {

double GPTrajectory::max_norm_drift() const {
  double d = 0.0;
  for (double n : norm) d = std::max(d, std::abs(n - norm.front()));
  return d;
}

double GPTrajectory::max_energy_drift() const {
  const double e0 = energy.front();
  const double scale = e0 != 0.0 ? std::abs(e0) : 1.0;
  double d = 0.0;
  for (double e : energy) d = std::max(d, std::abs(e - e0) / scale);
  return d;
}

double BogoliubovTrajectory::max_u_occupancy() const {
  double d = 0.0;
  for (double o : u_occupancy) d = std::max(d, o);
  return d;
}

double BogoliubovTrajectory::max_norm_drift() const {
  double d = 0.0;
  for (double n : norm) d = std::max(d, std::abs(n - norm.front()));
  return d;
}

namespace {

int step_count(double T, double dt) {
  if (!(T >= 0.0) || !(dt > 0.0)) throw ConfigError("time horizon and step must be positive");
  return static_cast<int>(std::ceil(T / dt - 1e-9));
}

class SplitStep {
 public:
  explicit SplitStep(const GPProblem& p) : p_(p), sp_(*p.space()), hat_(sp_.size()) {}

  void potential(CVec& u, double tau) const {
    const double eps = gp_interaction_energy(u, p_);
    RVec v = RVec::Constant(sp_.size(), -eps);
    if (p_.h.has_potential()) v += p_.h.potential();
    if (p_.g != 0.0) v += p_.g * p_.w.convolve(RVec(u.cwiseAbs2()));
    for (int j = 0; j < sp_.size(); ++j) u(j) *= std::polar(1.0, -tau * v(j));
  }

  void kinetic(CVec& u, double tau) {
    sp_.fft().forward(u.data(), hat_.data());
    const double n = static_cast<double>(sp_.size());
    const RVec& k2 = sp_.kinetic();
    for (int j = 0; j < sp_.size(); ++j) hat_(j) *= std::polar(1.0 / n, -tau * k2(j));
    sp_.fft().backward(hat_.data(), u.data());
  }

  void strang(CVec& u, double tau) {
    potential(u, 0.5 * tau);
    kinetic(u, tau);
    potential(u, 0.5 * tau);
  }

  void step(CVec& u, double dt) {
    static const double c = std::cbrt(2.0);
    static const double w1 = 1.0 / (2.0 - c), w0 = -c / (2.0 - c);
    strang(u, w1 * dt);
    strang(u, w0 * dt);
    strang(u, w1 * dt);
  }

 private:
  const GPProblem& p_;
  const ModelSpace& sp_;
  CVec hat_;
};

template <class Record>
GPTrajectory adaptive(double T, double dt, const DriftLimits& limits, Record run) {
  for (double h = dt;; h *= 0.5) {
    if (h < limits.min_dt) throw StepCollapse("time step fell below " + std::to_string(limits.min_dt));
    GPTrajectory tr = run(h);
    tr.dt = h;
    if (tr.max_norm_drift() <= limits.norm && tr.max_energy_drift() <= limits.energy) return tr;
    if (T == 0.0) return tr;
  }
}

}  // namespace

GPTrajectory evolve_gp(const CVec& u0, const GPProblem& p, double T, double dt, int stride,
                       const DriftLimits& limits) {
  const ModelSpace& sp = *p.space();
  if (!sp.periodic()) throw ConfigError("time evolution requires a periodic space");
  if (std::abs(sp.norm(u0) - 1.0) > 1e-10) throw ConfigError("initial state must be normalized");
  stride = std::max(1, stride);
  return adaptive(T, dt, limits, [&](double h) {
    GPTrajectory tr;
    const int n = step_count(T, h);
    const double tau = n > 0 ? T / n : 0.0;
    SplitStep ss(p);
    CVec u = u0;
    auto record = [&](double t) {
      tr.t.push_back(t);
      tr.u.push_back(u);
      tr.epsilon.push_back(gp_interaction_energy(u, p));
      tr.norm.push_back(sp.norm(u));
      tr.energy.push_back(gp_energy(u, p));
    };
    record(0.0);
    for (int s = 1; s <= n; ++s) {
      ss.step(u, tau);
      if (s % stride == 0 || s == n) record(s * tau);
    }
    return tr;
  });
}

GPTrajectory evolve_gp_modes(const ModeModel& m, double g, const CVec& c0, double T, double dt,
                             const DriftLimits& limits) {
  if (std::abs(c0.norm() - 1.0) > 1e-10) throw ConfigError("initial state must be normalized");
  const ModeFunctional f(m, g);
  auto eps = [&](const CVec& c) { return f.energy(c) - c.dot(m.h * c).real(); };
  auto rhs = [&](const CVec& c) -> CVec {
    CVec r = f.mean_field_apply(c) - eps(c) * c;
    return cplx(0.0, -1.0) * r;
  };
  return adaptive(T, dt, limits, [&](double h) {
    GPTrajectory tr;
    const int n = step_count(T, h);
    const double tau = n > 0 ? 0.5 * T / n : 0.0;
    CVec c = c0;
    auto record = [&](double t) {
      tr.t.push_back(t);
      tr.u.push_back(c);
      tr.epsilon.push_back(eps(c));
      tr.norm.push_back(c.norm());
      tr.energy.push_back(f.energy(c));
    };
    record(0.0);
    for (int s = 1; s <= 2 * n; ++s) {
      const CVec k1 = rhs(c);
      const CVec k2 = rhs(c + 0.5 * tau * k1);
      const CVec k3 = rhs(c + 0.5 * tau * k2);
      const CVec k4 = rhs(c + tau * k3);
      c += (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      record(s * tau);
    }
    return tr;
  });
}

QuadraticHamiltonian bogoliubov_generator(const ModeModel& m, double g, const CVec& c, double epsilon) {
  const int M = m.size();
  const MeanFieldBlocks k = mean_field_blocks(m, c);
  const CMat Q = CMat::Identity(M, M) - c * c.adjoint();
  QuadraticHamiltonian q;
  q.A = m.h + g * k.MF + g * Q * k.K1 * Q;
  q.A.diagonal().array() -= epsilon;
  q.B = g * Q * k.K2 * Q.conjugate();
  q.condensate = c;
  q.coupling = g;
  return q;
}

CVec fluctuation_vacuum(int M, int n_max) {
  CVec v = CVec::Zero(FockBasis::truncated(M, n_max).size());
  v(0) = 1.0;
  return v;
}

namespace {

/// Phi in the frame whose mode 0 is u, together with <n_0>.
CVec to_condensate_frame(const FockBasis& fock, const CVec& u, const CVec& phi) {
  return apply_mode_rotation(fock, condensate_frame(u).adjoint(), phi);
}

}  // namespace

BogoliubovTrajectory evolve_bogoliubov(const ModeModel& m, double g, const CVec& phi0,
                                       const GPTrajectory& traj, int n_max) {
  if (n_max < 2) throw ConfigError("n_max must be at least 2");
  const int M = m.size();
  BogoliubovTrajectory bt;
  bt.basis = FockBasis::truncated(M, n_max);
  if (phi0.size() != bt.basis.size()) throw ConfigError("initial fluctuation vector has the wrong size");
  if (std::abs(phi0.norm() - 1.0) > 1e-10) throw ConfigError("initial fluctuation vector must be normalized");
  if (traj.t.size() % 2 == 0) throw ConfigError("trajectory must hold an even number of half steps");
  const FockBasis& basis = bt.basis;

  auto generator = [&](std::size_t i) {
    const ManyBodyOperator H =
        quadratic_fock_hamiltonian(bogoliubov_generator(m, g, traj.u[i], traj.epsilon[i]), n_max);
    const double defect = H.hermiticity_defect();
    bt.max_hermiticity_defect = std::max(bt.max_hermiticity_defect, defect);
    if (defect > 1e-12) throw Error("fluctuation generator is not Hermitian (" + std::to_string(defect) + ")");
    return H.matrix;
  };

  // Project out the u-mode component and log what was there.
  auto project = [&](CVec& phi, const CVec& u) {
    CVec r = to_condensate_frame(basis, u, phi);
    double occ = 0.0;
    for (int s = 0; s < basis.size(); ++s) {
      const int n0 = basis.state(s)[0];
      if (n0 == 0) continue;
      occ += n0 * std::norm(r(s));
      r(s) = 0.0;
    }
    phi = apply_mode_rotation(basis, condensate_frame(u), r);
    return occ;
  };

  auto record = [&](double t, const CVec& phi, double occ) {
    bt.t.push_back(t);
    bt.phi.push_back(phi);
    bt.norm.push_back(phi.norm());
    bt.u_occupancy.push_back(occ);
    std::vector<double> sectors(n_max + 1, 0.0);
    for (int s = 0; s < basis.size(); ++s) sectors[basis.total(s)] += std::norm(phi(s));
    bt.sector_norms.push_back(sectors);
    if (sectors[n_max] > 0.01 * phi.squaredNorm())
      throw TruncationLeak("top sector n = " + std::to_string(n_max) + " carries " +
                           std::to_string(sectors[n_max]) + " of the norm at t = " + std::to_string(t));
  };

  CVec phi = phi0;
  record(traj.t[0], phi, project(phi, traj.u[0]));
  const cplx mi(0.0, -1.0);
  SpMat H0 = generator(0);
  for (std::size_t i = 0; i + 2 < traj.t.size(); i += 2) {
    const double dt = traj.t[i + 2] - traj.t[i];
    const SpMat Hh = generator(i + 1);
    const SpMat H1 = generator(i + 2);
    const CVec k1 = mi * (H0 * phi);
    const CVec k2 = mi * (Hh * CVec(phi + 0.5 * dt * k1));
    const CVec k3 = mi * (Hh * CVec(phi + 0.5 * dt * k2));
    const CVec k4 = mi * (H1 * CVec(phi + dt * k3));
    phi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double occ = project(phi, traj.u[i + 2]);
    record(traj.t[i + 2], phi, occ);
    H0 = H1;
  }
  return bt;
}

CVec fluctuation_state(const FockBasis& basisN, const CVec& u, const FockBasis& fock, const CVec& phi) {
  const int M = basisN.modes();
  const int N = basisN.particles();
  const CVec r = to_condensate_frame(fock, u, phi);
  ExcitationVector x;
  x.reference = u / u.norm();
  for (int n = 0; n <= N; ++n) {
    x.sectors.push_back(FockBasis::fixed(M - 1, n));
    x.components.push_back(CVec::Zero(x.sectors.back().size()));
  }
  for (int s = 0; s < fock.size(); ++s) {
    const auto occ = fock.state(s);
    const int n = fock.total(s);
    if (occ[0] != 0 || n > N) continue;
    x.components[n](x.sectors[n].find(occ.subspan(1))) = r(s);
  }
  return excitation_recompose(x, basisN);
}

double ComparisonReport::distance(int N, double t) const {
  for (const auto& p : points)
    if (p.N == N && std::abs(p.t - t) < 1e-9) return p.distance;
  throw Error("no comparison point at N = " + std::to_string(N) + ", t = " + std::to_string(t));
}

ComparisonReport compare_exact(const ModeModel& m, const std::vector<int>& Ns, const CVec& u0,
                               const CVec& phi0, int n_max, double T, double dt,
                               const std::vector<double>& times) {
  constexpr double g = 1.0;
  ComparisonReport rep;
  rep.gp = evolve_gp_modes(m, g, u0 / u0.norm(), T, dt);
  rep.bogoliubov = evolve_bogoliubov(m, g, phi0, rep.gp, n_max);
  const auto& bt = rep.bogoliubov;

  std::vector<std::size_t> idx;
  for (double t : times) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < bt.t.size(); ++i)
      if (std::abs(bt.t[i] - t) < std::abs(bt.t[best] - t)) best = i;
    if (std::abs(bt.t[best] - t) > 1e-9 * std::max(1.0, T))
      throw ConfigError("comparison time " + std::to_string(t) + " is not on the step grid");
    idx.push_back(best);
  }

  for (int N : Ns) {
    const ManyBodyOperator H = build_hamiltonian(m, N);
    const LinearMap A = [&](const CVec& v) { return CVec(H.matrix * v); };
    auto energy = [&](const CVec& v) { return v.dot(H.matrix * v).real(); };
    CVec psi = fluctuation_state(H.basis, rep.gp.u[0], bt.basis, bt.phi[0]);
    const double n0 = psi.norm(), e0 = energy(psi);
    double t_now = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const std::size_t i = idx[j];
      const double t = bt.t[i];
      if (t > t_now) psi = expm_multiply(A, psi, cplx(0.0, -(t - t_now)), 1e-10);
      t_now = t;
      const CVec ansatz = fluctuation_state(H.basis, rep.gp.u[2 * i], bt.basis, bt.phi[i]);
      rep.points.push_back({N, t, (psi - ansatz).norm()});
      rep.exact_norm_drift = std::max(rep.exact_norm_drift, std::abs(psi.norm() - n0));
      rep.exact_energy_drift =
          std::max(rep.exact_energy_drift, std::abs(energy(psi) - e0) / std::max(1.0, std::abs(e0)));
    }
  }

  rep.decreasing = true;
  for (double t : times) {
    if (t <= 0.0) continue;
    for (std::size_t a = 1; a < Ns.size(); ++a)
      if (!(rep.distance(Ns[a], t) < rep.distance(Ns[a - 1], t))) rep.decreasing = false;
  }
  return rep;
}

}  // namespace mfbose
