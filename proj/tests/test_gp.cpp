#include <cmath>

#include "doctest.h"
#include "mfbose/gp_solver.hpp"
#include "oracles.hpp"

using namespace mfbose;

namespace {

SpacePtr torus(int M, double L = 2.0 * kPi) { return build_model({1, L, M, Boundary::Periodic}); }

Interaction cosine(SpacePtr sp, std::vector<double> a) {
  InteractionSpec s;
  s.kind = "cosine";
  s.coefficients = std::move(a);
  return make_interaction(s, sp);
}

Interaction gaussian(SpacePtr sp, double amp, double width) {
  InteractionSpec s;
  s.kind = "gaussian";
  s.amplitude = amp;
  s.width = width;
  return make_interaction(s, sp);
}

CVec random_field(const ModelSpace& sp, Rng& rng) {
  CVec u(sp.size());
  for (int i = 0; i < u.size(); ++i) u(i) = complex_gaussian(rng);
  sp.normalize(u);
  return u;
}

CVec random_tangent(const ModelSpace& sp, const CVec& u, Rng& rng) {
  CVec v = random_field(sp, rng);
  v -= sp.inner(u, v) * u;
  return v;
}

std::vector<double> nodes(const ModelSpace& sp) {
  std::vector<double> x(sp.size());
  for (int i = 0; i < sp.size(); ++i) x[i] = sp.position(i)[0];
  return x;
}

}  // namespace

TEST_SUITE("gp energy") {
  TEST_CASE("noninteracting energy of the ground mode") {
    auto sp = build_model({1, 6.0, 48, Boundary::Dirichlet});
    RVec V(48);
    for (int i = 0; i < 48; ++i) V(i) = std::pow(sp->position(i)[0] - 3.0, 2);
    const OneBodyOperator h(sp, V);
    const GPProblem p(h, gaussian(sp, 1.0, 0.5), 0.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(h.grid_matrix());
    CHECK(gp_energy(h.ground_mode(), p) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
  }

  TEST_CASE("constant function on the torus with 1 + cos x") {
    auto sp = torus(32);
    const GPProblem p(OneBodyOperator(sp), cosine(sp, {1.0, 1.0}), 1.0);
    const CVec u = CVec::Constant(32, 1.0 / std::sqrt(2.0 * kPi));
    CHECK(gp_energy(u, p) == doctest::Approx(0.5).epsilon(1e-13));
  }

  TEST_CASE("interaction energy equals the direct double sum") {
    for (auto bc : {Boundary::Periodic, Boundary::Dirichlet}) {
      const double L = 5.0;
      auto sp = build_model({1, L, 40, bc});
      const double s = 0.7;
      const GPProblem p(OneBodyOperator(sp), gaussian(sp, 1.3, s), 2.5);
      Rng rng(3);
      const CVec u = random_field(*sp, rng);
      auto wf = [s](double d) { return 1.3 * std::exp(-d * d / (2 * s * s)); };
      const double ref = 0.5 * 2.5 *
                         oracle::direct_pair_energy(wf, nodes(*sp), u.cwiseAbs2(), sp->spacing(), L,
                                                    bc == Boundary::Periodic);
      CHECK(gp_interaction_energy(u, p) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_SUITE("gp gradient") {
  TEST_CASE("directional derivatives match central differences") {
    auto sp = build_model({1, 5.0, 32, Boundary::Dirichlet});
    const GPProblem p(OneBodyOperator(sp), gaussian(sp, 2.0, 0.6), 3.0);
    Rng rng(9);
    const CVec u = random_field(*sp, rng);
    const CVec g = gp_gradient(u, p);
    for (int t = 0; t < 20; ++t) {
      const CVec v = random_tangent(*sp, u, rng);
      const double h = 1e-5;
      auto E = [&](double s) {
        CVec w = u + s * v;
        sp->normalize(w);
        return gp_energy(w, p);
      };
      const double fd = (E(h) - E(-h)) / (2.0 * h);
      const double an = 2.0 * sp->inner(g, v).real();
      CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
    }
  }

  TEST_CASE("noninteracting gradient is the projected one-body action") {
    auto sp = torus(24, 4.0);
    const OneBodyOperator h(sp);
    const GPProblem p(h, gaussian(sp, 1.0, 0.5), 0.0);
    Rng rng(4);
    const CVec u = random_field(*sp, rng);
    const CVec hu = h.apply(u);
    const CVec ref = hu - sp->inner(u, hu) * u;
    CHECK((gp_gradient(u, p) - ref).norm() < 1e-12 * hu.norm());
  }
}

TEST_SUITE("gp solver") {
  TEST_CASE("free torus: constant minimizer with zero energy") {
    auto sp = torus(32);
    InteractionSpec z;
    z.kind = "zero";
    const GPProblem p(OneBodyOperator(sp), make_interaction(z, sp), 0.0);
    GPOptions o;
    o.restarts = 2;
    const auto sol = solve_gp(p, o);
    CHECK(std::abs(sol.e_gp) < 1e-10);
    const RVec rho = sol.u0.cwiseAbs2();
    CHECK(rho.maxCoeff() - rho.minCoeff() < 1e-8);
  }

  TEST_CASE("positive-definite torus interaction: constant ansatz is the minimum") {
    auto sp = torus(32);
    const GPProblem p(OneBodyOperator(sp), cosine(sp, {1.0, 1.0}), 1.0);
    GPOptions o;
    o.restarts = 4;
    const auto sol = solve_gp(p, o);
    CHECK(std::abs(sol.e_gp - 0.5) <= 1e-8);
    CHECK(sol.residual <= o.tol_resid);
    CHECK(sol.u0.cwiseAbs2().maxCoeff() - sol.u0.cwiseAbs2().minCoeff() < 1e-6);
    CHECK(sol.e_gp >= 0.0);
    // Multiplier identity.
    CHECK(std::abs(sol.eps0 - sol.e_gp - gp_interaction_energy(sol.u0, p)) < 1e-8);
  }

  TEST_CASE("multiplier identity and restart bookkeeping in a trap") {
    auto sp = build_model({1, 8.0, 64, Boundary::Dirichlet});
    RVec V(64);
    for (int i = 0; i < 64; ++i) V(i) = 0.25 * std::pow(sp->position(i)[0] - 4.0, 2);
    const GPProblem p(OneBodyOperator(sp, V), gaussian(sp, 1.0, 0.5), 9.0);
    GPOptions o;
    o.restarts = 5;
    o.seed = 12;
    const auto sol = solve_gp(p, o);
    CHECK(sol.residual <= 1e-9);
    CHECK(std::abs(sol.eps0 - sol.e_gp - gp_interaction_energy(sol.u0, p)) < 1e-8);
    CHECK(sol.restarts_used == 5);
    for (const auto& r : sol.restarts)
      if (r.converged) CHECK(r.energy >= sol.e_gp - 1e-12);
    CHECK(sp->norm(gp_gradient(sol.u0, p)) <= 1e-9);
    CHECK(std::abs(sp->norm(sol.u0) - 1.0) < 1e-12);
  }

  TEST_CASE("energy never increases along the descent") {
    auto sp = build_model({1, 8.0, 64, Boundary::Dirichlet});
    const GPProblem p(OneBodyOperator(sp), gaussian(sp, -1.0, 1.0), 2.0);
    GPOptions o;
    o.restarts = 1;
    const auto sol = solve_gp(p, o);
    REQUIRE(sol.energy_trace.size() > 2);
    for (std::size_t i = 1; i < sol.energy_trace.size(); ++i)
      CHECK(sol.energy_trace[i] <= sol.energy_trace[i - 1] + 1e-13 * std::abs(sol.energy_trace[i - 1]));
  }

  TEST_CASE("translating a torus minimizer leaves the energy unchanged") {
    auto sp = torus(64, 10.0);
    const GPProblem p(OneBodyOperator(sp), gaussian(sp, 1.0, 0.8), 5.0);
    GPOptions o;
    o.restarts = 2;
    const auto sol = solve_gp(p, o);
    for (int shift : {1, 7, 31}) {
      CVec t(64);
      for (int i = 0; i < 64; ++i) t(i) = sol.u0((i + shift) % 64);
      CHECK(std::abs(gp_energy(t, p) - sol.e_gp) < 1e-10);
    }
  }

  TEST_CASE("iteration cap raises NonConvergence") {
    auto sp = build_model({1, 8.0, 64, Boundary::Dirichlet});
    const GPProblem p(OneBodyOperator(sp), gaussian(sp, 1.0, 0.5), 9.0);
    GPOptions o;
    o.restarts = 2;
    o.max_iter = 2;
    CHECK_THROWS_AS(solve_gp(p, o), NonConvergence);
  }

  TEST_CASE("truncated Lennard-Jones in a box breaks translation symmetry") {
    auto sp = build_model({1, 10.0, 256, Boundary::Dirichlet});
    InteractionSpec lj;
    lj.kind = "lennard-jones";
    const GPProblem p(OneBodyOperator(sp), make_interaction(lj, sp), 9.0);
    GPOptions o;
    o.restarts = 2;
    o.hops = 40;
    o.hop_patience = 15;
    o.seed = 3;
    const auto sol = solve_gp(p, o);
    const auto shape = analyze_density(sol.u0.cwiseAbs2());
    CHECK(shape.interior_maxima >= 2);
    CHECK(shape.contrast >= 0.5);
    CHECK(shape.symmetry_broken);
  }
}

TEST_SUITE("density shape") {
  TEST_CASE("flat and modulated profiles") {
    CHECK(analyze_density(RVec::Constant(50, 1.0)).interior_maxima == 0);
    RVec r(200);
    for (int i = 0; i < 200; ++i) r(i) = std::pow(std::sin(kPi * (i + 0.5) / 200), 2) * (1.2 + std::cos(0.4 * i));
    const auto s = analyze_density(r);
    CHECK(s.interior_maxima >= 3);
    CHECK(s.contrast > 0.5);
  }
}

TEST_SUITE("scaling identity") {
  TEST_CASE("lambda = 1 reproduces the reference problem") {
    auto sp = torus(32);
    GPOptions o;
    o.restarts = 1;
    const auto r = check_scaling_identity(OneBodyOperator(sp), cosine(sp, {1.0, 1.0}), 1.0, 1.0, o);
    CHECK(r.mismatch < 1e-12);
  }

  TEST_CASE("lambda = 2 with 1 + cos x") {
    auto sp = torus(32);
    GPOptions o;
    o.restarts = 2;
    o.tol_resid = 1e-10;
    const auto r = check_scaling_identity(OneBodyOperator(sp), cosine(sp, {1.0, 1.0}), 1.0 / (2.0 * kPi), 2.0, o);
    CHECK(r.mismatch <= 1e-8);
  }

  TEST_CASE("thermodynamic coupling is the particle number on the box") {
    auto sp = build_model({1, 10.0, 32, Boundary::Dirichlet});
    CHECK(thermodynamic_coupling(1.0, *sp) == doctest::Approx(10.0));
  }
}
