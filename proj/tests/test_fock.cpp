#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "mfbose/theorem_checks.hpp"
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

ModeModel plane_wave_model(int M, std::vector<double> a, int grid = 32) {
  auto sp = torus(grid);
  return ModeModel::plane_waves(OneBodyOperator(sp), cosine(sp, std::move(a)), M);
}

CVec random_unit(int n, Rng& rng) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v.normalized();
}

std::vector<int> occupation(const FockBasis& b, int i) {
  const auto s = b.state(i);
  return {s.begin(), s.end()};
}

CMat dense(const SpMat& A) { return CMat(A); }

}  // namespace

TEST_SUITE("fock basis") {
  TEST_CASE("binomial coefficients agree with Pascal's triangle") {
    for (int n = 0; n <= 30; ++n)
      for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == oracle::pascal(n, k));
    CHECK_THROWS_AS(binomial(200, 100), BasisTooLarge);
  }

  TEST_CASE("sizes, ordering and index maps") {
    const auto b = FockBasis::fixed(4, 5);
    CHECK(b.size() == oracle::pascal(8, 3));
    CHECK(b.size() == FockBasis::sector_dimension(4, 5));
    CHECK(occupation(b, 0) == std::vector<int>{5, 0, 0, 0});
    for (int i = 0; i < b.size(); ++i) {
      CHECK(b.find(b.state(i)) == i);
      CHECK(b.total(i) == 5);
      if (i > 0) CHECK(occupation(b, i - 1) > occupation(b, i));
    }
    const std::vector<int> bad{1, 1, 1, 1};
    CHECK(b.find(bad) == -1);
    const auto t = FockBasis::truncated(3, 4);
    CHECK(t.size() == oracle::pascal(7, 3));
    for (int i = 1; i < t.size(); ++i) CHECK(t.total(i) >= t.total(i - 1));
  }
}

TEST_SUITE("many-body hamiltonian") {
  TEST_CASE("second-quantized matrix equals the projected first-quantized operator") {
    for (int N : {2, 3}) {
      const ModeModel m = plane_wave_model(3, {0.4, 1.0, -0.3});
      const double lambda = 0.7;
      const auto basis = FockBasis::fixed(3, N);
      const auto H = build_hamiltonian(m, basis, lambda);
      const CMat T = oracle::tensor_hamiltonian(
          m.h, [&](int a, int b, int c, int d) { return m.w(a, b, c, d); }, N, lambda);
      CMat P(T.rows(), basis.size());
      for (int i = 0; i < basis.size(); ++i) P.col(i) = oracle::symmetric_vector(3, N, occupation(basis, i));
      const CMat ref = P.adjoint() * T * P;
      CHECK((dense(H.matrix) - ref).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(H.hermiticity_defect() < 1e-14);
    }
  }

  TEST_CASE("eigenmode model against the first-quantized oracle") {
    auto sp = build_model({1, 4.0, 24, Boundary::Dirichlet});
    InteractionSpec g;
    g.kind = "gaussian";
    g.width = 0.6;
    const ModeModel m = ModeModel::eigenmodes(OneBodyOperator(sp), make_interaction(g, sp), 3);
    const auto basis = FockBasis::fixed(3, 3);
    const auto H = build_hamiltonian(m, basis, 0.5);
    const CMat T = oracle::tensor_hamiltonian(
        m.h, [&](int a, int b, int c, int d) { return m.w(a, b, c, d); }, 3, 0.5);
    Eigen::SelfAdjointEigenSolver<CMat> e1(dense(H.matrix)), e2(T);
    // The symmetric spectrum is contained in the full tensor spectrum.
    for (int j = 0; j < basis.size(); ++j) {
      double best = 1e300;
      for (int i = 0; i < T.rows(); ++i) best = std::min(best, std::abs(e2.eigenvalues()(i) - e1.eigenvalues()(j)));
      CHECK(best < 1e-10);
    }
  }

  TEST_CASE("product-state coefficients and energy") {
    const ModeModel m = plane_wave_model(3, {1.0, 1.0});
    const int N = 4;
    const auto basis = FockBasis::fixed(3, N);
    const auto H = build_hamiltonian(m, N);
    const ModeFunctional E(m, 1.0);
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      const CVec u = random_unit(3, rng);
      const CVec psi = product_state(basis, u);
      CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
      const CVec tp = oracle::tensor_power(u, N);
      for (int i = 0; i < basis.size(); ++i)
        CHECK(std::abs(psi(i) - oracle::symmetric_vector(3, N, occupation(basis, i)).dot(tp)) < 1e-12);
      const double expect = psi.dot(H.matrix * psi).real();
      CHECK(expect == doctest::Approx(N * E.energy(u)).epsilon(1e-10));
    }
  }

  TEST_CASE("momentum conservation: off-block entries vanish") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0, 0.5});
    const int N = 4;
    const auto H = build_hamiltonian(m, N);
    auto total = [&](int i) {
      int k = 0;
      const auto s = H.basis.state(i);
      for (int a = 0; a < m.size(); ++a) k += s[a] * m.momenta[a][0];
      return k;
    };
    for (int r = 0; r < H.matrix.outerSize(); ++r)
      for (SpMat::InnerIterator it(H.matrix, r); it; ++it)
        if (it.value() != cplx(0.0)) CHECK(total(r) == total(static_cast<int>(it.col())));
  }

  TEST_CASE("noninteracting ground state is the condensate") {
    const ModeModel m = plane_wave_model(5, {0.0});
    for (int N : {2, 5, 8}) {
      const auto gs = many_body_ground_state(m, N);
      CHECK(std::abs(gs.energy) < 1e-10);
      CHECK(std::abs(gs.psi(gs.basis.find(std::vector<int>{N, 0, 0, 0, 0}))) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("noninteracting spectrum is a sum of one-body levels") {
    auto sp = build_model({1, 3.0, 24, Boundary::Dirichlet});
    InteractionSpec z;
    z.kind = "zero";
    const ModeModel m = ModeModel::eigenmodes(OneBodyOperator(sp), make_interaction(z, sp), 4);
    const int N = 3;
    const auto spec = many_body_spectrum(m, N, 8);
    std::vector<double> ref;
    const RVec e = m.h.diagonal().real();
    const auto b = FockBasis::fixed(4, N);
    for (int i = 0; i < b.size(); ++i) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a) s += b.state(i)[a] * e(a);
      ref.push_back(s);
    }
    std::sort(ref.begin(), ref.end());
    for (int j = 0; j < 8; ++j) CHECK(spec[j] == doctest::Approx(ref[j]).epsilon(1e-10));
  }

  TEST_CASE("nonzero cap raises BasisTooLarge") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0});
    CHECK_THROWS_AS(build_hamiltonian(m, FockBasis::fixed(5, 6), 0.2, 10), BasisTooLarge);
  }
}

TEST_SUITE("eigensolvers") {
  TEST_CASE("Krylov path agrees with dense diagonalization") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0});
    const auto H = build_hamiltonian(m, FockBasis::fixed(5, 6), 0.2);
    EigenOptions it;
    it.dense_threshold = 10;
    const auto a = lowest_eigenpairs(H.matrix, 4, it);
    const auto b = lowest_eigenpairs(H.matrix, 4);
    CHECK_FALSE(a.dense);
    CHECK(b.dense);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(a.max_residual < 1e-8);
  }

  TEST_CASE("two-mode, two-particle toy against a 3x3 dense solve") {
    const ModeModel m = plane_wave_model(2, {0.5, 1.0});
    const auto H = build_hamiltonian(m, FockBasis::fixed(2, 2), 1.0);
    REQUIRE(H.dimension() == 3);
    Eigen::SelfAdjointEigenSolver<CMat> es(dense(H.matrix));
    const auto ep = lowest_eigenpairs(H.matrix, 3);
    CHECK((ep.values - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("Krylov exponential against dense exponential") {
    const ModeModel m = plane_wave_model(3, {1.0, 1.0});
    const auto H = build_hamiltonian(m, FockBasis::fixed(3, 4), 1.0 / 3.0);
    const CMat D = dense(H.matrix);
    Eigen::SelfAdjointEigenSolver<CMat> es(D);
    Rng rng(2);
    const CVec v = random_unit(H.dimension(), rng);
    const double t = 0.7;
    CVec phase(H.dimension());
    for (int i = 0; i < phase.size(); ++i) phase(i) = std::polar(1.0, -t * es.eigenvalues()(i));
    const CVec ref = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * v;
    const CVec out = expm_multiply([&](const CVec& x) { return CVec(H.matrix * x); }, v, cplx(0.0, -t));
    CHECK((out - ref).norm() < 1e-10);
  }
}

TEST_SUITE("energy bounds") {
  TEST_CASE("E(N)/N is non-decreasing and bracketed by the GP energy") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0});
    const auto gp = solve_mode_gp(m, 1.0);
    double prev = -1e300, prev_gap = 1e300;
    for (int N = 4; N <= 12; ++N) {
      const double E = many_body_spectrum(m, N, 1)[0];
      CHECK(E / N >= prev - 1e-12);
      prev = E / N;
      const auto r = energy_bounds_check(E, N, gp.e_gp, m.w_abs_sum, true);
      CHECK(r.holds);
      CHECK(r.gap <= prev_gap + 1e-12);
      prev_gap = r.gap;
    }
  }

  TEST_CASE("no interaction: E(N)/N equals the GP energy") {
    const ModeModel m = plane_wave_model(5, {0.0});
    const auto gp = solve_mode_gp(m, 1.0);
    for (int N : {4, 7}) {
      const auto r = energy_bounds_check(many_body_spectrum(m, N, 1)[0], N, gp.e_gp, m.w_abs_sum);
      CHECK(std::abs(r.gap) < 1e-10);
    }
  }

  TEST_CASE("mixed-sign interaction uses the split peak sum") {
    const ModeModel m = plane_wave_model(5, {0.0, 1.0, -1.0});
    CHECK(m.w_abs_sum == doctest::Approx(2.0));
    const auto gp = solve_mode_gp(m, 1.0);
    for (int N : {4, 6, 8}) CHECK(energy_bounds_check(many_body_spectrum(m, N, 1)[0], N, gp.e_gp, m.w_abs_sum).holds);
  }

  TEST_CASE("a violated bound is reported") {
    CHECK_THROWS_AS(energy_bounds_check(10.0, 5, 1.0, 1.0, true), BoundViolation);
    CHECK_FALSE(energy_bounds_check(10.0, 5, 1.0, 1.0).holds);
  }
}

TEST_SUITE("reduced density matrices") {
  TEST_CASE("product states give rank-one projectors") {
    Rng rng(5);
    const CVec u = random_unit(3, rng);
    const auto b = FockBasis::fixed(3, 5);
    const CVec psi = product_state(b, u);
    const auto g1 = reduced_density_matrix(b, psi, 1);
    CHECK((g1.matrix - u * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const auto g2 = reduced_density_matrix(b, psi, 2);
    const CVec p2 = product_state(FockBasis::fixed(3, 2), u);
    CHECK((g2.matrix - p2 * p2.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(condensate_fraction(g1) == doctest::Approx(1.0));
  }

  TEST_CASE("partial traces are consistent on random states") {
    Rng rng(6);
    const auto b = FockBasis::fixed(3, 6);
    const CVec psi = random_unit(b.size(), rng);
    for (int k = 1; k <= 4; ++k) {
      const auto gk = reduced_density_matrix(b, psi, k);
      const auto gk1 = reduced_density_matrix(b, psi, k + 1);
      CHECK(std::abs(gk.trace() - 1.0) < 1e-12);
      CHECK(gk.min_eigenvalue() > -1e-12);
      CHECK((gk.matrix - gk.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((partial_trace(gk1).matrix - gk.matrix).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("condensate fraction grows along the particle ladder") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0});
    double prev = 0.0;
    for (int N : {4, 8, 12, 16}) {
      const auto gs = many_body_ground_state(m, N);
      const double f = condensate_fraction(reduced_density_matrix(gs.basis, gs.psi, 1));
      CHECK(f > prev);
      CHECK(f <= 1.0 + 1e-12);
      prev = f;
    }
  }
}

TEST_SUITE("positivity checks") {
  TEST_CASE("Hoffmann-Ostenhof inequality on random states") {
    auto sp = build_model({1, 4.0, 8, Boundary::Dirichlet});
    const ModeModel m = ModeModel::grid_localized(OneBodyOperator(sp), cosine(sp, {1.0}));
    const int N = 3;
    const auto b = FockBasis::fixed(8, N);
    Rng rng(4);
    double min_slack = 1e300, max_complex = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const CVec psi = random_unit(b.size(), rng);
      const double s = hoffmann_ostenhof_slack(reduced_density_matrix(b, psi, 1), m.h, N);
      min_slack = std::min(min_slack, s);
      max_complex = std::max(max_complex, s);
    }
    CHECK(min_slack >= -1e-10);
    CHECK(max_complex > 1e-6);
    // Nonnegative product states saturate it.
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      CVec u(8);
      for (int i = 0; i < 8; ++i) u(i) = uni(rng);
      u.normalize();
      const double s = hoffmann_ostenhof_slack(reduced_density_matrix(b, product_state(b, u), 1), m.h, N);
      CHECK(std::abs(s) < 1e-10);
    }
  }

  TEST_CASE("interaction lower bound: point masses give equality") {
    auto sp = torus(24);
    const Interaction w = cosine(sp, {1.0, 1.0, 0.5});
    const std::vector<int> cells{1, 5, 5, 17};
    std::vector<Point> x;
    for (int c : cells) x.push_back(sp->position(c));
    CHECK(std::abs(interaction_lower_bound_slack(w, point_masses(*sp, cells), x)) < 1e-10);
  }

  TEST_CASE("interaction lower bound: uniform eta on random configurations") {
    auto sp = torus(24);
    const Interaction w = cosine(sp, {1.0, 1.0});
    std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
    Rng rng(8);
    double worst = 1e300;
    const int N = 5;
    const RVec eta = RVec::Constant(24, N / (2.0 * kPi));
    for (int t = 0; t < 10000; ++t) {
      std::vector<Point> x(N);
      for (auto& p : x) p = {uni(rng), 0.0};
      worst = std::min(worst, interaction_lower_bound_slack(w, eta, x));
    }
    CHECK(worst >= -1e-10);
  }

  TEST_CASE("interaction lower bound: a single pair") {
    auto sp = torus(24);
    const Interaction w = cosine(sp, {0.5, 1.0, 0.25});
    Rng rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
      RVec eta(24);
      for (int i = 0; i < 24; ++i) eta(i) = uni(rng);
      const std::vector<Point> x{sp->position(3), sp->position(11)};
      // Slack = (1/2) iint w f f with f = delta_1 + delta_2 - eta, which is >= 0 for w_hat >= 0.
      RVec f = point_masses(*sp, {3, 11}) - eta;
      const double quad = 0.5 * sp->cell_volume() * f.dot(w.convolve(f));
      CHECK(interaction_lower_bound_slack(w, eta, x) == doctest::Approx(quad).epsilon(1e-10));
      CHECK(quad >= -1e-12);
    }
  }
}

TEST_SUITE("excitation decomposition") {
  TEST_CASE("condensate maps to the vacuum") {
    Rng rng(12);
    const CVec u = random_unit(4, rng);
    const auto b = FockBasis::fixed(4, 5);
    const auto x = excitation_decompose(b, product_state(b, u), u);
    CHECK(std::abs(std::abs(x.components[0](0)) - 1.0) < 1e-12);
    for (int n = 1; n <= 5; ++n) CHECK(x.components[n].norm() < 1e-12);
  }

  TEST_CASE("decomposition is unitary") {
    Rng rng(13);
    const CVec u = random_unit(3, rng);
    const auto b = FockBasis::fixed(3, 6);
    for (int t = 0; t < 5; ++t) {
      const CVec psi = random_unit(b.size(), rng);
      const auto x = excitation_decompose(b, psi, u);
      CHECK(std::abs(x.norm2() - 1.0) < 1e-12);
      CHECK((excitation_recompose(x, b) - psi).norm() < 1e-12);
    }
  }

  TEST_CASE("mode rotations act on product states") {
    Rng rng(14);
    const CVec c = random_unit(3, rng);
    CMat X(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) X(i, j) = complex_gaussian(rng);
    const CMat U = Eigen::HouseholderQR<CMat>(X).householderQ();
    const auto b = FockBasis::fixed(3, 4);
    const CVec lhs = apply_mode_rotation(b, U, product_state(b, c));
    CHECK((lhs - product_state(b, U * c)).norm() < 1e-11);
  }

  TEST_CASE("noninteracting spectra coincide with the quadratic ladder") {
    const ModeModel m = plane_wave_model(5, {0.0});
    const auto r = excitation_spectrum_convergence(m, {4, 6}, 5, 8);
    for (const auto& p : r.ladder)
      for (double d : p.deltas) CHECK(d < 1e-9);
  }

  TEST_CASE("spectra and ground states converge along the particle ladder") {
    const ModeModel m = plane_wave_model(5, {1.0, 1.0});
    const auto r = excitation_spectrum_convergence(m, {6, 10, 14}, 4, 10);
    CHECK(r.eta_min > 0.0);
    CHECK(r.deltas_decreasing);
    CHECK(r.overlap_increasing);
    for (std::size_t i = 1; i < r.ladder.size(); ++i) CHECK(r.ladder[i].distance < r.ladder[i - 1].distance);
  }
}
