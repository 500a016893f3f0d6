#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mfbose/lattice_model.hpp"
#include "oracles.hpp"

using namespace mfbose;

namespace {

SpacePtr torus(int M, double L = 2.0 * kPi) { return build_model({1, L, M, Boundary::Periodic}); }

InteractionSpec cosine(std::vector<double> a) {
  InteractionSpec s;
  s.kind = "cosine";
  s.coefficients = std::move(a);
  return s;
}

InteractionSpec lennard_jones() {
  InteractionSpec s;
  s.kind = "lennard-jones";
  s.cap = 1e3;
  return s;
}

double lj(double x) {
  if (x == 0.0) return 1e3;
  const double r6 = std::pow(x * x, 3);
  return std::min(1e3, 1.0 / (r6 * r6) - 1.0 / r6);
}

}  // namespace

TEST_SUITE("fft") {
  TEST_CASE("complex transform matches the naive DFT") {
    Rng rng(7);
    for (int n : {8, 15, 32}) {
      std::vector<cplx> in(n);
      for (auto& v : in) v = complex_gaussian(rng);
      FourierTransform f({n});
      std::vector<cplx> out(n), back(n);
      f.forward(in.data(), out.data());
      const auto ref = oracle::dft(in, -1);
      for (int k = 0; k < n; ++k) CHECK(std::abs(out[k] - ref[k]) < 1e-11);
      f.backward(out.data(), back.data());
      for (int j = 0; j < n; ++j) CHECK(std::abs(back[j] / double(n) - in[j]) < 1e-12);
    }
  }

  TEST_CASE("sine transform matches the naive DST-II and round-trips") {
    Rng rng(8);
    std::normal_distribution<double> g;
    const int n = 12;
    std::vector<double> in(n), out(n), back(n);
    for (auto& v : in) v = g(rng);
    SineTransform s({n});
    s.forward(in.data(), out.data());
    const auto ref = oracle::dst2(in);
    for (int k = 0; k < n; ++k) CHECK(out[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    s.backward(out.data(), back.data());
    for (int j = 0; j < n; ++j) CHECK(back[j] / s.round_trip_factor() == doctest::Approx(in[j]).epsilon(1e-12));
  }
}

TEST_SUITE("model space") {
  TEST_CASE("periodic momentum lattice") {
    auto sp = torus(64);
    std::set<int> labels;
    for (int i = 0; i < sp->size(); ++i) {
      labels.insert(sp->mode_label(i)[0]);
      CHECK(sp->momentum(i)[0] == doctest::Approx(sp->mode_label(i)[0]));
    }
    CHECK(labels.size() == 64);
    CHECK(*labels.begin() == -32);
    CHECK(*labels.rbegin() == 31);
    CHECK(sp->quadrature_weights().sum() == doctest::Approx(2.0 * kPi));
  }

  TEST_CASE("Dirichlet sine modes") {
    auto sp = build_model({1, 10.0, 128, Boundary::Dirichlet});
    CHECK(sp->quadrature_weights().sum() == doctest::Approx(10.0));
    for (int i : {0, 5, 100}) {
      const int n = sp->mode_label(i)[0];
      CHECK(n >= 1);
      CHECK(n <= 128);
      const CVec phi = sp->mode_function(i);
      const double x = sp->position(3)[0];
      CHECK(std::abs(phi(3) - std::sin(n * kPi * x / 10.0) * std::sqrt(2.0 / 10.0)) < 1e-12);
      CHECK(sp->kinetic()(i) == doctest::Approx(std::pow(n * kPi / 10.0, 2)));
    }
  }

  TEST_CASE("two-dimensional torus") {
    auto sp = build_model({2, 2.0 * kPi, 16, Boundary::Periodic});
    CHECK(sp->size() == 256);
    for (int i = 0; i < sp->size(); ++i) {
      const auto l = sp->mode_label(i);
      CHECK(l[0] >= -8);
      CHECK(l[0] < 8);
      CHECK(l[1] >= -8);
      CHECK(l[1] < 8);
    }
  }

  TEST_CASE("invalid configurations are rejected") {
    CHECK_THROWS_AS(build_model({1, 1.0, 1, Boundary::Periodic}), ConfigError);
    CHECK_THROWS_AS(build_model({1, 0.0, 8, Boundary::Periodic}), ConfigError);
    CHECK_THROWS_AS(build_model({3, 1.0, 8, Boundary::Periodic}), ConfigError);
    CHECK_THROWS_AS(boundary_from_string("robin"), ConfigError);
  }

  TEST_CASE("normalize gives unit norm") {
    auto sp = build_model({1, 3.0, 40, Boundary::Dirichlet});
    Rng rng(1);
    CVec u(sp->size());
    for (int i = 0; i < u.size(); ++i) u(i) = complex_gaussian(rng);
    sp->normalize(u);
    CHECK(std::abs(sp->norm(u) - 1.0) < 1e-12);
  }
}

TEST_SUITE("interaction") {
  TEST_CASE("1 + cos x has Fourier coefficients 1 and 1/2") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({1.0, 1.0}), sp);
    const RVec& c = w.coefficients();
    CHECK(c(0) == doctest::Approx(1.0));
    CHECK(c(1) == doctest::Approx(0.5));
    CHECK(c(31) == doctest::Approx(0.5));
    for (int n = 2; n < 31; ++n) CHECK(std::abs(c(n)) < 1e-14);
    CHECK(w.positive_definite());
    CHECK(w.negative_part().samples().cwiseAbs().maxCoeff() < 1e-14);
    // c_k = (2 pi)^{1/2} w_hat(k) / L.
    const RVec wh = w.fourier_transform();
    CHECK(std::sqrt(2.0 * kPi) * wh(1) / (2.0 * kPi) == doctest::Approx(0.5));
  }

  TEST_CASE("cos x - cos 2x splits at k = +-2") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({0.0, 1.0, -1.0}), sp);
    const RVec c2 = w.negative_part().coefficients();
    for (int n = 0; n < 32; ++n) {
      if (n == 2 || n == 30) CHECK(c2(n) == doctest::Approx(0.5));
      else CHECK(std::abs(c2(n)) < 1e-14);
    }
    CHECK_FALSE(w.positive_definite());
  }

  TEST_CASE("split parts are disjoint and recombine exactly") {
    auto sp = build_model({1, 10.0, 64, Boundary::Dirichlet});
    const Interaction w = make_interaction(lennard_jones(), sp);
    const RVec c1 = w.positive_part().coefficients(), c2 = w.negative_part().coefficients();
    CHECK((c1.array() * c2.array()).abs().maxCoeff() == 0.0);
    CHECK((c1 - c2 - w.coefficients()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c1.minCoeff() >= 0.0);
    CHECK(c2.minCoeff() >= 0.0);
    CHECK(w.coefficients().maxCoeff() > 0.0);
    CHECK(w.coefficients().minCoeff() < 0.0);
    CHECK(w.samples().allFinite());
    // w1(0) + w2(0) from the real-space peaks of the split parts.
    const double peaks = w.positive_part().at_origin() + w.negative_part().at_origin();
    CHECK(std::abs(peaks - w.spectral_abs_sum()) < 1e-10 * std::max(1.0, peaks));
  }

  TEST_CASE("Parseval between samples and coefficients") {
    auto sp = torus(48, 5.0);
    InteractionSpec g;
    g.kind = "gaussian";
    g.amplitude = 2.0;
    g.width = 0.6;
    const Interaction w = make_interaction(g, sp);
    const double lhs = w.samples().squaredNorm() / w.samples().size();
    const double rhs = w.coefficients().squaredNorm();
    CHECK(std::abs(lhs - rhs) < 1e-10 * lhs);
  }

  TEST_CASE("Fourier round trip reproduces the samples") {
    auto sp = torus(40, 7.0);
    const Interaction w = make_interaction(cosine({0.3, 1.0, -0.4, 0.2}), sp);
    const Interaction v = Interaction::from_coefficients(sp, w.coefficients(), "copy");
    CHECK((v.samples() - w.samples()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("odd samples are rejected") {
    auto sp = torus(16);
    RVec s = RVec::Zero(16);
    s(1) = 1.0;
    CHECK_THROWS_AS(Interaction::from_samples(sp, s, "odd"), ConfigError);
  }

  TEST_CASE("tabulated interaction is mirrored and interpolated") {
    auto sp = build_model({1, 4.0, 32, Boundary::Dirichlet});
    const std::string path = (std::filesystem::temp_directory_path() / "mfbose_test_table.csv").string();
    {
      std::ofstream f(path);
      for (int i = 0; i <= 80; ++i) f << i * 0.1 << "," << std::exp(-i * 0.1) << "\n";
    }
    InteractionSpec s;
    s.kind = "csv";
    s.path = path;
    const Interaction w = make_interaction(s, sp);
    CHECK(w.pair(0, 0) == doctest::Approx(1.0));
    CHECK(w.pair(0, 10) == doctest::Approx(std::exp(-1.25)).epsilon(1e-2));
    CHECK(w.pair(10, 0) == doctest::Approx(w.pair(0, 10)));
  }
}

TEST_SUITE("convolution") {
  TEST_CASE("uniform density against 1 + cos x gives the mean of w") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({1.0, 1.0}), sp);
    const RVec rho = RVec::Constant(32, 1.0 / (2.0 * kPi));
    CHECK((w.convolve(rho).array() - 1.0).abs().maxCoeff() < 1e-12);
  }

  TEST_CASE("single-cell density reproduces shifted w") {
    auto sp = torus(64);
    const Interaction w = make_interaction(cosine({1.0, 1.0}), sp);
    RVec rho = RVec::Zero(64);
    rho(10) = 1.0 / sp->cell_volume();
    const RVec f = w.convolve(rho);
    const double x10 = sp->position(10)[0];
    for (int i = 0; i < 64; ++i) CHECK(std::abs(f(i) - (1.0 + std::cos(sp->position(i)[0] - x10))) < 1e-12);
  }

  TEST_CASE("Dirichlet Lennard-Jones convolution equals direct quadrature") {
    auto sp = build_model({1, 10.0, 128, Boundary::Dirichlet});
    const Interaction w = make_interaction(lennard_jones(), sp);
    const CVec u = OneBodyOperator(sp).ground_mode();
    const RVec rho = u.cwiseAbs2();
    std::vector<double> x(sp->size());
    for (int i = 0; i < sp->size(); ++i) x[i] = sp->position(i)[0];
    const RVec ref = oracle::direct_convolution(lj, x, rho, sp->spacing(), 10.0, false);
    CHECK((w.convolve(rho) - ref).cwiseAbs().maxCoeff() < 1e-10 * ref.cwiseAbs().maxCoeff());
  }

  TEST_CASE("random periodic densities equal direct quadrature") {
    const double L = 6.0;
    auto sp = torus(50, L);
    InteractionSpec g;
    g.kind = "gaussian";
    g.width = 0.8;
    const Interaction w = make_interaction(g, sp);
    Rng rng(5);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RVec rho(50);
    for (int i = 0; i < 50; ++i) rho(i) = uni(rng);
    rho /= rho.sum() * sp->cell_volume();
    std::vector<double> x(50);
    for (int i = 0; i < 50; ++i) x[i] = sp->position(i)[0];
    // The torus interaction is the periodic sampling of w on the minimum image.
    auto wf = [](double d) { return std::exp(-d * d / (2.0 * 0.64)); };
    const RVec ref = oracle::direct_convolution(wf, x, rho, sp->spacing(), L, true);
    CHECK((w.convolve(rho) - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_SUITE("one-body operator") {
  TEST_CASE("dense realizations are Hermitian and agree with apply") {
    auto sp = build_model({1, 8.0, 24, Boundary::Dirichlet});
    RVec V(24);
    for (int i = 0; i < 24; ++i) V(i) = std::pow(sp->position(i)[0] - 4.0, 2) / 4.0;
    const OneBodyOperator h(sp, V);
    const RMat G = h.grid_matrix();
    CHECK((G - G.transpose()).cwiseAbs().maxCoeff() < 1e-12 * G.cwiseAbs().maxCoeff());
    const CMat Hm = h.mode_matrix();
    CHECK((Hm - Hm.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * Hm.cwiseAbs().maxCoeff());
    Rng rng(2);
    CVec u(24);
    for (int i = 0; i < 24; ++i) u(i) = complex_gaussian(rng);
    CHECK((G.cast<cplx>() * u - h.apply(u)).norm() < 1e-10 * u.norm() * G.norm());
    const RMat F = h.finite_difference_matrix();
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j)
        if (i != j) CHECK(F(i, j) <= 0.0);
  }

  TEST_CASE("ground mode of the free box") {
    auto sp = build_model({1, 10.0, 64, Boundary::Dirichlet});
    const OneBodyOperator h(sp);
    CHECK(h.ground_energy() == doctest::Approx(std::pow(kPi / 10.0, 2)).epsilon(1e-12));
    CHECK(h.ground_mode().real().minCoeff() > 0.0);
  }
}

TEST_SUITE("mean field and stability") {
  TEST_CASE("N = 2 empirical field is the pair value") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({0.0, 1.0}), sp);
    const CVec u = CVec::Constant(32, 1.0 / std::sqrt(2.0 * kPi));
    const auto r = mean_field_consistency_check(u, w, 2, 3);
    CHECK(r.points == 2);
    CHECK(r.band == 0.0);
    CHECK_FALSE(r.degenerate);
  }

  TEST_CASE("uniform density and cos x: empirical field vanishes") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({0.0, 1.0}), sp);
    const CVec u = CVec::Constant(32, 1.0 / std::sqrt(2.0 * kPi));
    const auto r = mean_field_consistency_check(u, w, 10000, 11);
    CHECK(r.max_deviation <= 5e-2);
    CHECK(r.max_deviation <= r.band);
  }

  TEST_CASE("deviation decays like N^{-1/2}") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({0.0, 1.0}), sp);
    const CVec u = CVec::Constant(32, 1.0 / std::sqrt(2.0 * kPi));
    const auto lad = mean_field_ladder(u, w, {100, 1000, 10000, 100000}, 4);
    CHECK(lad.slope == doctest::Approx(-0.5).epsilon(0.4));
  }

  TEST_CASE("mass in one cell is flagged degenerate") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({0.0, 1.0}), sp);
    CVec u = CVec::Zero(32);
    u(4) = 1.0;
    sp->normalize(u);
    CHECK(mean_field_consistency_check(u, w, 10, 1).degenerate);
  }

  TEST_CASE("constant attraction is flagged") {
    auto sp = build_model({1, 5.0, 16, Boundary::Dirichlet});
    InteractionSpec s;
    s.kind = "constant";
    s.amplitude = -1.0;
    const auto r = classical_stability_probe(make_interaction(s, sp), 10, 2, 1);
    CHECK(r.stable_estimate == doctest::Approx(-45.0 / 10.0));
    CHECK(r.flagged);
  }

  TEST_CASE("positive-definite w is bounded below by -w(0)/2 per particle") {
    auto sp = torus(32);
    const Interaction w = make_interaction(cosine({1.0, 1.0}), sp);
    const auto r = classical_stability_probe(w, 8, 3, 2);
    for (double e : r.energy_per_particle) CHECK(e >= -w.at_origin() / 2.0 - 1e-12);
    CHECK_FALSE(r.flagged);
  }

  TEST_CASE("truncated Lennard-Jones at unit density is not flagged") {
    auto sp = build_model({1, 10.0, 64, Boundary::Dirichlet});
    const auto r = classical_stability_probe(make_interaction(lennard_jones(), sp), 10, 3, 5);
    CHECK_FALSE(r.flagged);
    CHECK(std::isfinite(r.stable_estimate));
  }
}
