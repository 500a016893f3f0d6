#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mfbose/common.hpp"
#include "mfbose/fft.hpp"

namespace mfbose {

enum class Boundary { Periodic, Dirichlet };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Point or displacement in at most two dimensions; unused axes are zero.
using Point = std::array<double, 2>;

struct ModelConfig {
  int dimension = 1;
  double extent = 2.0 * kPi;
  int grid = 64;
  Boundary boundary = Boundary::Periodic;
};

/// Discretized one-body space.
///
/// Periodic: nodes x_j = j L/M, plane waves e^{ik.x} with k in (2 pi/L) Z^d,
/// FFT ordering n = 0..ceil(M/2)-1, -floor(M/2)..-1.
/// Dirichlet: cell-centred nodes x_j = (j+1/2) L/M, modes sin(n pi x/L),
/// n = 1..M, diagonalised by the DST-II/DST-III pair.
/// Both grids use equal weights dx^d summing to L^d.
class ModelSpace {
 public:
  explicit ModelSpace(const ModelConfig& cfg);

  int dimension() const { return cfg_.dimension; }
  double extent() const { return cfg_.extent; }
  int grid() const { return cfg_.grid; }
  Boundary boundary() const { return cfg_.boundary; }
  bool periodic() const { return cfg_.boundary == Boundary::Periodic; }
  const ModelConfig& config() const { return cfg_; }

  int size() const { return size_; }
  double spacing() const { return cfg_.extent / cfg_.grid; }
  double cell_volume() const;
  double volume() const;
  RVec quadrature_weights() const;

  /// Multi-index of a flat (row-major) index.
  std::array<int, 2> unflatten(int flat) const;
  int flatten(std::array<int, 2> idx) const;

  Point position(int flat) const;
  /// Integer mode label per axis: signed FFT frequency (Periodic) or sine index n >= 1.
  std::array<int, 2> mode_label(int flat) const;
  Point momentum(int flat) const;
  /// Kinetic multipliers |k|^2 in transform order.
  const RVec& kinetic() const { return kinetic_; }

  /// Normalized mode function on the grid (plane wave or sine product).
  CVec mode_function(int flat) const;

  CVec apply_kinetic(const CVec& u) const;
  cplx inner(const CVec& u, const CVec& v) const;
  double norm(const CVec& u) const;
  void normalize(CVec& u) const;

  /// Wrap a displacement to the minimum image (Periodic); identity otherwise.
  Point wrap(Point d) const;

  const FourierTransform& fft() const { return *fft_; }
  const SineTransform& sine() const { return *sine_; }
  /// Transform on the difference grid used for convolutions.
  const FourierTransform& difference_fft() const { return *diff_fft_; }
  /// Points per axis of the difference grid: M (Periodic) or 2M (Dirichlet).
  int difference_grid() const { return periodic() ? cfg_.grid : 2 * cfg_.grid; }
  int difference_size() const;

 private:
  ModelConfig cfg_;
  int size_ = 0;
  RVec kinetic_;
  std::unique_ptr<FourierTransform> fft_;
  std::unique_ptr<SineTransform> sine_;
  std::unique_ptr<FourierTransform> diff_fft_;
};

using SpacePtr = std::shared_ptr<const ModelSpace>;

SpacePtr build_model(const ModelConfig& cfg);

/// Even pair interaction sampled on the difference grid.
///
/// The difference grid has spacing dx and P points per axis with period
/// P dx (L on the torus, 2L for Dirichlet so that zero-padded circular
/// convolution equals open-boundary quadrature). Coefficients
/// c_n = P^{-d} sum_m w(x_m) e^{-2 pi i m.n/P} satisfy
/// c = (2 pi)^{d/2} w_hat(k) / (P dx)^d with k = 2 pi n/(P dx).
class Interaction {
 public:
  using Function = std::function<double(const Point&)>;

  static Interaction from_function(SpacePtr space, Function f, std::string name);
  /// Samples in difference-grid FFT order.
  static Interaction from_samples(SpacePtr space, RVec samples, std::string name);
  /// Two-column table (x, w(x)) in d = 1, linearly interpolated. A table on
  /// x >= 0 only is mirrored; otherwise evenness is checked.
  static Interaction from_table(SpacePtr space, const std::vector<double>& x,
                                const std::vector<double>& w, std::string name);
  static Interaction from_coefficients(SpacePtr space, RVec coefficients, std::string name);

  const std::string& name() const { return name_; }
  const SpacePtr& space() const { return space_; }
  const RVec& samples() const { return samples_; }
  const RVec& coefficients() const { return coeffs_; }
  /// w_hat(k) under the (2 pi)^{-d/2} convention on the difference lattice.
  RVec fourier_transform() const;
  /// Momenta of the difference lattice, flat FFT order.
  Point difference_momentum(int flat) const;
  Point difference_position(int flat) const;

  /// factor * w, keeping any closed form.
  Interaction scaled(double factor) const;
  Interaction positive_part() const;
  Interaction negative_part() const;
  bool positive_definite(double tol = 1e-12) const;

  /// w(0) read from the samples.
  double at_origin() const { return samples_(0); }
  /// Sum of |c_n|: equals w1(0) + w2(0) for the split parts.
  double spectral_abs_sum() const { return coeffs_.cwiseAbs().sum(); }

  /// w at an arbitrary displacement: closed form when available, the
  /// Fourier series for coefficient-defined interactions, otherwise
  /// multilinear interpolation of the samples.
  double evaluate(Point d) const;
  /// Torus Fourier series sum_n c_n e^{ik.d}, exact for band-limited w.
  double fourier_series(Point d) const;

  /// w(x_i - x_j) for grid nodes i, j.
  double pair(int i, int j) const;

  /// (w * rho)(x_i) = sum_j w(x_i - x_j) rho_j dx^d.
  RVec convolve(const RVec& rho) const;
  CVec convolve(const CVec& f) const;

  /// (2 pi)^{d/2} w_hat(k) at the momenta of a periodic space, FFT order.
  RVec scaled_transform_on_space() const;

 private:
  Interaction(SpacePtr space, RVec samples, std::string name);
  int difference_index(int i, int j) const;

  SpacePtr space_;
  std::string name_;
  RVec samples_;
  RVec coeffs_;
  CVec spectrum_;
  Function closed_form_;
  bool band_limited_ = false;
};

/// Closed-form or tabulated interaction description.
struct InteractionSpec {
  std::string kind = "cosine";      // cosine | gaussian | lennard-jones | constant | zero | csv
  std::vector<double> coefficients{1.0, 1.0};  // cosine: w = a0 + sum_n a_n sum_axes cos(2 pi n x_a / L)
  double amplitude = 1.0;           // gaussian / constant
  double width = 1.0;               // gaussian
  double cap = 1e3;                 // lennard-jones truncation
  std::string path;                 // csv
};

Interaction make_interaction(const InteractionSpec& spec, SpacePtr space);

/// h = -Laplacian + V.
class OneBodyOperator {
 public:
  explicit OneBodyOperator(SpacePtr space, RVec potential = RVec());

  const SpacePtr& space() const { return space_; }
  const RVec& potential() const { return potential_; }
  bool has_potential() const { return has_potential_; }

  CVec apply(const CVec& u) const;
  /// Dense matrix acting on grid values (equivalently on sqrt(dx^d)-scaled amplitudes).
  RMat grid_matrix() const;
  /// Dense matrix in the mode basis (plane waves or sines).
  CMat mode_matrix() const;
  /// Second-order finite-difference realization; off-diagonals are <= 0.
  RMat finite_difference_matrix() const;

  /// Lowest eigenfunction, positive and L2-normalized.
  CVec ground_mode() const;
  double ground_energy() const;

 private:
  SpacePtr space_;
  RVec potential_;
  bool has_potential_ = false;
};

struct MeanFieldReport {
  int particles = 0;
  int points = 0;
  double max_deviation = 0.0;
  /// Three standard errors of the empirical field, maximised over points.
  double band = 0.0;
  bool degenerate = false;
  std::uint64_t seed = 0;
};

/// Sample N positions from |u|^2 and compare the empirical mean field
/// (N-1)^{-1} sum_{k != j} w(x_j - x_k) with (w * |u|^2)(x_j) at
/// min(N, max_points) of the sampled points.
MeanFieldReport mean_field_consistency_check(const CVec& u, const Interaction& w, int N,
                                             std::uint64_t seed, int max_points = 512);

struct MeanFieldLadder {
  std::vector<MeanFieldReport> reports;
  double slope = 0.0;
};

MeanFieldLadder mean_field_ladder(const CVec& u, const Interaction& w,
                                  const std::vector<int>& Ns, std::uint64_t seed);

struct StabilityReport {
  std::vector<int> ladder;
  /// Lowest N^{-1} sum_{j<k} w found at each ladder size.
  std::vector<double> energy_per_particle;
  double stable_estimate = 0.0;
  /// Fit E/N = eps N / (2 |Omega|) - C over the ladder.
  double superstable_epsilon = 0.0;
  double offset_C = 0.0;
  bool flagged = false;
  std::uint64_t seed = 0;
};

StabilityReport classical_stability_probe(const Interaction& w, int N, int trials,
                                          std::uint64_t seed);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mfbose
