#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mfbose {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr const char* kFileHeader = "# meanfield-bose-lab v1";

// ---------------------------------------------------------------------------
// Errors. Every failure mode named by an operation contract has its own type
// so callers (and the CLI exit-code mapping) can tell them apart.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct ResidualTooLarge : Error { using Error::Error; };
struct DegenerateHessian : Error { using Error::Error; };
struct NonIntegrable : Error { using Error::Error; };
struct BasisTooLarge : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct DegenerateGP : Error { using Error::Error; };
struct StepCollapse : Error { using Error::Error; };
struct TruncationLeak : Error { using Error::Error; };

/// Thrown by closed-form dispersion when the radicand goes negative.
struct InstabilityAt : Error {
  InstabilityAt(double k, double radicand)
      : Error("dispersion unstable at k=" + std::to_string(k) +
              " (radicand " + std::to_string(radicand) + ")"),
        momentum(k) {}
  double momentum;
};

// ---------------------------------------------------------------------------
// Randomness. A single 64-bit seed is split into independent streams with
// SplitMix64 so that restarts, batches and trials never share state.

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace mfbose
