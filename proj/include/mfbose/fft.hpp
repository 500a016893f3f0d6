#pragma once

#include <memory>
#include <vector>

#include "mfbose/common.hpp"

namespace mfbose {

/// Unnormalized complex DFT on a row-major d-dimensional grid (FFTW backend).
/// Plans are created once; execution is const and safe from several threads.
class FourierTransform {
 public:
  explicit FourierTransform(std::vector<int> extents);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  /// out_k = sum_j in_j exp(-2 pi i j.k / n)
  void forward(const cplx* in, cplx* out) const;
  /// out_j = sum_k in_k exp(+2 pi i j.k / n)
  void backward(const cplx* in, cplx* out) const;

  int size() const { return size_; }
  const std::vector<int>& extents() const { return extents_; }

 private:
  struct Plans;
  std::vector<int> extents_;
  int size_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Sine transform pair for cell-centred grids x_j = (j+1/2) L/n.
/// forward (DST-II): out_k = 2^d sum_j in_j prod_a sin(pi (j_a+1/2)(k_a+1) / n_a)
/// backward (DST-III) inverts it up to round_trip_factor() = prod_a 2 n_a.
class SineTransform {
 public:
  explicit SineTransform(std::vector<int> extents);
  ~SineTransform();
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  void forward(const double* in, double* out) const;
  void backward(const double* in, double* out) const;
  double round_trip_factor() const;

 private:
  struct Plans;
  std::vector<int> extents_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace mfbose
