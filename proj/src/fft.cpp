#include "mfbose/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>

namespace mfbose {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FourierTransform::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

FourierTransform::FourierTransform(std::vector<int> extents)
    : extents_(std::move(extents)), plans_(std::make_unique<Plans>()) {
  size_ = std::accumulate(extents_.begin(), extents_.end(), 1, std::multiplies<>());
  std::vector<cplx> a(size_), b(size_);
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const int rank = static_cast<int>(extents_.size());
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_dft(rank, extents_.data(), pa, pb, FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->bwd = fftw_plan_dft(rank, extents_.data(), pa, pb, FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
}

void FourierTransform::forward(const cplx* in, cplx* out) const {
  // FFTW does not modify the input of an out-of-place complex transform.
  fftw_execute_dft(plans_->fwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void FourierTransform::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(plans_->bwd,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

struct SineTransform::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

SineTransform::SineTransform(std::vector<int> extents)
    : extents_(std::move(extents)), plans_(std::make_unique<Plans>()) {
  const int n = std::accumulate(extents_.begin(), extents_.end(), 1, std::multiplies<>());
  std::vector<double> a(n), b(n);
  std::vector<fftw_r2r_kind> fwd(extents_.size(), FFTW_RODFT10);
  std::vector<fftw_r2r_kind> bwd(extents_.size(), FFTW_RODFT01);
  const int rank = static_cast<int>(extents_.size());
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_r2r(rank, extents_.data(), a.data(), b.data(), fwd.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->bwd = fftw_plan_r2r(rank, extents_.data(), a.data(), b.data(), bwd.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SineTransform::~SineTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->bwd);
}

void SineTransform::forward(const double* in, double* out) const {
  fftw_execute_r2r(plans_->fwd, const_cast<double*>(in), out);
}

void SineTransform::backward(const double* in, double* out) const {
  fftw_execute_r2r(plans_->bwd, const_cast<double*>(in), out);
}

double SineTransform::round_trip_factor() const {
  double f = 1.0;
  for (int n : extents_) f *= 2.0 * n;
  return f;
}

}  // namespace mfbose
