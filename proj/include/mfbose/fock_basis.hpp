#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mfbose/common.hpp"

namespace mfbose {

/// Occupation-number basis of a bosonic mode set.
///
/// Either a fixed particle number N (states ordered lexicographically
/// descending, so (N,0,...,0) comes first) or all states with at most
/// n_max particles (ordered by total number, then as above).
class FockBasis {
 public:
  static FockBasis fixed(int modes, int particles);
  static FockBasis truncated(int modes, int max_particles);

  /// Sub-basis of the states for which keep(occupations) is true.
  FockBasis filtered(const std::function<bool(std::span<const int>)>& keep) const;

  int modes() const { return modes_; }
  int size() const { return static_cast<int>(occ_.size() / std::max(1, modes_)); }
  bool fixed_number() const { return fixed_; }
  /// N for fixed bases, n_max for truncated ones.
  int particles() const { return particles_; }

  std::span<const int> state(int i) const {
    return {occ_.data() + static_cast<std::size_t>(i) * modes_, static_cast<std::size_t>(modes_)};
  }
  int total(int i) const;
  /// Index of the occupation vector, or -1 when it is not in the basis.
  int find(std::span<const int> occ) const;

  /// C(N + M - 1, M - 1).
  static std::int64_t sector_dimension(int modes, int particles);

 private:
  FockBasis(int modes, int particles, bool fixed) : modes_(modes), particles_(particles), fixed_(fixed) {}
  std::int64_t key(std::span<const int> occ) const;
  void push(std::span<const int> occ);

  int modes_ = 0;
  int particles_ = 0;
  bool fixed_ = true;
  bool complete_ = true;
  std::vector<int> occ_;
  std::unordered_map<std::int64_t, int> index_;
};

/// Binomial coefficient as a 64-bit integer; throws BasisTooLarge on overflow.
std::int64_t binomial(int n, int k);

}  // namespace mfbose
