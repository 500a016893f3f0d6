#include "mfbose/fock_basis.hpp"

#include <limits>
#include <numeric>

namespace mfbose {

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const std::int64_t num = n - k + i;
    if (r > std::numeric_limits<std::int64_t>::max() / num) throw BasisTooLarge("binomial overflow");
    r = r * num / i;
  }
  return r;
}

std::int64_t FockBasis::sector_dimension(int modes, int particles) {
  return binomial(particles + modes - 1, modes - 1);
}

namespace {

/// Position of a composition of `total` into parts.size() parts in
/// descending lexicographic order.
std::int64_t composition_rank(const std::vector<int>& parts, int total) {
  const int p = static_cast<int>(parts.size());
  std::int64_t rank = 0;
  int rest = total;
  for (int i = 0; i + 1 < p; ++i) {
    rest -= parts[i];
    const int tail = p - 1 - i;
    if (rest > 0) rank += binomial(rest - 1 + tail, tail);
  }
  return rank;
}

void enumerate(int mode, int left, std::vector<int>& cur, const std::function<void()>& emit) {
  const int M = static_cast<int>(cur.size());
  if (mode == M - 1) {
    cur[mode] = left;
    emit();
    return;
  }
  for (int n = left; n >= 0; --n) {
    cur[mode] = n;
    enumerate(mode + 1, left - n, cur, emit);
  }
  cur[mode] = 0;
}

}  // namespace

std::int64_t FockBasis::key(std::span<const int> occ) const {
  std::vector<int> parts(occ.begin(), occ.end());
  int sum = std::accumulate(parts.begin(), parts.end(), 0);
  if (fixed_) {
    if (sum != particles_) return -1;
    return composition_rank(parts, particles_);
  }
  if (sum > particles_) return -1;
  parts.push_back(particles_ - sum);
  return composition_rank(parts, particles_);
}

void FockBasis::push(std::span<const int> occ) {
  index_.emplace(key(occ), size());
  occ_.insert(occ_.end(), occ.begin(), occ.end());
}

FockBasis FockBasis::fixed(int modes, int particles) {
  if (modes < 1 || particles < 0) throw ConfigError("Fock basis needs modes >= 1 and N >= 0");
  FockBasis b(modes, particles, true);
  const std::int64_t dim = sector_dimension(modes, particles);
  if (dim > 50'000'000) throw BasisTooLarge("Fock sector of dimension " + std::to_string(dim));
  b.occ_.reserve(static_cast<std::size_t>(dim) * modes);
  std::vector<int> cur(modes, 0);
  enumerate(0, particles, cur, [&] { b.occ_.insert(b.occ_.end(), cur.begin(), cur.end()); });
  return b;
}

FockBasis FockBasis::truncated(int modes, int max_particles) {
  if (modes < 1 || max_particles < 0) throw ConfigError("Fock basis needs modes >= 1 and n_max >= 0");
  FockBasis b(modes, max_particles, false);
  b.complete_ = false;
  std::vector<int> cur(modes, 0);
  for (int n = 0; n <= max_particles; ++n) enumerate(0, n, cur, [&] { b.push(cur); });
  return b;
}

FockBasis FockBasis::filtered(const std::function<bool(std::span<const int>)>& keep) const {
  FockBasis b(modes_, particles_, fixed_);
  b.complete_ = false;
  for (int i = 0; i < size(); ++i)
    if (keep(state(i))) b.push(state(i));
  return b;
}

int FockBasis::total(int i) const {
  const auto s = state(i);
  return std::accumulate(s.begin(), s.end(), 0);
}

int FockBasis::find(std::span<const int> occ) const {
  for (int n : occ)
    if (n < 0) return -1;
  const std::int64_t k = key(occ);
  if (k < 0) return -1;
  if (complete_) return static_cast<int>(k);
  const auto it = index_.find(k);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace mfbose
