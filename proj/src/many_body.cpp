#include "mfbose/many_body.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mfbose {

double ManyBodyOperator::hermiticity_defect() const {
  const SpMat d = matrix - SpMat(matrix.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

namespace {

using Triplet = Eigen::Triplet<cplx>;

/// Applies a_{c0}^dag ... a_{ck}^dag a_{a0} ... a_{aj} (annihilators act first,
/// rightmost first) to occ in place; returns the amplitude, 0 when it vanishes.
double apply_string(std::vector<int>& occ, std::initializer_list<int> create,
                    std::initializer_list<int> annihilate) {
  double amp = 1.0;
  for (auto it = std::rbegin(annihilate); it != std::rend(annihilate); ++it) {
    if (occ[*it] == 0) return 0.0;
    amp *= std::sqrt(static_cast<double>(occ[*it]));
    --occ[*it];
  }
  for (auto it = std::rbegin(create); it != std::rend(create); ++it) {
    ++occ[*it];
    amp *= std::sqrt(static_cast<double>(occ[*it]));
  }
  return amp;
}

class Assembler {
 public:
  Assembler(const FockBasis& b, bool project, std::size_t cap) : b_(b), project_(project), cap_(cap) {}

  void add(int row_state, std::vector<int>& scratch, cplx coef, std::initializer_list<int> create,
           std::initializer_list<int> annihilate) {
    const auto s = b_.state(row_state);
    scratch.assign(s.begin(), s.end());
    const double amp = apply_string(scratch, create, annihilate);
    if (amp == 0.0) return;
    const int col = b_.find(scratch);
    if (col < 0) {
      if (project_ || std::abs(coef) * amp < 1e-13) return;
      throw Error("Fock basis is not closed under the operator");
    }
    // <col| O |row>
    trips_.emplace_back(col, row_state, coef * amp);
    if (trips_.size() > 4 * cap_) compress();
  }

  SpMat finish() {
    compress();
    return mat_;
  }

 private:
  void compress() {
    SpMat part(b_.size(), b_.size());
    part.setFromTriplets(trips_.begin(), trips_.end());
    trips_.clear();
    mat_ = mat_.size() == 0 ? part : SpMat(mat_ + part);
    mat_.prune(cplx(0.0), 0.0);
    if (static_cast<std::size_t>(mat_.nonZeros()) > cap_)
      throw BasisTooLarge("operator exceeds " + std::to_string(cap_) + " non-zeros");
  }

  const FockBasis& b_;
  bool project_;
  std::size_t cap_;
  std::vector<Triplet> trips_;
  SpMat mat_;
};

}  // namespace

ManyBodyOperator build_hamiltonian(const ModeModel& m, const FockBasis& basis, double lambda,
                                   std::size_t max_nonzeros) {
  const int M = m.size();
  if (basis.modes() != M) throw Error("basis and mode model disagree on the mode count");
  Assembler as(basis, false, max_nonzeros);
  std::vector<int> scratch;
  for (int s = 0; s < basis.size(); ++s) {
    const auto occ = basis.state(s);
    for (int p = 0; p < M; ++p) {
      if (occ[p] == 0) continue;
      for (int a = 0; a < M; ++a)
        if (m.h(a, p) != 0.0) as.add(s, scratch, m.h(a, p), {a}, {p});
      if (lambda == 0.0) continue;
      for (int q = 0; q < M; ++q) {
        if (occ[q] == 0 || (p == q && occ[p] < 2)) continue;
        for (int a = 0; a < M; ++a)
          for (int b = 0; b < M; ++b) {
            const cplx W = m.w(a, b, p, q);
            if (W == 0.0) continue;
            as.add(s, scratch, 0.5 * lambda * W, {a, b}, {q, p});
          }
      }
    }
  }
  ManyBodyOperator op{basis, as.finish(), lambda, "H_N"};
  return op;
}

ManyBodyOperator build_hamiltonian(const ModeModel& m, int N) {
  return build_hamiltonian(m, FockBasis::fixed(m.size(), N), N > 1 ? 1.0 / (N - 1) : 0.0);
}

std::vector<MomentumSector> momentum_sectors(const ModeModel& m, int N) {
  if (!m.translation_invariant()) throw Error("momentum sectors need a translation-invariant model");
  const int G = m.space->grid();
  const FockBasis full = FockBasis::fixed(m.size(), N);
  auto total = [&](std::span<const int> occ) {
    std::array<int, 2> K{0, 0};
    for (int i = 0; i < m.size(); ++i)
      for (int a = 0; a < 2; ++a) K[a] += occ[i] * m.momenta[i][a];
    for (int a = 0; a < 2; ++a) K[a] = ((K[a] % G) + G) % G;
    return K;
  };
  std::map<std::array<int, 2>, int> seen;
  for (int i = 0; i < full.size(); ++i) seen.emplace(total(full.state(i)), 0);
  std::vector<MomentumSector> out;
  for (const auto& [K, unused] : seen)
    out.push_back({K, full.filtered([&, K = K](std::span<const int> occ) { return total(occ) == K; })});
  return out;
}

std::vector<double> many_body_spectrum(const ModeModel& m, int N, int J, const EigenOptions& opts) {
  const double lambda = N > 1 ? 1.0 / (N - 1) : 0.0;
  std::vector<double> all;
  if (m.translation_invariant()) {
    for (const auto& sec : momentum_sectors(m, N)) {
      const ManyBodyOperator H = build_hamiltonian(m, sec.basis, lambda);
      const EigenPairs ep = lowest_eigenpairs(H.matrix, std::min(J, H.dimension()), opts);
      for (int i = 0; i < ep.values.size(); ++i) all.push_back(ep.values(i));
    }
  } else {
    const ManyBodyOperator H = build_hamiltonian(m, N);
    const EigenPairs ep = lowest_eigenpairs(H.matrix, std::min(J, H.dimension()), opts);
    for (int i = 0; i < ep.values.size(); ++i) all.push_back(ep.values(i));
  }
  std::sort(all.begin(), all.end());
  if (static_cast<int>(all.size()) > J) all.resize(J);
  return all;
}

GroundState many_body_ground_state(const ModeModel& m, int N, const EigenOptions& opts) {
  const double lambda = N > 1 ? 1.0 / (N - 1) : 0.0;
  GroundState gs{FockBasis::fixed(m.size(), N), CVec(), 0.0};
  if (m.translation_invariant()) {
    bool first = true;
    for (const auto& sec : momentum_sectors(m, N)) {
      const ManyBodyOperator H = build_hamiltonian(m, sec.basis, lambda);
      const EigenPairs ep = lowest_eigenpairs(H.matrix, 1, opts);
      if (first || ep.values(0) < gs.energy - 1e-12) {
        gs.energy = ep.values(0);
        gs.psi = embed(sec.basis, ep.vectors.col(0), gs.basis);
        first = false;
      }
    }
  } else {
    const ManyBodyOperator H = build_hamiltonian(m, gs.basis, lambda);
    const EigenPairs ep = lowest_eigenpairs(H.matrix, 1, opts);
    gs.energy = ep.values(0);
    gs.psi = ep.vectors.col(0);
  }
  return gs;
}

CVec product_state(const FockBasis& basis, const CVec& c) {
  if (!basis.fixed_number()) throw Error("product states live in a fixed-N basis");
  const int N = basis.particles();
  CVec out(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto occ = basis.state(i);
    double logf = std::lgamma(N + 1.0);
    cplx amp = 1.0;
    bool zero = false;
    for (int k = 0; k < basis.modes(); ++k) {
      logf -= std::lgamma(occ[k] + 1.0);
      if (occ[k] > 0) {
        if (c(k) == 0.0) zero = true;
        amp *= std::pow(c(k), occ[k]);
      }
    }
    out(i) = zero ? cplx(0.0) : amp * std::exp(0.5 * logf);
  }
  return out;
}

SpMat second_quantize(const FockBasis& basis, const CMat& G) {
  const int M = basis.modes();
  Assembler as(basis, false, kMaxNonzeros * 8);
  std::vector<int> scratch;
  for (int s = 0; s < basis.size(); ++s) {
    const auto occ = basis.state(s);
    for (int p = 0; p < M; ++p) {
      if (occ[p] == 0) continue;
      for (int a = 0; a < M; ++a)
        if (G(a, p) != 0.0) as.add(s, scratch, G(a, p), {a}, {p});
    }
  }
  return as.finish();
}

ManyBodyOperator quadratic_fock_hamiltonian(const QuadraticHamiltonian& q, int n_max, bool even_only) {
  const int m = q.modes();
  FockBasis basis = FockBasis::truncated(m, n_max);
  if (even_only)
    basis = basis.filtered([](std::span<const int> occ) {
      int n = 0;
      for (int k : occ) n += k;
      return n % 2 == 0;
    });
  Assembler as(basis, true, kMaxNonzeros * 8);
  std::vector<int> scratch;
  for (int s = 0; s < basis.size(); ++s) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (q.A(i, j) != 0.0) as.add(s, scratch, q.A(i, j), {i}, {j});
        if (q.B(i, j) != 0.0) {
          as.add(s, scratch, 0.5 * q.B(i, j), {i, j}, {});
          as.add(s, scratch, 0.5 * std::conj(q.B(i, j)), {}, {j, i});
        }
      }
  }
  SpMat mat = as.finish();
  return {std::move(basis), std::move(mat), 0.0, "H_0"};
}

CVec embed(const FockBasis& from, const CVec& v, const FockBasis& into) {
  CVec out = CVec::Zero(into.size());
  for (int i = 0; i < from.size(); ++i) {
    const int j = into.find(from.state(i));
    if (j < 0) throw Error("embed: state missing from the target basis");
    out(j) = v(i);
  }
  return out;
}

}  // namespace mfbose
