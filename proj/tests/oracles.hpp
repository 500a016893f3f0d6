#pragma once

// Brute-force reference computations used only by the tests. None of these
// call into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// O(n^2) DFT, out_k = sum_j in_j exp(sign 2 pi i j k / n).
inline std::vector<cplx> dft(const std::vector<cplx>& in, int sign = -1) {
  const int n = static_cast<int>(in.size());
  std::vector<cplx> out(n);
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += in[j] * std::polar(1.0, sign * 2.0 * kPi * j * k / n);
    out[k] = s;
  }
  return out;
}

/// O(n^2) DST-II on cell-centred nodes, out_k = 2 sum_j in_j sin(pi (j+1/2)(k+1)/n).
inline std::vector<double> dst2(const std::vector<double>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out[k] += 2.0 * in[j] * std::sin(kPi * (j + 0.5) * (k + 1) / n);
  return out;
}

/// (w * rho)(x_i) = sum_j w(x_i - x_j) rho_j dx with the displacement
/// wrapped to the minimum image on a torus of length L (periodic) or left
/// as is (open boundary).
inline RVec direct_convolution(const std::function<double(double)>& w, const std::vector<double>& x,
                               const RVec& rho, double dx, double L, bool periodic) {
  const int n = static_cast<int>(x.size());
  RVec out = RVec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = x[i] - x[j];
      if (periodic) d -= L * std::round(d / L);
      out(i) += w(d) * rho(j) * dx;
    }
  return out;
}

/// iint w(x - y) rho(x) rho(y) by direct double sum.
inline double direct_pair_energy(const std::function<double(double)>& w, const std::vector<double>& x,
                                 const RVec& rho, double dx, double L, bool periodic) {
  return rho.dot(direct_convolution(w, x, rho, dx, L, periodic)) * dx;
}

/// Binomial coefficient from Pascal's triangle.
inline std::int64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::int64_t> row{1};
  for (int r = 1; r <= n; ++r) {
    std::vector<std::int64_t> next(r + 1, 1);
    for (int i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return row[k];
}

/// All occupation vectors over M modes with N particles, in the tensor
/// product basis: maps an occupation vector to the list of tensor indices
/// (base-M words of length N) realizing it.
inline std::map<std::vector<int>, std::vector<int>> occupation_classes(int M, int N) {
  std::map<std::vector<int>, std::vector<int>> out;
  int total = 1;
  for (int i = 0; i < N; ++i) total *= M;
  for (int t = 0; t < total; ++t) {
    std::vector<int> occ(M, 0);
    int r = t;
    for (int i = 0; i < N; ++i) {
      occ[r % M]++;
      r /= M;
    }
    out[occ].push_back(t);
  }
  return out;
}

/// First-quantized H = sum_j h_j + lambda sum_{j<k} W_jk on (C^M)^{(x)N},
/// with <m n|W|p q> = W(m, n, p, q).
inline CMat tensor_hamiltonian(const CMat& h, const std::function<cplx(int, int, int, int)>& W, int N,
                               double lambda) {
  const int M = static_cast<int>(h.rows());
  int total = 1;
  for (int i = 0; i < N; ++i) total *= M;
  auto digits = [&](int t) {
    std::vector<int> d(N);
    for (int i = 0; i < N; ++i) {
      d[i] = t % M;
      t /= M;
    }
    return d;
  };
  CMat H = CMat::Zero(total, total);
  for (int a = 0; a < total; ++a) {
    const auto da = digits(a);
    for (int b = 0; b < total; ++b) {
      const auto db = digits(b);
      cplx s = 0.0;
      for (int j = 0; j < N; ++j) {
        bool rest = true;
        for (int i = 0; i < N && rest; ++i)
          if (i != j && da[i] != db[i]) rest = false;
        if (rest) s += h(da[j], db[j]);
      }
      for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
          bool rest = true;
          for (int i = 0; i < N && rest; ++i)
            if (i != j && i != k && da[i] != db[i]) rest = false;
          if (rest) s += lambda * W(da[j], da[k], db[j], db[k]);
        }
      H(a, b) = s;
    }
  }
  return H;
}

/// Normalized symmetric tensor of an occupation vector: uniform amplitude
/// over all words realizing it.
inline CVec symmetric_vector(int M, int N, const std::vector<int>& occ) {
  int total = 1;
  for (int i = 0; i < N; ++i) total *= M;
  CVec v = CVec::Zero(total);
  const auto classes = occupation_classes(M, N);
  const auto& words = classes.at(occ);
  for (int t : words) v(t) = 1.0 / std::sqrt(static_cast<double>(words.size()));
  return v;
}

/// Product tensor c^{(x)N}.
inline CVec tensor_power(const CVec& c, int N) {
  CVec v = CVec::Ones(1);
  for (int i = 0; i < N; ++i) {
    CVec next(v.size() * c.size());
    // Word index t = sum_i d_i M^i, so the newest factor is the most significant digit.
    for (int a = 0; a < c.size(); ++a) next.segment(a * v.size(), v.size()) = c(a) * v;
    v = next;
  }
  return v;
}

/// Single-mode Bogoliubov: H = a b^dag b + (b/2)(b^dag b^dag + b b).
struct SingleMode {
  double excitation;
  double ground_energy;
};
inline SingleMode single_mode_bogoliubov(double a, double b) {
  const double e = std::sqrt(a * a - b * b);
  return {e, 0.5 * (e - a)};
}

/// Composite trapezoid rule on [lo, hi] with n panels.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) s += f(lo + i * h);
  return s * h;
}

/// Second-order correction in d = 1 by the trapezoid rule on the naive integrand.
inline double second_order_1d(const std::function<double(double)>& w_hat, double k_max, int panels) {
  const double c = std::sqrt(2.0 * kPi);
  auto f = [&](double k) {
    const double W = c * w_hat(k);
    return k * k + W - k * std::sqrt(k * k + 2.0 * W);
  };
  return -2.0 * trapezoid(f, 0.0, k_max, panels) / (2.0 * 2.0 * kPi);
}

/// de Finetti error of a pure product state at k = 1 in dimension d:
/// the Husimi reconstruction of |u><u| is (N |u><u| + 1)/(N + d), whose
/// trace distance from |u><u| is 2 (d - 1)/(N + d).
inline double product_state_definetti(int d, int N) { return 2.0 * (d - 1) / (N + d); }

/// Husimi density of a pure product state c_N |<u, v>|^{2N}.
inline double product_husimi(const CVec& u, const CVec& v, int N) {
  const int d = static_cast<int>(u.size());
  double cN = 1.0;
  for (int i = 1; i < d; ++i) cN = cN * (N + i) / i;
  return cN * std::pow(std::norm(u.dot(v)), N);
}

/// Free Schroedinger evolution of e^{i k x}: e^{-i k^2 t} e^{i k x}.
inline cplx free_plane_wave(double k, double x, double t) { return std::polar(1.0, k * x - k * k * t); }

/// Central second difference of f at 0 with step s.
inline double second_difference(const std::function<double(double)>& f, double s) {
  return (f(s) + f(-s) - 2.0 * f(0.0)) / (s * s);
}

}  // namespace oracle
