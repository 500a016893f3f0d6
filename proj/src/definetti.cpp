#include "mfbose/definetti.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mfbose/many_body.hpp"

namespace mfbose {

double SymmetricState::validity_defect() const {
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (matrix + matrix.adjoint()), Eigen::EigenvaluesOnly);
  const double neg = std::max(0.0, -es.eigenvalues()(0));
  return std::max({herm, neg, std::abs(matrix.trace().real() - 1.0)});
}

ReducedDensityMatrix SymmetricState::as_density_matrix() const {
  ReducedDensityMatrix r;
  r.order = N;
  r.basis = basis();
  r.matrix = matrix;
  return r;
}

SymmetricState pure_product_state(const CVec& u, int N) {
  SymmetricState s;
  s.dim = static_cast<int>(u.size());
  s.N = N;
  const CVec v = product_state(s.basis(), u / u.norm());
  s.matrix = v * v.adjoint();
  return s;
}

SymmetricState maximally_mixed_state(int dim, int N) {
  SymmetricState s;
  s.dim = dim;
  s.N = N;
  const int n = s.basis().size();
  s.matrix = CMat::Identity(n, n) / static_cast<double>(n);
  return s;
}

SymmetricState random_symmetric_state(int dim, int N, int rank, Rng& rng) {
  SymmetricState s;
  s.dim = dim;
  s.N = N;
  const int n = s.basis().size();
  CMat G(n, std::max(1, rank));
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j) G(i, j) = complex_gaussian(rng);
  s.matrix = G * G.adjoint();
  s.matrix /= s.matrix.trace().real();
  return s;
}

SymmetricState load_symmetric_state(const std::string& path, int dim, int N) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open state file '" + path + "'");
  SymmetricState s;
  s.dim = dim;
  s.N = N;
  const int n = s.basis().size();
  s.matrix = CMat::Zero(n, n);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (row >= n) throw ConfigError(path + ": more than " + std::to_string(n) + " rows");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError(path + ": non-numeric entry '" + cell + "'");
      }
    }
    if (static_cast<int>(v.size()) != 2 * n)
      throw ConfigError(path + ": row " + std::to_string(row) + " needs " + std::to_string(2 * n) + " numbers");
    for (int j = 0; j < n; ++j) s.matrix(row, j) = cplx(v[2 * j], v[2 * j + 1]);
    ++row;
  }
  if (row != n) throw ConfigError(path + ": expected " + std::to_string(n) + " rows");
  if (s.validity_defect() > 1e-8) throw ConfigError(path + ": not a density matrix (defect " +
                                                    std::to_string(s.validity_defect()) + ")");
  return s;
}

double coherent_constant(int dim, int N) { return static_cast<double>(binomial(N + dim - 1, dim - 1)); }

CVec uniform_sphere_point(int dim, Rng& rng) {
  CVec u(dim);
  for (int i = 0; i < dim; ++i) u(i) = complex_gaussian(rng);
  return u / u.norm();
}

ResolutionReport coherent_resolution_check(int dim, int N, const MCOptions& opts) {
  const FockBasis b = FockBasis::fixed(dim, N);
  const int n = b.size();
  if (n > 500) throw ConfigError("symmetric dimension above 500");
  const double cN = coherent_constant(dim, N);
  const int nb = std::max(2, opts.batches);
  const int per = std::max(1, opts.samples / nb);
  std::vector<CMat> means;
  for (int bt = 0; bt < nb; ++bt) {
    Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(bt));
    CMat acc = CMat::Zero(n, n);
    for (int s = 0; s < per; ++s) {
      const CVec v = product_state(b, uniform_sphere_point(dim, rng));
      acc.noalias() += v * v.adjoint();
    }
    means.push_back(cN * acc / static_cast<double>(per));
  }
  CMat mean = CMat::Zero(n, n);
  for (const auto& m : means) mean += m;
  mean /= static_cast<double>(nb);
  double var = 0.0;
  for (const auto& m : means) var += (m - mean).squaredNorm();
  var /= static_cast<double>(nb - 1);
  ResolutionReport r;
  r.sigma = std::sqrt(var / nb);
  const CMat err = mean - CMat::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (err + err.adjoint()), Eigen::EigenvaluesOnly);
  r.error = es.eigenvalues().cwiseAbs().maxCoeff();
  r.within_band = r.error <= 3.0 * r.sigma;
  return r;
}

double husimi_density(const SymmetricState& g, const CVec& u) {
  const CVec v = product_state(g.basis(), u);
  return coherent_constant(g.dim, g.N) * v.dot(g.matrix * v).real();
}

HusimiMeasure husimi_measure(const SymmetricState& g, const MCOptions& opts) {
  HusimiMeasure mu;
  mu.dim = g.dim;
  mu.N = g.N;
  mu.seed = opts.seed;
  const int nb = std::max(1, opts.batches);
  const int per = std::max(1, opts.samples / nb);
  const FockBasis b = g.basis();
  const double cN = coherent_constant(g.dim, g.N);
  double sum = 0.0, sum2 = 0.0;
  for (int bt = 0; bt < nb; ++bt) {
    Rng rng = make_stream(opts.seed, static_cast<std::uint64_t>(bt));
    for (int s = 0; s < per; ++s) {
      CVec u = uniform_sphere_point(g.dim, rng);
      const CVec v = product_state(b, u);
      const double f = cN * v.dot(g.matrix * v).real();
      mu.points.push_back(std::move(u));
      mu.density.push_back(f);
      sum += f;
      sum2 += f * f;
    }
  }
  const double n = static_cast<double>(mu.density.size());
  mu.mass = sum / n;
  mu.mass_sigma = std::sqrt(std::max(0.0, sum2 / n - mu.mass * mu.mass) / n);
  return mu;
}

double trace_norm(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues().sum();
}

double trace_norm_hermitian(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

DeFinettiReport definetti_error(const SymmetricState& g, int k, const HusimiMeasure& mu) {
  if (k < 1 || k > g.N) throw ConfigError("de Finetti order must lie in [1, N]");
  DeFinettiReport r;
  r.k = k;
  ReducedDensityMatrix red = g.as_density_matrix();
  while (red.order > k) red = partial_trace(red);
  const FockBasis bk = FockBasis::fixed(g.dim, k);
  const int n = bk.size();

  const int nb = 20;
  const std::size_t total = mu.points.size();
  const std::size_t per = std::max<std::size_t>(1, total / nb);
  CMat all = CMat::Zero(n, n);
  std::vector<double> batch_errors;
  for (int bt = 0; bt < nb; ++bt) {
    CMat acc = CMat::Zero(n, n);
    std::size_t cnt = 0;
    for (std::size_t s = bt * per; s < std::min(total, (bt + 1) * per); ++s, ++cnt) {
      const CVec v = product_state(bk, mu.points[s]);
      acc.noalias() += mu.density[s] * (v * v.adjoint());
    }
    if (cnt == 0) continue;
    all += acc;
    batch_errors.push_back(trace_norm_hermitian(red.matrix - acc / static_cast<double>(cnt)));
  }
  const CMat recon = all / static_cast<double>(std::min(total, per * nb));
  const CMat diff = red.matrix - recon;
  r.error = trace_norm(diff);
  r.error_eigen = trace_norm_hermitian(diff);
  double m = 0.0, v = 0.0;
  for (double e : batch_errors) m += e;
  m /= batch_errors.size();
  for (double e : batch_errors) v += (e - m) * (e - m);
  r.sigma = batch_errors.size() > 1 ? std::sqrt(v / (batch_errors.size() - 1) / batch_errors.size()) : 0.0;
  r.bound_applicable = 2 * k * g.dim <= g.N;
  r.bound = g.N > k * g.dim ? 2.0 * k * g.dim / (g.N - k * g.dim) : INFINITY;
  r.within_bound = !r.bound_applicable || r.error <= r.bound + 3.0 * r.sigma;
  r.reconstruction_trace = recon.trace().real();
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (recon + recon.adjoint()), Eigen::EigenvaluesOnly);
  r.reconstruction_min_eigenvalue = es.eigenvalues()(0);
  return r;
}

}  // namespace mfbose
