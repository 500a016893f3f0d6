#include "mfbose/lattice_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace mfbose {

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "dirichlet";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "dirichlet") return Boundary::Dirichlet;
  throw ConfigError("unknown boundary condition '" + s + "'");
}

namespace {

int signed_frequency(int j, int n) { return j < (n + 1) / 2 ? j : j - n; }

int ipow(int b, int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModelSpace

ModelSpace::ModelSpace(const ModelConfig& cfg) : cfg_(cfg) {
  if (cfg.dimension != 1 && cfg.dimension != 2)
    throw ConfigError("dimension must be 1 or 2, got " + std::to_string(cfg.dimension));
  if (cfg.grid < 2) throw ConfigError("grid size must be >= 2, got " + std::to_string(cfg.grid));
  if (!(cfg.extent > 0.0)) throw ConfigError("extent must be positive");

  size_ = ipow(cfg.grid, cfg.dimension);
  std::vector<int> ext(cfg.dimension, cfg.grid);
  fft_ = std::make_unique<FourierTransform>(ext);
  sine_ = std::make_unique<SineTransform>(ext);
  diff_fft_ = std::make_unique<FourierTransform>(
      std::vector<int>(cfg.dimension, difference_grid()));

  kinetic_.resize(size_);
  for (int f = 0; f < size_; ++f) {
    const Point k = momentum(f);
    kinetic_(f) = k[0] * k[0] + k[1] * k[1];
  }
}

double ModelSpace::cell_volume() const { return std::pow(spacing(), cfg_.dimension); }
double ModelSpace::volume() const { return std::pow(cfg_.extent, cfg_.dimension); }
RVec ModelSpace::quadrature_weights() const { return RVec::Constant(size_, cell_volume()); }

int ModelSpace::difference_size() const { return ipow(difference_grid(), cfg_.dimension); }

std::array<int, 2> ModelSpace::unflatten(int flat) const {
  if (cfg_.dimension == 1) return {flat, 0};
  return {flat / cfg_.grid, flat % cfg_.grid};
}

int ModelSpace::flatten(std::array<int, 2> idx) const {
  return cfg_.dimension == 1 ? idx[0] : idx[0] * cfg_.grid + idx[1];
}

Point ModelSpace::position(int flat) const {
  const auto idx = unflatten(flat);
  const double shift = periodic() ? 0.0 : 0.5;
  Point p{0.0, 0.0};
  for (int a = 0; a < cfg_.dimension; ++a) p[a] = (idx[a] + shift) * spacing();
  return p;
}

std::array<int, 2> ModelSpace::mode_label(int flat) const {
  const auto idx = unflatten(flat);
  std::array<int, 2> n{0, 0};
  for (int a = 0; a < cfg_.dimension; ++a)
    n[a] = periodic() ? signed_frequency(idx[a], cfg_.grid) : idx[a] + 1;
  return n;
}

Point ModelSpace::momentum(int flat) const {
  const auto n = mode_label(flat);
  const double q = periodic() ? 2.0 * kPi / cfg_.extent : kPi / cfg_.extent;
  return {q * n[0], q * n[1]};
}

CVec ModelSpace::mode_function(int flat) const {
  CVec phi(size_);
  const Point k = momentum(flat);
  for (int j = 0; j < size_; ++j) {
    const Point x = position(j);
    if (periodic()) {
      phi(j) = std::exp(cplx(0.0, k[0] * x[0] + k[1] * x[1]));
    } else {
      double v = 1.0;
      for (int a = 0; a < cfg_.dimension; ++a) v *= std::sin(k[a] * x[a]);
      phi(j) = v;
    }
  }
  normalize(phi);
  return phi;
}

CVec ModelSpace::apply_kinetic(const CVec& u) const {
  CVec out(size_);
  if (periodic()) {
    CVec hat(size_);
    fft_->forward(u.data(), hat.data());
    hat.array() *= kinetic_.array() / static_cast<double>(size_);
    fft_->backward(hat.data(), out.data());
    return out;
  }
  RVec re = u.real(), im = u.imag(), tmp(size_), back_re(size_), back_im(size_);
  const double scale = 1.0 / sine_->round_trip_factor();
  sine_->forward(re.data(), tmp.data());
  tmp.array() *= kinetic_.array() * scale;
  sine_->backward(tmp.data(), back_re.data());
  sine_->forward(im.data(), tmp.data());
  tmp.array() *= kinetic_.array() * scale;
  sine_->backward(tmp.data(), back_im.data());
  for (int j = 0; j < size_; ++j) out(j) = cplx(back_re(j), back_im(j));
  return out;
}

cplx ModelSpace::inner(const CVec& u, const CVec& v) const {
  return u.dot(v) * cell_volume();
}

double ModelSpace::norm(const CVec& u) const {
  return std::sqrt(u.squaredNorm() * cell_volume());
}

void ModelSpace::normalize(CVec& u) const {
  const double n = norm(u);
  if (n == 0.0) throw Error("cannot normalize the zero function");
  u /= n;
}

Point ModelSpace::wrap(Point d) const {
  if (!periodic()) return d;
  const double L = cfg_.extent;
  for (int a = 0; a < cfg_.dimension; ++a) d[a] -= L * std::floor(d[a] / L + 0.5);
  return d;
}

SpacePtr build_model(const ModelConfig& cfg) { return std::make_shared<const ModelSpace>(cfg); }

// ---------------------------------------------------------------------------
// Interaction

Interaction::Interaction(SpacePtr space, RVec samples, std::string name)
    : space_(std::move(space)), name_(std::move(name)), samples_(std::move(samples)) {
  const int P = space_->difference_size();
  if (samples_.size() != P) throw Error("interaction sample count does not match difference grid");
  if (!samples_.allFinite()) throw ConfigError("interaction '" + name_ + "' has non-finite samples");
  const CVec in = samples_.cast<cplx>();
  spectrum_.resize(P);
  space_->difference_fft().forward(in.data(), spectrum_.data());
  coeffs_ = spectrum_.real() / static_cast<double>(P);
}

namespace {

std::array<int, 2> difference_multi_index(const ModelSpace& sp, int flat) {
  const int P = sp.difference_grid();
  return sp.dimension() == 1 ? std::array<int, 2>{flat, 0}
                             : std::array<int, 2>{flat / P, flat % P};
}

Point difference_point(const ModelSpace& sp, int flat) {
  const auto idx = difference_multi_index(sp, flat);
  Point x{0.0, 0.0};
  for (int a = 0; a < sp.dimension(); ++a)
    x[a] = signed_frequency(idx[a], sp.difference_grid()) * sp.spacing();
  return x;
}

}  // namespace

Point Interaction::difference_position(int flat) const { return difference_point(*space_, flat); }

Point Interaction::difference_momentum(int flat) const {
  const int P = space_->difference_grid();
  const auto idx = difference_multi_index(*space_, flat);
  const double q = 2.0 * kPi / (P * space_->spacing());
  Point k{0.0, 0.0};
  for (int a = 0; a < space_->dimension(); ++a) k[a] = q * signed_frequency(idx[a], P);
  return k;
}

Interaction Interaction::from_function(SpacePtr space, Function f, std::string name) {
  const int P = space->difference_size();
  RVec s(P);
  for (int m = 0; m < P; ++m) s(m) = f(difference_point(*space, m));
  Interaction w = from_samples(space, std::move(s), std::move(name));
  w.closed_form_ = std::move(f);
  return w;
}

Interaction Interaction::from_samples(SpacePtr space, RVec samples, std::string name) {
  const int Pa = space->difference_grid();
  const int d = space->dimension();
  const double scale = std::max(1.0, samples.cwiseAbs().maxCoeff());
  for (int m = 0; m < samples.size(); ++m) {
    std::array<int, 2> idx = d == 1 ? std::array<int, 2>{m, 0}
                                    : std::array<int, 2>{m / Pa, m % Pa};
    int neg = 0;
    for (int a = 0; a < d; ++a) neg = neg * Pa + (Pa - idx[a]) % Pa;
    if (std::abs(samples(m) - samples(neg)) > 1e-10 * scale)
      throw ConfigError("interaction '" + name + "' is not even (asymmetry " +
                        std::to_string(std::abs(samples(m) - samples(neg))) + ")");
  }
  return Interaction(std::move(space), std::move(samples), std::move(name));
}

Interaction Interaction::from_table(SpacePtr space, const std::vector<double>& x,
                                    const std::vector<double>& w, std::string name) {
  if (space->dimension() != 1) throw ConfigError("tabulated interactions require d = 1");
  if (x.size() != w.size() || x.size() < 2)
    throw ConfigError("interaction table needs at least two (x, w) rows");
  std::vector<std::pair<double, double>> rows;
  for (std::size_t i = 0; i < x.size(); ++i) rows.emplace_back(x[i], w[i]);
  std::sort(rows.begin(), rows.end());
  if (rows.front().first >= 0.0) {
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i)
      if (rows[i].first > 0.0) rows.emplace_back(-rows[i].first, rows[i].second);
    std::sort(rows.begin(), rows.end());
  }
  auto interp = [rows](const Point& p) {
    const double t = p[0];
    if (t < rows.front().first || t > rows.back().first) return 0.0;
    auto it = std::lower_bound(rows.begin(), rows.end(), std::make_pair(t, -1e308));
    if (it == rows.begin()) return it->second;
    auto lo = std::prev(it);
    if (it == rows.end()) return lo->second;
    const double s = (t - lo->first) / (it->first - lo->first);
    return (1.0 - s) * lo->second + s * it->second;
  };
  double scale = 1.0;
  for (const auto& r : rows) scale = std::max(scale, std::abs(r.second));
  for (const auto& r : rows) {
    if (-r.first < rows.front().first || -r.first > rows.back().first) continue;
    if (std::abs(interp({-r.first, 0.0}) - r.second) > 1e-10 * scale)
      throw ConfigError("interaction table '" + name + "' is not even at x=" +
                        std::to_string(r.first));
  }
  return from_function(std::move(space), interp, std::move(name));
}

Interaction Interaction::from_coefficients(SpacePtr space, RVec coefficients, std::string name) {
  const int P = space->difference_size();
  if (coefficients.size() != P) throw Error("coefficient count does not match difference grid");
  CVec in = coefficients.cast<cplx>(), out(P);
  space->difference_fft().backward(in.data(), out.data());
  Interaction w = from_samples(space, out.real(), std::move(name));
  // Keep the given coefficients exactly rather than their FFT round trip.
  w.coeffs_ = coefficients;
  w.spectrum_ = coefficients.cast<cplx>() * static_cast<double>(P);
  w.band_limited_ = true;
  return w;
}

RVec Interaction::fourier_transform() const {
  const double period = space_->difference_grid() * space_->spacing();
  const int d = space_->dimension();
  return coeffs_ * std::pow(period, d) / std::pow(2.0 * kPi, 0.5 * d);
}

RVec Interaction::scaled_transform_on_space() const {
  if (!space_->periodic()) throw Error("scaled transform is defined on periodic spaces only");
  return coeffs_ * space_->volume();
}

Interaction Interaction::scaled(double factor) const {
  Interaction w = *this;
  w.samples_ *= factor;
  w.coeffs_ *= factor;
  w.spectrum_ *= factor;
  if (closed_form_) {
    Function f = closed_form_;
    w.closed_form_ = [f, factor](const Point& x) { return factor * f(x); };
  }
  return w;
}

Interaction Interaction::positive_part() const {
  return from_coefficients(space_, coeffs_.cwiseMax(0.0), name_ + "+");
}

Interaction Interaction::negative_part() const {
  return from_coefficients(space_, (-coeffs_).cwiseMax(0.0), name_ + "-");
}

bool Interaction::positive_definite(double tol) const { return coeffs_.minCoeff() >= -tol; }

double Interaction::fourier_series(Point d) const {
  double s = 0.0;
  for (int n = 0; n < coeffs_.size(); ++n) {
    if (coeffs_(n) == 0.0) continue;
    const Point k = difference_momentum(n);
    s += coeffs_(n) * std::cos(k[0] * d[0] + k[1] * d[1]);
  }
  return s;
}

double Interaction::evaluate(Point d) const {
  d = space_->wrap(d);
  if (closed_form_) return closed_form_(d);
  if (band_limited_) return fourier_series(d);
  const int P = space_->difference_grid();
  const int dim = space_->dimension();
  const double h = space_->spacing();
  std::array<int, 2> base{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    const double t = d[a] / h;
    const double fl = std::floor(t);
    base[a] = static_cast<int>(fl);
    frac[a] = t - fl;
  }
  auto at = [&](int i0, int i1) {
    const int m0 = ((i0 % P) + P) % P;
    if (dim == 1) return samples_(m0);
    const int m1 = ((i1 % P) + P) % P;
    return samples_(m0 * P + m1);
  };
  if (dim == 1) return (1.0 - frac[0]) * at(base[0], 0) + frac[0] * at(base[0] + 1, 0);
  return (1.0 - frac[0]) * (1.0 - frac[1]) * at(base[0], base[1]) +
         frac[0] * (1.0 - frac[1]) * at(base[0] + 1, base[1]) +
         (1.0 - frac[0]) * frac[1] * at(base[0], base[1] + 1) +
         frac[0] * frac[1] * at(base[0] + 1, base[1] + 1);
}

int Interaction::difference_index(int i, int j) const {
  const int P = space_->difference_grid();
  const auto a = space_->unflatten(i);
  const auto b = space_->unflatten(j);
  int idx = 0;
  for (int ax = 0; ax < space_->dimension(); ++ax) idx = idx * P + ((a[ax] - b[ax]) % P + P) % P;
  return idx;
}

double Interaction::pair(int i, int j) const { return samples_(difference_index(i, j)); }

CVec Interaction::convolve(const CVec& f) const {
  const ModelSpace& sp = *space_;
  const int n = sp.size();
  if (f.size() != n) throw Error("convolve: field size does not match the grid");
  const double dv = sp.cell_volume();
  if (sp.periodic()) {
    CVec hat(n), out(n);
    sp.fft().forward(f.data(), hat.data());
    hat.array() *= spectrum_.array();
    sp.fft().backward(hat.data(), out.data());
    return out * (dv / n);
  }
  // Zero-padded circular convolution on the doubled grid.
  const int P = sp.difference_grid();
  const int Pn = sp.difference_size();
  CVec pad = CVec::Zero(Pn), hat(Pn), out(Pn);
  auto padded = [&](int flat) {
    const auto idx = sp.unflatten(flat);
    return sp.dimension() == 1 ? idx[0] : idx[0] * P + idx[1];
  };
  for (int j = 0; j < n; ++j) pad(padded(j)) = f(j);
  sp.difference_fft().forward(pad.data(), hat.data());
  hat.array() *= spectrum_.array();
  sp.difference_fft().backward(hat.data(), out.data());
  CVec res(n);
  for (int j = 0; j < n; ++j) res(j) = out(padded(j)) * (dv / Pn);
  return res;
}

RVec Interaction::convolve(const RVec& rho) const {
  return convolve(CVec(rho.cast<cplx>())).real();
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open interaction table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) continue;  // header row
    rows.emplace_back(a, b);
  }
  return rows;
}

}  // namespace

Interaction make_interaction(const InteractionSpec& spec, SpacePtr space) {
  const int d = space->dimension();
  const double L = space->extent();
  if (spec.kind == "cosine") {
    auto a = spec.coefficients;
    if (a.empty()) throw ConfigError("cosine interaction needs at least one coefficient");
    return Interaction::from_function(
        space,
        [a, L, d](const Point& x) {
          double s = a[0];
          for (std::size_t n = 1; n < a.size(); ++n)
            for (int ax = 0; ax < d; ++ax) s += a[n] * std::cos(2.0 * kPi * n * x[ax] / L);
          return s;
        },
        "cosine");
  }
  if (spec.kind == "gaussian") {
    if (!(spec.width > 0.0)) throw ConfigError("gaussian width must be positive");
    const double A = spec.amplitude, s2 = spec.width * spec.width;
    return Interaction::from_function(
        space, [A, s2](const Point& x) { return A * std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * s2)); },
        "gaussian");
  }
  if (spec.kind == "lennard-jones") {
    const double cap = spec.cap;
    return Interaction::from_function(
        space,
        [cap](const Point& x) {
          const double r2 = x[0] * x[0] + x[1] * x[1];
          if (r2 == 0.0) return cap;
          const double r6 = r2 * r2 * r2;
          return std::min(cap, 1.0 / (r6 * r6) - 1.0 / r6);
        },
        "lennard-jones");
  }
  if (spec.kind == "constant") {
    const double A = spec.amplitude;
    return Interaction::from_function(space, [A](const Point&) { return A; }, "constant");
  }
  if (spec.kind == "zero") {
    return Interaction::from_function(space, [](const Point&) { return 0.0; }, "zero");
  }
  if (spec.kind == "csv") {
    const auto rows = read_two_column_csv(spec.path);
    std::vector<double> x, w;
    for (const auto& r : rows) {
      x.push_back(r.first);
      w.push_back(r.second);
    }
    return Interaction::from_table(space, x, w, spec.path);
  }
  throw ConfigError("unknown interaction kind '" + spec.kind + "'");
}

// ---------------------------------------------------------------------------
// OneBodyOperator

OneBodyOperator::OneBodyOperator(SpacePtr space, RVec potential)
    : space_(std::move(space)), potential_(std::move(potential)) {
  if (potential_.size() == 0) potential_ = RVec::Zero(space_->size());
  if (potential_.size() != space_->size()) throw ConfigError("potential size does not match grid");
  has_potential_ = potential_.cwiseAbs().maxCoeff() > 0.0;
}

CVec OneBodyOperator::apply(const CVec& u) const {
  CVec out = space_->apply_kinetic(u);
  if (has_potential_) out.array() += potential_.array() * u.array();
  return out;
}

RMat OneBodyOperator::grid_matrix() const {
  const int n = space_->size();
  RMat H(n, n);
  CVec e = CVec::Zero(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    H.col(j) = space_->apply_kinetic(e).real();
    e(j) = 0.0;
  }
  H.diagonal() += potential_;
  return H;
}

CMat OneBodyOperator::mode_matrix() const {
  const int n = space_->size();
  CMat H = CMat::Zero(n, n);
  H.diagonal() = space_->kinetic().cast<cplx>();
  if (has_potential_) {
    CMat phi(n, n);
    for (int p = 0; p < n; ++p) phi.col(p) = space_->mode_function(p);
    H += phi.adjoint() * potential_.cast<cplx>().asDiagonal() * phi * space_->cell_volume();
  }
  return H;
}

RMat OneBodyOperator::finite_difference_matrix() const {
  const ModelSpace& sp = *space_;
  const int n = sp.size();
  const int M = sp.grid();
  const double inv = 1.0 / (sp.spacing() * sp.spacing());
  RMat H = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto idx = sp.unflatten(i);
    for (int a = 0; a < sp.dimension(); ++a) {
      H(i, i) += 2.0 * inv;
      for (int step : {-1, 1}) {
        auto nb = idx;
        nb[a] += step;
        if (nb[a] < 0 || nb[a] >= M) {
          if (sp.periodic()) {
            nb[a] = (nb[a] + M) % M;
          } else {
            H(i, i) += inv;  // antisymmetric ghost cell
            continue;
          }
        }
        H(i, sp.flatten(nb)) -= inv;
      }
    }
    H(i, i) += potential_(i);
  }
  return H;
}

CVec OneBodyOperator::ground_mode() const {
  const ModelSpace& sp = *space_;
  if (!has_potential_) {
    CVec u(sp.size());
    for (int j = 0; j < sp.size(); ++j) {
      const Point x = sp.position(j);
      double v = 1.0;
      if (!sp.periodic())
        for (int a = 0; a < sp.dimension(); ++a) v *= std::sin(kPi * x[a] / sp.extent());
      u(j) = v;
    }
    sp.normalize(u);
    return u;
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(grid_matrix());
  RVec v = es.eigenvectors().col(0);
  if (v.sum() < 0) v = -v;
  CVec u = v.cast<cplx>();
  sp.normalize(u);
  return u;
}

double OneBodyOperator::ground_energy() const {
  const CVec u = ground_mode();
  return space_->inner(u, apply(u)).real();
}

// ---------------------------------------------------------------------------
// Probes

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeanFieldReport mean_field_consistency_check(const CVec& u, const Interaction& w, int N,
                                             std::uint64_t seed, int max_points) {
  if (N < 2) throw Error("mean-field check needs N >= 2");
  const ModelSpace& sp = *w.space();
  const int n = sp.size();
  const int d = sp.dimension();
  RVec p = u.cwiseAbs2() * sp.cell_volume();
  p /= p.sum();

  MeanFieldReport rep;
  rep.particles = N;
  rep.seed = seed;
  rep.degenerate = p.maxCoeff() > 0.99;

  Rng rng = make_stream(seed, 0);
  std::discrete_distribution<int> cell(p.data(), p.data() + n);
  std::uniform_real_distribution<double> off(-0.5, 0.5);
  std::vector<Point> xs(N);
  for (auto& x : xs) {
    x = sp.position(cell(rng));
    for (int a = 0; a < d; ++a) x[a] += off(rng) * sp.spacing();
  }

  rep.points = std::min(N, max_points);
  for (int j = 0; j < rep.points; ++j) {
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < N; ++k) {
      if (k == j) continue;
      const double v = w.evaluate({xs[j][0] - xs[k][0], xs[j][1] - xs[k][1]});
      s += v;
      s2 += v * v;
    }
    const double mean = s / (N - 1);
    const double var = std::max(0.0, s2 / (N - 1) - mean * mean);
    double ref = 0.0;
    for (int i = 0; i < n; ++i) {
      if (p(i) == 0.0) continue;
      const Point y = sp.position(i);
      ref += p(i) * w.evaluate({xs[j][0] - y[0], xs[j][1] - y[1]});
    }
    rep.max_deviation = std::max(rep.max_deviation, std::abs(mean - ref));
    rep.band = std::max(rep.band, 3.0 * std::sqrt(var / (N - 1)));
  }
  return rep;
}

MeanFieldLadder mean_field_ladder(const CVec& u, const Interaction& w, const std::vector<int>& Ns,
                                  std::uint64_t seed) {
  MeanFieldLadder out;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    out.reports.push_back(mean_field_consistency_check(u, w, Ns[i], splitmix64(seed + i)));
    xs.push_back(Ns[i]);
    ys.push_back(out.reports.back().max_deviation);
  }
  out.slope = log_log_slope(xs, ys);
  return out;
}

namespace {

double pair_sum(const Interaction& w, const std::vector<Point>& x) {
  double e = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = j + 1; k < x.size(); ++k)
      e += w.evaluate({x[j][0] - x[k][0], x[j][1] - x[k][1]});
  return e;
}

double greedy_minimum(const Interaction& w, int N, int trials, Rng& rng) {
  const ModelSpace& sp = *w.space();
  const int d = sp.dimension();
  const double L = sp.extent();
  std::uniform_real_distribution<double> uni(0.0, L);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::vector<Point> x(N, Point{0.0, 0.0});
    for (auto& p : x)
      for (int a = 0; a < d; ++a) p[a] = uni(rng);
    double e = pair_sum(w, x);
    double step = 0.25 * L;
    for (int sweep = 0; sweep < 200; ++sweep) {
      for (int i = 0; i < N; ++i) {
        Point trial = x[i];
        for (int a = 0; a < d; ++a) {
          trial[a] += step * gauss(rng);
          if (sp.periodic()) trial[a] -= L * std::floor(trial[a] / L);
          else trial[a] = std::clamp(trial[a], 0.0, L);
        }
        double delta = 0.0;
        for (int k = 0; k < N; ++k) {
          if (k == i) continue;
          delta += w.evaluate({trial[0] - x[k][0], trial[1] - x[k][1]}) -
                   w.evaluate({x[i][0] - x[k][0], x[i][1] - x[k][1]});
        }
        if (delta < 0.0) {
          x[i] = trial;
          e += delta;
        }
      }
      step = std::max(1e-3 * L, step * 0.97);
    }
    best = std::min(best, e);
  }
  return best;
}

}  // namespace

StabilityReport classical_stability_probe(const Interaction& w, int N, int trials,
                                          std::uint64_t seed) {
  if (N < 2 || trials < 1) throw Error("stability probe needs N >= 2 and trials >= 1");
  StabilityReport rep;
  rep.seed = seed;
  rep.ladder = {N, 2 * N, 4 * N};
  for (std::size_t i = 0; i < rep.ladder.size(); ++i) {
    Rng rng = make_stream(seed, i);
    const int n = rep.ladder[i];
    rep.energy_per_particle.push_back(greedy_minimum(w, n, trials, rng) / n);
  }
  rep.stable_estimate = rep.energy_per_particle.front();

  // Least-squares fit y = a n + b.
  const std::size_t m = rep.ladder.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = rep.ladder[i], y = rep.energy_per_particle[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double a = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double b = (sy - a * sx) / m;
  rep.superstable_epsilon = 2.0 * w.space()->volume() * a;
  rep.offset_C = -b;
  const double drop = rep.energy_per_particle.front() - rep.energy_per_particle.back();
  rep.flagged = rep.superstable_epsilon < 0.0 &&
                drop > 0.05 * (1.0 + std::abs(rep.energy_per_particle.front()));
  return rep;
}

}  // namespace mfbose
