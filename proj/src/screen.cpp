#include "tidecoh/screen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tidecoh {

namespace {

void require_distribution(const std::vector<double>& p, std::size_t n, const char* what) {
  if (p.size() != n) {
    throw DimensionError(std::string(what) + ": distribution size does not match pixel count");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidArgument(std::string(what) + ": negative or NaN probability");
    total += v;
  }
  if (std::abs(total - 1.0) > numerics().weight_sum) {
    throw NormalizationError(std::string(what) + ": distribution does not sum to 1");
  }
}

std::vector<double> raw_intensity(const StateVector& atom_state, const ScreenModel& sm) {
  if (atom_state.size() != 2 || atom_state.factors().size() != 1) {
    throw DimensionError("pixel_weights: atom state must live on the two-slit space");
  }
  const CVector amp = atom_state.amplitudes()(0) * sm.amp_a() + atom_state.amplitudes()(1) * sm.amp_b();
  std::vector<double> w(sm.n_pixels());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::norm(amp(static_cast<Eigen::Index>(i)));
  return w;
}

}  // namespace

ScreenModel::ScreenModel(ScreenGeometry geometry, std::vector<double> coords, CVector amp_a, CVector amp_b)
    : geometry_(geometry), coords_(std::move(coords)), amp_a_(std::move(amp_a)), amp_b_(std::move(amp_b)) {
  const auto n = static_cast<Eigen::Index>(coords_.size());
  if (amp_a_.size() != n || amp_b_.size() != n) {
    throw DimensionError("ScreenModel: amplitude vectors do not match the pixel grid");
  }
  const double tol = numerics().weight_sum;
  if (std::abs(amp_a_.squaredNorm() - 1.0) > tol || std::abs(amp_b_.squaredNorm() - 1.0) > tol) {
    throw NormalizationError("ScreenModel: slit amplitudes are not normalized on the grid");
  }
}

double ScreenModel::pixel_pitch() const {
  return (coords_.back() - coords_.front()) / static_cast<double>(coords_.size() - 1);
}

std::vector<double> ScreenModel::envelope() const {
  std::vector<double> env(coords_.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    env[i] = 0.5 * (std::norm(amp_a_(ii)) + std::norm(amp_b_(ii)));
  }
  return env;
}

ScreenModel build_screen(const ScreenGeometry& g) {
  if (g.n_pixels < 2) throw InvalidArgument("build_screen: need at least 2 pixels");
  if (!(g.slit_separation > 0.0) || !(g.distance > 0.0) || !(g.wavelength > 0.0) ||
      !(g.envelope_width > 0.0)) {
    throw InvalidArgument("build_screen: slit separation, distance, wavelength and width must be positive");
  }
  const double w = g.envelope_width;
  std::vector<double> x(g.n_pixels);
  const double step = 10.0 * w / static_cast<double>(g.n_pixels - 1);
  // Mirror-symmetric grid: x_i = -x_{n-1-i} exactly.
  for (std::size_t i = 0; i < g.n_pixels; ++i) {
    const double offset = (static_cast<double>(i) - 0.5 * static_cast<double>(g.n_pixels - 1)) * step;
    x[i] = offset;
  }
  const auto n = static_cast<Eigen::Index>(g.n_pixels);
  CVector a(n), b(n);
  const double k = std::numbers::pi * g.slit_separation / (g.wavelength * g.distance);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    const double envelope = std::exp(-xi * xi / (4.0 * w * w));
    a(i) = std::polar(envelope, k * xi);
    b(i) = std::polar(envelope, -k * xi);
  }
  a.normalize();
  b.normalize();
  return ScreenModel(g, std::move(x), std::move(a), std::move(b));
}

std::vector<double> pixel_weights(const StateVector& atom_state, const ScreenModel& sm) {
  auto w = raw_intensity(atom_state, sm);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0.0)) throw NormalizationError("pixel_weights: state has no weight on the screen");
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> total_distribution(const RelativeDecomposition& rd, const ScreenModel& sm) {
  // Branch intensities are summed before one overall normalization, so the
  // result depends only on the mixture, not on the pointer basis used to write it.
  std::vector<double> p(sm.n_pixels(), 0.0);
  for (const auto& b : rd.branches) {
    if (!b.state) continue;
    const auto w = raw_intensity(*b.state, sm);
    const double m2 = b.magnitude * b.magnitude;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += m2 * w[i];
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(total > 0.0)) throw NormalizationError("total_distribution: no weight on the screen");
  for (double& v : p) v /= total;
  return p;
}

double fringe_visibility(const std::vector<double>& p, const ScreenModel& sm) {
  require_distribution(p, sm.n_pixels(), "fringe_visibility");
  const double period = sm.geometry().fringe_period();
  const double pitch = sm.pixel_pitch();
  if (pitch > period / 8.0) {
    std::ostringstream os;
    os << "fringe_visibility: pixel pitch " << pitch << " exceeds 1/8 of the fringe period " << period;
    throw ResolutionError(os.str());
  }
  const double w = sm.geometry().envelope_width;
  if (2.0 * w / period < 3.0) {
    throw ResolutionError("fringe_visibility: fewer than 3 fringe periods inside the central region");
  }

  const double k = 2.0 * std::numbers::pi / period;
  const auto env = sm.envelope();
  // Normal equations for r(x) = a + b cos(kx) + c sin(kx).
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atr = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = sm.coords()[i];
    if (std::abs(x) > w || !(env[i] > 0.0)) continue;
    const Eigen::Vector3d row(1.0, std::cos(k * x), std::sin(k * x));
    ata += row * row.transpose();
    atr += row * (p[i] / env[i]);
  }
  const Eigen::Vector3d coef = ata.ldlt().solve(atr);
  const double amplitude = std::hypot(coef(1), coef(2));
  const double p_max = coef(0) + amplitude;
  const double p_min = std::max(0.0, coef(0) - amplitude);
  if (!(p_max > 0.0)) return 0.0;
  return std::clamp((p_max - p_min) / (p_max + p_min), 0.0, 1.0);
}

HitHistogram sample_hits(const std::vector<double>& p, std::uint64_t n, RngStream& rng) {
  require_distribution(p, p.size(), "sample_hits");
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  const double total = cdf.back();
  // Last pixel with non-zero probability absorbs rounding at the top of the CDF.
  std::size_t last = p.size();
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) {
      last = i;
      break;
    }
  }
  HitHistogram h{std::vector<std::uint64_t>(p.size(), 0), n};
  for (std::uint64_t s = 0; s < n; ++s) {
    const double u = rng.uniform() * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx > last) idx = last;
    ++h.counts[idx];
  }
  return h;
}

}  // namespace tidecoh
