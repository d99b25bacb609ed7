#include "tidecoh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "tidecoh/numerics.hpp"

namespace tidecoh::stats {

TestResult chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                      double min_expected) {
  if (observed.size() != probs.size() || observed.empty()) {
    throw DimensionError("chi_square: observed and expected sizes differ");
  }
  double n = 0.0;
  for (auto o : observed) n += static_cast<double>(o);

  std::vector<double> obs, exp;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc_o += static_cast<double>(observed[i]);
    acc_e += probs[i] * n;
    if (acc_e >= min_expected) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (exp.empty()) {
      obs.push_back(acc_o);
      exp.push_back(acc_e);
    } else {
      obs.back() += acc_o;
      exp.back() += acc_e;
    }
  }
  if (exp.size() < 2) return {0.0, 0.0, 1.0};

  double stat = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] <= 0.0) {
      if (obs[i] > 0.0) return {INFINITY, static_cast<double>(exp.size() - 1), 0.0};
      continue;
    }
    const double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  const double dof = static_cast<double>(exp.size() - 1);
  const boost::math::chi_squared dist(dof);
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series below converges poorly; true value > 1 - 1e-20
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw InvalidArgument("ks_exponential: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = -std::expm1(-rate * samples[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - cdf, cdf - static_cast<double>(i) / n));
  }
  const double sn = std::sqrt(n);
  return {d, n, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: need >= 2 paired points");
  const auto mx = mean_variance(x).mean;
  const auto my = mean_variance(y).mean;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace tidecoh::stats
