#pragma once

#include <cstdint>
#include <vector>

namespace tidecoh::stats {

struct TestResult {
  double statistic = 0.0;
  double dof = 0.0;  // chi-square degrees of freedom; sample size for KS
  double p_value = 0.0;
};

// Pearson chi-square of counts against probabilities. Adjacent bins are
// pooled until each pooled bin expects at least `min_expected` hits.
TestResult chi_square(const std::vector<std::uint64_t>& observed, const std::vector<double>& probs,
                      double min_expected = 5.0);

// Survival function of the Kolmogorov distribution, P(K > x).
double kolmogorov_survival(double x);

// One-sample KS test of `samples` against Exponential(rate).
TestResult ks_exponential(std::vector<double> samples, double rate);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

template <typename Range>
MeanVariance mean_variance(const Range& values) {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  for (const auto& v : values) {
    n += 1.0;
    const double x = static_cast<double>(v);
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  return {mean, n > 1.0 ? m2 / (n - 1.0) : 0.0};
}

}  // namespace tidecoh::stats
