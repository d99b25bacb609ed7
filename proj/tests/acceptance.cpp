// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tidecoh/dynamics.hpp"
#include "tidecoh/scenario.hpp"
#include "tidecoh/screen.hpp"
#include "tidecoh/stats.hpp"
#include "tidecoh/transact.hpp"

using namespace tidecoh;

namespace {

// Every density operator built by criteria 1-7 passes through here.
struct DensityAudit {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_hermiticity = 0.0;
  double worst_trace = 0.0;
  double lowest_eigenvalue = 0.0;

  DensityOperator operator()(DensityOperator rho) {
    const DensityReport r = validate_density(rho);
    ++checked;
    if (!r.passed) ++failed;
    worst_hermiticity = std::max(worst_hermiticity, r.hermiticity_deviation);
    worst_trace = std::max(worst_trace, r.trace_deviation);
    lowest_eigenvalue = std::min(lowest_eigenvalue, r.min_eigenvalue);
    return rho;
  }
};

DensityAudit audit;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StateVector slit_state(complex ca, complex cb) {
  CVector v(2);
  v << ca, cb;
  return StateVector(v, {slit_factor()});
}

Outcome identity_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(101);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = random_scenario(rng);
    const StateVector system = s.system();
    const CouplingSpec c = s.coupling();
    const DensityOperator traced = audit(reduced_density_unitary(entangle(system, c)));
    const DensityOperator joint = audit(epistemic_mixture(relative_decomposition(system, c)));
    const DensityOperator epistemic = audit(reduced_epistemic(joint));
    worst = std::max(worst, max_abs_deviation(epistemic.matrix(), traced.matrix()));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-12 && secs < 1.0,
          fmt("1000 random scenarios, max deviation %.3g (< 1e-12), %.3f s (< 1 s)", worst, secs)};
}

Outcome decay_law() {
  const auto t0 = std::chrono::steady_clock::now();
  const StateVector system = slit_state(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const CouplingSpec c = two_slit_coupling(std::sqrt(0.8), std::sqrt(0.2));
  const auto t = linspace(0.0, 2.0, 50);
  const EnsembleResult ens = ensemble_decay(system, c, 10.0, t, 100000, RngStream(202));
  std::size_t within = 0;
  std::vector<double> fit_t, fit_log;
  for (std::size_t p = 0; p < t.size(); ++p) {
    const auto& m = ens.points[p];
    audit(m.mean);
    const double expected = 0.5 * std::exp(-2.0 * t[p]);
    const double value = m.mean(0, 1).real();
    const double se = m.standard_error(0, 1).real();
    const double z = se > 0.0 ? (value - expected) / se : (std::abs(value - expected) > 1e-12 ? 1e9 : 0.0);
    // The imaginary part has zero expectation.
    const double im = m.mean(0, 1).imag();
    const double zi = m.standard_error(0, 1).imag() > 0.0 ? im / m.standard_error(0, 1).imag()
                                                          : (std::abs(im) > 1e-12 ? 1e9 : 0.0);
    if (std::abs(z) < 3.0 && std::abs(zi) < 3.0) ++within;
    const double mag = std::abs(m.mean(0, 1));
    if (mag > 3.0 * std::abs(m.standard_error(0, 1))) {
      fit_t.push_back(t[p]);
      fit_log.push_back(std::log(mag));
    }
  }
  const double fraction = static_cast<double>(within) / static_cast<double>(t.size());
  const double lambda = -stats::fit_line(fit_t, fit_log).slope;
  const double secs = seconds_since(t0);
  return {fraction >= 0.99 && std::abs(lambda - 2.0) <= 0.05 && secs < 30.0,
          fmt("%zu/50 points |z| < 3 (need >= 99%%), fitted lambda %.4f (2.00 +/- 0.05), %.1f s (< 30 s)", within,
              lambda, secs)};
}

Outcome channel_equivalence() {
  struct Case {
    StateVector system;
    CouplingSpec coupling;
  };
  RngStream pick(303);
  const Scenario random = random_scenario(pick);
  const std::vector<Case> cases = {
      {slit_state(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)), two_slit_coupling(std::sqrt(0.8), std::sqrt(0.2))},
      {random.system(), random.coupling()},
  };
  std::size_t entries = 0, within = 0;
  double worst_z = 0.0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& [system, c] = cases[ci];
    DensityOperator channel = audit(DensityOperator::pure(system));
    for (std::size_t n = 1; n <= 10; ++n) {
      channel = audit(channel_step(channel, c));
      const EnsembleMoments m = ensemble_after_events(system, c, n, 100000, RngStream(304).split(ci * 100 + n));
      audit(m.mean);
      for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
          const complex diff = m.mean(i, j) - channel(i, j);
          for (const auto& [d, se] : {std::pair{diff.real(), m.standard_error(i, j).real()},
                                      std::pair{diff.imag(), m.standard_error(i, j).imag()}}) {
            ++entries;
            const double z = se > 0.0 ? std::abs(d) / se : (std::abs(d) <= 1e-12 ? 0.0 : 1e9);
            worst_z = std::max(worst_z, z);
            if (z <= 3.0) ++within;
          }
        }
      }
    }
  }
  return {within == entries,
          fmt("N = 1..10, 2 scenarios, %zu/%zu entry components within 3 SE (worst %.2f SE)", within, entries,
              worst_z)};
}

Outcome born_sampling() {
  std::vector<Scenario> scenarios;
  scenarios.push_back({std::sqrt(0.9), std::sqrt(0.1), std::sqrt(0.8), std::sqrt(0.2)});  // weights 0.74 / 0.26
  RngStream pick(404);
  while (scenarios.size() < 20) scenarios.push_back(random_scenario(pick));
  double min_p = 1.0;
  bool weights_ok = true;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const TransactionSet t = joint_transactions(scenarios[i].system(), scenarios[i].coupling());
    if (i == 0) {
      weights_ok = std::abs(t.entries[0].weight - 0.74) < 1e-12 && std::abs(t.entries[1].weight - 0.26) < 1e-12;
    }
    RngStream rng = RngStream(405).split(i);
    std::vector<std::uint64_t> counts(t.entries.size(), 0);
    for (int k = 0; k < 100000; ++k) ++counts[actualize(t, rng).index];
    min_p = std::min(min_p, stats::chi_square(counts, t.weights()).p_value);
  }
  return {min_p > 0.001 && weights_ok,
          fmt("20 scenarios incl. weights {0.74, 0.26}, 1e5 draws each, min chi-square p = %.4f (> 0.001)", min_p)};
}

Outcome visibility_link() {
  const auto t0 = std::chrono::steady_clock::now();
  const ScreenModel sm = build_screen(ScreenGeometry{});
  const StateVector system = slit_state(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  double worst = 0.0;
  std::string values;
  for (double d2 : {0.0, 0.2, 0.5, 0.8, 1.0}) {
    const complex d = std::sqrt(d2), e = std::sqrt(1.0 - d2);
    const CouplingSpec c = two_slit_coupling(d, e);
    const RelativeDecomposition rd = relative_decomposition(system, c);
    audit(epistemic_mixture(rd));
    const double v = fringe_visibility(total_distribution(rd, sm), sm);
    const double target = std::abs(std::conj(d) * e + std::conj(e) * d);
    worst = std::max(worst, std::abs(v - target));
    values += fmt(" %.3f", v);
  }
  const double h = 1.0 / std::sqrt(2.0);
  const double sharp = fringe_visibility(total_distribution(relative_decomposition(system, two_slit_coupling(1, 0)), sm), sm);
  const double maximal = fringe_visibility(total_distribution(relative_decomposition(system, two_slit_coupling(h, h)), sm), sm);
  const double secs = seconds_since(t0);
  return {worst <= 0.01 && sharp < 0.01 && maximal > 0.99 && secs < 5.0,
          fmt("V at d^2 = 0,.2,.5,.8,1:%s, max |V - |f|| %.2g (<= 0.01), e=0 V %.2g (< 0.01), d=e V %.4f (> 0.99), "
              "%.2f s (< 5 s)",
              values.c_str(), worst, sharp, maximal, secs)};
}

Outcome poisson_statistics() {
  const double gamma = 10.0, t_max = 2.0;
  const std::size_t runs = 100000;
  const RngStream master(606);
  std::vector<double> counts(runs), first_gaps;
  first_gaps.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    RngStream rng = master.split(i);
    const auto times = poisson_events(gamma, t_max, rng);
    counts[i] = static_cast<double>(times.size());
    // The first arrival is untruncated except with probability exp(-20).
    if (!times.empty()) first_gaps.push_back(times.front());
  }
  const auto mv = stats::mean_variance(counts);
  const double mu = gamma * t_max;
  const double n = static_cast<double>(runs);
  const double se_mean = std::sqrt(mu / n);
  // Var of the sample variance for Poisson(mu): (mu + 2 mu^2) / n to leading order.
  const double se_var = std::sqrt((mu + 2.0 * mu * mu) / n);
  const double z_mean = (mv.mean - mu) / se_mean;
  const double z_var = (mv.variance - mu) / se_var;
  const auto ks = stats::ks_exponential(first_gaps, gamma);
  return {std::abs(z_mean) < 3.0 && std::abs(z_var) < 3.0 && ks.p_value > 0.001,
          fmt("mean %.4f (z %.2f), variance %.4f (z %.2f) vs %.0f, KS p = %.4f (> 0.001)", mv.mean, z_mean,
              mv.variance, z_var, mu, ks.p_value)};
}

Outcome recoherence() {
  RngStream pick(707);
  double worst = 0.0;
  std::size_t generic = 0, refused = 0, probes = 0;
  for (int i = 0; i < 100; ++i) {
    const Scenario s = random_scenario(pick);
    const StateVector system = s.system();
    const CouplingSpec c = s.coupling();
    const StateVector joint = entangle(system, c);
    audit(reduced_density_unitary(joint));
    const DensityOperator back = audit(DensityOperator::pure(recohere(joint, c)));
    worst = std::max(worst, std::abs(purity(back) - 1.0));
    if (std::abs(s.d * s.e) <= 1e-12) continue;
    ++generic;
    bool all_refused = true;
    for (const auto& entry : joint_transactions(system, c).entries) {
      if (!entry.collapsed_state) continue;
      ++probes;
      const StateVector post = tensor(*entry.collapsed_state, entry.projector);
      audit(DensityOperator::pure(post));
      try {
        recohere(post, c);
        all_refused = false;
      } catch (const RecoherenceError&) {
      }
    }
    if (all_refused) ++refused;
  }
  return {worst <= 1e-12 && refused == generic,
          fmt("100 scenarios, max |purity - 1| %.3g (<= 1e-12), %zu/%zu generic scenarios refused (%zu outcomes)", worst,
              refused, generic, probes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"identity", identity_sweep},          {"decay-law", decay_law},
      {"channel-trajectory", channel_equivalence}, {"born-sampling", born_sampling},
      {"visibility", visibility_link},       {"poisson", poisson_statistics},
      {"recoherence", recoherence},
  };
  int failures = 0;
  int number = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %-18s %s  %s\n", number++, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  const bool audit_ok = audit.failed == 0 && audit.checked > 0;
  std::printf("criterion 8 %-18s %s  %zu density operators, %zu invalid, max herm %.2g, max trace %.2g, min eig %.2g\n",
              "state-validity", audit_ok ? "PASS" : "FAIL", audit.checked, audit.failed, audit.worst_hermiticity,
              audit.worst_trace, audit.lowest_eigenvalue);
  if (!audit_ok) ++failures;
  return failures == 0 ? 0 : 1;
}
