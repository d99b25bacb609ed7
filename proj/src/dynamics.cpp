#include "tidecoh/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "tidecoh/transact.hpp"

namespace tidecoh {

DecaySchedule DecaySchedule::make(double gamma, complex f, std::vector<double> t_grid) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("DecaySchedule: repetition rate must be positive");
  }
  if (std::abs(f) > 1.0 + numerics().algebraic) {
    throw InvalidArgument("DecaySchedule: |f| must not exceed 1");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && t_grid[i] < t_grid[i - 1])) {
      throw InvalidArgument("DecaySchedule: time grid must be sorted and non-negative");
    }
  }
  return {gamma, f, gamma * (1.0 - f), std::move(t_grid)};
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  if (count > 1) out.back() = stop;
  return out;
}

const StateVector& TrajectoryRecord::state_at(double t) const {
  auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  if (it == event_times.begin()) return initial;
  return states[static_cast<std::size_t>(it - event_times.begin()) - 1];
}

std::vector<CMatrix> kraus_operators(const CouplingSpec& c) {
  const CMatrix& ov = c.overlaps();
  std::vector<CMatrix> ops;
  for (Eigen::Index k = 0; k < ov.rows(); ++k) {
    ops.push_back(ov.row(k).transpose().asDiagonal());
  }
  return ops;
}

DensityOperator channel_step(const DensityOperator& rho, const CouplingSpec& c) {
  require_density(rho, "channel_step");
  if (rho.factors().size() != 1 || rho.dim() != c.system_dim()) {
    throw DimensionError("channel_step: operator does not live on the coupling's system space");
  }
  CMatrix out = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& m : kraus_operators(c)) out += m * rho.matrix() * m.adjoint();
  return DensityOperator(std::move(out), rho.factors());
}

std::vector<double> poisson_events(double gamma, double t_max, RngStream& rng) {
  if (!(gamma > 0.0) || !(t_max > 0.0)) {
    throw InvalidArgument("poisson_events: rate and horizon must be positive");
  }
  std::vector<double> times;
  double t = rng.exponential(gamma);
  while (t <= t_max) {
    // Guard the strictly-increasing contract against a zero-length gap.
    if (times.empty() || t > times.back()) times.push_back(t);
    t += rng.exponential(gamma);
  }
  return times;
}

std::vector<complex> analytic_decay(complex rho0_offdiag, const DecaySchedule& schedule) {
  std::vector<complex> out;
  out.reserve(schedule.t_grid.size());
  for (double t : schedule.t_grid) out.push_back(rho0_offdiag * std::exp(-schedule.lambda * t));
  return out;
}

TrajectoryRecord run_trajectory(const StateVector& system0, const CouplingSpec& c, double gamma,
                                double t_max, RngStream rng, std::uint64_t stream_index) {
  TrajectoryRecord rec{stream_index, system0, {}, {}, {}};
  rec.event_times = poisson_events(gamma, t_max, rng);
  rec.outcome_labels.reserve(rec.event_times.size());
  rec.states.reserve(rec.event_times.size());
  const StateVector* current = &rec.initial;
  for (std::size_t i = 0; i < rec.event_times.size(); ++i) {
    ActualizedOutcome o = actualize(joint_transactions(*current, c), rng);
    rec.outcome_labels.push_back(std::move(o.outcome_label));
    rec.states.push_back(std::move(o.collapsed_system_state));
    current = &rec.states.back();
  }
  return rec;
}

namespace {

constexpr std::size_t kChunk = 2048;

// Running sums of (rho - shift) entries and their squared real/imag parts, with
// rho = |psi><psi| and shift the initial density; shifting avoids cancellation
// in the variance when the ensemble barely moves.
struct Accumulator {
  CMatrix shift;
  CMatrix sum;
  Eigen::MatrixXd sq_re;
  Eigen::MatrixXd sq_im;

  explicit Accumulator(const CMatrix& s)
      : shift(s),
        sum(CMatrix::Zero(s.rows(), s.cols())),
        sq_re(Eigen::MatrixXd::Zero(s.rows(), s.cols())),
        sq_im(Eigen::MatrixXd::Zero(s.rows(), s.cols())) {}

  void add(const CVector& psi) {
    const CMatrix dev = psi * psi.adjoint() - shift;
    sum += dev;
    sq_re += dev.real().cwiseAbs2();
    sq_im += dev.imag().cwiseAbs2();
  }

  void merge(const Accumulator& o) {
    sum += o.sum;
    sq_re += o.sq_re;
    sq_im += o.sq_im;
  }

  EnsembleMoments finish(std::size_t n, const std::vector<Factor>& factors) const {
    const double nn = static_cast<double>(n);
    const CMatrix mean_dev = sum / nn;
    CMatrix se = CMatrix::Zero(sum.rows(), sum.cols());
    if (n > 1) {
      for (Eigen::Index i = 0; i < sum.rows(); ++i) {
        for (Eigen::Index j = 0; j < sum.cols(); ++j) {
          const double vr = std::max(0.0, (sq_re(i, j) - nn * std::norm(mean_dev(i, j).real())) / (nn - 1.0));
          const double vi = std::max(0.0, (sq_im(i, j) - nn * std::norm(mean_dev(i, j).imag())) / (nn - 1.0));
          se(i, j) = complex(std::sqrt(vr / nn), std::sqrt(vi / nn));
        }
      }
    }
    return {DensityOperator(shift + mean_dev, factors), std::move(se)};
  }
};

// Runs body(begin, end, acc) over fixed-size trajectory chunks and merges the
// per-chunk accumulators in chunk order, so sums are independent of threading.
template <typename Body>
std::vector<std::vector<Accumulator>> run_chunks(std::size_t n_traj, std::size_t n_points, const CMatrix& shift,
                                                 unsigned workers, Body body) {
  const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
  std::vector<std::vector<Accumulator>> partial(n_chunks, std::vector<Accumulator>(n_points, Accumulator(shift)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n_chunks; k = next++) {
      body(k * kChunk, std::min(n_traj, (k + 1) * kChunk), partial[k]);
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_chunks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return partial;
}

std::vector<Accumulator> reduce(std::vector<std::vector<Accumulator>>& partial, std::size_t n_points,
                                const CMatrix& shift) {
  std::vector<Accumulator> total(n_points, Accumulator(shift));
  for (const auto& chunk : partial) {
    for (std::size_t p = 0; p < n_points; ++p) total[p].merge(chunk[p]);
  }
  return total;
}

void require_positive_count(std::size_t n_traj, const char* what) {
  if (n_traj == 0) throw InvalidArgument(std::string(what) + ": need at least one trajectory");
}

}  // namespace

EnsembleResult ensemble_decay(const StateVector& system0, const CouplingSpec& c, double gamma,
                              const std::vector<double>& t_grid, std::size_t n_traj,
                              const RngStream& master, unsigned workers) {
  require_positive_count(n_traj, "ensemble_decay");
  if (t_grid.empty()) throw InvalidArgument("ensemble_decay: empty time grid");
  DecaySchedule::make(gamma, 0.0, t_grid);  // validates rate and grid
  const double t_max = std::max(t_grid.back(), 0.0);
  const CMatrix shift = system0.amplitudes() * system0.amplitudes().adjoint();
  const std::size_t n_points = t_grid.size();

  auto partial = run_chunks(n_traj, n_points, shift, workers,
                            [&](std::size_t begin, std::size_t end, std::vector<Accumulator>& acc) {
    for (std::size_t i = begin; i < end; ++i) {
      if (t_max > 0.0) {
        const TrajectoryRecord rec = run_trajectory(system0, c, gamma, t_max, master.split(i), i);
        for (std::size_t p = 0; p < n_points; ++p) acc[p].add(rec.state_at(t_grid[p]).amplitudes());
      } else {
        for (std::size_t p = 0; p < n_points; ++p) acc[p].add(system0.amplitudes());
      }
    }
  });

  const auto total = reduce(partial, n_points, shift);
  EnsembleResult result{t_grid, {}, n_traj};
  for (const auto& acc : total) result.points.push_back(acc.finish(n_traj, system0.factors()));
  return result;
}

EnsembleMoments ensemble_after_events(const StateVector& system0, const CouplingSpec& c,
                                      std::size_t n_events, std::size_t n_traj,
                                      const RngStream& master, unsigned workers) {
  require_positive_count(n_traj, "ensemble_after_events");
  const CMatrix shift = system0.amplitudes() * system0.amplitudes().adjoint();
  auto partial = run_chunks(n_traj, 1, shift, workers,
                            [&](std::size_t begin, std::size_t end, std::vector<Accumulator>& acc) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng = master.split(i);
      StateVector psi = system0;
      for (std::size_t k = 0; k < n_events; ++k) {
        psi = actualize(joint_transactions(psi, c), rng).collapsed_system_state;
      }
      acc[0].add(psi.amplitudes());
    }
  });
  return reduce(partial, 1, shift)[0].finish(n_traj, system0.factors());
}

double image_residual(const StateVector& joint, const CouplingSpec& c) {
  if (joint.factors().size() != 2 || joint.size() != c.system_dim() * c.pointer_dim()) {
    throw DimensionError("recohere: joint state does not live on system (x) pointer");
  }
  const CMatrix v = c.isometry();
  const CVector& psi = joint.amplitudes();
  return (psi - v * (v.adjoint() * psi)).norm();
}

StateVector recohere(const StateVector& joint, const CouplingSpec& c) {
  const double residual = image_residual(joint, c);
  if (residual > numerics().image_residual) {
    std::ostringstream os;
    os.precision(6);
    os << "recohere: state lies outside the entangler image (residual " << residual
       << "); an absorption has already actualized or the coupling is wrong";
    throw RecoherenceError(os.str(), residual);
  }
  return StateVector::normalized(c.isometry().adjoint() * joint.amplitudes(), {c.system()});
}

}  // namespace tidecoh
