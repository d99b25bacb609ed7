#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tidecoh/coupling.hpp"
#include "tidecoh/rng.hpp"

namespace tidecoh {

/// Repetition rate, per-event decoherence factor and the derived decay rate
/// lambda = gamma * (1 - f). For complex f the magnitude decays at
/// gamma * (1 - Re f) and the phase rotates at gamma * Im f.
struct DecaySchedule {
  double gamma = 0.0;
  complex f{0.0, 0.0};
  complex lambda{0.0, 0.0};
  std::vector<double> t_grid;

  // Throws InvalidArgument unless gamma > 0, |f| <= 1 and t_grid is sorted and non-negative.
  static DecaySchedule make(double gamma, complex f, std::vector<double> t_grid);
};

std::vector<double> linspace(double start, double stop, std::size_t count);

struct TrajectoryRecord {
  std::uint64_t stream_index = 0;
  StateVector initial;
  std::vector<double> event_times;
  std::vector<std::string> outcome_labels;
  std::vector<StateVector> states;  // system state right after each event

  // Piecewise-constant: the state after the last event at or before t.
  const StateVector& state_at(double t) const;
};

// Kraus maps of one emission/absorption cycle: M_k = sum_n <k|phi_n> |n><n|.
std::vector<CMatrix> kraus_operators(const CouplingSpec& c);

// rho -> sum_k M_k rho M_k^dagger. Throws InvalidArgument on a non-density input.
DensityOperator channel_step(const DensityOperator& rho, const CouplingSpec& c);

// Arrival times of a rate-gamma Poisson process on [0, t_max].
std::vector<double> poisson_events(double gamma, double t_max, RngStream& rng);

// rho_mn(0) * exp(-lambda t) on the schedule's grid.
std::vector<complex> analytic_decay(complex rho0_offdiag, const DecaySchedule& schedule);

// One Born-rule trajectory: Poisson events on [0, t_max], each one a
// joint_transactions + actualize collapse of the system state.
TrajectoryRecord run_trajectory(const StateVector& system0, const CouplingSpec& c, double gamma,
                                double t_max, RngStream rng, std::uint64_t stream_index = 0);

// Sample mean and standard error of |psi><psi| over trajectories.
// standard_error(i, j) packs the standard error of Re(rho_ij) in the real
// part and that of Im(rho_ij) in the imaginary part.
struct EnsembleMoments {
  DensityOperator mean;
  CMatrix standard_error;
};

struct EnsembleResult {
  std::vector<double> t_grid;
  std::vector<EnsembleMoments> points;
  std::size_t n_traj = 0;
};

// Trajectory i uses master.split(i); the result does not depend on `workers`
// (0 = hardware concurrency).
EnsembleResult ensemble_decay(const StateVector& system0, const CouplingSpec& c, double gamma,
                              const std::vector<double>& t_grid, std::size_t n_traj,
                              const RngStream& master, unsigned workers = 0);

// Average after exactly n_events collapses (no Poisson timing).
EnsembleMoments ensemble_after_events(const StateVector& system0, const CouplingSpec& c,
                                      std::size_t n_events, std::size_t n_traj,
                                      const RngStream& master, unsigned workers = 0);

class RecoherenceError : public Error {
 public:
  RecoherenceError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Applies the left inverse V^dagger of the entangling isometry and returns the
// recovered system state (the pointer returns to its ready state). Throws
// RecoherenceError when the input lies outside the image of V, i.e. after
// an actualization or with the wrong coupling.
StateVector recohere(const StateVector& joint, const CouplingSpec& c);

// Distance from `joint` to the image of the entangling isometry.
double image_residual(const StateVector& joint, const CouplingSpec& c);

}  // namespace tidecoh
