#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tidecoh/coupling.hpp"
#include "tidecoh/rng.hpp"

namespace tidecoh {

// Thrown when an absorber set does not exhaust the Born weight of the source.
class IncompleteAbsorberError : public Error {
 public:
  using Error::Error;
};

class ZeroWeightError : public Error {
 public:
  using Error::Error;
};

/// One incipient transaction: weight |<k|psi>|^2 attached to projector |k><k|.
struct TransactionEntry {
  std::string outcome_label;
  StateVector projector;  // |k>
  double weight = 0.0;
  // State of the emitting system if this entry actualizes. Empty for degenerate branches.
  std::optional<StateVector> collapsed_state;
};

struct TransactionSet {
  std::vector<TransactionEntry> entries;
  StateVector source;

  double total_weight() const;
  std::vector<double> weights() const;
};

struct ActualizedOutcome {
  std::size_t index = 0;
  std::string outcome_label;
  StateVector collapsed_system_state;
  std::string collapsed_pointer_label;
};

// Weighted projectors onto the absorber basis (labels of psi's flattened basis).
// Throws IncompleteAbsorberError if the weights sum to less than 1 - weight_sum tolerance.
TransactionSet process_one(const StateVector& psi, const std::vector<std::string>& absorber_basis);

// One transaction per pointer outcome, weight = relative-branch magnitude squared,
// collapsed state = the matching relative system state.
TransactionSet joint_transactions(const StateVector& system, const CouplingSpec& c);

// Inverse-CDF draw over the cumulative weights with a single uniform.
ActualizedOutcome actualize(const TransactionSet& t, RngStream& rng);

// sum_k magnitude_k^2 |state_k><state_k| (x) |k><k| on system (x) pointer.
DensityOperator epistemic_mixture(const RelativeDecomposition& rd);

// Traces the pointer out of an epistemic mixture.
DensityOperator reduced_epistemic(const DensityOperator& rho_joint);

}  // namespace tidecoh
