#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tidecoh/qcore.hpp"

namespace tidecoh {

/// The measurement interaction |n>|ready> -> |n>|phi_n>.
///
/// Holds one normalized pointer state per system basis state. The pointer
/// ready state is never stored: the map is modeled directly as the isometry
/// from system space into system (x) pointer space.
class CouplingSpec {
 public:
  CouplingSpec(Factor system, Factor pointer, std::vector<StateVector> relative_pointer_states);

  const Factor& system() const { return system_; }
  const Factor& pointer() const { return pointer_; }
  std::size_t system_dim() const { return system_.dim(); }
  std::size_t pointer_dim() const { return pointer_.dim(); }
  const std::vector<StateVector>& relative_pointer_states() const { return states_; }
  const StateVector& pointer_state(std::string_view system_label) const;

  // Columns are the pointer states: overlaps()(k, n) = <k|phi_n>.
  const CMatrix& overlaps() const { return overlaps_; }

  // The isometry V : system -> system (x) pointer, V|n> = |n>|phi_n>.
  CMatrix isometry() const;

 private:
  Factor system_;
  Factor pointer_;
  std::vector<StateVector> states_;
  CMatrix overlaps_;
};

inline const Factor& slit_factor() {
  static const Factor f{{"A", "B"}};
  return f;
}

inline const Factor& photon_factor() {
  static const Factor f{{"k_A", "k_B"}};
  return f;
}

// Two-slit unsharp coupling: phi_A = d|k_A> + e|k_B>, phi_B = e|k_A> + d|k_B>.
// Throws NormalizationError if |d|^2 + |e|^2 differs from 1 by more than
// numerics().input_norm.
CouplingSpec two_slit_coupling(complex d, complex e);

// c_n |n> (x) |phi_n> summed over n.
StateVector entangle(const StateVector& system, const CouplingSpec& c);

// <phi_m|phi_n>.
complex decoherence_function(const CouplingSpec& c, std::string_view m, std::string_view n);

// Reduced system state of a system (x) pointer vector, by tracing out the pointer.
DensityOperator reduced_density_unitary(const StateVector& joint);

struct RelativeBranch {
  std::string pointer_label;
  double magnitude = 0.0;
  // Empty when magnitude < numerics().degenerate_branch; such branches are never sampled.
  std::optional<StateVector> state;
};

/// The joint state rewritten in the pointer basis:
/// sum_k magnitude_k |state_k> (x) |k>.
struct RelativeDecomposition {
  Factor system;
  Factor pointer;
  std::vector<RelativeBranch> branches;

  // sum_k magnitude_k |state_k> (x) |k>.
  StateVector reconstruct() const;
};

RelativeDecomposition relative_decomposition(const StateVector& system, const CouplingSpec& c);

}  // namespace tidecoh
