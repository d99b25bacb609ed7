#include "tidecoh/coupling.hpp"

#include <cmath>
#include <sstream>

namespace tidecoh {

namespace {

void require_system(const StateVector& system, const CouplingSpec& c, const char* what) {
  if (system.factors().size() != 1 || system.size() != c.system_dim()) {
    std::ostringstream os;
    os << what << ": system state of size " << system.size() << " does not match coupling dim "
       << c.system_dim();
    throw DimensionError(os.str());
  }
}

}  // namespace

CouplingSpec::CouplingSpec(Factor system, Factor pointer,
                           std::vector<StateVector> relative_pointer_states)
    : system_(std::move(system)), pointer_(std::move(pointer)),
      states_(std::move(relative_pointer_states)) {
  if (states_.size() != system_.dim()) {
    throw DimensionError("CouplingSpec: need one pointer state per system basis state");
  }
  overlaps_.resize(static_cast<Eigen::Index>(pointer_.dim()), static_cast<Eigen::Index>(system_.dim()));
  for (std::size_t n = 0; n < states_.size(); ++n) {
    if (states_[n].factors().size() != 1 || states_[n].size() != pointer_.dim()) {
      throw DimensionError("CouplingSpec: pointer state has wrong dimension");
    }
    overlaps_.col(static_cast<Eigen::Index>(n)) = states_[n].amplitudes();
  }
}

const StateVector& CouplingSpec::pointer_state(std::string_view system_label) const {
  return states_[system_.index_of(system_label)];
}

CMatrix CouplingSpec::isometry() const {
  const auto ns = static_cast<Eigen::Index>(system_dim());
  const auto np = static_cast<Eigen::Index>(pointer_dim());
  CMatrix v = CMatrix::Zero(ns * np, ns);
  for (Eigen::Index n = 0; n < ns; ++n) v.block(n * np, n, np, 1) = overlaps_.col(n);
  return v;
}

CouplingSpec two_slit_coupling(complex d, complex e) {
  const double norm2 = std::norm(d) + std::norm(e);
  if (!(std::abs(norm2 - 1.0) <= numerics().input_norm)) {
    std::ostringstream os;
    os.precision(12);
    os << "two_slit_coupling: |d|^2 + |e|^2 = " << norm2 << ", expected 1";
    throw NormalizationError(os.str());
  }
  // Exact renormalization so downstream states meet the tighter algebraic tolerance.
  const double s = std::sqrt(norm2);
  d /= s;
  e /= s;
  CVector phi_a(2), phi_b(2);
  phi_a << d, e;
  phi_b << e, d;
  const Factor& p = photon_factor();
  return CouplingSpec(slit_factor(), p,
                      {StateVector::normalized(phi_a, {p}), StateVector::normalized(phi_b, {p})});
}

StateVector entangle(const StateVector& system, const CouplingSpec& c) {
  require_system(system, c, "entangle");
  CVector joint = c.isometry() * system.amplitudes();
  return StateVector(std::move(joint), {c.system(), c.pointer()});
}

complex decoherence_function(const CouplingSpec& c, std::string_view m, std::string_view n) {
  return c.pointer_state(m).amplitudes().dot(c.pointer_state(n).amplitudes());
}

DensityOperator reduced_density_unitary(const StateVector& joint) {
  if (joint.factors().size() != 2) {
    throw DimensionError("reduced_density_unitary: expected a system (x) pointer state");
  }
  return partial_trace(DensityOperator::pure(joint), 0);
}

StateVector RelativeDecomposition::reconstruct() const {
  const auto np = static_cast<Eigen::Index>(pointer.dim());
  CVector joint = CVector::Zero(static_cast<Eigen::Index>(system.dim()) * np);
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& b = branches[k];
    if (!b.state) continue;
    const CVector& s = b.state->amplitudes();
    for (Eigen::Index n = 0; n < s.size(); ++n) {
      joint(n * np + static_cast<Eigen::Index>(k)) += b.magnitude * s(n);
    }
  }
  return StateVector(std::move(joint), {system, pointer});
}

RelativeDecomposition relative_decomposition(const StateVector& system, const CouplingSpec& c) {
  require_system(system, c, "relative_decomposition");
  RelativeDecomposition rd{c.system(), c.pointer(), {}};
  const CVector& amps = system.amplitudes();
  const CMatrix& ov = c.overlaps();
  // Unnormalized relative state for pointer k: sum_n c_n <k|phi_n> |n>.
  for (Eigen::Index k = 0; k < ov.rows(); ++k) {
    CVector branch = ov.row(k).transpose().cwiseProduct(amps);
    RelativeBranch b;
    b.pointer_label = c.pointer().labels[static_cast<std::size_t>(k)];
    b.magnitude = branch.norm();
    if (b.magnitude >= numerics().degenerate_branch) {
      b.state = StateVector(branch / b.magnitude, {c.system()});
    }
    rd.branches.push_back(std::move(b));
  }
  return rd;
}

}  // namespace tidecoh
