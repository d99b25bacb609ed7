#include "tidecoh/transact.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <sstream>

namespace tidecoh {

double TransactionSet::total_weight() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

std::vector<double> TransactionSet::weights() const {
  std::vector<double> w;
  w.reserve(entries.size());
  for (const auto& e : entries) w.push_back(e.weight);
  return w;
}

namespace {

void check_completeness(double total, const char* what) {
  if (total < 1.0 - numerics().weight_sum) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": absorber weights sum to " << total << " < 1 (incomplete absorber set)";
    throw IncompleteAbsorberError(os.str());
  }
}

}  // namespace

TransactionSet process_one(const StateVector& psi, const std::vector<std::string>& absorber_basis) {
  const auto labels = psi.basis_labels();
  TransactionSet t{{}, psi};
  for (const auto& k : absorber_basis) {
    auto it = std::find(labels.begin(), labels.end(), k);
    if (it == labels.end()) throw UnknownLabelError("process_one: unknown absorber label '" + k + "'");
    const auto idx = it - labels.begin();
    CVector basis = CVector::Zero(static_cast<Eigen::Index>(psi.size()));
    basis(idx) = 1.0;
    StateVector proj(std::move(basis), psi.factors());
    t.entries.push_back({k, proj, std::norm(psi.amplitudes()(idx)), proj});
  }
  check_completeness(t.total_weight(), "process_one");
  return t;
}

TransactionSet joint_transactions(const StateVector& system, const CouplingSpec& c) {
  const RelativeDecomposition rd = relative_decomposition(system, c);
  TransactionSet t{{}, entangle(system, c)};
  for (const auto& b : rd.branches) {
    t.entries.push_back({b.pointer_label, StateVector::basis(rd.pointer, b.pointer_label),
                         b.state ? b.magnitude * b.magnitude : 0.0, b.state});
  }
  check_completeness(t.total_weight(), "joint_transactions");
  return t;
}

ActualizedOutcome actualize(const TransactionSet& t, RngStream& rng) {
  double total = 0.0;
  std::size_t last = t.entries.size();
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    if (t.entries[i].weight > 0.0 && t.entries[i].collapsed_state) {
      total += t.entries[i].weight;
      last = i;
    }
  }
  if (last == t.entries.size()) throw ZeroWeightError("actualize: all transaction weights are zero");

  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t pick = last;
  for (std::size_t i = 0; i < last; ++i) {
    const auto& e = t.entries[i];
    if (!(e.weight > 0.0) || !e.collapsed_state) continue;
    cumulative += e.weight;
    if (u < cumulative) {
      pick = i;
      break;
    }
  }
  const auto& e = t.entries[pick];
  return {pick, e.outcome_label, *e.collapsed_state, e.outcome_label};
}

DensityOperator epistemic_mixture(const RelativeDecomposition& rd) {
  const auto ns = static_cast<Eigen::Index>(rd.system.dim());
  const auto np = static_cast<Eigen::Index>(rd.pointer.dim());
  CMatrix rho = CMatrix::Zero(ns * np, ns * np);
  for (std::size_t k = 0; k < rd.branches.size(); ++k) {
    const auto& b = rd.branches[k];
    if (!b.state) continue;
    const CVector& s = b.state->amplitudes();
    const CMatrix block = (b.magnitude * b.magnitude) * (s * s.adjoint());
    // Embed |s><s| (x) |k><k|: rows/cols n*np + k.
    const auto kk = static_cast<Eigen::Index>(k);
    for (Eigen::Index i = 0; i < ns; ++i) {
      for (Eigen::Index j = 0; j < ns; ++j) rho(i * np + kk, j * np + kk) += block(i, j);
    }
  }
  return DensityOperator(std::move(rho), {rd.system, rd.pointer});
}

DensityOperator reduced_epistemic(const DensityOperator& rho_joint) {
  if (rho_joint.factors().size() != 2) {
    throw DimensionError("reduced_epistemic: expected a system (x) pointer operator");
  }
  return partial_trace(rho_joint, 0);
}

}  // namespace tidecoh
