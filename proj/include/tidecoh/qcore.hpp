#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tidecoh/numerics.hpp"

namespace tidecoh {

// One tensor factor of a Hilbert space: an ordered, labeled orthonormal basis.
struct Factor {
  std::vector<std::string> labels;

  std::size_t dim() const { return labels.size(); }
  std::size_t index_of(std::string_view label) const;

  // Labels "0", "1", ..., "n-1".
  static Factor numbered(std::size_t n);
  friend bool operator==(const Factor&, const Factor&) = default;
};

std::size_t product_dim(const std::vector<Factor>& factors);

/// Normalized complex amplitude vector over a (possibly composite) labeled basis.
///
/// Amplitudes are stored in Kronecker order: the last factor varies fastest.
/// Construction enforces unit norm to within numerics().algebraic.
class StateVector {
 public:
  StateVector(CVector amplitudes, std::vector<Factor> factors);

  // Rescales `raw` to unit norm first. Throws NormalizationError on a zero vector.
  static StateVector normalized(CVector raw, std::vector<Factor> factors);
  static StateVector basis(const Factor& factor, std::string_view label);

  const CVector& amplitudes() const { return amplitudes_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  std::vector<std::size_t> dims() const;

  // Flattened labels, factor labels joined with ','. E.g. "A,k_B".
  std::vector<std::string> basis_labels() const;
  complex amplitude(std::string_view label) const;

 private:
  CVector amplitudes_;
  std::vector<Factor> factors_;
};

/// Square complex matrix with tensor-factor metadata.
///
/// Only the shape is checked on construction; the physical invariants
/// (Hermitian, unit trace, PSD) are reported by validate_density() so that
/// invalid matrices can still be built and diagnosed.
class DensityOperator {
 public:
  DensityOperator(CMatrix matrix, std::vector<Factor> factors);

  static DensityOperator pure(const StateVector& psi);

  const CMatrix& matrix() const { return matrix_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  complex operator()(std::size_t row, std::size_t col) const { return matrix_(row, col); }

 private:
  CMatrix matrix_;
  std::vector<Factor> factors_;
};

struct DensityReport {
  double hermiticity_deviation = 0.0;  // max |rho - rho^dagger| entrywise
  double trace_deviation = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;
  bool passed = false;

  std::string summary() const;
};

StateVector tensor(const StateVector& u, const StateVector& v);

DensityOperator partial_trace(const DensityOperator& rho, std::size_t keep);

DensityReport validate_density(const DensityOperator& rho);

// Throws InvalidArgument naming `context` when validate_density fails.
void require_density(const DensityOperator& rho, std::string_view context);

double purity(const DensityOperator& rho);

// Entrywise max |a - b|; throws DimensionError on shape mismatch.
double max_abs_deviation(const CMatrix& a, const CMatrix& b);

}  // namespace tidecoh
