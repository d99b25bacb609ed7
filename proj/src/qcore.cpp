#include "tidecoh/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace tidecoh {

std::size_t Factor::index_of(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw UnknownLabelError("unknown basis label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

Factor Factor::numbered(std::size_t n) {
  Factor f;
  f.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) f.labels.push_back(std::to_string(i));
  return f;
}

std::size_t product_dim(const std::vector<Factor>& factors) {
  std::size_t d = 1;
  for (const auto& f : factors) d *= f.dim();
  return d;
}

namespace {

void check_factors(std::size_t size, const std::vector<Factor>& factors, const char* what) {
  if (factors.empty()) throw DimensionError(std::string(what) + ": no tensor factors given");
  for (const auto& f : factors) {
    if (f.dim() == 0) throw DimensionError(std::string(what) + ": empty tensor factor");
  }
  if (product_dim(factors) != size) {
    std::ostringstream os;
    os << what << ": size " << size << " does not match product of factor dims "
       << product_dim(factors);
    throw DimensionError(os.str());
  }
}

}  // namespace

StateVector::StateVector(CVector amplitudes, std::vector<Factor> factors)
    : amplitudes_(std::move(amplitudes)), factors_(std::move(factors)) {
  check_factors(size(), factors_, "StateVector");
  const double norm2 = amplitudes_.squaredNorm();
  if (!(std::abs(norm2 - 1.0) <= numerics().algebraic)) {
    std::ostringstream os;
    os.precision(17);
    os << "StateVector: squared norm " << norm2 << " is not 1";
    throw NormalizationError(os.str());
  }
}

StateVector StateVector::normalized(CVector raw, std::vector<Factor> factors) {
  const double n = raw.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw NormalizationError("StateVector: cannot normalize a zero or non-finite vector");
  }
  raw /= n;
  return StateVector(std::move(raw), std::move(factors));
}

StateVector StateVector::basis(const Factor& factor, std::string_view label) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(factor.dim()));
  v(static_cast<Eigen::Index>(factor.index_of(label))) = 1.0;
  return StateVector(std::move(v), {factor});
}

std::vector<std::size_t> StateVector::dims() const {
  std::vector<std::size_t> d;
  for (const auto& f : factors_) d.push_back(f.dim());
  return d;
}

std::vector<std::string> StateVector::basis_labels() const {
  std::vector<std::string> out{""};
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    std::vector<std::string> next;
    next.reserve(out.size() * factors_[k].dim());
    for (const auto& prefix : out) {
      for (const auto& l : factors_[k].labels) {
        next.push_back(k == 0 ? l : prefix + "," + l);
      }
    }
    out = std::move(next);
  }
  return out;
}

complex StateVector::amplitude(std::string_view label) const {
  const auto labels = basis_labels();
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw UnknownLabelError("unknown basis label '" + std::string(label) + "'");
  }
  return amplitudes_(it - labels.begin());
}

DensityOperator::DensityOperator(CMatrix matrix, std::vector<Factor> factors)
    : matrix_(std::move(matrix)), factors_(std::move(factors)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("DensityOperator: matrix is not square");
  }
  check_factors(dim(), factors_, "DensityOperator");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityOperator(a * a.adjoint(), psi.factors());
}

std::string DensityReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << (passed ? "pass" : "FAIL") << " (hermiticity " << hermiticity_deviation << ", trace "
     << trace_deviation << ", min eigenvalue " << min_eigenvalue << ")";
  return os.str();
}

StateVector tensor(const StateVector& u, const StateVector& v) {
  const CVector& a = u.amplitudes();
  const CVector& b = v.amplitudes();
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  std::vector<Factor> factors = u.factors();
  factors.insert(factors.end(), v.factors().begin(), v.factors().end());
  return StateVector(std::move(out), std::move(factors));
}

DensityOperator partial_trace(const DensityOperator& rho, std::size_t keep) {
  const auto& factors = rho.factors();
  if (factors.size() < 2) {
    throw DimensionError("partial_trace: operator has fewer than two tensor factors");
  }
  if (keep >= factors.size()) {
    throw DimensionError("partial_trace: factor index " + std::to_string(keep) + " out of range");
  }
  if (product_dim(factors) != rho.dim()) {
    throw DimensionError("partial_trace: factor dims inconsistent with matrix size");
  }

  // Split the full index into (kept digit, environment index).
  const std::size_t n = rho.dim();
  std::size_t inner = 1;
  for (std::size_t k = keep + 1; k < factors.size(); ++k) inner *= factors[k].dim();
  const std::size_t kept_dim = factors[keep].dim();
  std::vector<std::size_t> kept(n), env(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t outer = i / (inner * kept_dim);
    kept[i] = (i / inner) % kept_dim;
    env[i] = outer * inner + i % inner;
  }

  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (env[i] == env[j]) out(kept[i], kept[j]) += m(i, j);
    }
  }
  return DensityOperator(std::move(out), {factors[keep]});
}

DensityReport validate_density(const DensityOperator& rho) {
  const CMatrix& m = rho.matrix();
  DensityReport r;
  r.hermiticity_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  r.trace_deviation = std::abs(m.trace() - complex(1.0, 0.0));
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  const auto& tol = numerics();
  r.passed = r.hermiticity_deviation <= tol.algebraic && r.trace_deviation <= tol.algebraic &&
             r.min_eigenvalue >= tol.eigen_floor;
  return r;
}

void require_density(const DensityOperator& rho, std::string_view context) {
  const DensityReport r = validate_density(rho);
  if (!r.passed) {
    throw InvalidArgument(std::string(context) + ": not a valid density operator: " + r.summary());
  }
}

double purity(const DensityOperator& rho) {
  // tr(rho^2) = sum_ij rho_ij rho_ji; for Hermitian rho this is sum |rho_ij|^2.
  const CMatrix& m = rho.matrix();
  return (m * m).trace().real();
}

double max_abs_deviation(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_deviation: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace tidecoh
