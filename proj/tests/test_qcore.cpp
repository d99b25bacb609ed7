#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tidecoh/coupling.hpp"
#include "tidecoh/qcore.hpp"

namespace tidecoh {
namespace {

const Factor kQubit = Factor::numbered(2);

StateVector qubit(complex a, complex b) {
  CVector v(2);
  v << a, b;
  return StateVector(v, {kQubit});
}

StateVector random_vector(std::mt19937_64& gen, int n) {
  return StateVector::normalized(oracle::random_state(gen, n), {Factor::numbered(static_cast<std::size_t>(n))});
}

TEST(StateVector, RejectsUnnormalizedAmplitudes) {
  CVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector(v, {kQubit}), NormalizationError);
  EXPECT_THROW(StateVector::normalized(CVector::Zero(2), {kQubit}), NormalizationError);
}

TEST(StateVector, RejectsDimsInconsistentWithLength) {
  CVector v = CVector::Zero(3);
  v(0) = 1.0;
  EXPECT_THROW(StateVector(v, {kQubit}), DimensionError);
}

TEST(StateVector, LabelsFlattenInKroneckerOrder) {
  const StateVector j = tensor(StateVector::basis(Factor{{"A", "B"}}, "B"), StateVector::basis(Factor{{"k_A", "k_B"}}, "k_A"));
  EXPECT_EQ(j.basis_labels(), (std::vector<std::string>{"A,k_A", "A,k_B", "B,k_A", "B,k_B"}));
  EXPECT_EQ(j.amplitude("B,k_A"), complex(1.0));
  EXPECT_THROW(j.amplitude("C,k_A"), UnknownLabelError);
}

TEST(Tensor, BasisStates) {
  const StateVector out = tensor(qubit(1, 0), qubit(0, 1));
  CVector expected(4);
  expected << 0, 1, 0, 0;
  EXPECT_LT((out.amplitudes() - expected).norm(), 1e-15);
  EXPECT_EQ(out.dims(), (std::vector<std::size_t>{2, 2}));
}

TEST(Tensor, DistributesOverSuperposition) {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector out = tensor(qubit(h, h), qubit(1, 0));
  CVector expected(4);
  expected << h, 0, h, 0;
  EXPECT_LT((out.amplitudes() - expected).norm(), 1e-15);
}

TEST(Tensor, RandomProductsStayNormalized) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    const StateVector u = random_vector(gen, 2 + i % 3);
    const StateVector v = random_vector(gen, 2 + (i / 3) % 3);
    const StateVector uv = tensor(u, v);
    double norm2 = 0.0;
    for (Eigen::Index k = 0; k < uv.amplitudes().size(); ++k) norm2 += std::norm(uv.amplitudes()(k));
    EXPECT_NEAR(norm2, 1.0, 1e-12);
    EXPECT_LT((uv.amplitudes() - oracle::kron(u.amplitudes(), v.amplitudes())).norm(), 1e-15);
  }
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityOperator rho = DensityOperator::pure(StateVector(bell, {kQubit, kQubit}));
  for (std::size_t keep : {0u, 1u}) {
    const DensityOperator r = partial_trace(rho, keep);
    EXPECT_LT(max_abs_deviation(r.matrix(), 0.5 * CMatrix::Identity(2, 2)), 1e-15);
  }
}

TEST(PartialTrace, ProductStateFactorizes) {
  std::mt19937_64 gen(3);
  const StateVector psi = random_vector(gen, 3);
  const StateVector phi = random_vector(gen, 2);
  const DensityOperator rho = DensityOperator::pure(tensor(psi, phi));
  const DensityOperator first = partial_trace(rho, 0);
  const DensityOperator second = partial_trace(rho, 1);
  const CVector& a = psi.amplitudes();
  const CVector& b = phi.amplitudes();
  EXPECT_LT(max_abs_deviation(first.matrix(), a * a.adjoint()), 1e-12);
  EXPECT_LT(max_abs_deviation(second.matrix(), b * b.adjoint()), 1e-12);
  EXPECT_EQ(first.factors().front(), psi.factors().front());
}

TEST(PartialTrace, UnsharpTwoSlitOffDiagonal) {
  // Explicit 4x4 construction and index-summed trace give 0.5 * (d e + e d) = 0.4.
  const double h = 1.0 / std::sqrt(2.0);
  const Eigen::VectorXcd joint = oracle::two_slit_joint(h, h, std::sqrt(0.8), std::sqrt(0.2));
  const Eigen::MatrixXcd expected = oracle::trace_second(joint * joint.adjoint(), 2, 2);
  ASSERT_NEAR(expected(0, 1).real(), 0.4, 1e-15);

  const DensityOperator rho(joint * joint.adjoint(), {Factor{{"A", "B"}}, Factor{{"k_A", "k_B"}}});
  const DensityOperator reduced = partial_trace(rho, 0);
  EXPECT_NEAR(reduced(0, 1).real(), 0.4, 1e-12);
  EXPECT_NEAR(reduced(0, 1).imag(), 0.0, 1e-12);
  EXPECT_LT(max_abs_deviation(reduced.matrix(), expected), 1e-15);
}

TEST(PartialTrace, RejectsBadInputs) {
  const DensityOperator single(0.5 * CMatrix::Identity(2, 2), {kQubit});
  EXPECT_THROW(partial_trace(single, 0), DimensionError);
  const DensityOperator pair(0.25 * CMatrix::Identity(4, 4), {kQubit, kQubit});
  EXPECT_THROW(partial_trace(pair, 2), DimensionError);
  // Factor metadata inconsistent with the matrix size.
  EXPECT_THROW(DensityOperator(0.25 * CMatrix::Identity(4, 4), {kQubit, Factor::numbered(3)}), DimensionError);
  EXPECT_THROW(DensityOperator(CMatrix::Zero(2, 3), {kQubit}), DimensionError);
}

TEST(PartialTrace, RandomMixedStatesMatchIndexSum) {
  std::mt19937_64 gen(5);
  for (int draw = 0; draw < 1000; ++draw) {
    const int na = 2 + draw % 3;
    const int nb = 2 + (draw / 3) % 2;
    const int n = na * nb;
    // Random mixture of three pure states.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CMatrix rho = CMatrix::Zero(n, n);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double w = u(gen);
      const Eigen::VectorXcd v = oracle::random_state(gen, n);
      rho += w * v * v.adjoint();
      total += w;
    }
    rho /= total;
    const DensityOperator op(rho, {Factor::numbered(na), Factor::numbered(nb)});
    const DensityOperator first = partial_trace(op, 0);
    const DensityOperator second = partial_trace(op, 1);
    ASSERT_TRUE(validate_density(first).passed) << validate_density(first).summary();
    ASSERT_TRUE(validate_density(second).passed) << validate_density(second).summary();
    ASSERT_LT(max_abs_deviation(first.matrix(), oracle::trace_second(rho, na, nb)), 1e-14);
    ASSERT_LT(max_abs_deviation(second.matrix(), oracle::trace_first(rho, na, nb)), 1e-14);
  }
}

TEST(PartialTrace, ThreeFactorsKeepMiddle) {
  std::mt19937_64 gen(9);
  const StateVector a = random_vector(gen, 2), b = random_vector(gen, 3), c = random_vector(gen, 2);
  const DensityOperator rho = DensityOperator::pure(tensor(tensor(a, b), c));
  const DensityOperator mid = partial_trace(rho, 1);
  EXPECT_LT(max_abs_deviation(mid.matrix(), b.amplitudes() * b.amplitudes().adjoint()), 1e-12);
}

TEST(PartialTrace, ProductRoundTripKeepsPurity) {
  std::mt19937_64 gen(21);
  for (int draw = 0; draw < 200; ++draw) {
    const StateVector psi = random_vector(gen, 2 + draw % 3);
    const StateVector phi = random_vector(gen, 2);
    const double p = purity(partial_trace(DensityOperator::pure(tensor(psi, phi)), 0));
    ASSERT_NEAR(p, purity(DensityOperator::pure(psi)), 1e-12);
    ASSERT_NEAR(p, 1.0, 1e-12);
  }
}

TEST(ValidateDensity, MaximallyMixedPasses) {
  const DensityReport r = validate_density(DensityOperator(0.5 * CMatrix::Identity(2, 2), {kQubit}));
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.min_eigenvalue, 0.5, 1e-15);
}

TEST(ValidateDensity, ReportsTraceDeviation) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = 0.4;
  const DensityReport r = validate_density(DensityOperator(m, {kQubit}));
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.trace_deviation, 0.1, 1e-15);
}

TEST(ValidateDensity, FlagsNonHermitianAndNegative) {
  CMatrix m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;
  EXPECT_FALSE(validate_density(DensityOperator(m, {kQubit})).passed);
  m << 1.2, 0.0, 0.0, -0.2;
  const DensityReport r = validate_density(DensityOperator(m, {kQubit}));
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.min_eigenvalue, -0.2, 1e-15);
  EXPECT_THROW(require_density(DensityOperator(m, {kQubit}), "test"), InvalidArgument);
}

TEST(Purity, PureAndMixed) {
  EXPECT_NEAR(purity(DensityOperator::pure(qubit(0.6, complex(0, 0.8)))), 1.0, 1e-15);
  EXPECT_NEAR(purity(DensityOperator(0.5 * CMatrix::Identity(2, 2), {kQubit})), 0.5, 1e-15);
}

TEST(Purity, BalancedUnsharpReducedState) {
  // rho_S = [[1/2, 0.4], [0.4, 1/2]]: trace of the square by direct summation.
  CMatrix rho(2, 2);
  rho << 0.5, 0.4, 0.4, 0.5;
  double direct = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) direct += std::real(rho(i, j) * rho(j, i));
  ASSERT_NEAR(direct, 0.82, 1e-15);
  EXPECT_NEAR(purity(DensityOperator(rho, {kQubit})), 0.5 * (1.0 + 0.8 * 0.8), 1e-12);
}

TEST(Numerics, GlobalConfigIsSwappable) {
  const Numerics saved = numerics();
  Numerics loose = saved;
  loose.algebraic = 1e-3;
  set_numerics(loose);
  CVector v(2);
  v << 1.0, 0.01;  // squared norm 1.0001
  EXPECT_NO_THROW(StateVector(v, {kQubit}));
  set_numerics(saved);
  EXPECT_THROW(StateVector(v, {kQubit}), NormalizationError);
}

}  // namespace
}  // namespace tidecoh
