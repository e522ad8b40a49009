#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "unihub/hubbard.hpp"

using namespace unihub;

namespace {

HubbardModel standard(double U) { return HubbardModel(XXModel::gl(2, 0, {1}), XXModel::gl(2, 0, {1}), U); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_all(const std::vector<Matrix>& ops) {
  Matrix out = ops.front();
  for (std::size_t k = 1; k < ops.size(); ++k) out = kron(out, ops[k]);
  return out;
}

// Two-site standard Hubbard built from plain 2x2 matrices on factors [up1, down1, up2, down2].
// The periodic chain of length 2 carries the bond twice.
Matrix two_site_oracle(double U) {
  Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2), id = Matrix::Identity(2, 2);
  e12(0, 1) = 1.0;
  e21(1, 0) = 1.0;
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Matrix h = Matrix::Zero(16, 16);
  h += 2.0 * (kron_all({e12, id, e21, id}) + kron_all({e21, id, e12, id}));
  h += 2.0 * (kron_all({id, e12, id, e21}) + kron_all({id, e21, id, e12}));
  h += U * (kron_all({z, z, id, id}) + kron_all({id, id, z, z}));
  return h;
}

}  // namespace

TEST(HOfLambda, Values) {
  EXPECT_EQ(h_of_lambda(0.0, 3.0), 0.0);
  for (double l : {-1.1, 0.2, 0.9}) EXPECT_EQ(h_of_lambda(l, 0.0), 0.0);
  EXPECT_NEAR(h_of_lambda(std::numbers::pi / 4, 1.0), 0.4406868, 1e-7);
  for (double l : {0.13, 0.5, 1.3})
    for (double U : {0.5, 2.0, 10.0}) {
      EXPECT_NEAR(h_of_lambda(-l, U), -h_of_lambda(l, U), 1e-15);
      EXPECT_NEAR(std::sinh(2.0 * h_of_lambda(l, U)), U * std::sin(2.0 * l), 1e-12 * (1.0 + U));
      const double eps = 1e-6;
      const double fd = (h_of_lambda(l + eps, U) - h_of_lambda(l - eps, U)) / (2.0 * eps);
      EXPECT_NEAR(h_derivative(l, U), fd, 1e-7 * (1.0 + U));
    }
}

TEST(HubbardModel, Validation) {
  EXPECT_THROW(HubbardModel(XXModel::gl(2, 0, {1}), XXModel::gl(2, 0, {1}), std::nan("")), std::invalid_argument);
  EXPECT_EQ(standard(1.0).dim(), 4u);
  EXPECT_EQ(hubbard_zoo(1.0).size(), 4u);
}

TEST(HubbardR, CouplingPoleAndJointLimit) {
  EXPECT_THROW(coupling_coefficient(0.3, -0.3 + 1e-12, 0.5), std::domain_error);
  EXPECT_EQ(coupling_coefficient(0.0, 0.0, 0.7), 0.0);
  EXPECT_NEAR(coupling_coefficient(1e-10, 0.0, 0.7), std::tanh(0.7), 1e-12);
}

TEST(HubbardR, Regularity) {
  for (const auto& m : hubbard_zoo(2.0))
    for (double l : {0.0, 0.37, -0.9})
      EXPECT_LT(frobenius_per_side(r_hubbard(m, l, l).matrix - composite_permutation(m)), 1e-14) << m.name();
}

TEST(HubbardR, YbeZoo) {
  for (double U : {0.5, 2.0, 10.0})
    for (const auto& m : hubbard_zoo(U)) {
      const auto plain = verify_hubbard_r(m, 10, 11, HubbardForm::plain);
      const auto gauged = verify_hubbard_r(m, 10, 11, HubbardForm::gauged);
      EXPECT_LT(plain.ybe, 1e-10) << m.name();
      EXPECT_LT(gauged.ybe, 1e-10) << m.name();
      EXPECT_LT(plain.regularity, 1e-13) << m.name();
      EXPECT_LT(gauged.regularity, 1e-13) << m.name();
      EXPECT_LT(plain.unitarity, 1e-12) << m.name();
      EXPECT_LT(gauged.unitarity, 1e-12) << m.name();
      EXPECT_LT(plain.coefficient_forms, 1e-12) << m.name();
    }
}

TEST(HubbardR, YbeNegativeControl) {
  const auto m = standard(2.0);
  const HFunction wrong = [](double l) { return 2.0 * l; };
  EXPECT_LT(hubbard_ybe_residual(m, 0.31, -0.52, 0.77), 1e-10);
  EXPECT_GT(hubbard_ybe_residual(m, 0.31, -0.52, 0.77, HubbardForm::plain, wrong), 1e-3);
}

TEST(HubbardR, ClosedCoefficientForms) {
  const auto m = standard(2.0);
  EXPECT_NEAR(unitarity_coefficient(m, 0.3, 0.1), unitarity_coefficient_alt(m, 0.3, 0.1), 1e-12);
}

// R R21 is a scalar, but not the closed-form one: the second term carries cos⁴λ'12.
TEST(HubbardR, UnitarityScalarDiffersFromClosedForm) {
  const auto m = standard(2.0);
  const double l1 = 0.3, l2 = 0.1;
  const Matrix p = composite_permutation(m);
  const Matrix prod = r_hubbard(m, l1, l2).matrix * p * r_hubbard(m, l2, l1).matrix * p;
  const double scalar = prod(0, 0).real();
  EXPECT_LT(frobenius_per_side(prod - scalar * Matrix::Identity(16, 16)), 1e-14);
  EXPECT_NEAR(scalar, unitarity_coefficient_measured(m, l1, l2), 1e-14);
  EXPECT_GT(std::abs(scalar - unitarity_coefficient(m, l1, l2)), 1e-3);
}

// P R12 P moves C to the second site; it is not R12 itself.
TEST(HubbardR, ExchangeMovesC) {
  for (const auto& m : hubbard_zoo(2.0)) {
    const auto rep = verify_hubbard_r(m, 5, 3);
    EXPECT_LT(rep.symmetry_site_two, 1e-13) << m.name();
    EXPECT_GT(rep.symmetry, 1e-2) << m.name();
  }
}

TEST(Gauge, TrivialCases) {
  const auto free = standard(0.0);
  EXPECT_LT(frobenius_per_side(gauge_r(free, 0.4, -0.2).matrix - r_hubbard(free, 0.4, -0.2).matrix), 1e-15);
  for (const auto& m : hubbard_zoo(3.0))
    EXPECT_LT(frobenius_per_side(gauge_r(m, 0.6, 0.6).matrix - composite_permutation(m)), 1e-14) << m.name();
}

TEST(Gauge, ConjugationIdentity) {
  // Independent form: e^{a CC} = cosh a + sinh a CC, checked against a matrix exponential by series.
  const auto m = standard(2.0);
  const double l1 = 0.41, l2 = -0.23;
  const double h1 = h_of_lambda(l1, 2.0), h2 = h_of_lambda(l2, 2.0);
  const SiteList two(2, m.site());
  auto series_exp = [](const Matrix& a) {
    Matrix term = Matrix::Identity(a.rows(), a.cols()), sum = term;
    for (int k = 1; k < 40; ++k) {
      term = term * a / static_cast<double>(k);
      sum += term;
    }
    return sum;
  };
  const Matrix c1 = embed(cc_site(m), {0}, two), c2 = embed(cc_site(m), {1}, two);
  const Matrix left = series_exp(0.5 * h1 * c1 + 0.5 * h2 * c2);
  const Matrix right = series_exp(-0.5 * h1 * c1 - 0.5 * h2 * c2);
  EXPECT_LT(frobenius_per_side(gauge_r(m, l1, l2).matrix - left * r_hubbard(m, l1, l2).matrix * right), 1e-13);
}

TEST(Reduced, EqualsGaugeAtZero) {
  const auto std3 = standard(3.0);
  EXPECT_LT(frobenius_per_side(reduced_r(std3, 0.7).matrix - gauge_r(std3, 0.7, 0.0).matrix), 1e-13);
  const HubbardModel g11(XXModel::gl(1, 1, {1}), XXModel::gl(1, 1, {1}), 3.0);
  EXPECT_LT(frobenius_per_side(reduced_r(g11, 0.7).matrix - gauge_r(g11, 0.7, 0.0).matrix), 1e-13);
  for (const auto& m : hubbard_zoo(1.5)) {
    EXPECT_LT(frobenius_per_side(reduced_r(m, 0.0).matrix - composite_permutation(m)), 1e-15) << m.name();
    for (double l : {0.2, -0.8})
      EXPECT_LT(frobenius_per_side(reduced_r(m, l).matrix - gauge_r(m, l, 0.0).matrix), 1e-12) << m.name();
  }
}

TEST(Reduced, DerivativeMatchesFiniteDifference) {
  for (const auto& m : hubbard_zoo(2.0)) {
    const double l = 0.3, eps = 1e-5;
    const Matrix fd = (reduced_r(m, l + eps).matrix - reduced_r(m, l - eps).matrix) / (2.0 * eps);
    EXPECT_LT(frobenius_per_side(reduced_r_derivative(m, l).matrix - fd), 1e-8) << m.name();
  }
}

TEST(Hamiltonian, TwoSiteOracle) {
  for (double U : {0.0, 1.0, 4.0}) {
    const Matrix h = hamiltonian_hubbard(standard(U), 2).matrix;
    const Matrix oracle = two_site_oracle(U);
    EXPECT_LT(frobenius_per_side(h - h.adjoint()), 1e-15);
    const auto a = eigh(h).values, b = eigh(oracle).values;
    EXPECT_LT((a - b).norm(), 1e-12) << "U=" << U;
  }
}

TEST(Hamiltonian, CommutesWithTransferAndIsLogDerivative) {
  const auto m = standard(2.0);
  const auto h = hamiltonian_hubbard(m, 3);
  const auto t = transfer_hubbard(m, 0.4, 3);
  EXPECT_LT(commutator_norm(h.matrix, t.matrix).value, 1e-10);
  EXPECT_LT(frobenius_per_side(log_derivative_hamiltonian_hubbard(m, 3).matrix - h.matrix), 1e-9);
  const auto t2 = transfer_hubbard(m, -0.25, 3);
  EXPECT_LT(commutator_norm(t.matrix, t2.matrix).value, 1e-10);
}

TEST(Hamiltonian, GradedLogDerivative) {
  const HubbardModel g11(XXModel::gl(1, 1, {1}), XXModel::gl(1, 1, {1}), 1.3);
  const auto h = hamiltonian_hubbard(g11, 3);
  EXPECT_LT(frobenius_per_side(log_derivative_hamiltonian_hubbard(g11, 3).matrix - h.matrix), 1e-9);
  EXPECT_LT(commutator_norm(transfer_hubbard(g11, 0.2, 3).matrix, transfer_hubbard(g11, 0.7, 3).matrix).value, 1e-10);
}

TEST(Hamiltonian, InteractionGround) {
  const double U = 1.7;
  for (std::size_t L : {2u, 3u}) {
    const auto vals = eigh(interaction_hubbard(standard(U), L)).values;
    EXPECT_NEAR(vals.minCoeff(), -static_cast<double>(L) * U, 1e-12);
    EXPECT_NEAR(vals.maxCoeff(), static_cast<double>(L) * U, 1e-12);
  }
}

TEST(Symmetry, StandardModel) {
  const auto rep = symmetry_hubbard(standard(2.0), 3);
  EXPECT_EQ(rep.generators, 4u);
  EXPECT_LT(rep.r_commutator, 1e-12);
  EXPECT_LT(rep.h_commutator, 1e-12);
  EXPECT_LT(rep.c_commutator, 1e-15);
  EXPECT_GT(rep.cross_block_min, 1e-2);
}

TEST(Symmetry, Zoo) {
  for (const auto& m : hubbard_zoo(0.8)) {
    const auto rep = symmetry_hubbard(m, 3);
    EXPECT_LT(rep.r_commutator, 1e-12) << m.name();
    EXPECT_LT(rep.h_commutator, 1e-12) << m.name();
    EXPECT_LT(rep.c_commutator, 1e-15) << m.name();
    EXPECT_GT(rep.cross_block_min, 1e-2) << m.name();
  }
}

TEST(Charges, Layout) {
  const auto ch = hubbard_site_charges(HubbardModel(XXModel::gl(2, 1, {1}), XXModel::gl(2, 0, {1}), 1.0));
  ASSERT_EQ(ch.size(), 6u);
  EXPECT_EQ(ch[5], (ChargeVector{0, 0, 1, 0, 1}));
}
