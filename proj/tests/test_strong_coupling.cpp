#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "unihub/strong_coupling.hpp"

using namespace unihub;

namespace {

HubbardModel fermionic(double U) { return HubbardModel(XXModel::gl(1, 1, {1}), XXModel::gl(1, 1, {1}), U); }
HubbardModel bosonic(double U) { return HubbardModel(XXModel::gl(2, 0, {1}), XXModel::gl(2, 0, {1}), U); }

// Pinned: closed second order = -4 x resolvent, closed fourth order = +1 x resolvent.
constexpr double kScalarSecond = -4.0;
constexpr double kScalarFourth = 1.0;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// 1 - σ·σ on two spins-½ from Pauli matrices.
Matrix heisenberg_pair() {
  Matrix x = Matrix::Zero(2, 2), y = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  y(0, 1) = cplx(0, -1);
  y(1, 0) = cplx(0, 1);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return Matrix::Identity(4, 4) - kron(x, x) - kron(y, y) - kron(z, z);
}

// Σ_j (1 - σ_j·σ_{j+1}) on a periodic ring of spins, plain tensor products.
Matrix heisenberg_ring(std::size_t length) {
  const Eigen::Index n = Eigen::Index(1) << length;
  Matrix h = Matrix::Zero(n, n);
  const Matrix pair = heisenberg_pair();
  for (Eigen::Index s = 0; s < n; ++s)
    for (std::size_t j = 0; j < length; ++j) {
      const std::size_t k = (j + 1) % length;
      const int bj = int(length - 1 - j), bk = int(length - 1 - k);
      const Eigen::Index in = ((s >> bj) & 1) * 2 + ((s >> bk) & 1);
      for (Eigen::Index out = 0; out < 4; ++out) {
        const cplx v = pair(out, in);
        if (v == 0.0) continue;
        Eigen::Index t = s & ~(Eigen::Index(1) << bj) & ~(Eigen::Index(1) << bk);
        t |= (out >> 1) << bj;
        t |= (out & 1) << bk;
        h(t, s) += v;
      }
    }
  return h;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

std::vector<HubbardModel> small_zoo(double U) {
  auto z = hubbard_zoo(U);
  z.pop_back();
  return z;
}

std::size_t per_site_image(const HubbardModel& m) {
  return m.up.rank() * m.down.rank_bar() + m.up.rank_bar() * m.down.rank();
}

}  // namespace

TEST(Pi0, IdempotentAndBarredFormAgrees) {
  for (const auto& m : hubbard_zoo(2.0)) {
    const auto s = pi0(m, 3);
    const Matrix p = Matrix(s.projector);
    EXPECT_LE(max_abs(p * p - p), 1e-15) << m.name();
    EXPECT_LE(max_abs(p - Matrix(pi0_product(m, 3, true))), 1e-15) << m.name();
    const SparseMatrix e = s.embedding();
    EXPECT_LE(max_abs(p - Matrix(SparseMatrix(e * e.adjoint()))), 1e-15) << m.name();
    const std::size_t d = per_site_image(m);
    EXPECT_EQ(s.basis.size(), d * d * d) << m.name();
  }
  EXPECT_EQ(pi0(bosonic(1.0), 5).basis.size(), 32u);
  EXPECT_THROW(pi0(bosonic(1.0), 1), std::invalid_argument);
}

TEST(Pi0, GroundEnergyAndDegeneracy) {
  for (const auto& m : hubbard_zoo(1.7)) {
    const std::size_t L = 3;
    const auto s = pi0(m, L);
    const SparseMatrix h0 = interaction_h0(m, L);
    EXPECT_NEAR(s.ground_energy, -1.7 * 3.0, 1e-15);
    EXPECT_LE(max_abs(Matrix(SparseMatrix(s.projector * h0 * s.projector - s.ground_energy * s.projector))), 1e-14);
    std::size_t count = 0;
    const Eigen::VectorXcd diag = h0.diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i)
      if (std::abs(diag(i) - s.ground_energy) < 1e-12) ++count;
    EXPECT_EQ(count, s.basis.size()) << m.name();
  }
}

TEST(Hopping, Validation) {
  const auto m = bosonic(1.0);
  EXPECT_THROW(hopping(m, 0, 2, 4), std::invalid_argument);
  EXPECT_THROW(hopping(m, 1, 1, 4), std::invalid_argument);
  EXPECT_THROW(hopping(m, 0, 4, 4), std::invalid_argument);
  EXPECT_NO_THROW(hopping(m, 3, 0, 4));
  EXPECT_NO_THROW(hopping(m, 0, 3, 4));
}

TEST(Hopping, ReproducesHamiltonianDensity) {
  for (const auto& m : hubbard_zoo(0.9)) {
    const Matrix cc = embed(cc_site(m), {0}, SiteList(2, m.site()));
    const Matrix h = hopping_dense(m, 0, 1, 2).matrix + hopping_dense(m, 1, 0, 2).matrix + m.U * cc;
    EXPECT_LE(max_abs(h - hamiltonian_density_hubbard(m)), 1e-15) << m.name();
  }
}

TEST(Hopping, ConjugationAndHermiticity) {
  for (const auto& m : hubbard_zoo(1.0)) {
    const std::size_t L = 3;
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t k = (j + 1) % L;
      const ChainOperator x = hopping_dense(m, j, k, L);
      EXPECT_LE(max_abs(super_transpose(x).matrix - hopping_dense(m, k, j, L).matrix), 1e-15) << m.name();
    }
    const Matrix t = Matrix(perturbation_t(m, L));
    EXPECT_LE(max_abs(t - t.adjoint()), 1e-15) << m.name();
  }
}

TEST(OddWords, CorollariesAtFourSites) {
  for (const auto& m : hubbard_zoo(1.0)) {
    const auto c = corollaries(m, 4);
    EXPECT_LE(c.square, 1e-14) << m.name();
    EXPECT_LE(c.back_forth, 1e-14) << m.name();
    EXPECT_LE(c.converge, 1e-14) << m.name();
    EXPECT_LE(c.odd_power, 1e-14) << m.name();
    EXPECT_LE(c.redundancy, 1e-14) << m.name();
  }
}

TEST(OddWords, OddPowersOfT) {
  const auto m = fermionic(1.0);
  const auto s = pi0(m, 4);
  const SparseMatrix e = s.embedding(), t = perturbation_t(m, 4);
  EXPECT_LE(max_abs(Matrix(SparseMatrix(e.adjoint() * t * e))), 1e-14);
  EXPECT_LE(max_abs(Matrix(SparseMatrix(e.adjoint() * t * t * t * e))), 1e-14);
  EXPECT_GT(max_abs(Matrix(SparseMatrix(e.adjoint() * t * t * e))), 0.5);
}

TEST(OddWords, ExhaustiveWords) {
  for (const auto& m : small_zoo(1.0)) {
    const auto four = odd_word_check(m, 4, 3);
    EXPECT_EQ(four.words, 8u + 8u * 8u * 8u);
    EXPECT_LE(four.odd_words, 1e-14) << m.name();
    EXPECT_EQ(four.winding_words, 0.0) << m.name();
    const auto three = odd_word_check(m, 3, 3);
    EXPECT_LE(three.odd_words, 1e-14) << m.name();
    // L = n: a barred particle can go once around the ring
    EXPECT_GT(three.winding_words, 0.5) << m.name();
  }
}

TEST(Resolvent, InvertsOffSector) {
  for (const auto& m : small_zoo(1.3)) {
    const auto s = pi0(m, 3);
    const SparseMatrix r = resolvent(m, s);
    const auto n = s.projector.rows();
    SparseMatrix id(n, n);
    id.setIdentity();
    const SparseMatrix gap = s.ground_energy * id - interaction_h0(m, 3);
    EXPECT_LE(max_abs(Matrix(SparseMatrix(r * gap - (id - s.projector)))), 1e-14) << m.name();
    EXPECT_LE(max_abs(Matrix(SparseMatrix(r * s.projector))), 0.0) << m.name();
  }
  EXPECT_THROW(resolvent(bosonic(0.0), pi0(bosonic(0.0), 3)), std::domain_error);
}

TEST(SecondOrder, ResolventEqualsQuarterSquare) {
  for (const auto& m : hubbard_zoo(2.5))
    for (std::size_t L : {3u, 4u}) {
      const Matrix r = heff2_resolvent(m, L);
      EXPECT_LE(max_abs(r - heff2_square(m, L)), 1e-13) << m.name() << " L=" << L;
      EXPECT_LE(max_abs(r - r.adjoint()), 1e-14);
    }
}

TEST(SecondOrder, IndependentOfCoupling) {
  const Matrix a = heff2_resolvent(fermionic(3.0), 4), b = heff2_resolvent(fermionic(-7.0), 4);
  EXPECT_LE(max_abs(a - b), 1e-13);
}

TEST(SecondOrder, ClosedFormScalarPinned) {
  for (const auto& m : hubbard_zoo(1.0))
    for (std::size_t L : {3u, 4u}) {
      const Matrix c = heff2_closed(m, L), r = heff2_resolvent(m, L);
      const auto f = fit_scalar(c, r);
      EXPECT_NEAR(f.scalar, kScalarSecond, 1e-12) << m.name();
      EXPECT_LE(max_abs(c - kScalarSecond * r), 1e-12) << m.name() << " L=" << L;
    }
  EXPECT_THROW(heff2_closed(bosonic(1.0), 2), std::invalid_argument);
}

TEST(SecondOrder, FermionicChainIsHeisenberg) {
  for (std::size_t L : {3u, 4u, 5u}) {
    const Matrix c = heff2_closed(fermionic(4.0), L);
    EXPECT_LE(max_abs(c - heisenberg_ring(L)), 1e-14) << "L=" << L;
  }
}

TEST(SecondOrder, TwoSiteBlocks) {
  const Matrix f = restrict_open(fermionic(1.0), heff2_density(fermionic(1.0)), 2);
  EXPECT_LE(max_abs(f - heisenberg_pair()), 1e-15);
  Matrix plus = Matrix::Zero(4, 4);
  plus.block(1, 1, 2, 2).setConstant(2.0);
  EXPECT_LE(max_abs(restrict_open(bosonic(1.0), heff2_density(bosonic(1.0)), 2) - plus), 1e-15);
  for (const auto& m : hubbard_zoo(1.0)) {
    const Matrix blocks = 0.5 * restrict_open(m, heff2_density(m), 2);
    const auto es = eigh(blocks);
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      const double v = es.values(k);
      EXPECT_LE(std::min(std::abs(v), std::abs(v - 2.0)), 1e-13) << m.name();
    }
  }
}

TEST(SecondOrder, VanishesOnAlignedStates) {
  for (const auto& m : hubbard_zoo(1.0)) {
    const Matrix h = heff2_density(m);
    const std::size_t dd = m.down.dim();
    std::vector<std::size_t> ub, bu;
    for (std::size_t a : m.up.unbarred_indices())
      for (std::size_t b : m.down.barred_indices()) ub.push_back(a * dd + b);
    for (std::size_t a : m.up.barred_indices())
      for (std::size_t b : m.down.unbarred_indices()) bu.push_back(a * dd + b);
    for (const auto* set : {&ub, &bu})
      for (std::size_t x : *set)
        for (std::size_t y : *set) {
          const auto col = static_cast<Eigen::Index>(x * m.dim() + y);
          EXPECT_LE(h.col(col).cwiseAbs().maxCoeff(), 0.0) << m.name();
        }
  }
}

TEST(FourthOrder, ResolventMatchesSquareForm) {
  for (const auto& m : small_zoo(2.0)) {
    const Matrix r = heff4_resolvent(m, 5);
    EXPECT_LE(max_abs(r - heff4_square(m, 5)), 1e-12) << m.name();
    EXPECT_LE(max_abs(r - r.adjoint()), 1e-12) << m.name();
  }
}

TEST(FourthOrder, ClosedFormScalarPinned) {
  for (const auto& m : small_zoo(1.0)) {
    const Matrix c = heff4_closed(m, 5), r = heff4_resolvent(m, 5);
    EXPECT_NEAR(fit_scalar(c, r).scalar, kScalarFourth, 1e-12) << m.name();
    EXPECT_LE(max_abs(c - kScalarFourth * r), 1e-12) << m.name();
  }
  EXPECT_THROW(heff4_closed(bosonic(1.0), 4), std::invalid_argument);
}

TEST(ThreeSite, ClosedFormEigenvalues) {
  for (double U : {2.0, 5.0})
    for (const auto& m : hubbard_zoo(U)) {
      const auto t = three_site_spectrum(m, U);
      EXPECT_LE(t.deviation, 1e-10) << m.name() << " U=" << U;
      ASSERT_EQ(t.distinct.size(), 3u) << m.name();
      for (std::size_t k = 0; k < 3; ++k)
        EXPECT_NEAR(t.distinct[k], t.expected[k], 1e-10 * std::max(1.0, t.expected[k]));
      const std::size_t d = per_site_image(m);
      EXPECT_EQ(t.eigenvalues.size(), d * d * d);
    }
  const auto s = three_site_spectrum(fermionic(2.0), 2.0);
  EXPECT_NEAR(s.distinct[2], 3.046875, 1e-12);
  EXPECT_EQ(s.multiplicity, (std::vector<std::size_t>{4, 2, 2}));
  const auto far = three_site_spectrum(fermionic(1e6), 1e6);
  EXPECT_NEAR(far.distinct[2], 3.0, 1e-10);
  EXPECT_THROW(three_site_spectrum(fermionic(1.0), 0.0), std::domain_error);
}

TEST(Scaling, SecondOrderOnly) {
  for (const auto& m : {bosonic(1.0), fermionic(1.0)}) {
    const auto r = strong_coupling_vs_ed(m, 4, {8.0, 16.0});
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.states, 16u);
    const double ratio = r.rows[0].error_h2 / r.rows[1].error_h2;
    EXPECT_GE(ratio, 4.0) << m.name();
    EXPECT_LE(ratio, 16.0) << m.name();
  }
}

TEST(Scaling, ThroughFourthOrder) {
  const auto r = strong_coupling_vs_ed(fermionic(1.0), 6, {8.0, 16.0});
  EXPECT_EQ(r.states, 64u);
  const double ratio = r.rows[0].error_h4 / r.rows[1].error_h4;
  EXPECT_GE(ratio, 16.0);
  EXPECT_LE(ratio, 64.0);
  EXPECT_NEAR(r.exponent_h4, -5.0, 1.0);
  EXPECT_NEAR(r.exponent_h2, -3.0, 1.0);
}
