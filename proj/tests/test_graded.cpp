#include <gtest/gtest.h>

#include <random>

#include "unihub/graded.hpp"

using namespace unihub;

namespace {

Matrix unit(std::size_t d, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

Matrix random_matrix(Eigen::Index n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(gen), g(gen));
  return m;
}

// Keep only entries with [i]+[j] even.
Matrix even_part(const Matrix& m, const SiteList& sites) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (chain_grade(sites, static_cast<std::size_t>(i)) != chain_grade(sites, static_cast<std::size_t>(j)))
        out(i, j) = 0.0;
  return out;
}

}  // namespace

TEST(GradedSpace, GlConstruction) {
  const auto v = GradedSpace::gl(2, 1);
  EXPECT_EQ(v.dim(), 3u);
  EXPECT_EQ(v.grades, (std::vector<int>{0, 0, 1}));
  EXPECT_THROW(GradedSpace(std::vector<int>{0, 2}), std::invalid_argument);
  EXPECT_THROW(GradedSpace(std::vector<int>{}), std::invalid_argument);
}

TEST(GradedKron, IdentityAndUngraded) {
  const SiteList s2{GradedSpace::gl(2, 0)};
  const auto id = ChainOperator::identity(s2);
  EXPECT_LT(frobenius_per_side(graded_kron(id, id).matrix - Matrix::Identity(4, 4)), 1e-15);

  std::mt19937_64 gen(3);
  const Matrix a = random_matrix(2, gen), b = random_matrix(2, gen);
  const Matrix k = graded_kron(ChainOperator(s2, a), ChainOperator(s2, b)).matrix;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 2 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(GradedKron, KoszulRuleOnAllBasisActions) {
  // Hand rule: (A⊗B)(e_a⊗e_b) = (-1)^{[B][a]} A e_a ⊗ B e_b for elementary A, B.
  const auto v = GradedSpace::gl(1, 1);
  const SiteList one{v};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
          const Matrix ab =
              graded_kron(ChainOperator(one, unit(2, i, j)), ChainOperator(one, unit(2, k, l))).matrix;
          const int gb = (v.grade(k) + v.grade(l)) & 1;
          for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
              Vector expect = Vector::Zero(4);
              if (a == j && b == l) expect(static_cast<Eigen::Index>(i * 2 + k)) = (gb & v.grade(a)) ? -1.0 : 1.0;
              const Vector got = ab.col(static_cast<Eigen::Index>(a * 2 + b));
              EXPECT_LT((got - expect).norm(), 1e-15);
            }
        }
  // E12⊗E21 on e2⊗e1 picks up a minus sign: B is odd and so is e2.
  const Matrix x = graded_kron(ChainOperator(one, unit(2, 0, 1)), ChainOperator(one, unit(2, 1, 0))).matrix;
  EXPECT_EQ(x(0 * 2 + 1, 1 * 2 + 0), cplx(-1.0));
}

TEST(GradedKron, Associative) {
  const SiteList one{GradedSpace::gl(1, 1)};
  std::mt19937_64 gen(5);
  const ChainOperator a(one, random_matrix(2, gen)), b(one, random_matrix(2, gen)), c(one, random_matrix(2, gen));
  const Matrix left = graded_kron(graded_kron(a, b), c).matrix;
  const Matrix right = graded_kron(a, graded_kron(b, c)).matrix;
  EXPECT_LT(frobenius_per_side(left - right), 1e-14);
}

TEST(GradedPermutation, SignsAndInvolution) {
  const auto v = GradedSpace::gl(1, 1);
  const Matrix p = graded_permutation(v, v).matrix;
  EXPECT_EQ(p(1 * 2 + 0, 0 * 2 + 1), cplx(1.0));   // e1⊗e2 -> e2⊗e1
  EXPECT_EQ(p(1 * 2 + 1, 1 * 2 + 1), cplx(-1.0));  // e2⊗e2 -> -e2⊗e2
  EXPECT_LT(frobenius_per_side(p * p - Matrix::Identity(4, 4)), 1e-15);

  const auto w = GradedSpace::gl(2, 0);
  const Matrix swap = graded_permutation(w, w).matrix;
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = expect(1, 2) = expect(2, 1) = 1.0;
  EXPECT_EQ(swap, expect);
}

TEST(GradedPermutation, ExchangesAuxiliarySpaces) {
  const auto v = GradedSpace::gl(2, 1);
  const SiteList two{v, v};
  std::mt19937_64 gen(9);
  const Matrix p = graded_permutation(v, v).matrix;
  for (int rep = 0; rep < 3; ++rep) {
    const Matrix a = random_matrix(3, gen);
    const Matrix a1 = embed(a, {0}, two), a2 = embed(a, {1}, two);
    EXPECT_LT(frobenius_per_side(p * a1 * p - a2), 1e-13);
  }
}

TEST(Embed, ConsistencyWithKron) {
  const auto v = GradedSpace::gl(1, 1);
  const SiteList one{v};
  std::mt19937_64 gen(11);
  const ChainOperator a(one, random_matrix(2, gen)), b(one, random_matrix(2, gen));
  const Matrix lhs = embed(a, 1, 2).matrix * embed(b, 2, 2).matrix;
  EXPECT_LT(frobenius_per_side(lhs - graded_kron(a, b).matrix), 1e-14);
  EXPECT_LT(frobenius_per_side(embed(ChainOperator::identity(one), 2, 3).matrix - Matrix::Identity(8, 8)), 1e-15);
  EXPECT_THROW(embed(a, 4, 3), std::out_of_range);
}

TEST(Embed, PeriodicBondMatchesRelabeling) {
  // Oracle: move site 3 to the front with (P⊗I)(I⊗P), act at (1,2), move back.
  for (const auto& v : {GradedSpace::gl(2, 0), GradedSpace::gl(1, 1)}) {
    const SiteList one{v}, two{v, v}, three{v, v, v};
    std::mt19937_64 gen(13);
    const ChainOperator p = graded_permutation(v, v);
    const ChainOperator id = ChainOperator::identity(one);
    const Matrix shift = graded_kron(p, id).matrix * graded_kron(id, p).matrix;
    const Matrix a = random_matrix(4, gen);
    const Matrix oracle = shift.inverse() * graded_kron(ChainOperator(two, a), id).matrix * shift;
    EXPECT_LT(frobenius_per_side(embed(a, {2, 0}, three) - oracle), 1e-14);
    EXPECT_LT(frobenius_per_side(embed(ChainOperator(two, a), 3, 3).matrix - oracle), 1e-14);
  }
}

TEST(Supertrace, Definitions) {
  EXPECT_EQ(supertrace(ChainOperator::identity({GradedSpace::gl(2, 1)})), cplx(1.0));
  EXPECT_EQ(supertrace(ChainOperator::identity({GradedSpace::gl(2, 0)})), cplx(2.0));
  for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 0}}) {
    const auto v = GradedSpace::gl(m, n);
    EXPECT_EQ(supertrace(graded_permutation(v, v)), cplx(static_cast<double>(m - n)));
  }
}

TEST(Supertrace, PartialFactorizes) {
  const auto v = GradedSpace::gl(1, 1);
  const SiteList one{v};
  std::mt19937_64 gen(17);
  const ChainOperator a(one, random_matrix(2, gen));
  const ChainOperator b(one, even_part(random_matrix(2, gen), one));
  const ChainOperator pt = partial_supertrace_first_site(graded_kron(a, b));
  EXPECT_LT(frobenius_per_side(pt.matrix - supertrace(a) * b.matrix), 1e-14);
}

TEST(Supertrace, CyclicOnEvenOperators) {
  const auto v = GradedSpace::gl(2, 1);
  const SiteList two{v, v};
  std::mt19937_64 gen(19);
  for (int rep = 0; rep < 5; ++rep) {
    const ChainOperator a(two, even_part(random_matrix(9, gen), two));
    const ChainOperator b(two, even_part(random_matrix(9, gen), two));
    EXPECT_LT(std::abs(supertrace(a * b) - supertrace(b * a)), 1e-13);
  }
}

TEST(SuperTranspose, InvolutiveOnEven) {
  const SiteList two{GradedSpace::gl(1, 1), GradedSpace::gl(1, 1)};
  std::mt19937_64 gen(23);
  const ChainOperator a(two, even_part(random_matrix(4, gen), two));
  EXPECT_LT(residual(super_transpose(super_transpose(a)), a).value, 1e-15);
  EXPECT_LT(residual(hermitian_conjugate(hermitian_conjugate(a)), a).value, 1e-15);
  const SiteList one{GradedSpace::gl(3, 0)};
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, -2.0, 0.5;
  EXPECT_LT(residual(hermitian_conjugate(ChainOperator(one, d)).matrix, d).value, 1e-15);
}

TEST(Eigh, SortedAndReconstructs) {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto es = eigh(d);
  EXPECT_NEAR(es.values(0), 1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 2.0, 1e-14);
  EXPECT_NEAR(es.values(2), 3.0, 1e-14);

  Matrix bm(2, 2);
  bm << 1.0, -1.0, -1.0, 1.0;
  const auto eb = eigh(bm);
  EXPECT_NEAR(eb.values(0), 0.0, 1e-14);
  EXPECT_NEAR(eb.values(1), 2.0, 1e-14);

  std::mt19937_64 gen(29);
  const Matrix r = random_matrix(20, gen);
  const Matrix h = r + r.adjoint();
  const auto eh = eigh(h);
  const Matrix rec = eh.vectors * eh.values.cast<cplx>().asDiagonal() * eh.vectors.adjoint();
  EXPECT_LT(frobenius_per_side(h - rec), 1e-10);
  EXPECT_THROW(eigh(r), std::invalid_argument);
}

TEST(Residuals, CommutatorWithIdentity) {
  std::mt19937_64 gen(31);
  const Matrix r = random_matrix(6, gen);
  EXPECT_EQ(commutator_norm(r, Matrix::Identity(6, 6)).value, 0.0);
}

TEST(Sectors, ChargesPartitionTheBasis) {
  const SiteList chain(3, GradedSpace::gl(2, 0));
  const auto sectors = charge_sectors(chain, {{1, 0}, {0, 1}});
  std::size_t total = 0;
  for (const auto& [q, states] : sectors) {
    EXPECT_EQ(q[0] + q[1], 3);
    total += states.size();
  }
  EXPECT_EQ(total, 8u);
  EXPECT_EQ(sectors.at({1, 2}).size(), 3u);
}

TEST(Cap, Enforced) { EXPECT_THROW(chain_dim(SiteList(15, GradedSpace::gl(2, 0))), DimensionCapError); }
