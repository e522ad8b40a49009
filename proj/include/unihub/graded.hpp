#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace unihub {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

// Largest total dimension of a chain we are willing to store densely.
inline constexpr std::size_t kDimensionCap = 20000;

class DimensionCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Z2-graded finite-dimensional space, one grade per basis vector.
struct GradedSpace {
  std::vector<int> grades;

  GradedSpace() = default;
  explicit GradedSpace(std::vector<int> g);

  static GradedSpace gl(int m, int n);
  static GradedSpace even(std::size_t d);

  std::size_t dim() const { return grades.size(); }
  int grade(std::size_t i) const { return grades[i]; }
  bool all_even() const;

  bool operator==(const GradedSpace& o) const { return grades == o.grades; }
  bool operator!=(const GradedSpace& o) const { return !(*this == o); }
};

// V⊗W with composite index i*dim(W)+j and grade [i]+[j].
GradedSpace tensor(const GradedSpace& v, const GradedSpace& w);

using SiteList = std::vector<GradedSpace>;

std::size_t chain_dim(const SiteList& sites);
// Grade of a composite basis index of the whole site list.
int chain_grade(const SiteList& sites, std::size_t index);
std::vector<std::size_t> chain_digits(const SiteList& sites, std::size_t index);

// Dense operator on an ordered tensor product of sites.
struct ChainOperator {
  SiteList sites;
  Matrix matrix;

  ChainOperator() = default;
  ChainOperator(SiteList s, Matrix m);

  static ChainOperator identity(const SiteList& s);
  static ChainOperator zero(const SiteList& s);

  std::size_t side() const { return static_cast<std::size_t>(matrix.rows()); }
};

ChainOperator operator*(const ChainOperator& a, const ChainOperator& b);
ChainOperator operator+(const ChainOperator& a, const ChainOperator& b);
ChainOperator operator-(const ChainOperator& a, const ChainOperator& b);
ChainOperator operator*(cplx s, const ChainOperator& a);

struct Residual {
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

// (A⊗B)(u⊗v) = (-1)^{[B][u]} Au⊗Bv with entrywise operator grades.
ChainOperator graded_kron(const ChainOperator& a, const ChainOperator& b);

// P(u⊗v) = (-1)^{[u][v]} v⊗u, mapping V⊗W onto W⊗V.
ChainOperator graded_permutation(const GradedSpace& v, const GradedSpace& w);

// Graded embedding of an operator acting on the listed factors, in the listed
// order, into the full chain.  Positions need not be consecutive or sorted,
// so (L-1, 0) gives the periodic bond.
class LocalTerm {
 public:
  LocalTerm(const Matrix& local, std::vector<std::size_t> positions, SiteList chain);

  const SiteList& chain() const { return chain_; }
  const std::vector<std::size_t>& positions() const { return pos_; }

  // Calls f(y, coefficient) for each nonzero <y|term|x>.
  void for_each_image(std::size_t x, const std::function<void(std::size_t, cplx)>& f) const;

  Matrix dense() const;
  SparseMatrix sparse() const;

 private:
  int koszul_parity(const std::vector<std::size_t>& digits) const;

  SiteList chain_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> local_strides_;
  std::vector<char> in_pos_;
  std::vector<std::vector<std::pair<std::size_t, cplx>>> cols_;
};

Matrix embed(const Matrix& local, const std::vector<std::size_t>& positions, const SiteList& chain);
ChainOperator embed(const ChainOperator& local, std::size_t j, std::size_t length);
SparseMatrix embed_sparse(const Matrix& local, const std::vector<std::size_t>& positions,
                          const SiteList& chain);

// Sum of Σ_j M_j, a one-site operator placed on every factor.
Matrix global_one_site(const Matrix& one_site, const SiteList& chain);

cplx supertrace(const ChainOperator& a);
cplx ordinary_trace(const ChainOperator& a);
ChainOperator partial_supertrace_first_site(const ChainOperator& a);

ChainOperator super_transpose(const ChainOperator& a);
ChainOperator hermitian_conjugate(const ChainOperator& a);

struct EigenSystem {
  Eigen::VectorXd values;
  Matrix vectors;
};

EigenSystem eigh(const Matrix& a);
inline EigenSystem eigh(const ChainOperator& a) { return eigh(a.matrix); }

double frobenius_per_side(const Matrix& a);
Residual residual(const Matrix& a, const Matrix& b, double tol = 1e-10);
Residual commutator_norm(const Matrix& a, const Matrix& b, double tol = 1e-10);
inline Residual residual(const ChainOperator& a, const ChainOperator& b, double tol = 1e-10) {
  return residual(a.matrix, b.matrix, tol);
}

// Transfer matrix  (s)tr_0 ( R_01 R_02 ... R_0L )  from operators on aux⊗site.
// Built as a bond-index sum with the Koszul signs factored out, so the
// (L+1)-site monodromy is never stored.
Matrix transfer_from_local(const std::vector<Matrix>& local, const GradedSpace& aux,
                           const GradedSpace& site, bool use_supertrace);

// Basis states of the chain grouped by additive charges; site_charges[i] is
// the charge vector of basis index i on one site.
using ChargeVector = std::vector<int>;
std::map<ChargeVector, std::vector<std::size_t>> charge_sectors(
    const SiteList& chain, const std::vector<ChargeVector>& site_charges);

// Matrix of a sum of local terms restricted to a set of basis states that
// the terms leave invariant.
Matrix restrict_terms(const std::vector<LocalTerm>& terms, const std::vector<std::size_t>& states);
Matrix dense_terms(const std::vector<LocalTerm>& terms);

}  // namespace unihub
