#include "unihub/graded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace unihub {

namespace {


void check_square(const ChainOperator& a) {
  if (static_cast<std::size_t>(a.matrix.rows()) != chain_dim(a.sites) ||
      a.matrix.rows() != a.matrix.cols()) {
    throw std::invalid_argument("operator side does not match the product of site dimensions");
  }
}

}  // namespace

GradedSpace::GradedSpace(std::vector<int> g) : grades(std::move(g)) {
  if (grades.empty()) throw std::invalid_argument("graded space must have dim >= 1");
  for (int x : grades) {
    if (x != 0 && x != 1) throw std::invalid_argument("grades must be 0 or 1");
  }
}

GradedSpace GradedSpace::gl(int m, int n) {
  if (m < 0 || n < 0 || m + n < 1) throw std::invalid_argument("gl(m|n) needs m,n >= 0 and m+n >= 1");
  std::vector<int> g(static_cast<std::size_t>(m), 0);
  g.insert(g.end(), static_cast<std::size_t>(n), 1);
  return GradedSpace(std::move(g));
}

GradedSpace GradedSpace::even(std::size_t d) { return GradedSpace(std::vector<int>(d, 0)); }

bool GradedSpace::all_even() const {
  return std::all_of(grades.begin(), grades.end(), [](int g) { return g == 0; });
}

GradedSpace tensor(const GradedSpace& v, const GradedSpace& w) {
  std::vector<int> g;
  g.reserve(v.dim() * w.dim());
  for (int a : v.grades)
    for (int b : w.grades) g.push_back((a + b) & 1);
  return GradedSpace(std::move(g));
}

std::size_t chain_dim(const SiteList& sites) {
  std::size_t d = 1;
  for (const auto& s : sites) {
    d *= s.dim();
    if (d > kDimensionCap) {
      throw DimensionCapError("chain dimension exceeds cap of " + std::to_string(kDimensionCap));
    }
  }
  return d;
}

std::vector<std::size_t> chain_digits(const SiteList& sites, std::size_t index) {
  std::vector<std::size_t> d(sites.size());
  for (std::size_t k = sites.size(); k-- > 0;) {
    d[k] = index % sites[k].dim();
    index /= sites[k].dim();
  }
  return d;
}

int chain_grade(const SiteList& sites, std::size_t index) {
  int g = 0;
  for (std::size_t k = sites.size(); k-- > 0;) {
    g ^= sites[k].grade(index % sites[k].dim());
    index /= sites[k].dim();
  }
  return g;
}

ChainOperator::ChainOperator(SiteList s, Matrix m) : sites(std::move(s)), matrix(std::move(m)) {
  check_square(*this);
  if (!matrix.allFinite()) throw std::invalid_argument("operator has non-finite entries");
}

ChainOperator ChainOperator::identity(const SiteList& s) {
  const auto d = static_cast<Eigen::Index>(chain_dim(s));
  return ChainOperator(s, Matrix::Identity(d, d));
}

ChainOperator ChainOperator::zero(const SiteList& s) {
  const auto d = static_cast<Eigen::Index>(chain_dim(s));
  return ChainOperator(s, Matrix::Zero(d, d));
}

ChainOperator operator*(const ChainOperator& a, const ChainOperator& b) {
  if (a.sites != b.sites) throw std::invalid_argument("site lists differ in product");
  return ChainOperator(a.sites, a.matrix * b.matrix);
}

ChainOperator operator+(const ChainOperator& a, const ChainOperator& b) {
  if (a.sites != b.sites) throw std::invalid_argument("site lists differ in sum");
  return ChainOperator(a.sites, a.matrix + b.matrix);
}

ChainOperator operator-(const ChainOperator& a, const ChainOperator& b) {
  if (a.sites != b.sites) throw std::invalid_argument("site lists differ in difference");
  return ChainOperator(a.sites, a.matrix - b.matrix);
}

ChainOperator operator*(cplx s, const ChainOperator& a) { return ChainOperator(a.sites, s * a.matrix); }

ChainOperator graded_kron(const ChainOperator& a, const ChainOperator& b) {
  check_square(a);
  check_square(b);
  SiteList sites = a.sites;
  sites.insert(sites.end(), b.sites.begin(), b.sites.end());
  const std::size_t da = a.side();
  const std::size_t db = b.side();
  chain_dim(sites);
  std::vector<int> ga(da), gb(db);
  for (std::size_t i = 0; i < da; ++i) ga[i] = chain_grade(a.sites, i);
  for (std::size_t i = 0; i < db; ++i) gb[i] = chain_grade(b.sites, i);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(da * db), static_cast<Eigen::Index>(da * db));
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (aij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < db; ++k) {
        for (std::size_t l = 0; l < db; ++l) {
          const cplx bkl = b.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
          if (bkl == cplx(0.0)) continue;
          const int sign = ((gb[k] ^ gb[l]) & ga[j]) ? -1 : 1;
          m(static_cast<Eigen::Index>(i * db + k), static_cast<Eigen::Index>(j * db + l)) =
              static_cast<double>(sign) * aij * bkl;
        }
      }
    }
  }
  return ChainOperator(std::move(sites), std::move(m));
}

ChainOperator graded_permutation(const GradedSpace& v, const GradedSpace& w) {
  const std::size_t dv = v.dim();
  const std::size_t dw = w.dim();
  const auto n = static_cast<Eigen::Index>(dv * dw);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < dv; ++i) {
    for (std::size_t j = 0; j < dw; ++j) {
      const double sign = (v.grade(i) & w.grade(j)) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(j * dv + i), static_cast<Eigen::Index>(i * dw + j)) = sign;
    }
  }
  return ChainOperator({v, w}, std::move(m));
}

LocalTerm::LocalTerm(const Matrix& local, std::vector<std::size_t> positions, SiteList chain)
    : chain_(std::move(chain)), pos_(std::move(positions)) {
  const std::size_t n = chain_.size();
  chain_dim(chain_);
  in_pos_.assign(n, 0);
  for (std::size_t p : pos_) {
    if (p >= n) throw std::out_of_range("site index " + std::to_string(p + 1) + " out of range");
    if (in_pos_[p]) throw std::invalid_argument("repeated site index in embedding");
    in_pos_[p] = 1;
  }
  dims_.resize(n);
  strides_.resize(n);
  std::size_t s = 1;
  for (std::size_t k = n; k-- > 0;) {
    dims_[k] = chain_[k].dim();
    strides_[k] = s;
    s *= dims_[k];
  }
  local_strides_.resize(pos_.size());
  std::size_t ls = 1;
  for (std::size_t k = pos_.size(); k-- > 0;) {
    local_strides_[k] = ls;
    ls *= dims_[pos_[k]];
  }
  if (static_cast<std::size_t>(local.rows()) != ls || local.rows() != local.cols()) {
    throw std::invalid_argument("local operator side does not match the embedded sites");
  }
  cols_.resize(ls);
  for (std::size_t c = 0; c < ls; ++c) {
    for (std::size_t r = 0; r < ls; ++r) {
      const cplx v = local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (v != cplx(0.0)) cols_[c].emplace_back(r, v);
    }
  }
}

int LocalTerm::koszul_parity(const std::vector<std::size_t>& digits) const {
  // Sign of the graded permutation moving the listed factors to the front.
  int par = 0;
  for (std::size_t i = 0; i < pos_.size(); ++i) {
    const std::size_t p = pos_[i];
    if (!chain_[p].grade(digits[p])) continue;
    for (std::size_t r = 0; r < p; ++r) {
      if (!in_pos_[r]) par ^= chain_[r].grade(digits[r]);
    }
    for (std::size_t j = i + 1; j < pos_.size(); ++j) {
      if (pos_[j] < p) par ^= chain_[pos_[j]].grade(digits[pos_[j]]);
    }
  }
  return par;
}

void LocalTerm::for_each_image(std::size_t x, const std::function<void(std::size_t, cplx)>& f) const {
  std::vector<std::size_t> digits(chain_.size());
  std::size_t rest = x;
  for (std::size_t k = chain_.size(); k-- > 0;) {
    digits[k] = rest % dims_[k];
    rest /= dims_[k];
  }
  std::size_t col = 0;
  for (std::size_t i = 0; i < pos_.size(); ++i) col += digits[pos_[i]] * local_strides_[i];
  const int px = koszul_parity(digits);
  for (const auto& [row, v] : cols_[col]) {
    std::vector<std::size_t> out = digits;
    std::size_t y = x;
    std::size_t r = row;
    for (std::size_t i = pos_.size(); i-- > 0;) {
      const std::size_t p = pos_[i];
      const std::size_t nd = r % dims_[p];
      r /= dims_[p];
      y = y - digits[p] * strides_[p] + nd * strides_[p];
      out[p] = nd;
    }
    const int py = koszul_parity(out);
    f(y, (px ^ py) ? -v : v);
  }
}

Matrix LocalTerm::dense() const {
  const std::size_t d = chain_dim(chain_);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < d; ++x) {
    for_each_image(x, [&](std::size_t y, cplx v) {
      m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) += v;
    });
  }
  return m;
}

SparseMatrix LocalTerm::sparse() const {
  const std::size_t d = chain_dim(chain_);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t x = 0; x < d; ++x) {
    for_each_image(x, [&](std::size_t y, cplx v) {
      trip.emplace_back(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x), v);
    });
  }
  SparseMatrix s(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Matrix embed(const Matrix& local, const std::vector<std::size_t>& positions, const SiteList& chain) {
  return LocalTerm(local, positions, chain).dense();
}

SparseMatrix embed_sparse(const Matrix& local, const std::vector<std::size_t>& positions,
                          const SiteList& chain) {
  return LocalTerm(local, positions, chain).sparse();
}

ChainOperator embed(const ChainOperator& local, std::size_t j, std::size_t length) {
  if (local.sites.empty()) throw std::invalid_argument("local operator has no sites");
  const std::size_t k = local.sites.size();
  if (j < 1 || j > length) throw std::out_of_range("site index " + std::to_string(j) + " out of range");
  if (k > length) throw std::out_of_range("operator spans more sites than the chain");
  for (const auto& s : local.sites) {
    if (s != local.sites.front()) throw std::invalid_argument("embed expects a homogeneous chain");
  }
  std::vector<std::size_t> pos(k);
  for (std::size_t i = 0; i < k; ++i) pos[i] = (j - 1 + i) % length;
  SiteList chain(length, local.sites.front());
  return ChainOperator(chain, embed(local.matrix, pos, chain));
}

Matrix global_one_site(const Matrix& one_site, const SiteList& chain) {
  const std::size_t d = chain_dim(chain);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < chain.size(); ++j) m += embed(one_site, {j}, chain);
  return m;
}

cplx supertrace(const ChainOperator& a) {
  check_square(a);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.side(); ++i) {
    const cplx v = a.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    s += chain_grade(a.sites, i) ? -v : v;
  }
  return s;
}

cplx ordinary_trace(const ChainOperator& a) {
  check_square(a);
  return a.matrix.trace();
}

ChainOperator partial_supertrace_first_site(const ChainOperator& a) {
  check_square(a);
  if (a.sites.size() < 2) throw std::invalid_argument("partial supertrace needs at least two sites");
  const GradedSpace& first = a.sites.front();
  SiteList rest(a.sites.begin() + 1, a.sites.end());
  const auto n = static_cast<Eigen::Index>(chain_dim(rest));
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t alpha = 0; alpha < first.dim(); ++alpha) {
    const double w = first.grade(alpha) ? -1.0 : 1.0;
    m += w * a.matrix.block(static_cast<Eigen::Index>(alpha) * n, static_cast<Eigen::Index>(alpha) * n, n, n);
  }
  return ChainOperator(std::move(rest), std::move(m));
}

ChainOperator super_transpose(const ChainOperator& a) {
  check_square(a);
  const std::size_t d = a.side();
  std::vector<int> g(d);
  for (std::size_t i = 0; i < d; ++i) g[i] = chain_grade(a.sites, i);
  Matrix m(a.matrix.rows(), a.matrix.cols());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const cplx v = a.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ((g[i] ^ g[j]) & g[j]) ? -v : v;
    }
  }
  return ChainOperator(a.sites, std::move(m));
}

ChainOperator hermitian_conjugate(const ChainOperator& a) {
  return ChainOperator(a.sites, super_transpose(a).matrix.conjugate());
}

EigenSystem eigh(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh needs a square matrix");
  const double side = static_cast<double>(std::max<Eigen::Index>(a.rows(), 1));
  if ((a - a.adjoint()).norm() > 1e-10 * side) throw std::invalid_argument("eigh input is not Hermitian");
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double frobenius_per_side(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return a.norm() / static_cast<double>(a.rows());
}

Residual residual(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("residual of mismatched shapes");
  return {frobenius_per_side(a - b), tol};
}

Residual commutator_norm(const Matrix& a, const Matrix& b, double tol) {
  return residual(a * b, b * a, tol);
}

Matrix transfer_from_local(const std::vector<Matrix>& local, const GradedSpace& aux, const GradedSpace& site,
                           bool use_supertrace) {
  const std::size_t length = local.size();
  if (length < 1) throw std::invalid_argument("transfer matrix needs at least one site");
  const std::size_t da = aux.dim();
  const std::size_t d = site.dim();
  SiteList phys(length, site);
  const std::size_t dim = chain_dim(phys);
  for (const auto& m : local) {
    if (static_cast<std::size_t>(m.rows()) != da * d || m.rows() != m.cols()) {
      throw std::invalid_argument("local operator does not act on aux⊗site");
    }
  }
  const auto di = static_cast<Eigen::Index>(d);
  auto block = [&](const Matrix& m, std::size_t a, std::size_t b) {
    return Matrix(m.block(static_cast<Eigen::Index>(a) * di, static_cast<Eigen::Index>(b) * di, di, di));
  };
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  auto weight = [&](std::size_t alpha) { return (use_supertrace && aux.grade(alpha)) ? -1.0 : 1.0; };

  const auto n = static_cast<Eigen::Index>(dim);
  Matrix t = Matrix::Zero(n, n);
  if (length == 1) {
    for (std::size_t alpha = 0; alpha < da; ++alpha) t += weight(alpha) * block(local[0], alpha, alpha);
  } else {
    // acc[alpha][beta]: bond-resolved product over the sites handled so far.
    std::vector<std::vector<Matrix>> acc(da, std::vector<Matrix>(da));
    std::vector<std::vector<char>> live(da, std::vector<char>(da, 0));
    for (std::size_t a = 0; a < da; ++a)
      for (std::size_t b = 0; b < da; ++b) {
        acc[a][b] = block(local[0], a, b);
        live[a][b] = acc[a][b].norm() > 0.0;
      }
    for (std::size_t j = 1; j + 1 < length; ++j) {
      std::vector<std::vector<Matrix>> next(da, std::vector<Matrix>(da));
      std::vector<std::vector<char>> nlive(da, std::vector<char>(da, 0));
      for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t b = 0; b < da; ++b) {
          Matrix sum;
          for (std::size_t g = 0; g < da; ++g) {
            if (!live[a][g]) continue;
            const Matrix w = block(local[j], g, b);
            if (w.norm() == 0.0) continue;
            Matrix term = kron(acc[a][g], w);
            if (sum.size() == 0) sum = std::move(term);
            else sum += term;
          }
          if (sum.size() != 0) {
            next[a][b] = std::move(sum);
            nlive[a][b] = 1;
          }
        }
      }
      acc = std::move(next);
      live = std::move(nlive);
    }
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t g = 0; g < da; ++g) {
        if (!live[a][g]) continue;
        const Matrix w = block(local[length - 1], g, a);
        if (w.norm() == 0.0) continue;
        t += weight(a) * kron(acc[a][g], w);
      }
    }
  }
  // Koszul signs of R_0j passing the physical sites to its left.
  bool any_odd = !site.all_even();
  if (any_odd) {
    std::vector<std::vector<std::size_t>> digs(dim);
    for (std::size_t x = 0; x < dim; ++x) digs[x] = chain_digits(phys, x);
    for (std::size_t x = 0; x < dim; ++x) {
      std::vector<int> before(length, 0);
      int acc = 0;
      for (std::size_t j = 0; j < length; ++j) {
        before[j] = acc;
        acc ^= site.grade(digs[x][j]);
      }
      for (std::size_t y = 0; y < dim; ++y) {
        cplx& v = t(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
        if (v == cplx(0.0)) continue;
        int par = 0;
        for (std::size_t j = 0; j < length; ++j) {
          par ^= (site.grade(digs[x][j]) ^ site.grade(digs[y][j])) & before[j];
        }
        if (par) v = -v;
      }
    }
  }
  return t;
}

std::map<ChargeVector, std::vector<std::size_t>> charge_sectors(const SiteList& chain,
                                                                const std::vector<ChargeVector>& site_charges) {
  std::map<ChargeVector, std::vector<std::size_t>> out;
  const std::size_t dim = chain_dim(chain);
  if (site_charges.empty()) throw std::invalid_argument("empty charge table");
  const std::size_t nc = site_charges.front().size();
  for (std::size_t x = 0; x < dim; ++x) {
    ChargeVector q(nc, 0);
    const auto digits = chain_digits(chain, x);
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const auto& c = site_charges.at(digits[k]);
      for (std::size_t i = 0; i < nc; ++i) q[i] += c[i];
    }
    out[q].push_back(x);
  }
  return out;
}

Matrix restrict_terms(const std::vector<LocalTerm>& terms, const std::vector<std::size_t>& states) {
  std::unordered_map<std::size_t, Eigen::Index> index;
  index.reserve(states.size() * 2);
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(states.size());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& term : terms) {
    for (std::size_t c = 0; c < states.size(); ++c) {
      term.for_each_image(states[c], [&](std::size_t y, cplx v) {
        auto it = index.find(y);
        if (it == index.end()) throw std::logic_error("operator leaves the requested sector");
        m(it->second, static_cast<Eigen::Index>(c)) += v;
      });
    }
  }
  return m;
}

Matrix dense_terms(const std::vector<LocalTerm>& terms) {
  if (terms.empty()) throw std::invalid_argument("no terms");
  const auto d = static_cast<Eigen::Index>(chain_dim(terms.front().chain()));
  Matrix m = Matrix::Zero(d, d);
  for (const auto& t : terms) m += t.dense();
  return m;
}

}  // namespace unihub
