#include "unihub/strong_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace unihub {

namespace {

bool adjacent(std::size_t i, std::size_t j, std::size_t length) {
  return i != j && i < length && j < length && (j == (i + 1) % length || i == (j + 1) % length);
}

SparseMatrix site_op(const HubbardModel& m, const Matrix& one_site, std::size_t k, std::size_t sites) {
  return embed_sparse(one_site, {k}, SiteList(sites, m.site()));
}

SparseMatrix bond_op(const HubbardModel& m, const Matrix& two_site, std::size_t a, std::size_t b, std::size_t sites) {
  return embed_sparse(two_site, {a, b}, SiteList(sites, m.site()));
}

SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

struct SiteProjectors {
  Matrix up, up_bar, down, down_bar;
};

SiteProjectors site_projectors(const HubbardModel& m) {
  const Projectors pu = make_projectors(m.up), pd = make_projectors(m.down);
  return {lift_up(m, pu.pi), lift_up(m, pu.pibar), lift_down(m, pd.pi), lift_down(m, pd.pibar)};
}

// P↑P↓ on two composite sites
Matrix double_swap(const HubbardModel& m) {
  return lift_pair_up(m, graded_permutation(m.up.space(), m.up.space()).matrix) *
         lift_pair_down(m, graded_permutation(m.down.space(), m.down.space()).matrix);
}

Matrix kron_pair(const GradedSpace& s, const Matrix& a, const Matrix& b) {
  return graded_kron(ChainOperator({s}, a), ChainOperator({s}, b)).matrix;
}

double max_abs(const SparseMatrix& a) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

SparseMatrix sparse_sum(const HubbardModel& m, const Matrix& local, std::size_t range, std::size_t span,
                        std::size_t length) {
  const SiteList chain(length, m.site());
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  SparseMatrix acc(n, n);
  for (std::size_t j = 0; j < range; ++j) {
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < span; ++k) pos.push_back((j + k) % length);
    acc += embed_sparse(local, pos, chain);
  }
  return acc;
}

Matrix on_image(const HalfFilledSector& s, const SparseMatrix& a) {
  const SparseMatrix e = s.embedding();
  return Matrix(SparseMatrix(e.adjoint() * a * e));
}

void require_coupling(const HubbardModel& m) {
  if (m.U == 0.0) throw std::domain_error("strong coupling expansion needs U != 0");
}

std::vector<double> sorted_eigenvalues(const Matrix& a) {
  const EigenSystem es = eigh(a);
  std::vector<double> v(es.values.data(), es.values.data() + es.values.size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

ChainOperator HalfFilledSector::dense(const HubbardModel& model) const {
  return ChainOperator(SiteList(length, model.site()), Matrix(projector));
}

SparseMatrix HalfFilledSector::embedding() const {
  SparseMatrix e(projector.rows(), static_cast<Eigen::Index>(basis.size()));
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t k = 0; k < basis.size(); ++k)
    trip.emplace_back(static_cast<Eigen::Index>(basis[k]), static_cast<Eigen::Index>(k), 1.0);
  e.setFromTriplets(trip.begin(), trip.end());
  return e;
}

SparseMatrix pi0_product(const HubbardModel& m, std::size_t length, bool barred) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteProjectors p = site_projectors(m);
  const Matrix diff = barred ? Matrix(p.up_bar - p.down_bar) : Matrix(p.up - p.down);
  const Matrix q = diff * diff;
  const SiteList chain(length, m.site());
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  SparseMatrix acc(n, n);
  acc.setIdentity();
  for (std::size_t j = 0; j < length; ++j) acc = SparseMatrix(acc * embed_sparse(q, {j}, chain));
  acc.prune(cplx(0.0));
  return acc;
}

std::vector<std::size_t> open_half_filled_basis(const HubbardModel& m, std::size_t sites) {
  const SiteProjectors p = site_projectors(m);
  const Matrix diff = p.up - p.down;
  const Matrix q = diff * diff;
  std::vector<std::size_t> allowed;
  for (std::size_t a = 0; a < m.dim(); ++a) {
    const cplx v = q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
    if (std::abs(v - 1.0) < 1e-12) allowed.push_back(a);
  }
  std::vector<std::size_t> out{0};
  for (std::size_t s = 0; s < sites; ++s) {
    std::vector<std::size_t> next;
    for (std::size_t x : out)
      for (std::size_t a : allowed) next.push_back(x * m.dim() + a);
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Matrix restrict_open(const HubbardModel& m, const Matrix& op, std::size_t sites) {
  const auto idx = open_half_filled_basis(m, sites);
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index r = 0; r < k; ++r)
      out(r, c) = op(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                     static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  return out;
}

HalfFilledSector pi0(const HubbardModel& m, std::size_t length) {
  HalfFilledSector s;
  s.length = length;
  s.projector = pi0_product(m, length, false);
  s.basis = open_half_filled_basis(m, length);
  s.ground_energy = -static_cast<double>(length) * m.U;
  return s;
}

Matrix hopping_local(const HubbardModel& m) {
  const Projectors pu = make_projectors(m.up), pd = make_projectors(m.down);
  const Matrix up = graded_permutation(m.up.space(), m.up.space()).matrix * kron_pair(m.up.space(), pu.pi, pu.pibar);
  const Matrix dn =
      graded_permutation(m.down.space(), m.down.space()).matrix * kron_pair(m.down.space(), pd.pi, pd.pibar);
  return lift_pair_up(m, up) + lift_pair_down(m, dn);
}

SparseMatrix hopping(const HubbardModel& m, std::size_t i, std::size_t j, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  if (!adjacent(i, j, length)) throw std::invalid_argument("hopping needs adjacent sites");
  return embed_sparse(hopping_local(m), {i, j}, SiteList(length, m.site()));
}

ChainOperator hopping_dense(const HubbardModel& m, std::size_t i, std::size_t j, std::size_t length) {
  return ChainOperator(SiteList(length, m.site()), Matrix(hopping(m, i, j, length)));
}

SparseMatrix perturbation_t(const HubbardModel& m, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const auto n = static_cast<Eigen::Index>(chain_dim(SiteList(length, m.site())));
  SparseMatrix t(n, n);
  for (std::size_t j = 0; j < length; ++j) {
    const std::size_t k = (j + 1) % length;
    t += hopping(m, j, k, length);
    t += hopping(m, k, j, length);
  }
  return t;
}

SparseMatrix interaction_h0(const HubbardModel& m, std::size_t length) {
  return m.U * sparse_sum(m, cc_site(m), length, 1, length);
}

SparseMatrix resolvent(const HubbardModel& m, const HalfFilledSector& s) {
  require_coupling(m);
  const SparseMatrix h0 = interaction_h0(m, s.length);
  const Eigen::VectorXcd diag = h0.diagonal();
  const double floor = 1e-12 * std::max(1.0, std::abs(m.U));
  std::vector<char> inside(static_cast<std::size_t>(diag.size()), 0);
  for (std::size_t b : s.basis) inside[b] = 1;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (inside[static_cast<std::size_t>(i)]) continue;
    const cplx gap = s.ground_energy - diag(i);
    if (std::abs(gap) < floor) throw std::domain_error("E0 - H0 is singular outside the half-filled sector");
    trip.emplace_back(i, i, 1.0 / gap);
  }
  SparseMatrix r(h0.rows(), h0.cols());
  r.setFromTriplets(trip.begin(), trip.end());
  return r;
}

Matrix heff2_resolvent(const HubbardModel& m, std::size_t length) {
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix t = perturbation_t(m, length), r = resolvent(m, s);
  return m.U * on_image(s, SparseMatrix(t * r * t));
}

Matrix heff2_square(const HubbardModel& m, std::size_t length) {
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix t = perturbation_t(m, length);
  return -0.25 * on_image(s, SparseMatrix(t * t));
}

Matrix heff4_resolvent(const HubbardModel& m, std::size_t length) {
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix t = perturbation_t(m, length), r = resolvent(m, s);
  const SparseMatrix e = s.embedding();
  const SparseMatrix tr = t * r;
  const SparseMatrix right = SparseMatrix(tr * t) * e;       // VSVΠ₀
  const Matrix chain4 = Matrix(SparseMatrix(e.adjoint() * t * r * SparseMatrix(tr * right)));
  const Matrix second = Matrix(SparseMatrix(e.adjoint() * right));
  const Matrix squared = Matrix(SparseMatrix(e.adjoint() * tr * r * t * e));
  const double u3 = m.U * m.U * m.U;
  return u3 * (chain4 - 0.5 * (squared * second + second * squared));
}

Matrix heff4_square(const HubbardModel& m, std::size_t length) {
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix t = perturbation_t(m, length);
  const SparseMatrix scaled = m.U * resolvent(m, s);
  const SparseMatrix e = s.embedding();
  const SparseMatrix t2 = t * t;
  const Matrix middle = Matrix(SparseMatrix(e.adjoint() * t2 * scaled * t2 * e));
  const Matrix p = Matrix(SparseMatrix(e.adjoint() * t2 * e));
  return middle / 16.0 + p * p / 64.0;
}

Matrix heff2_density(const HubbardModel& m) {
  const SiteProjectors p = site_projectors(m);
  const auto n = static_cast<Eigen::Index>(m.dim() * m.dim());
  const SparseMatrix proj =
      site_op(m, p.up, 0, 2) * site_op(m, p.down, 1, 2) + site_op(m, p.down, 0, 2) * site_op(m, p.up, 1, 2);
  return Matrix(2.0 * SparseMatrix((sparse_identity(n) + double_swap(m).sparseView()) * proj));
}

Matrix heff4_density(const HubbardModel& m) {
  const SiteProjectors p = site_projectors(m);
  const auto n = static_cast<Eigen::Index>(m.dim() * m.dim() * m.dim());
  const SparseMatrix id = sparse_identity(n);
  const Matrix pp = double_swap(m);
  const SparseMatrix a = bond_op(m, pp, 0, 1, 3), b = bond_op(m, pp, 1, 2, 3);
  auto pr = [&](const Matrix& x, const Matrix& y, const Matrix& z) {
    return SparseMatrix(site_op(m, x, 0, 3) * site_op(m, y, 1, 3) * site_op(m, z, 2, 3));
  };
  const SparseMatrix first =
      SparseMatrix(id + 2.0 * a + SparseMatrix(b * a)) * (pr(p.down, p.up, p.up) + pr(p.up, p.down, p.down));
  const SparseMatrix second =
      SparseMatrix(id + 2.0 * b + SparseMatrix(a * b)) * (pr(p.down, p.down, p.up) + pr(p.up, p.up, p.down));
  const SparseMatrix third =
      2.0 * SparseMatrix(SparseMatrix(2.0 * id + a + b) * (pr(p.up, p.down, p.up) + pr(p.down, p.up, p.down)));
  return Matrix(first + second + third) / 32.0;
}

Matrix heff2_closed(const HubbardModel& m, std::size_t length) {
  if (length < 3) throw std::invalid_argument("closed second-order form needs L > 2");
  return on_image(pi0(m, length), sparse_sum(m, heff2_density(m), length, 2, length));
}

Matrix heff4_closed(const HubbardModel& m, std::size_t length) {
  if (length < 5) throw std::invalid_argument("closed fourth-order form needs L > 4");
  return on_image(pi0(m, length), sparse_sum(m, heff4_density(m), length, 3, length));
}

ScalarFit fit_scalar(const Matrix& closed, const Matrix& res) {
  ScalarFit f;
  const double den = res.squaredNorm();
  if (den == 0.0) {
    f.residual = max_abs(closed);
    return f;
  }
  f.scalar = (res.adjoint() * closed).trace().real() / den;
  f.residual = max_abs(Matrix(closed - f.scalar * res));
  return f;
}

OddWordReport odd_word_check(const HubbardModel& m, std::size_t length, std::size_t max_word) {
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix e = s.embedding();
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  std::vector<SparseMatrix> ops;
  for (std::size_t i = 0; i < length; ++i)
    for (std::size_t j = 0; j < length; ++j)
      if (adjacent(i, j, length)) {
        bonds.emplace_back(i, j);
        ops.push_back(hopping(m, i, j, length));
      }
  OddWordReport rep;
  std::vector<std::size_t> word;
  std::function<void(const SparseMatrix&)> grow = [&](const SparseMatrix& acc) {
    if (word.size() % 2 == 1) {
      std::set<std::pair<std::size_t, std::size_t>> used;
      for (std::size_t w : word) used.insert(std::minmax(bonds[w].first, bonds[w].second));
      const double v = max_abs(SparseMatrix(e.adjoint() * acc));
      if (used.size() == length && length > 2) rep.winding_words = std::max(rep.winding_words, v);
      else rep.odd_words = std::max(rep.odd_words, v);
      ++rep.words;
    }
    if (word.size() == max_word) return;
    for (std::size_t k = 0; k < ops.size(); ++k) {
      word.push_back(k);
      grow(SparseMatrix(ops[k] * acc));
      word.pop_back();
    }
  };
  grow(e);
  return rep;
}

double CorollaryReport::max() const { return std::max({square, back_forth, converge, odd_power, redundancy}); }

CorollaryReport corollaries(const HubbardModel& m, std::size_t length) {
  if (length < 3) throw std::invalid_argument("corollaries need L >= 3");
  const HalfFilledSector s = pi0(m, length);
  const SparseMatrix e = s.embedding();
  const auto n = s.projector.rows();
  SparseMatrix id(n, n);
  id.setIdentity();
  const SparseMatrix outside = id - s.projector;
  CorollaryReport rep;
  for (std::size_t j = 0; j < length; ++j) {
    const std::size_t k = (j + 1) % length, prev = (j + length - 1) % length;
    const SparseMatrix xjk = hopping(m, j, k, length), xkj = hopping(m, k, j, length);
    rep.square = std::max({rep.square, max_abs(SparseMatrix(xjk * xjk * e)), max_abs(SparseMatrix(xkj * xkj * e))});
    rep.back_forth = std::max({rep.back_forth, max_abs(SparseMatrix(outside * xjk * xkj * e)),
                               max_abs(SparseMatrix(outside * xkj * xjk * e))});
    rep.converge =
        std::max(rep.converge, max_abs(SparseMatrix(hopping(m, prev, j, length) * hopping(m, k, j, length) * e)));
  }
  const SparseMatrix t = perturbation_t(m, length);
  SparseMatrix power = t * e;
  for (std::size_t p = 1; p < length; p += 2) {
    rep.odd_power = std::max(rep.odd_power, max_abs(SparseMatrix(e.adjoint() * power)));
    power = SparseMatrix(t * SparseMatrix(t * power));
  }
  const SiteProjectors sp = site_projectors(m);
  const SiteList chain(length, m.site());
  for (std::size_t j = 0; j < length; ++j) {
    const SparseMatrix a = embed_sparse(Matrix(sp.up - sp.down_bar), {j}, chain);
    const SparseMatrix b = embed_sparse(Matrix(sp.down - sp.up_bar), {j}, chain);
    rep.redundancy = std::max({rep.redundancy, max_abs(SparseMatrix(a * e)), max_abs(SparseMatrix(b * e))});
  }
  return rep;
}

ThreeSiteSpectrum three_site_spectrum(const HubbardModel& m, double U) {
  if (U == 0.0) throw std::domain_error("three-site spectrum needs U != 0");
  const Matrix h2 = heff2_density(m);
  const Matrix local = Matrix(0.5 * (bond_op(m, h2, 0, 1, 3) + bond_op(m, h2, 1, 2, 3))) + heff4_density(m) / (U * U);
  ThreeSiteSpectrum out;
  out.eigenvalues = sorted_eigenvalues(restrict_open(m, local, 3));
  out.expected = {0.0, 1.0, 3.0 * (1.0 + 1.0 / (16.0 * U * U))};
  for (double v : out.eigenvalues) {
    if (!out.distinct.empty() && std::abs(v - out.distinct.back()) <= 1e-8 * std::max(1.0, std::abs(v))) {
      ++out.multiplicity.back();
      continue;
    }
    out.distinct.push_back(v);
    out.multiplicity.push_back(1);
  }
  for (double v : out.distinct) {
    double best = 1e300;
    for (double e : out.expected) best = std::min(best, std::abs(v - e) / std::max(1.0, std::abs(e)));
    out.deviation = std::max(out.deviation, best);
  }
  return out;
}

ScalingReport strong_coupling_vs_ed(const HubbardModel& model, std::size_t length,
                                    const std::vector<double>& couplings) {
  if (couplings.empty()) throw std::invalid_argument("no couplings given");
  ScalingReport rep;
  rep.length = length;
  const HubbardModel unit(model.up, model.down, 1.0);
  const Matrix h2 = heff2_resolvent(unit, length);
  const Matrix h4 = heff4_resolvent(unit, length);
  const HalfFilledSector s = pi0(unit, length);
  rep.states = s.basis.size();
  const SiteList chain(length, model.site());
  const auto sectors = charge_sectors(chain, hubbard_site_charges(model));
  std::vector<std::size_t> position(chain_dim(chain), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < s.basis.size(); ++k) position[s.basis[k]] = k;
  for (double U : couplings) {
    if (U == 0.0) throw std::domain_error("strong coupling expansion needs U != 0");
    const HubbardModel mu(model.up, model.down, U);
    const auto terms = hamiltonian_terms_hubbard(mu, length);
    ScalingRow row;
    row.U = U;
    for (const auto& [charge, states] : sectors) {
      std::vector<std::size_t> local;
      for (std::size_t x : states)
        if (position[x] != static_cast<std::size_t>(-1)) local.push_back(position[x]);
      if (local.empty()) continue;
      const auto ed = sorted_eigenvalues(restrict_terms(terms, states));
      const auto k = static_cast<Eigen::Index>(local.size());
      Matrix a(k, k), b(k, k);
      for (Eigen::Index c = 0; c < k; ++c)
        for (Eigen::Index r = 0; r < k; ++r) {
          const auto ri = static_cast<Eigen::Index>(local[static_cast<std::size_t>(r)]);
          const auto ci = static_cast<Eigen::Index>(local[static_cast<std::size_t>(c)]);
          a(r, c) = h2(ri, ci) / U;
          b(r, c) = a(r, c) + h4(ri, ci) / (U * U * U);
        }
      const auto ea = sorted_eigenvalues(a), eb = sorted_eigenvalues(b);
      const double shift = static_cast<double>(length) * U;
      for (std::size_t q = 0; q < local.size(); ++q) {
        row.error_h2 = std::max(row.error_h2, std::abs(ed[q] + shift - ea[q]));
        row.error_h4 = std::max(row.error_h4, std::abs(ed[q] + shift - eb[q]));
      }
    }
    rep.rows.push_back(row);
  }
  if (rep.rows.size() >= 2) {
    const auto& f = rep.rows.front();
    const auto& l = rep.rows.back();
    const double span = std::log(std::abs(l.U / f.U));
    rep.exponent_h2 = std::log(l.error_h2 / f.error_h2) / span;
    rep.exponent_h4 = std::log(l.error_h4 / f.error_h4) / span;
  }
  return rep;
}

}  // namespace unihub
