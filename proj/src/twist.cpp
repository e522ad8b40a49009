#include "unihub/twist.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace unihub {

namespace {

Matrix cell_projector(std::size_t dim, const std::vector<std::size_t>& cell) {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i : cell) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

// Diagonal operands are even, so the graded product reduces to the plain one.
Matrix kron_diag(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SiteList two_sites(const XXModel& m) { return {m.space(), m.space()}; }

Matrix swap_sites(const XXModel& m, const Matrix& a) {
  const Matrix p = graded_permutation(m.space(), m.space()).matrix;
  return p * a * p;
}

bool graded(const XXModel& m) { return !m.space().all_even(); }

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix hubbard_f(const HubbardModel& m, const Refinement& up, const Refinement& down) {
  return lift_pair_up(m, f_matrix(m.up, up).matrix) * lift_pair_down(m, f_matrix(m.down, down).matrix);
}

}  // namespace

Refinement Refinement::maximal(const XXModel& model, cplx q_all) {
  Refinement r;
  for (std::size_t i : model.unbarred_indices()) r.cells.push_back({i});
  for (std::size_t i : model.barred_indices()) r.bar_cells.push_back({i});
  r.q.assign(r.cells.size(), std::vector<cplx>(r.bar_cells.size(), q_all));
  return r;
}

Refinement Refinement::coarse(const XXModel& model, cplx q) {
  Refinement r;
  r.cells.push_back(model.unbarred_indices());
  r.bar_cells.push_back(model.barred_indices());
  r.q.assign(1, std::vector<cplx>(1, q));
  return r;
}

bool Refinement::phases(double tol) const {
  for (const auto& row : q)
    for (cplx v : row)
      if (std::abs(std::abs(v) - 1.0) > tol) return false;
  return true;
}

void validate(const XXModel& model, const Refinement& ref) {
  std::vector<int> seen(model.dim(), 0);
  auto mark = [&](const std::vector<std::vector<std::size_t>>& cells, bool barred) {
    for (const auto& cell : cells) {
      if (cell.empty()) throw std::invalid_argument("refinement cell is empty");
      for (std::size_t i : cell) {
        if (i >= model.dim()) throw std::invalid_argument("refinement index out of range");
        if (model.in_n(i) == barred) throw std::invalid_argument("refinement cell mixes N and its complement");
        if (seen[i]++) throw std::invalid_argument("refinement cells overlap");
      }
    }
  };
  mark(ref.cells, false);
  mark(ref.bar_cells, true);
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw std::invalid_argument("refinement does not cover the space");
  if (ref.q.size() != ref.cells.size()) throw std::invalid_argument("twist table has the wrong number of rows");
  for (const auto& row : ref.q) {
    if (row.size() != ref.bar_cells.size()) throw std::invalid_argument("twist table has the wrong number of columns");
    for (cplx v : row)
      if (v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::invalid_argument("twist parameters must be finite and nonzero");
  }
}

ChainOperator f_matrix(const XXModel& model, const Refinement& ref) {
  validate(model, ref);
  const auto n = static_cast<Eigen::Index>(model.dim() * model.dim());
  Matrix f = Matrix::Identity(n, n);
  for (std::size_t a = 0; a < ref.cells.size(); ++a)
    for (std::size_t b = 0; b < ref.bar_cells.size(); ++b)
      f += (ref.q[a][b] - 1.0) *
           kron_diag(cell_projector(model.dim(), ref.cells[a]), cell_projector(model.dim(), ref.bar_cells[b]));
  return ChainOperator(two_sites(model), f);
}

ChainOperator f_inverse(const XXModel& model, const Refinement& ref) {
  validate(model, ref);
  const auto n = static_cast<Eigen::Index>(model.dim() * model.dim());
  Matrix f = Matrix::Identity(n, n);
  for (std::size_t a = 0; a < ref.cells.size(); ++a)
    for (std::size_t b = 0; b < ref.bar_cells.size(); ++b)
      f -= (ref.q[a][b] - 1.0) / ref.q[a][b] *
           kron_diag(cell_projector(model.dim(), ref.cells[a]), cell_projector(model.dim(), ref.bar_cells[b]));
  return ChainOperator(two_sites(model), f);
}

ChainOperator twisted_sigma(const XXModel& model, const Refinement& ref) {
  validate(model, ref);
  const auto n = static_cast<Eigen::Index>(model.dim() * model.dim());
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < ref.cells.size(); ++a)
    for (std::size_t b = 0; b < ref.bar_cells.size(); ++b) {
      const Matrix pa = cell_projector(model.dim(), ref.cells[a]);
      const Matrix pb = cell_projector(model.dim(), ref.bar_cells[b]);
      s += ref.q[a][b] * kron_diag(pa, pb) + kron_diag(pb, pa) / ref.q[a][b];
    }
  return ChainOperator(two_sites(model), s);
}

ChainOperator twisted_r(const XXModel& model, const Refinement& ref, double lambda) {
  const Matrix f12 = f_matrix(model, ref).matrix;
  const Matrix f21_inv = swap_sites(model, f_inverse(model, ref).matrix);
  return ChainOperator(two_sites(model), f12 * r_xx(model, lambda).matrix * f21_inv);
}

ChainOperator twisted_r_closed(const XXModel& model, const Refinement& ref, double lambda) {
  const Matrix s = sigma(model).matrix;
  const Matrix p = graded_permutation(model.space(), model.space()).matrix;
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  return ChainOperator(two_sites(model),
                       std::sin(lambda) * twisted_sigma(model, ref).matrix + (s + std::cos(lambda) * (id - s)) * p);
}

RMatrixFamily twisted_family(const XXModel& model, const Refinement& ref) {
  validate(model, ref);
  return {model.space(), [model, ref](double l) { return twisted_r(model, ref, l).matrix; },
          make_projectors(model).c, sigma(model).matrix};
}

Matrix twisted_density(const XXModel& model, const Refinement& ref) {
  return graded_permutation(model.space(), model.space()).matrix * twisted_sigma(model, ref).matrix;
}

ChainOperator twisted_hamiltonian(const XXModel& model, const Refinement& ref, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteList chain(length, model.space());
  const Matrix h = twisted_density(model, ref);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < length; ++j) terms.emplace_back(h, std::vector<std::size_t>{j, (j + 1) % length}, chain);
  return ChainOperator(chain, dense_terms(terms));
}

ChainOperator twisted_transfer(const XXModel& model, const Refinement& ref, double lambda, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  std::vector<Matrix> loc(length, twisted_r(model, ref, lambda).matrix);
  return ChainOperator(SiteList(length, model.space()),
                       transfer_from_local(loc, model.space(), model.space(), graded(model)));
}

TwistReport verify_twist(const XXModel& model, const Refinement& ref, std::size_t length, std::size_t samples,
                         std::uint64_t seed) {
  TwistReport rep;
  rep.properties = verify_r_family(twisted_family(model, ref), samples, seed);
  for (double l : sample_lambdas(samples, seed + 1))
    rep.closed_form = std::max(rep.closed_form,
                               max_abs(twisted_r(model, ref, l).matrix - twisted_r_closed(model, ref, l).matrix));
  const Matrix ff = f_matrix(model, ref).matrix * f_inverse(model, ref).matrix;
  rep.inverse = max_abs(ff - Matrix::Identity(ff.rows(), ff.cols()));
  const Matrix h = twisted_hamiltonian(model, ref, length).matrix;
  rep.hermiticity = frobenius_per_side(h - h.adjoint());
  const Matrix ta = twisted_transfer(model, ref, 0.31, length).matrix;
  const Matrix tb = twisted_transfer(model, ref, -0.73, length).matrix;
  rep.transfer_commutator = frobenius_per_side(ta * tb - tb * ta);
  Eigen::ComplexEigenSolver<Matrix> es(h, false);
  rep.imaginary_spectrum = es.eigenvalues().imag().cwiseAbs().maxCoeff();
  return rep;
}

ChainOperator twisted_hubbard_r(const HubbardModel& model, const Refinement& up, const Refinement& down, double l1,
                                double l2) {
  const Matrix f = hubbard_f(model, up, down);
  const Matrix p = composite_permutation(model);
  const Matrix f21 = p * f * p;
  return ChainOperator(SiteList(2, model.site()),
                       f * r_hubbard(model, l1, l2).matrix * f21.partialPivLu().inverse());
}

ChainOperator twisted_hubbard_r_closed(const HubbardModel& m, const Refinement& up, const Refinement& down, double l1,
                                       double l2) {
  const double l12 = l1 - l2, lp = l1 + l2;
  const double coef = coupling_coefficient(l1, l2, h_of_lambda(l1, m.U) + h_of_lambda(l2, m.U));
  const SiteList four{m.up.space(), m.down.space(), m.up.space(), m.down.space()};
  Matrix r = lift_pair_up(m, twisted_r(m.up, up, l12).matrix) * lift_pair_down(m, twisted_r(m.down, down, l12).matrix);
  if (coef != 0.0) {
    const Matrix cu = embed(make_projectors(m.up).c, {0}, four);
    const Matrix cd = embed(make_projectors(m.down).c, {1}, four);
    r += coef * lift_pair_up(m, twisted_r(m.up, up, lp).matrix) * cu *
         lift_pair_down(m, twisted_r(m.down, down, lp).matrix) * cd;
  }
  return ChainOperator(SiteList(2, m.site()), std::move(r));
}

ChainOperator twisted_hubbard_hamiltonian(const HubbardModel& m, const Refinement& up, const Refinement& down,
                                          std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const Matrix h = lift_pair_up(m, twisted_density(m.up, up)) + lift_pair_down(m, twisted_density(m.down, down)) +
                   m.U * embed(cc_site(m), {0}, SiteList(2, m.site()));
  const SiteList chain(length, m.site());
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < length; ++j) terms.emplace_back(h, std::vector<std::size_t>{j, (j + 1) % length}, chain);
  return ChainOperator(chain, dense_terms(terms));
}

TwistedHubbardReport verify_twisted_hubbard(const HubbardModel& m, const Refinement& up, const Refinement& down,
                                            std::size_t length, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const Matrix p = composite_permutation(m);
  const auto n = p.rows();
  const SiteList three(3, m.site());
  auto r = [&](double a, double b) { return twisted_hubbard_r(m, up, down, a, b).matrix; };
  TwistedHubbardReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    double l1 = u(rng), l2 = u(rng), l3 = u(rng);
    while (std::abs(std::sin(l1 + l2)) < 0.05 || std::abs(std::sin(l1 + l3)) < 0.05 ||
           std::abs(std::sin(l2 + l3)) < 0.05) {
      l1 = u(rng);
      l2 = u(rng);
      l3 = u(rng);
    }
    const SparseMatrix r12 = embed_sparse(r(l1, l2), {0, 1}, three);
    const SparseMatrix r13 = embed_sparse(r(l1, l3), {0, 2}, three);
    const SparseMatrix r23 = embed_sparse(r(l2, l3), {1, 2}, three);
    const SparseMatrix diff = SparseMatrix(r12 * r13 * r23) - SparseMatrix(r23 * r13 * r12);
    rep.ybe = std::max(rep.ybe, diff.norm() / static_cast<double>(diff.rows()));
    const Matrix prod = r(l1, l2) * (p * r(l2, l1) * p);
    rep.unitarity = std::max(
        rep.unitarity, frobenius_per_side(prod - unitarity_coefficient_measured(m, l1, l2) * Matrix::Identity(n, n)));
    rep.regularity = std::max(rep.regularity, frobenius_per_side(r(l1, l1) - p));
    rep.closed_form = std::max(rep.closed_form, max_abs(r(l1, l2) - twisted_hubbard_r_closed(m, up, down, l1, l2).matrix));
  }
  const Matrix h = twisted_hubbard_hamiltonian(m, up, down, length).matrix;
  rep.hermiticity = frobenius_per_side(h - h.adjoint());
  return rep;
}

}  // namespace unihub
