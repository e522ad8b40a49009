#include "unihub/hubbard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace unihub {

namespace {

SiteList four_factors(const HubbardModel& m) { return {m.up.space(), m.down.space(), m.up.space(), m.down.space()}; }

Matrix exp_cc(const HubbardModel& m, double a, std::size_t site) {
  // e^{a C↑C↓} on one composite site of a pair; (C↑C↓)^2 = 1.
  const auto n = static_cast<Eigen::Index>(m.dim() * m.dim());
  const Matrix cc = embed(cc_site(m), {site}, SiteList(2, m.site()));
  return std::cosh(a) * Matrix::Identity(n, n) + std::sinh(a) * cc;
}

bool graded(const HubbardModel& m) { return !m.site().all_even(); }

}  // namespace

HubbardModel::HubbardModel(XXModel u, XXModel d, double coupling) : up(std::move(u)), down(std::move(d)), U(coupling) {
  if (!std::isfinite(U)) throw std::invalid_argument("U must be finite");
}

std::string HubbardModel::name() const {
  return up.name() + " x " + down.name() + " U=" + std::to_string(U);
}

double h_of_lambda(double lambda, double U) { return 0.5 * std::asinh(U * std::sin(2.0 * lambda)); }

double h_derivative(double lambda, double U) {
  return U * std::cos(2.0 * lambda) / std::cosh(2.0 * h_of_lambda(lambda, U));
}

Matrix cc_site(const HubbardModel& m) {
  return lift_up(m, make_projectors(m.up).c) * lift_down(m, make_projectors(m.down).c);
}

Matrix lift_up(const HubbardModel& m, const Matrix& a) { return embed(a, {0}, {m.up.space(), m.down.space()}); }
Matrix lift_down(const HubbardModel& m, const Matrix& b) { return embed(b, {1}, {m.up.space(), m.down.space()}); }
Matrix lift_pair_up(const HubbardModel& m, const Matrix& a) { return embed(a, {0, 2}, four_factors(m)); }
Matrix lift_pair_down(const HubbardModel& m, const Matrix& b) { return embed(b, {1, 3}, four_factors(m)); }

Matrix composite_permutation(const HubbardModel& m) { return graded_permutation(m.site(), m.site()).matrix; }

double coupling_coefficient(double l1, double l2, double hprime) {
  const double l12 = l1 - l2, lp = l1 + l2;
  const double sp = std::sin(lp);
  if (std::abs(sp) >= 1e-8) return std::sin(l12) / sp * std::tanh(hprime);
  if (std::sin(l12) == 0.0) return 0.0;
  if (std::abs(lp) < 1e-8) {
    const double ratio = l12 / lp;
    if (std::isfinite(ratio) && std::abs(ratio) <= 1e8) return ratio * std::tanh(hprime);
  }
  throw std::domain_error("lambda1 + lambda2 sits at a pole of the coupling coefficient");
}

ChainOperator r_hubbard(const HubbardModel& m, double l1, double l2) {
  return r_hubbard(m, l1, l2, [&](double x) { return h_of_lambda(x, m.U); });
}

ChainOperator r_hubbard(const HubbardModel& m, double l1, double l2, const HFunction& h) {
  const double l12 = l1 - l2, lp = l1 + l2;
  const double coef = coupling_coefficient(l1, l2, h(l1) + h(l2));
  const SiteList four = four_factors(m);
  Matrix r = lift_pair_up(m, r_xx(m.up, l12).matrix) * lift_pair_down(m, r_xx(m.down, l12).matrix);
  if (coef != 0.0) {
    const Matrix cu = embed(make_projectors(m.up).c, {0}, four);
    const Matrix cd = embed(make_projectors(m.down).c, {1}, four);
    r += coef * lift_pair_up(m, r_xx(m.up, lp).matrix) * cu * lift_pair_down(m, r_xx(m.down, lp).matrix) * cd;
  }
  return ChainOperator(SiteList(2, m.site()), std::move(r));
}

ChainOperator r_hubbard_c2(const HubbardModel& m, double l1, double l2) {
  const double l12 = l1 - l2, lp = l1 + l2;
  const double coef = coupling_coefficient(l1, l2, h_of_lambda(l1, m.U) + h_of_lambda(l2, m.U));
  const SiteList four = four_factors(m);
  const Matrix cu = embed(make_projectors(m.up).c, {2}, four);
  const Matrix cd = embed(make_projectors(m.down).c, {3}, four);
  Matrix r = lift_pair_up(m, r_xx(m.up, l12).matrix) * lift_pair_down(m, r_xx(m.down, l12).matrix);
  r += coef * lift_pair_up(m, r_xx(m.up, lp).matrix) * cu * lift_pair_down(m, r_xx(m.down, lp).matrix) * cd;
  return ChainOperator(SiteList(2, m.site()), std::move(r));
}

ChainOperator gauge_r(const HubbardModel& m, double l1, double l2) {
  return gauge_r(m, l1, l2, [&](double x) { return h_of_lambda(x, m.U); });
}

ChainOperator gauge_r(const HubbardModel& m, double l1, double l2, const HFunction& h) {
  const double h1 = h(l1), h2 = h(l2);
  const Matrix left = exp_cc(m, 0.5 * h1, 0) * exp_cc(m, 0.5 * h2, 1);
  const Matrix right = exp_cc(m, -0.5 * h1, 0) * exp_cc(m, -0.5 * h2, 1);
  return ChainOperator(SiteList(2, m.site()), left * r_hubbard(m, l1, l2, h).matrix * right);
}

ChainOperator reduced_r(const HubbardModel& m, double lambda) {
  const double h = h_of_lambda(lambda, m.U);
  const auto n = static_cast<Eigen::Index>(m.dim() * m.dim());
  const Matrix cc = embed(cc_site(m), {0}, SiteList(2, m.site()));
  const Matrix i1 = std::cosh(0.5 * h) * Matrix::Identity(n, n) + std::sinh(0.5 * h) * cc;
  const Matrix a = lift_pair_up(m, r_xx(m.up, lambda).matrix) * lift_pair_down(m, r_xx(m.down, lambda).matrix);
  return ChainOperator(SiteList(2, m.site()), (i1 * a * i1) / std::cosh(h));
}

ChainOperator reduced_r_derivative(const HubbardModel& m, double lambda) {
  const double h = h_of_lambda(lambda, m.U);
  const double dh = h_derivative(lambda, m.U);
  const auto n = static_cast<Eigen::Index>(m.dim() * m.dim());
  const Matrix id = Matrix::Identity(n, n);
  const Matrix cc = embed(cc_site(m), {0}, SiteList(2, m.site()));
  const Matrix i1 = std::cosh(0.5 * h) * id + std::sinh(0.5 * h) * cc;
  const Matrix di1 = 0.5 * dh * (std::sinh(0.5 * h) * id + std::cosh(0.5 * h) * cc);
  const Matrix ru = lift_pair_up(m, r_xx(m.up, lambda).matrix), rd = lift_pair_down(m, r_xx(m.down, lambda).matrix);
  const Matrix dru = lift_pair_up(m, r_xx_derivative(m.up, lambda).matrix);
  const Matrix drd = lift_pair_down(m, r_xx_derivative(m.down, lambda).matrix);
  const Matrix a = ru * rd, da = dru * rd + ru * drd;
  const double g = 1.0 / std::cosh(h), dg = -std::sinh(h) * dh / (std::cosh(h) * std::cosh(h));
  return ChainOperator(SiteList(2, m.site()), dg * i1 * a * i1 + g * (di1 * a * i1 + i1 * da * i1 + i1 * a * di1));
}

double unitarity_coefficient(const HubbardModel& m, double l1, double l2) {
  const double c = std::cos(l1 - l2);
  const double k = coupling_coefficient(l1, l2, h_of_lambda(l1, m.U) + h_of_lambda(l2, m.U));
  return c * c * c * c - k * k;
}

double unitarity_coefficient_alt(const HubbardModel& m, double l1, double l2) {
  const double c = std::cos(l1 - l2);
  const double t = std::tanh(h_of_lambda(l1, m.U) - h_of_lambda(l2, m.U)) / std::cos(l1 + l2);
  return c * c * (c * c - t * t);
}

double unitarity_coefficient_measured(const HubbardModel& m, double l1, double l2) {
  const double c = std::cos(l1 - l2), cp = std::cos(l1 + l2);
  const double k = coupling_coefficient(l1, l2, h_of_lambda(l1, m.U) + h_of_lambda(l2, m.U));
  return c * c * c * c - k * k * cp * cp * cp * cp;
}

double HubbardRReport::max() const { return std::max({ybe, unitarity, regularity, coefficient_forms}); }

double hubbard_ybe_residual(const HubbardModel& m, double l1, double l2, double l3, HubbardForm form,
                            const HFunction& h) {
  const HFunction hf = h ? h : HFunction([&](double x) { return h_of_lambda(x, m.U); });
  auto r = [&](double a, double b) {
    return form == HubbardForm::gauged ? gauge_r(m, a, b, hf).matrix : r_hubbard(m, a, b, hf).matrix;
  };
  const SiteList three(3, m.site());
  const SparseMatrix r12 = embed_sparse(r(l1, l2), {0, 1}, three);
  const SparseMatrix r13 = embed_sparse(r(l1, l3), {0, 2}, three);
  const SparseMatrix r23 = embed_sparse(r(l2, l3), {1, 2}, three);
  const SparseMatrix diff = SparseMatrix(r12 * r13 * r23) - SparseMatrix(r23 * r13 * r12);
  return diff.norm() / static_cast<double>(diff.rows());
}

HubbardRReport verify_hubbard_r(const HubbardModel& m, std::size_t samples, std::uint64_t seed, HubbardForm form) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  auto r = [&](double a, double b) { return form == HubbardForm::gauged ? gauge_r(m, a, b).matrix : r_hubbard(m, a, b).matrix; };
  const Matrix p = composite_permutation(m);
  const auto n = p.rows();
  HubbardRReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    double l1 = u(rng), l2 = u(rng), l3 = u(rng);
    while (std::abs(std::sin(l1 + l2)) < 0.05 || std::abs(std::sin(l1 + l3)) < 0.05 || std::abs(std::sin(l2 + l3)) < 0.05) {
      l1 = u(rng);
      l2 = u(rng);
      l3 = u(rng);
    }
    rep.ybe = std::max(rep.ybe, hubbard_ybe_residual(m, l1, l2, l3, form));
    const Matrix prod = r(l1, l2) * (p * r(l2, l1) * p);
    rep.unitarity = std::max(
        rep.unitarity, frobenius_per_side(prod - unitarity_coefficient_measured(m, l1, l2) * Matrix::Identity(n, n)));
    rep.closed_unitarity = std::max(
        rep.closed_unitarity, frobenius_per_side(prod - unitarity_coefficient(m, l1, l2) * Matrix::Identity(n, n)));
    rep.coefficient_forms = std::max(rep.coefficient_forms,
                                     std::abs(unitarity_coefficient(m, l1, l2) - unitarity_coefficient_alt(m, l1, l2)));
    rep.regularity = std::max(rep.regularity, frobenius_per_side(r(l1, l1) - p));
    rep.symmetry = std::max(rep.symmetry, frobenius_per_side(p * r(l1, l2) * p - r(l1, l2)));
    if (form == HubbardForm::plain) {
      rep.symmetry_site_two = std::max(rep.symmetry_site_two, frobenius_per_side(p * r(l1, l2) * p - r_hubbard_c2(m, l1, l2).matrix));
    }
  }
  return rep;
}

ChainOperator transfer_hubbard(const HubbardModel& m, double lambda, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteList chain(length, m.site());
  chain_dim(chain);
  std::vector<Matrix> loc(length, reduced_r(m, lambda).matrix);
  return ChainOperator(chain, transfer_from_local(loc, m.site(), m.site(), graded(m)));
}

ChainOperator transfer_hubbard_derivative(const HubbardModel& m, double lambda, std::size_t length) {
  const SiteList chain(length, m.site());
  const auto d = static_cast<Eigen::Index>(chain_dim(chain));
  const Matrix r = reduced_r(m, lambda).matrix, dr = reduced_r_derivative(m, lambda).matrix;
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < length; ++k) {
    std::vector<Matrix> loc(length, r);
    loc[k] = dr;
    sum += transfer_from_local(loc, m.site(), m.site(), graded(m));
  }
  return ChainOperator(chain, sum);
}

Matrix hamiltonian_density_hubbard(const HubbardModel& m) {
  const Matrix hop = lift_pair_up(m, hamiltonian_density_xx(m.up)) + lift_pair_down(m, hamiltonian_density_xx(m.down));
  return hop + m.U * embed(cc_site(m), {0}, SiteList(2, m.site()));
}

std::vector<LocalTerm> hamiltonian_terms_hubbard(const HubbardModel& m, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteList chain(length, m.site());
  const Matrix h = hamiltonian_density_hubbard(m);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < length; ++j) terms.emplace_back(h, std::vector<std::size_t>{j, (j + 1) % length}, chain);
  return terms;
}

ChainOperator hamiltonian_hubbard(const HubbardModel& m, std::size_t length) {
  return ChainOperator(SiteList(length, m.site()), dense_terms(hamiltonian_terms_hubbard(m, length)));
}

ChainOperator log_derivative_hamiltonian_hubbard(const HubbardModel& m, std::size_t length) {
  const ChainOperator t0 = transfer_hubbard(m, 0.0, length);
  const ChainOperator dt = transfer_hubbard_derivative(m, 0.0, length);
  return ChainOperator(t0.sites, t0.matrix.partialPivLu().solve(dt.matrix));
}

ChainOperator interaction_hubbard(const HubbardModel& m, std::size_t length) {
  const SiteList chain(length, m.site());
  return ChainOperator(chain, m.U * global_one_site(cc_site(m), chain));
}

std::vector<Matrix> symmetry_generators_hubbard(const HubbardModel& m) {
  std::vector<Matrix> out;
  for (const auto& g : symmetry_generators_xx(m.up)) out.push_back(lift_up(m, g.one_site));
  for (const auto& g : symmetry_generators_xx(m.down)) out.push_back(lift_down(m, g.one_site));
  return out;
}

std::vector<Matrix> cross_block_generators_hubbard(const HubbardModel& m) {
  std::vector<Matrix> out;
  for (const auto& g : cross_block_generators_xx(m.up)) out.push_back(lift_up(m, g.one_site));
  for (const auto& g : cross_block_generators_xx(m.down)) out.push_back(lift_down(m, g.one_site));
  return out;
}

SymmetryReport symmetry_hubbard(const HubbardModel& m, std::size_t length, double lambda) {
  SymmetryReport rep;
  const SiteList chain(length, m.site());
  const SiteList two(2, m.site());
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  SparseMatrix h(n, n);
  for (const auto& term : hamiltonian_terms_hubbard(m, length)) h += term.sparse();
  auto global = [&](const Matrix& g) {
    SparseMatrix acc(n, n);
    for (std::size_t j = 0; j < length; ++j) acc += embed_sparse(g, {j}, chain);
    return acc;
  };
  auto h_comm = [&](const Matrix& g) {
    const SparseMatrix big = global(g);
    const SparseMatrix c = SparseMatrix(h * big) - SparseMatrix(big * h);
    return c.norm() / static_cast<double>(n);
  };
  const Matrix r = reduced_r(m, lambda).matrix;
  const Matrix cc = cc_site(m);
  const auto gens = symmetry_generators_hubbard(m);
  rep.generators = gens.size();
  for (const auto& g : gens) {
    rep.r_commutator = std::max(rep.r_commutator, commutator_norm(r, global_one_site(g, two)).value);
    rep.h_commutator = std::max(rep.h_commutator, h_comm(g));
    rep.c_commutator = std::max(rep.c_commutator, commutator_norm(g, cc).value);
  }
  rep.cross_block_min = 1e300;
  for (const auto& g : cross_block_generators_hubbard(m)) rep.cross_block_min = std::min(rep.cross_block_min, h_comm(g));
  return rep;
}

std::vector<ChargeVector> hubbard_site_charges(const HubbardModel& m) {
  const std::size_t du = m.up.dim(), dd = m.down.dim();
  std::vector<ChargeVector> out(du * dd, ChargeVector(du + dd, 0));
  for (std::size_t a = 0; a < du; ++a)
    for (std::size_t b = 0; b < dd; ++b) {
      out[a * dd + b][a] = 1;
      out[a * dd + b][du + b] = 1;
    }
  return out;
}

std::vector<HubbardModel> hubbard_zoo(double U) {
  return {HubbardModel(XXModel::gl(2, 0, {1}), XXModel::gl(2, 0, {1}), U),
          HubbardModel(XXModel::gl(1, 1, {1}), XXModel::gl(1, 1, {1}), U),
          HubbardModel(XXModel::gl(2, 1, {1}), XXModel::gl(2, 0, {1}), U),
          HubbardModel(XXModel::gl(2, 1, {1}), XXModel::gl(2, 1, {1}), U)};
}

}  // namespace unihub
