#include "unihub/xx_bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace unihub {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Matrix small_projector(const SmallChain& sc, bool barred) {
  const auto d = static_cast<Eigen::Index>(sc.dim());
  Matrix p = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < sc.dim(); ++j) {
    if (sc.is_barred(j) == barred) p(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return p;
}

Matrix kron2(const SmallChain& sc, const Matrix& a, const Matrix& b) {
  return graded_kron(ChainOperator({sc.space}, a), ChainOperator({sc.space}, b)).matrix;
}

// Distinct values of a list, merged within tol.
std::vector<double> distinct(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  return out;
}

// All strictly increasing sequences of size k from {0..n-1}.
void combinations(std::size_t n, std::size_t k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  const int start = cur.empty() ? 0 : cur.back() + 1;
  for (int i = start; i < static_cast<int>(n); ++i) {
    cur.push_back(i);
    combinations(n, k, cur, out);
    cur.pop_back();
  }
}

std::vector<double> phase_roots(cplx rhs, std::size_t n) {
  std::vector<double> r;
  const double a = std::arg(rhs);
  for (std::size_t k = 0; k < n; ++k) r.push_back(wrap_angle((a + 2.0 * kPi * static_cast<double>(k)) / static_cast<double>(n)));
  return r;
}

double sign_pow(std::size_t m) { return (m % 2 == 1) ? 1.0 : -1.0; }  // (-1)^{m-1}

}  // namespace

SmallChain small_chain(const XXModel& model) {
  if (model.rank() == 0) throw std::invalid_argument("rank of pi is 0: no pseudo-vacuum in W");
  SmallChain sc;
  const auto ub = model.unbarred_indices();
  const auto br = model.barred_indices();
  sc.vacuum = ub.front();
  std::vector<int> g;
  for (std::size_t k = 1; k < ub.size(); ++k) sc.to_big.push_back(ub[k]);
  sc.unbarred = sc.to_big.size();
  for (std::size_t b : br) sc.to_big.push_back(b);
  if (sc.to_big.empty()) throw std::invalid_argument("one-dimensional space has no excitations");
  const int gv = model.space().grade(sc.vacuum);
  for (std::size_t b : sc.to_big) g.push_back(model.space().grade(b) ^ gv);
  sc.space = GradedSpace(std::move(g));
  return sc;
}

std::size_t excitation_index(const XXModel& model, std::size_t length,
                             const std::vector<std::pair<std::size_t, std::size_t>>& placed) {
  const std::size_t vac = model.unbarred_indices().front();
  std::vector<std::size_t> digits(length, vac);
  for (auto [pos, idx] : placed) {
    if (pos >= length) throw std::out_of_range("excitation position out of range");
    digits[pos] = idx;
  }
  std::size_t x = 0;
  for (std::size_t d : digits) x = x * model.dim() + d;
  return x;
}

bool VacuumReport::pass(double tol) const {
  return transfer_residual <= tol && hamiltonian_residual <= tol && impulsion_residual <= tol &&
         lowering_residual <= tol;
}

VacuumReport pseudo_vacuum_check(const XXModel& model, std::size_t length, double lambda) {
  if (model.rank() == 0) throw std::invalid_argument("rank of pi is 0: no pseudo-vacuum in W");
  VacuumReport rep;
  const SiteList chain(length, model.space());
  const std::size_t n = chain_dim(chain);
  std::vector<std::size_t> inside;
  for (std::size_t x = 0; x < n; ++x) {
    const auto d = chain_digits(chain, x);
    if (std::all_of(d.begin(), d.end(), [&](std::size_t i) { return model.in_n(i); })) inside.push_back(x);
  }
  const Matrix t = transfer_xx(model, lambda, length).matrix;
  const Matrix t0 = transfer_xx(model, 0.0, length).matrix;
  const Matrix h = hamiltonian_xx(model, length).matrix;
  const auto k = static_cast<Eigen::Index>(inside.size());
  Matrix tw(k, k), sw(k, k);
  double leak = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto xc = static_cast<Eigen::Index>(inside[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto xr = static_cast<Eigen::Index>(inside[static_cast<std::size_t>(r)]);
      tw(r, c) = t(xr, xc);
      sw(r, c) = t0(xr, xc);
    }
    leak = std::max(leak, std::abs(t.col(xc).squaredNorm() - tw.col(c).squaredNorm()));
    rep.hamiltonian_residual = std::max(rep.hamiltonian_residual, h.col(xc).norm());
  }
  const double cl = std::pow(std::cos(lambda), static_cast<double>(length));
  const double sl = std::pow(std::sin(lambda), static_cast<double>(length));
  const Matrix rest = tw - cl * sw;
  rep.sin_coefficient = rest.trace() / (static_cast<double>(k) * sl);
  rep.transfer_residual =
      frobenius_per_side(rest - sl * rep.sin_coefficient * Matrix::Identity(k, k)) + std::sqrt(leak);

  // Ω_a with [a] = [1]; for an odd a the cyclic shift carries (-1)^{L-1}.
  const std::size_t v = model.unbarred_indices().front();
  Vector omega1 = Vector::Zero(static_cast<Eigen::Index>(n));
  omega1(static_cast<Eigen::Index>(excitation_index(model, length, {}))) = 1.0;
  for (std::size_t a : model.unbarred_indices()) {
    if (model.space().grade(a) != model.space().grade(v)) continue;
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t x = 0; x < length; ++x) all.emplace_back(x, a);
    Vector oa = Vector::Zero(static_cast<Eigen::Index>(n));
    oa(static_cast<Eigen::Index>(excitation_index(model, length, all))) = 1.0;
    const double sgn = (model.space().grade(a) == 1 && length % 2 == 0) ? -1.0 : 1.0;
    rep.impulsion_residual = std::max(rep.impulsion_residual, (t0 * oa - sgn * oa).norm());
    if (a == v) continue;
    const Matrix low = global_one_site(elementary(model.dim(), a, v), chain);
    Vector w = omega1;
    for (std::size_t s = 0; s < length; ++s) w = low * w;
    const double nw = w.norm();
    if (nw == 0.0) {
      rep.lowering_residual = std::max(rep.lowering_residual, 1.0);
      continue;
    }
    const cplx overlap = oa.dot(w) / nw;
    rep.lowering_residual = std::max(rep.lowering_residual, (w / nw - overlap * oa).norm());
  }
  return rep;
}

Matrix smatrix_xx(const SmallChain& sc, double p1, double p2) {
  const Matrix po = small_projector(sc, false);
  const Matrix pb = small_projector(sc, true);
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const cplx i(0.0, 1.0);
  return std::exp(-i * p1) * kron2(sc, po, pb) + std::exp(i * p2) * kron2(sc, pb, po) -
         perm * (kron2(sc, po, po) + kron2(sc, pb, pb));
}

double SMatrixReport::max() const { return std::max({unitarity, ybe, braided_ybe, braided_unitarity}); }

SMatrixReport smatrix_identities(const XXModel& model, std::size_t samples, std::uint64_t seed) {
  const SmallChain sc = small_chain(model);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const SiteList three(3, sc.space);
  const auto id2 = Matrix::Identity(perm.rows(), perm.cols());
  SMatrixReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    const double p1 = u(rng), p2 = u(rng), p3 = u(rng);
    const Matrix s12 = smatrix_xx(sc, p1, p2), s21 = perm * smatrix_xx(sc, p2, p1) * perm;
    rep.unitarity = std::max(rep.unitarity, frobenius_per_side(s12 * s21 - id2));
    auto on = [&](const Matrix& m, std::size_t a, std::size_t b) { return embed(m, {a, b}, three); };
    const Matrix lhs = on(smatrix_xx(sc, p1, p2), 0, 1) * on(smatrix_xx(sc, p1, p3), 0, 2) *
                       on(smatrix_xx(sc, p2, p3), 1, 2);
    const Matrix rhs = on(smatrix_xx(sc, p2, p3), 1, 2) * on(smatrix_xx(sc, p1, p3), 0, 2) *
                       on(smatrix_xx(sc, p1, p2), 0, 1);
    rep.ybe = std::max(rep.ybe, frobenius_per_side(lhs - rhs));
    auto br = [&](double a, double b) { return Matrix(perm * smatrix_xx(sc, a, b)); };
    const Matrix blhs = on(br(p1, p2), 1, 2) * on(br(p1, p3), 0, 1) * on(br(p2, p3), 1, 2);
    const Matrix brhs = on(br(p2, p3), 0, 1) * on(br(p1, p3), 1, 2) * on(br(p1, p2), 0, 1);
    rep.braided_ybe = std::max(rep.braided_ybe, frobenius_per_side(blhs - brhs));
    rep.braided_unitarity = std::max(rep.braided_unitarity, frobenius_per_side(br(p1, p2) * br(p2, p1) - id2));
  }
  return rep;
}

Vector build_phi1(const XXModel& model, std::size_t length, std::size_t label, double p) {
  const SmallChain sc = small_chain(model);
  if (label >= sc.dim()) throw std::out_of_range("excitation label out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(chain_dim(SiteList(length, model.space()))));
  for (std::size_t x = 1; x <= length; ++x) {
    v(static_cast<Eigen::Index>(excitation_index(model, length, {{x - 1, sc.to_big[label]}}))) +=
        std::exp(cplx(0.0, p * static_cast<double>(x)));
  }
  return v;
}

Vector build_phi2(const XXModel& model, std::size_t length, const Vector& xi, double p1, double p2) {
  const SmallChain sc = small_chain(model);
  const std::size_t s = sc.dim();
  if (static_cast<std::size_t>(xi.size()) != s * s) throw std::invalid_argument("small-chain vector has wrong size");
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const Vector swapped = perm * smatrix_xx(sc, p1, p2) * xi;
  Vector v = Vector::Zero(static_cast<Eigen::Index>(chain_dim(SiteList(length, model.space()))));
  for (std::size_t x1 = 1; x1 <= length; ++x1) {
    for (std::size_t x2 = x1 + 1; x2 <= length; ++x2) {
      const double a1 = static_cast<double>(x1), a2 = static_cast<double>(x2);
      const cplx direct = std::exp(cplx(0.0, p1 * a1 + p2 * a2));
      const cplx exchanged = std::exp(cplx(0.0, p2 * a1 + p1 * a2));
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          const auto ij = static_cast<Eigen::Index>(i * s + j);
          const cplx amp = direct * xi(ij) + exchanged * swapped(ij);
          if (amp == cplx(0.0)) continue;
          v(static_cast<Eigen::Index>(excitation_index(model, length, {{x1 - 1, sc.to_big[i]}, {x2 - 1, sc.to_big[j]}}))) +=
              amp;
        }
      }
    }
  }
  return v;
}

EigenCheck check_eigenstate(const XXModel& model, std::size_t length, const Vector& state, double total_momentum,
                            double energy) {
  EigenCheck c;
  c.norm = state.norm();
  if (c.norm == 0.0) throw std::invalid_argument("state vanishes");
  const Vector u = state / c.norm;
  c.shift_eigenvalue = std::exp(cplx(0.0, total_momentum));
  c.energy = energy;
  const Matrix t0 = transfer_xx(model, 0.0, length).matrix;
  c.shift_residual = (t0 * u - c.shift_eigenvalue * u).norm();
  const SparseMatrix h = [&] {
    SparseMatrix acc(u.size(), u.size());
    for (const auto& term : hamiltonian_terms_xx(model, length)) acc += term.sparse();
    return acc;
  }();
  c.energy_residual = (h * u - energy * u).norm();
  return c;
}

void validate(const ExcitationSpec& spec, const SmallChain& sc) {
  if (spec.m_unbarred() + spec.m_barred() > spec.length) {
    throw std::invalid_argument("excitation count exceeds chain length");
  }
  for (std::size_t j : spec.unbarred_labels) {
    if (j >= sc.unbarred) throw std::out_of_range("unbarred label outside [1, r-1]");
  }
  for (std::size_t j : spec.barred_labels) {
    if (j < sc.unbarred || j >= sc.dim()) throw std::out_of_range("barred label outside [r, s-1]");
  }
}

double BAERootSet::energy() const {
  double e = 0.0;
  for (double x : qbar) e += 2.0 * std::cos(x);
  return e;
}

double BAERootSet::momentum() const {
  double m = 0.0;
  for (double x : q) m += x;
  for (double x : qbar) m += x;
  return wrap_angle(m);
}

std::vector<cplx> cyclic_shift_eigenvalues(const SmallChain& sc, const std::vector<std::size_t>& labels) {
  const std::size_t m = labels.size();
  if (m <= 1) return {cplx(1.0)};
  const SiteList chain(m, sc.space);
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  Matrix c = Matrix::Identity(static_cast<Eigen::Index>(chain_dim(chain)), static_cast<Eigen::Index>(chain_dim(chain)));
  for (std::size_t k = 1; k < m; ++k) c = c * embed(perm, {0, k}, chain);
  std::vector<std::size_t> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> states;
  for (std::size_t x = 0; x < chain_dim(chain); ++x) {
    auto d = chain_digits(chain, x);
    std::sort(d.begin(), d.end());
    if (d == sorted) states.push_back(x);
  }
  const auto k = static_cast<Eigen::Index>(states.size());
  Matrix block(k, k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index col = 0; col < k; ++col)
      block(r, col) = c(static_cast<Eigen::Index>(states[static_cast<std::size_t>(r)]),
                        static_cast<Eigen::Index>(states[static_cast<std::size_t>(col)]));
  Eigen::ComplexEigenSolver<Matrix> es(block);
  std::vector<cplx> out;
  for (Eigen::Index r = 0; r < k; ++r) {
    const cplx e = es.eigenvalues()(r);
    if (std::none_of(out.begin(), out.end(), [&](cplx o) { return std::abs(o - e) < 1e-8; })) out.push_back(e);
  }
  return out;
}

std::vector<BAERootSet> solve_bae_xx(const XXModel& model, const ExcitationSpec& spec) {
  const SmallChain sc = small_chain(model);
  validate(spec, sc);
  const std::size_t m1 = spec.m_unbarred(), m2 = spec.m_barred(), len = spec.length;
  std::vector<BAERootSet> out;
  for (cplx k1 : cyclic_shift_eigenvalues(sc, spec.unbarred_labels)) {
    std::vector<std::vector<int>> qsets;
    std::vector<double> qroots;
    if (m1 == 0) {
      qsets.push_back({});
    } else {
      qroots = phase_roots(sign_pow(m1) * k1, len - m2);
      std::vector<int> cur;
      combinations(qroots.size(), m1, cur, qsets);
    }
    for (const auto& qs : qsets) {
      double qsum = 0.0;
      for (int idx : qs) qsum += qroots[static_cast<std::size_t>(idx)];
      for (cplx k2 : cyclic_shift_eigenvalues(sc, spec.barred_labels)) {
        std::vector<std::vector<int>> bsets;
        std::vector<double> broots;
        if (m2 == 0) {
          bsets.push_back({});
        } else {
          broots = phase_roots(sign_pow(m2) * k2 * std::exp(cplx(0.0, -qsum)), len);
          std::vector<int> cur;
          combinations(broots.size(), m2, cur, bsets);
        }
        for (const auto& bs : bsets) {
          BAERootSet r;
          r.kappa_unbarred = k1;
          r.kappa_barred = k2;
          for (int idx : qs) {
            r.q.push_back(qroots[static_cast<std::size_t>(idx)]);
            r.branch_q.push_back(idx);
          }
          for (int idx : bs) {
            r.qbar.push_back(broots[static_cast<std::size_t>(idx)]);
            r.branch_qbar.push_back(idx);
          }
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

double bae_residual(const ExcitationSpec& spec, const BAERootSet& roots) {
  const double m2 = static_cast<double>(roots.qbar.size());
  const double len = static_cast<double>(spec.length);
  double qsum = 0.0, worst = 0.0;
  for (double q : roots.q) {
    qsum += q;
    worst = std::max(worst, std::abs(std::exp(cplx(0.0, q * (len - m2))) - sign_pow(roots.q.size()) * roots.kappa_unbarred));
  }
  for (double q : roots.qbar) {
    const cplx rhs = sign_pow(roots.qbar.size()) * roots.kappa_barred * std::exp(cplx(0.0, -qsum));
    worst = std::max(worst, std::abs(std::exp(cplx(0.0, q * len)) - rhs));
  }
  return worst;
}

double bae_product_residual(const ExcitationSpec& spec, const BAERootSet& roots) {
  double total = 0.0;
  for (double q : roots.q) total += q;
  for (double q : roots.qbar) total += q;
  return std::abs(std::exp(cplx(0.0, total * static_cast<double>(spec.length))) - 1.0);
}

Matrix telescoped_product(const SmallChain& sc, const std::vector<double>& p, std::size_t j) {
  const std::size_t m = p.size();
  if (j >= m) throw std::out_of_range("slot index out of range");
  const SiteList chain(m, sc.space);
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  Matrix out = Matrix::Identity(n, n);
  for (std::size_t s = 1; s < m; ++s) {
    const std::size_t k = (j + s) % m;
    out = out * embed(smatrix_xx(sc, p[k], p[j]), {k, j}, chain);
  }
  return out;
}

Matrix partition_formula(const SmallChain& sc, const std::vector<double>& p, std::size_t j) {
  const std::size_t m = p.size();
  if (j >= m) throw std::out_of_range("slot index out of range");
  const SiteList chain(m, sc.space);
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const Matrix po = small_projector(sc, false), pb = small_projector(sc, true);
  std::vector<std::size_t> others;  // in ≺ order
  for (std::size_t s = 1; s < m; ++s) others.push_back((j + s) % m);
  Matrix out = Matrix::Zero(n, n);
  const std::size_t subsets = std::size_t{1} << others.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    Matrix cyc = Matrix::Identity(n, n);
    std::vector<std::size_t> in_j, in_k;
    for (std::size_t b = 0; b < others.size(); ++b) {
      if (mask & (std::size_t{1} << b)) {
        in_j.push_back(others[b]);
        cyc = cyc * embed(perm, {j, others[b]}, chain);
      } else {
        in_k.push_back(others[b]);
      }
    }
    Matrix first = embed(po, {j}, chain), second = embed(pb, {j}, chain);
    for (std::size_t a : in_j) {
      first = first * embed(po, {a}, chain);
      second = second * embed(pb, {a}, chain);
    }
    double psum = 0.0;
    for (std::size_t a : in_k) {
      first = first * embed(pb, {a}, chain);
      second = second * embed(po, {a}, chain);
      psum += p[a];
    }
    const double sgn = (in_j.size() % 2 == 0) ? 1.0 : -1.0;
    const cplx e1 = std::exp(cplx(0.0, static_cast<double>(in_k.size()) * p[j]));
    const cplx e2 = std::exp(cplx(0.0, -psum));
    out += sgn * cyc * (e1 * first + e2 * second);
  }
  return out;
}

double product_formula_check(const XXModel& model, const std::vector<double>& p) {
  const SmallChain sc = small_chain(model);
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    worst = std::max(worst, frobenius_per_side(telescoped_product(sc, p, j) - partition_formula(sc, p, j)));
  }
  return worst;
}

BaeEdReport bae_vs_ed(const XXModel& model, std::size_t length, double tol) {
  const SmallChain sc = small_chain(model);
  const SiteList chain(length, model.space());
  const auto sectors = charge_sectors(chain, xx_site_charges(model));
  const auto terms = hamiltonian_terms_xx(model, length);
  BaeEdReport rep;
  for (const auto& [charge, states] : sectors) {
    ++rep.sectors;
    const Eigen::VectorXd vals = eigh(restrict_terms(terms, states)).values;
    const auto ed = distinct(std::vector<double>(vals.data(), vals.data() + vals.size()), 1e-8);
    rep.ed_levels += ed.size();
    ExcitationSpec spec;
    spec.length = length;
    for (std::size_t j = 0; j < sc.dim(); ++j) {
      const int count = charge[sc.to_big[j]];
      for (int c = 0; c < count; ++c) (sc.is_barred(j) ? spec.barred_labels : spec.unbarred_labels).push_back(j);
    }
    std::vector<double> predicted;
    for (const auto& r : solve_bae_xx(model, spec)) predicted.push_back(r.energy());
    predicted = distinct(predicted, 1e-8);
    rep.predicted_levels += predicted.size();
    for (double e : predicted) {
      double best = 1e300;
      for (double x : ed) best = std::min(best, std::abs(x - e));
      rep.worst_match = std::max(rep.worst_match, best);
      if (best > tol) ++rep.missing;
    }
  }
  return rep;
}

}  // namespace unihub
