#include "unihub/hubbard_bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
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

struct SmallProjectors {
  Matrix po_up, pb_up, po_dn, pb_dn;
};

SmallProjectors small_projectors(const HubbardSmallChain& sc) {
  const auto d = static_cast<Eigen::Index>(sc.dim());
  SmallProjectors p{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (std::size_t j = 0; j < sc.dim(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    switch (sc.type(j)) {
      case ExcitationType::unbarred_up: p.po_up(k, k) = 1.0; break;
      case ExcitationType::barred_up: p.pb_up(k, k) = 1.0; break;
      case ExcitationType::unbarred_down: p.po_dn(k, k) = 1.0; break;
      case ExcitationType::barred_down: p.pb_dn(k, k) = 1.0; break;
    }
  }
  return p;
}

Matrix kron2(const GradedSpace& s, const Matrix& a, const Matrix& b) {
  return graded_kron(ChainOperator({s}, a), ChainOperator({s}, b)).matrix;
}

std::size_t chain_index(const HubbardModel& m, const std::vector<std::size_t>& digits) {
  std::size_t x = 0;
  for (std::size_t d : digits) x = x * m.dim() + d;
  return x;
}

SparseMatrix global_sparse(const Matrix& g, const SiteList& chain) {
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  SparseMatrix acc(n, n);
  for (std::size_t j = 0; j < chain.size(); ++j) acc += embed_sparse(g, {j}, chain);
  return acc;
}

Matrix restrict(const Matrix& a, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index r = 0; r < k; ++r)
      out(r, c) = a(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
  return out;
}

// Norm of the part of the columns idx of a that leaves span(idx).
double leakage(const Matrix& a, const std::vector<std::size_t>& idx) {
  double worst = 0.0;
  const Matrix inside = restrict(a, idx);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const double full = a.col(static_cast<Eigen::Index>(idx[c])).squaredNorm();
    worst = std::max(worst, std::sqrt(std::max(0.0, full - inside.col(static_cast<Eigen::Index>(c)).squaredNorm())));
  }
  return worst;
}

std::string ket(const HubbardSmallChain& sc, std::size_t i, std::size_t j) {
  auto name = [&](std::size_t k) {
    std::ostringstream os;
    os << (sc.is_barred(k) ? "bar" : "") << k << (sc.is_up(k) ? "up" : "dn");
    return os.str();
  };
  return "|" + name(i) + ";" + name(j) + ">";
}

std::string describe(const HubbardSmallChain& sc, const Vector& v) {
  std::ostringstream os;
  const std::size_t s = sc.dim();
  bool first = true;
  for (std::size_t k = 0; k < s * s; ++k) {
    const cplx c = v(static_cast<Eigen::Index>(k));
    if (std::abs(c) < 1e-12) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)" << ket(sc, k / s, k % s);
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

std::string to_string(ExcitationType t) {
  switch (t) {
    case ExcitationType::unbarred_up: return "unbarred-up";
    case ExcitationType::barred_up: return "barred-up";
    case ExcitationType::unbarred_down: return "unbarred-down";
    case ExcitationType::barred_down: return "barred-down";
  }
  return "?";
}

ExcitationType HubbardSmallChain::type(std::size_t j) const {
  if (j >= dim()) throw std::out_of_range("excitation label out of range");
  if (is_up(j)) return up.is_barred(j) ? ExcitationType::barred_up : ExcitationType::unbarred_up;
  return down.is_barred(j - up.dim()) ? ExcitationType::barred_down : ExcitationType::unbarred_down;
}

bool HubbardSmallChain::is_barred(std::size_t j) const {
  const auto t = type(j);
  return t == ExcitationType::barred_up || t == ExcitationType::barred_down;
}

HubbardSmallChain hubbard_small_chain(const HubbardModel& m) {
  HubbardSmallChain sc{small_chain(m.up), small_chain(m.down), GradedSpace{}};
  std::vector<int> g = sc.up.space.grades;
  g.insert(g.end(), sc.down.space.grades.begin(), sc.down.space.grades.end());
  sc.space = GradedSpace(std::move(g));
  return sc;
}

std::size_t hubbard_vacuum_state(const HubbardModel& m) {
  return m.up.unbarred_indices().front() * m.down.dim() + m.down.unbarred_indices().front();
}

std::size_t hubbard_site_state(const HubbardModel& m, const HubbardSmallChain& sc, std::size_t label) {
  std::size_t a = sc.up.vacuum, b = sc.down.vacuum;
  if (label >= sc.dim()) throw std::out_of_range("excitation label out of range");
  if (sc.is_up(label)) {
    a = sc.up.to_big[label];
  } else {
    b = sc.down.to_big[label - sc.up.dim()];
  }
  return a * m.down.dim() + b;
}

double barred_sdim(const XXModel& model) {
  double s = 0.0;
  for (std::size_t b : model.barred_indices()) s += model.space().grade(b) ? -1.0 : 1.0;
  return s;
}

cplx vacuum_sector_eigenvalue(const HubbardModel& m, std::size_t length, cplx shift_up, cplx shift_down,
                              double lambda) {
  const double l = static_cast<double>(length);
  const double cl = std::pow(std::cos(lambda), l), sl = std::pow(std::sin(lambda), l);
  const double pre = std::pow(1.0 + std::tanh(h_of_lambda(lambda, m.U)), l);
  return pre * (cl * shift_up + sl * barred_sdim(m.up)) * (cl * shift_down + sl * barred_sdim(m.down));
}

cplx vacuum_sector_eigenvalue_exact(const HubbardModel& m, std::size_t length, cplx shift_up, cplx shift_down,
                                    double lambda) {
  const double l = static_cast<double>(length);
  const double cl = std::pow(std::cos(lambda), l), sl = std::pow(std::sin(lambda), l);
  const double th = std::tanh(h_of_lambda(lambda, m.U));
  const cplx au = cl * shift_up, ad = cl * shift_down;
  const double bu = sl * barred_sdim(m.up), bd = sl * barred_sdim(m.down);
  return std::pow(1.0 + th, l) * (au * ad + bu * bd) + std::pow(1.0 - th, l) * (au * bd + bu * ad);
}

double VacuumSectorReport::max() const { return std::max({eigenvalue, energy, momentum}); }

VacuumSectorReport vacuum_sector_check(const HubbardModel& m, std::size_t length, double lambda) {
  if (m.up.rank() == 0 || m.down.rank() == 0) throw std::invalid_argument("rank of pi is 0: no pseudo-vacuum");
  VacuumSectorReport rep;
  const SiteList chain(length, m.site());
  SiteList factors;
  std::vector<std::size_t> up_pos, dn_pos;
  for (std::size_t x = 0; x < length; ++x) {
    up_pos.push_back(factors.size());
    factors.push_back(m.up.space());
    dn_pos.push_back(factors.size());
    factors.push_back(m.down.space());
  }
  std::vector<std::size_t> inside;
  for (std::size_t x = 0; x < chain_dim(chain); ++x) {
    const auto d = chain_digits(factors, x);
    bool ok = true;
    for (std::size_t k = 0; k < length; ++k) ok = ok && m.up.in_n(d[2 * k]) && m.down.in_n(d[2 * k + 1]);
    if (ok) inside.push_back(x);
  }
  rep.states = inside.size();
  const Matrix t = transfer_hubbard(m, lambda, length).matrix;
  const Matrix t0 = transfer_hubbard(m, 0.0, length).matrix;
  const Matrix tu = embed(transfer_xx(m.up, lambda, length).matrix, up_pos, factors);
  const Matrix td = embed(transfer_xx(m.down, lambda, length).matrix, dn_pos, factors);
  const Matrix tu0 = embed(transfer_xx(m.up, 0.0, length).matrix, up_pos, factors);
  const Matrix td0 = embed(transfer_xx(m.down, 0.0, length).matrix, dn_pos, factors);
  const Matrix h = hamiltonian_hubbard(m, length).matrix;
  const double pre = std::pow(1.0 + std::tanh(h_of_lambda(lambda, m.U)), static_cast<double>(length));
  const Matrix tw = restrict(t, inside);
  rep.factorization = frobenius_per_side(tw - pre * restrict(Matrix(tu * td), inside)) + leakage(t, inside);

  const Matrix a = restrict(tu0, inside), b = restrict(td0, inside);
  const Matrix t0w = restrict(t0, inside), hw = restrict(h, inside);
  Eigen::ComplexEigenSolver<Matrix> es(a + 0.6180339887 * b);
  const double ul = m.U * static_cast<double>(length);
  const double leak = std::max(leakage(t0, inside), leakage(h, inside));
  for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
    const Vector v = es.eigenvectors().col(k).normalized();
    const cplx ea = v.dot(a * v), eb = v.dot(b * v);
    const cplx e = vacuum_sector_eigenvalue_exact(m, length, ea, eb, lambda);
    const cplx factorized = vacuum_sector_eigenvalue(m, length, ea, eb, lambda);
    rep.eigenvalue = std::max(rep.eigenvalue, (tw * v - e * v).norm());
    rep.factorized_eigenvalue = std::max(rep.factorized_eigenvalue, (tw * v - factorized * v).norm());
    rep.momentum = std::max(rep.momentum, (t0w * v - ea * eb * v).norm());
    rep.energy = std::max(rep.energy, (hw * v - ul * v).norm());
  }
  rep.eigenvalue += leakage(t, inside);
  rep.momentum += leak;
  rep.energy += leak;
  return rep;
}

SparseMatrix shift_hubbard(const HubbardModel& m, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteList chain(length, m.site());
  const Matrix p = composite_permutation(m);
  const auto n = static_cast<Eigen::Index>(chain_dim(chain));
  SparseMatrix s(n, n);
  s.setIdentity();
  for (std::size_t j = length - 1; j > 0; --j) s = SparseMatrix(s * embed_sparse(p, {j - 1, j}, chain));
  return s;
}

SparseMatrix sparse_hamiltonian_hubbard(const HubbardModel& m, std::size_t length) {
  const auto n = static_cast<Eigen::Index>(chain_dim(SiteList(length, m.site())));
  SparseMatrix h(n, n);
  for (const auto& term : hamiltonian_terms_hubbard(m, length)) h += term.sparse();
  return h;
}

Vector build_phi1_hubbard(const HubbardModel& m, std::size_t length, std::size_t label, double p) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  const std::size_t site = hubbard_site_state(m, sc, label), vac = hubbard_vacuum_state(m);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(chain_dim(SiteList(length, m.site()))));
  for (std::size_t x = 1; x <= length; ++x) {
    std::vector<std::size_t> digits(length, vac);
    digits[x - 1] = site;
    v(static_cast<Eigen::Index>(chain_index(m, digits))) += std::exp(cplx(0.0, p * static_cast<double>(x)));
  }
  return v;
}

EigenResidual check_eigenstate_hubbard(const HubbardModel& m, std::size_t length, const Vector& state,
                                       double total_momentum, double energy) {
  EigenResidual r;
  r.norm = state.norm();
  if (r.norm == 0.0) throw std::invalid_argument("state vanishes");
  const Vector u = state / r.norm;
  const Vector shifted = shift_hubbard(m, length) * u;
  r.shift = (shifted - std::exp(cplx(0.0, total_momentum)) * u).norm();
  const Vector hu = sparse_hamiltonian_hubbard(m, length) * u;
  r.energy = (hu - energy * u).norm();
  return r;
}

OneExcitationReport one_excitation_hubbard(const HubbardModel& m, std::size_t length, std::size_t label, double p) {
  if (std::abs(std::exp(cplx(0.0, p * static_cast<double>(length))) - 1.0) > 1e-9) {
    throw std::invalid_argument("momentum violates e^{ipL} = 1");
  }
  const HubbardSmallChain sc = hubbard_small_chain(m);
  OneExcitationReport rep;
  rep.type = sc.type(label);
  const double l = static_cast<double>(length);
  rep.energy = sc.is_barred(label) ? 2.0 * std::cos(p) + m.U * (l - 2.0) : m.U * l;
  const Vector phi = build_phi1_hubbard(m, length, label, p);
  const auto res = check_eigenstate_hubbard(m, length, phi, p, rep.energy);
  rep.shift_residual = res.shift;
  rep.energy_residual = res.energy;

  const Vector u = phi.normalized();
  const SiteList chain(length, m.site());
  const bool up = sc.is_up(label);
  const std::size_t big = up ? sc.up.to_big[label] : sc.down.to_big[label - sc.up.dim()];
  const Matrix own = up ? lift_up(m, elementary(m.up.dim(), big, big)) : lift_down(m, elementary(m.down.dim(), big, big));
  const Matrix m11u = lift_up(m, elementary(m.up.dim(), sc.up.vacuum, sc.up.vacuum));
  const Matrix m11d = lift_down(m, elementary(m.down.dim(), sc.down.vacuum, sc.down.vacuum));
  auto charge = [&](const Matrix& g, double expected) {
    return (global_sparse(g, chain) * u - expected * u).norm();
  };
  rep.charge_residual = std::max({charge(own, 1.0), charge(m11u, up ? l - 1.0 : l), charge(m11d, up ? l : l - 1.0)});
  return rep;
}

cplx amplitude_t(double p1, double p2, double U) {
  const double u = std::sin(p1) - std::sin(p2);
  const cplx den(u, -2.0 * U);
  if (std::abs(den) == 0.0) throw std::domain_error("T(p1,p2) has a pole: U = 0 and sin p1 = sin p2");
  return u / den;
}

cplx amplitude_r(double p1, double p2, double U) {
  const double u = std::sin(p1) - std::sin(p2);
  const cplx den(u, -2.0 * U);
  if (std::abs(den) == 0.0) throw std::domain_error("R(p1,p2) has a pole: U = 0 and sin p1 = sin p2");
  return cplx(0.0, 2.0 * U) / den;
}

SMatrixParts smatrix_hubbard(const HubbardModel& m, double p1, double p2) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  const auto pr = small_projectors(sc);
  const GradedSpace& s = sc.space;
  const Matrix perm = graded_permutation(s, s).matrix;
  const cplx i(0.0, 1.0);
  auto xx = [&](const Matrix& po, const Matrix& pb) {
    return Matrix(std::exp(-i * p1) * kron2(s, po, pb) + std::exp(i * p2) * kron2(s, pb, po) -
                  perm * (kron2(s, po, po) + kron2(s, pb, pb)));
  };
  SMatrixParts parts;
  parts.t = amplitude_t(p1, p2, m.U);
  parts.r = amplitude_r(p1, p2, m.U);
  parts.x_up = xx(pr.po_up, pr.pb_up);
  parts.x_down = xx(pr.po_dn, pr.pb_dn);
  const Matrix all_dn = pr.po_dn + pr.pb_dn;
  parts.mixed = kron2(s, pr.po_up, all_dn) + kron2(s, all_dn, pr.po_up) + kron2(s, pr.po_dn, pr.pb_up) +
                kron2(s, pr.pb_up, pr.po_dn);
  const auto n = perm.rows();
  parts.heisenberg = (parts.t * Matrix::Identity(n, n) + parts.r * perm) *
                     (kron2(s, pr.pb_up, pr.pb_dn) + kron2(s, pr.pb_dn, pr.pb_up));
  return parts;
}

SMatrixPartsReport smatrix_hubbard_identities(const HubbardModel& m, std::size_t samples, std::uint64_t seed) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  const auto pr = small_projectors(sc);
  const GradedSpace& s = sc.space;
  const Matrix perm = graded_permutation(s, s).matrix;
  const auto n = perm.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix all_up = pr.po_up + pr.pb_up, all_dn = pr.po_dn + pr.pb_dn;
  const Matrix mixed_bar = kron2(s, pr.pb_up, pr.pb_dn) + kron2(s, pr.pb_dn, pr.pb_up);
  const std::vector<Matrix> supports = {
      kron2(s, all_up, all_up), kron2(s, all_dn, all_dn),
      kron2(s, pr.po_up, all_dn) + kron2(s, all_dn, pr.po_up) + kron2(s, pr.po_dn, pr.pb_up) + kron2(s, pr.pb_up, pr.po_dn),
      mixed_bar};
  SMatrixPartsReport rep;
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < supports.size(); ++a) {
    sum += supports[a];
    for (std::size_t b = a + 1; b < supports.size(); ++b)
      rep.disjoint = std::max(rep.disjoint, frobenius_per_side(supports[a] * supports[b]));
  }
  rep.completeness = frobenius_per_side(sum - id);

  const Matrix un = pr.po_up + pr.po_dn;
  const Matrix pi_un = kron2(s, un, un);
  const Matrix s_un = kron2(s, pr.po_up, pr.po_dn) + kron2(s, pr.po_dn, pr.po_up) -
                      perm * (kron2(s, pr.po_up, pr.po_up) + kron2(s, pr.po_dn, pr.po_dn));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (std::size_t k = 0; k < samples; ++k) {
    const double p1 = u(rng), p2 = u(rng);
    const auto parts = smatrix_hubbard(m, p1, p2);
    const Matrix total = parts.total();
    rep.t_minus_r = std::max(rep.t_minus_r, std::abs(parts.t - parts.r - 1.0));
    rep.projection = std::max(rep.projection, frobenius_per_side(supports[0] * total - parts.x_up * supports[0]));
    rep.projection = std::max(rep.projection, frobenius_per_side(supports[1] * total - parts.x_down * supports[1]));
    rep.unbarred = std::max(rep.unbarred, frobenius_per_side(pi_un * total - s_un * pi_un));
    if (m.U != 0.0) {
      const auto same = smatrix_hubbard(m, p1, p1);
      rep.coincident = std::max(rep.coincident, frobenius_per_side(same.heisenberg + perm * mixed_bar));
    }
  }
  if (m.U != 0.0) {
    for (int a = 0; a <= 60; ++a)
      for (int b = 0; b <= 60; ++b) {
        const double p1 = -kPi + 2.0 * kPi * a / 60.0, p2 = -kPi + 2.0 * kPi * b / 60.0;
        rep.t_modulus = std::max(rep.t_modulus, std::abs(amplitude_t(p1, p2, m.U)));
      }
  }
  return rep;
}

double xxx_oracle_residual(const HubbardModel& m, double p1, double p2) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  std::vector<std::size_t> bu, bd;
  for (std::size_t j = 0; j < sc.dim(); ++j) {
    if (sc.type(j) == ExcitationType::barred_up) bu.push_back(j);
    if (sc.type(j) == ExcitationType::barred_down) bd.push_back(j);
  }
  if (bu.size() != 1 || bd.size() != 1) throw std::invalid_argument("oracle needs one barred flavor per spin");
  const std::size_t s = sc.dim();
  const auto ia = static_cast<Eigen::Index>(bu[0] * s + bd[0]), ib = static_cast<Eigen::Index>(bd[0] * s + bu[0]);
  const Matrix sh = smatrix_hubbard(m, p1, p2).heisenberg;
  Matrix block(2, 2);
  block << sh(ia, ia), sh(ia, ib), sh(ib, ia), sh(ib, ib);

  // Rational XXX matrix on C^2 ⊗ C^2 with spin up = 0, down = 1.
  const double u = std::sin(p1) - std::sin(p2);
  Matrix swap = Matrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) swap(b * 2 + a, a * 2 + b) = 1.0;
  const Matrix xxx = (u * Matrix::Identity(4, 4) + cplx(0.0, 2.0 * m.U) * swap) / cplx(u, -2.0 * m.U);
  Matrix oracle(2, 2);
  oracle << xxx(1, 1), xxx(1, 2), xxx(2, 1), xxx(2, 2);
  return (block - oracle).norm();
}

Vector build_phi2_hubbard(const HubbardModel& m, std::size_t length, const Vector& xi, double p1, double p2) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  const std::size_t s = sc.dim();
  if (static_cast<std::size_t>(xi.size()) != s * s) throw std::invalid_argument("small-chain vector has wrong size");
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const Vector swapped = perm * smatrix_hubbard(m, p1, p2).total() * xi;
  const std::size_t vac = hubbard_vacuum_state(m);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(chain_dim(SiteList(length, m.site()))));
  for (std::size_t x1 = 1; x1 <= length; ++x1) {
    for (std::size_t x2 = x1; x2 <= length; ++x2) {
      const double a1 = static_cast<double>(x1), a2 = static_cast<double>(x2);
      const cplx direct = std::exp(cplx(0.0, p1 * a1 + p2 * a2));
      const cplx exchanged = std::exp(cplx(0.0, p2 * a1 + p1 * a2));
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
          const auto ij = static_cast<Eigen::Index>(i * s + j);
          cplx amp = direct * xi(ij) + exchanged * swapped(ij);
          if (amp == cplx(0.0)) continue;
          std::vector<std::size_t> digits(length, vac);
          if (x1 < x2) {
            digits[x1 - 1] = hubbard_site_state(m, sc, i);
            digits[x2 - 1] = hubbard_site_state(m, sc, j);
          } else {
            if (sc.is_up(i) == sc.is_up(j)) continue;
            const std::size_t iu = sc.is_up(i) ? i : j, id = sc.is_up(i) ? j : i;
            digits[x1 - 1] = sc.up.to_big[iu] * m.down.dim() + sc.down.to_big[id - sc.up.dim()];
            amp *= 0.5;
            if (!sc.is_up(i) && sc.space.grade(i) && sc.space.grade(j)) amp = -amp;
          }
          v(static_cast<Eigen::Index>(chain_index(m, digits))) += amp;
        }
      }
    }
  }
  return v;
}

std::vector<PairSolution> solve_barred_pair(const HubbardModel& m, std::size_t length) {
  if (m.U == 0.0) throw std::invalid_argument("barred pair quantization needs U != 0");
  const HubbardSmallChain sc = hubbard_small_chain(m);
  std::size_t a = sc.dim(), b = sc.dim();
  for (std::size_t j = 0; j < sc.dim(); ++j) {
    if (sc.type(j) == ExcitationType::barred_up && a == sc.dim()) a = j;
    if (sc.type(j) == ExcitationType::barred_down && b == sc.dim()) b = j;
  }
  if (a == sc.dim() || b == sc.dim()) throw std::invalid_argument("model has no barred excitation for one spin");
  const std::size_t s = sc.dim();
  const double sgn = (sc.space.grade(a) && sc.space.grade(b)) ? -1.0 : 1.0;
  const double l = static_cast<double>(length);
  std::vector<PairSolution> out;
  for (int k = 0; k < static_cast<int>(length); ++k) {
    const double total = 2.0 * kPi * k / l;
    // L p2 - arg σ(p1, p2), continuous in p1, must hit a multiple of 2π.
    auto g = [&](double p1) {
      const double p2 = total - p1;
      return l * p2 - 2.0 * std::atan2(2.0 * m.U, std::sin(p1) - std::sin(p2));
    };
    const int grid = 4000;
    for (int step = 0; step < grid; ++step) {
      double lo = -kPi + 2.0 * kPi * step / grid, hi = -kPi + 2.0 * kPi * (step + 1) / grid;
      const double glo = g(lo), ghi = g(hi);
      const double nlo = std::floor(glo / (2.0 * kPi)), nhi = std::floor(ghi / (2.0 * kPi));
      if (nlo == nhi) continue;
      const double target = 2.0 * kPi * std::max(nlo, nhi);
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) - target) * (glo - target) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double p1 = wrap_angle(0.5 * (lo + hi)), p2 = wrap_angle(total - p1);
      if (std::abs(std::sin(0.5 * (p1 - p2))) < 1e-7 || p1 > p2) continue;
      PairSolution sol;
      sol.p1 = p1;
      sol.p2 = p2;
      sol.total_k = k;
      sol.xi = Vector::Zero(static_cast<Eigen::Index>(s * s));
      sol.xi(static_cast<Eigen::Index>(a * s + b)) = 1.0;
      sol.xi(static_cast<Eigen::Index>(b * s + a)) = sgn;
      sol.energy = 2.0 * std::cos(p1) + 2.0 * std::cos(p2) + m.U * (l - 4.0);
      const cplx sigma = amplitude_t(p1, p2, m.U) + amplitude_r(p1, p2, m.U);
      sol.condition = std::abs(std::exp(cplx(0.0, p1 * l)) * sigma - 1.0) + std::abs(std::exp(cplx(0.0, p2 * l)) - sigma);
      out.push_back(std::move(sol));
    }
  }
  return out;
}

TwoExcitationReport two_excitation_hubbard(const HubbardModel& m, std::size_t length, const PairSolution& sol) {
  TwoExcitationReport rep;
  rep.condition = sol.condition;
  const Vector phi = build_phi2_hubbard(m, length, sol.xi, sol.p1, sol.p2);
  rep.residual = check_eigenstate_hubbard(m, length, phi, sol.p1 + sol.p2, sol.energy);
  return rep;
}

namespace {

UnbarredFamily unbarred_family(const SmallChain& sc, std::size_t length, std::size_t count, const char* spin) {
  UnbarredFamily f;
  f.count = count;
  if (count == 0) return f;
  if (sc.unbarred == 0) throw std::invalid_argument(std::string("no unbarred excitation of type ") + spin);
  const double l = static_cast<double>(length), mm = static_cast<double>(count);
  const double sign = (count % 2 == 1) ? 1.0 : -1.0;
  for (std::size_t n = 1; n <= count; ++n) {
    const cplx rhs = sign * std::exp(cplx(0.0, 2.0 * kPi * static_cast<double>(n) / mm));
    std::vector<double> roots;
    for (std::size_t k = 0; k < length; ++k) {
      const double q = wrap_angle((std::arg(rhs) + 2.0 * kPi * static_cast<double>(k)) / l);
      roots.push_back(q);
      f.residual = std::max(f.residual, std::abs(std::exp(cplx(0.0, q * l)) - rhs));
    }
    std::sort(roots.begin(), roots.end());
    f.q.push_back(std::move(roots));
  }
  return f;
}

// Distance between two sets of angles on the circle (Hausdorff).
double circle_hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  auto one_way = [](const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0.0;
    for (double u : x) {
      double best = 1e300;
      for (double v : y) best = std::min(best, std::abs(wrap_angle(u - v)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1e300;
  return std::max(one_way(a, b), one_way(b, a));
}

void multisets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  const std::size_t start = cur.empty() ? 0 : cur.back();
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    multisets(n, k, cur, out);
    cur.pop_back();
  }
}

double family_vs_xx(const XXModel& model, const UnbarredFamily& f, std::size_t length) {
  if (f.count == 0) return 0.0;
  const SmallChain sc = small_chain(model);
  std::vector<double> hub, xx;
  for (const auto& branch : f.q) hub.insert(hub.end(), branch.begin(), branch.end());
  std::vector<std::vector<std::size_t>> contents;
  std::vector<std::size_t> cur;
  multisets(sc.unbarred, f.count, cur, contents);
  for (const auto& labels : contents) {
    ExcitationSpec spec;
    spec.length = length;
    spec.unbarred_labels = labels;
    for (const auto& roots : solve_bae_xx(model, spec)) xx.insert(xx.end(), roots.q.begin(), roots.q.end());
  }
  return circle_hausdorff(hub, xx);
}

}  // namespace

UnbarredRoots bae_unbarred(const HubbardModel& m, std::size_t length, std::size_t m_up, std::size_t m_down) {
  if (length == 0) throw std::invalid_argument("chain length must be positive");
  const HubbardSmallChain sc = hubbard_small_chain(m);
  return {unbarred_family(sc.up, length, m_up, "up"), unbarred_family(sc.down, length, m_down, "down")};
}

double unbarred_cross_check(const HubbardModel& m, std::size_t length, std::size_t m_up, std::size_t m_down) {
  const auto roots = bae_unbarred(m, length, m_up, m_down);
  return std::max(family_vs_xx(m.up, roots.up, length), family_vs_xx(m.down, roots.down, length));
}

ObstructionReport bar_sector_obstruction(const HubbardModel& m, double p1, double p2) {
  const HubbardSmallChain sc = hubbard_small_chain(m);
  if (m.up.rank_bar() == 0 || m.down.rank_bar() == 0) throw std::invalid_argument("both spins need a barred state");
  ObstructionReport rep;
  rep.obstruction = m.up.rank_bar() > 1 || m.down.rank_bar() > 1;
  const std::size_t s = sc.dim();
  const auto n = static_cast<Eigen::Index>(s * s);
  const Matrix perm = graded_permutation(sc.space, sc.space).matrix;
  const auto parts = smatrix_hubbard(m, p1, p2);
  const Matrix total = parts.total();
  const Matrix at_p = smatrix_hubbard(m, p1, p1).total();

  Matrix same_spin = Matrix::Zero(n, n), mixed_flavor = Matrix::Zero(n, n), opposite = Matrix::Zero(n, n),
         barred = Matrix::Zero(n, n), xxx = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (!sc.is_barred(i) || !sc.is_barred(j)) continue;
      const auto k = static_cast<Eigen::Index>(i * s + j);
      barred(k, k) = 1.0;
      if (sc.is_up(i) == sc.is_up(j)) {
        same_spin(k, k) = 1.0;
        if (i != j) mixed_flavor(k, k) = 1.0;
      } else {
        opposite(k, k) = 1.0;
      }
      if (i == j) {
        xxx.col(k) = -perm.col(k);
      } else {
        xxx.col(k) = parts.r * perm.col(k);
        xxx(k, k) += parts.t;
      }
    }
  }
  const auto n2 = perm.rows();
  rep.pure_swap = ((total + perm) * same_spin).norm();
  rep.xxx_difference = ((total - xxx) * mixed_flavor).norm();
  rep.coincident = ((at_p + perm) * barred).norm();
  rep.mixed_spin = ((total - parts.t * Matrix::Identity(n2, n2) - parts.r * perm) * opposite).norm();

  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (!sc.is_barred(i) || !sc.is_barred(j)) continue;
      const auto k = static_cast<Eigen::Index>(i * s + j);
      rep.table.push_back({ket(sc, i, j), describe(sc, total.col(k)), describe(sc, xxx.col(k))});
    }
  }
  return rep;
}

}  // namespace unihub
