// One PASS/FAIL line per acceptance criterion. Exit status is 1 if any
// criterion fails, unless it is listed with --known-failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "unihub/fock.hpp"
#include "unihub/hubbard_bethe.hpp"
#include "unihub/strong_coupling.hpp"
#include "unihub/twist.hpp"
#include "unihub/xx_bethe.hpp"

using namespace unihub;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // value <= tol
  void at_most(const std::string& what, double value, double tol) {
    const bool ok = value <= tol;
    pass = pass && ok;
    detail << " " << what << "=" << fmt(value) << (ok ? "<=" : ">") << fmt(tol) << ";";
  }
  // value >= bound
  void at_least(const std::string& what, double value, double bound) {
    const bool ok = value >= bound;
    pass = pass && ok;
    detail << " " << what << "=" << fmt(value) << (ok ? ">=" : "<") << fmt(bound) << ";";
  }
  void require(const std::string& what, bool ok) {
    pass = pass && ok;
    detail << " " << what << "=" << (ok ? "yes" : "no") << ";";
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HubbardModel fermionic(double U) { return HubbardModel(XXModel::gl(1, 1, {1}), XXModel::gl(1, 1, {1}), U); }
HubbardModel bosonic(double U) { return HubbardModel(XXModel::gl(2, 0, {1}), XXModel::gl(2, 0, {1}), U); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Σ_j (1 - σ_j·σ_{j+1}) on a periodic ring, from Pauli matrices and plain Kronecker products.
Matrix heisenberg_ring(std::size_t length) {
  Matrix x = Matrix::Zero(2, 2), y = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  y(0, 1) = cplx(0, -1);
  y(1, 0) = cplx(0, 1);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const Eigen::Index n = Eigen::Index(1) << length;
  auto site_op = [&](const Matrix& a, std::size_t j) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < length; ++k) out = kron(out, k == j ? a : Matrix(Matrix::Identity(2, 2)));
    return out;
  };
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < length; ++j) {
    const std::size_t k = (j + 1) % length;
    h += Matrix::Identity(n, n);
    for (const Matrix* s : {&x, &y, &z}) h -= site_op(*s, j) * site_op(*s, k);
  }
  return h;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double nearest(const Eigen::VectorXd& vals, double e) {
  double best = INFINITY;
  for (Eigen::Index k = 0; k < vals.size(); ++k) best = std::min(best, std::abs(vals(k) - e));
  return best;
}

// 1. R-matrix property suite on the XX zoo.
void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool all = true;
  for (const auto& m : xx_zoo()) {
    const auto rep = verify_r_matrix(m, 20, 2024, 1e-12);
    all = all && rep.all_pass() && rep.properties.size() == r_property_names().size();
    for (const auto& [name, r] : rep.properties) worst = std::max(worst, r.value);
  }
  o.require("7 models x 10 properties pass", all && xx_zoo().size() == 7);
  o.at_most("worst residual", worst, 1e-12);
  o.at_most("seconds", seconds_since(t0), 30.0);
}

// 2. Hubbard YBE, its negative control, and the closed-form unitarity scalar.
void criterion2(Outcome& o) {
  double ybe = 0.0, closed = 0.0, forms = 0.0;
  for (double U : {0.5, 2.0, 10.0})
    for (const auto& m : hubbard_zoo(U)) {
      const auto r = verify_hubbard_r(m, 10, 11);
      ybe = std::max(ybe, r.ybe);
      forms = std::max(forms, r.coefficient_forms);
      closed = std::max(closed, r.closed_unitarity);
    }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  double control = INFINITY;
  for (int k = 0; k < 5; ++k) {
    const auto m = bosonic(2.0);
    control = std::min(control, hubbard_ybe_residual(m, u(rng), u(rng), u(rng), HubbardForm::plain,
                                                     [](double l) { return 2.0 * l; }));
  }
  o.at_most("YBE", ybe, 1e-10);
  o.at_least("h=U*lambda control", control, 1e-3);
  o.at_most("closed forms agree", forms, 1e-12);
  o.at_most("R12 R21 vs closed-form scalar", closed, 1e-12);
}

// 3. Transfer commutativity and the ordinary-trace negative control.
void criterion3(Outcome& o) {
  const auto lam = sample_lambdas(2, 99);
  double xx = 0.0, hub = 0.0;
  for (const auto& m : xx_zoo())
    xx = std::max(xx, commutator_norm(transfer_xx(m, lam[0], 4).matrix, transfer_xx(m, lam[1], 4).matrix).value);
  for (const auto& m : hubbard_zoo(2.0)) {
    if (m.dim() > 9) continue;
    hub = std::max(hub, commutator_norm(transfer_hubbard(m, lam[0], 3).matrix, transfer_hubbard(m, lam[1], 3).matrix).value);
  }
  const auto g = XXModel::gl(1, 1, {1});
  const double plain = commutator_norm(transfer_xx(g, lam[0], 4, TraceKind::ordinary).matrix,
                                       transfer_xx(g, lam[1], 4, TraceKind::ordinary).matrix)
                           .value;
  o.at_most("XX L=4", xx, 1e-10);
  o.at_most("Hubbard L=3", hub, 1e-10);
  o.at_least("ordinary-trace gl(1|1) commutator", plain, 1e-3);
}

// 4. Block generators commute, cross-block generators do not.
void criterion4(Outcome& o) {
  double comm = 0.0, cross = INFINITY;
  for (const auto& m : xx_zoo()) {
    const SiteList chain(4, m.space());
    const Matrix h = hamiltonian_xx(m, 4).matrix, t = transfer_xx(m, 0.53, 4).matrix;
    for (const auto& g : symmetry_generators_xx(m)) {
      const Matrix big = global_one_site(g.one_site, chain);
      comm = std::max({comm, commutator_norm(h, big).value, commutator_norm(t, big).value});
    }
    for (const auto& g : cross_block_generators_xx(m))
      cross = std::min(cross, commutator_norm(h, global_one_site(g.one_site, chain)).value);
  }
  for (const auto& m : hubbard_zoo(1.7)) {
    const auto s = symmetry_hubbard(m, 3);
    comm = std::max({comm, s.h_commutator, s.r_commutator, s.c_commutator});
    cross = std::min(cross, s.cross_block_min);
    const SiteList chain(3, m.site());
    const Matrix t = transfer_hubbard(m, 0.53, 3).matrix;
    for (const auto& g : symmetry_generators_hubbard(m)) comm = std::max(comm, commutator_norm(t, global_one_site(g, chain)).value);
  }
  o.at_most("block generators", comm, 1e-12);
  o.at_least("cross-block", cross, 1e-2);
}

// 5. XX Bethe ansatz against exact diagonalization.
void criterion5(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  bool exact = true, one_sided = true;
  double worst = 0.0;
  for (std::size_t L : {4u, 6u}) {
    const auto r = bae_vs_ed(XXModel::gl(2, 0, {1}), L, 1e-10);
    exact = exact && r.exact();
    worst = std::max(worst, r.worst_match);
  }
  for (const auto& m : {XXModel::gl(1, 1, {1}), XXModel::gl(2, 1, {1})}) {
    const auto r = bae_vs_ed(m, 4, 1e-10);
    one_sided = one_sided && r.one_sided();
    worst = std::max(worst, r.worst_match);
  }
  o.require("gl(2) L=4,6 sector sets equal", exact);
  o.require("graded L=4 one-sided", one_sided);
  o.at_most("worst energy match", worst, 1e-10);
  o.at_most("seconds", seconds_since(t0), 60.0);
}

// 6. Hubbard excitation energies in the ED spectrum.
void criterion6(Outcome& o) {
  double worst = 0.0;
  for (double U : {0.7, 1.6, 4.0}) {
    const auto m = bosonic(U);
    const std::size_t L = 4;
    const auto vals = eigh(hamiltonian_hubbard(m, L)).values;
    worst = std::max(worst, nearest(vals, U * L));
    for (std::size_t k = 0; k < L; ++k)
      worst = std::max(worst, nearest(vals, 2.0 * std::cos(2.0 * kPi * k / L) + U * (L - 2.0)));
  }
  o.at_most("distance to ED", worst, 1e-9);
}

// 7. Partition formula against the telescoped product.
void criterion7(Outcome& o) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worst = 0.0;
  for (const auto& m : xx_zoo())
    for (std::size_t count : {2u, 3u})
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> p(count);
        for (double& x : p) x = u(rng);
        worst = std::max(worst, product_formula_check(m, p));
      }
  o.at_most("entrywise", worst, 1e-12);
}

// 8. Strong coupling.
void criterion8(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double three = 0.0;
  for (double U : {2.0, 5.0})
    for (const auto& m : hubbard_zoo(U)) three = std::max(three, three_site_spectrum(m, U).deviation);
  double heis = 0.0;
  for (std::size_t L : {3u, 4u, 5u}) heis = std::max(heis, max_abs(heff2_closed(fermionic(1.0), L) - heisenberg_ring(L)));
  const auto s4 = strong_coupling_vs_ed(fermionic(1.0), 4, {8.0, 16.0});
  const auto s6 = strong_coupling_vs_ed(fermionic(1.0), 6, {8.0, 16.0});
  const double r2 = s4.rows[0].error_h2 / s4.rows[1].error_h2;
  const double r4 = s6.rows[0].error_h4 / s6.rows[1].error_h4;
  o.at_most("three-site relative", three, 1e-10);
  o.at_most("H2 vs Heisenberg", heis, 1e-14);
  o.at_least("H2 ratio", r2, 4.0);
  o.at_most("H2 ratio", r2, 16.0);
  o.at_least("H2+H4 ratio (L=6)", r4, 16.0);
  o.at_most("H2+H4 ratio (L=6)", r4, 64.0);
  o.require("L=6 dim 4096", std::pow(4.0, 6) == 4096.0);
  o.at_most("seconds", seconds_since(t0), 300.0);
}

// 9. Odd-word vanishing and corollaries at L=4.
void criterion9(Outcome& o) {
  double odd = 0.0, cor = 0.0, powers = 0.0;
  for (const auto& m : hubbard_zoo(1.0)) {
    odd = std::max(odd, odd_word_check(m, 4, 3).odd_words);
    cor = std::max(cor, corollaries(m, 4).max());
    const auto s = pi0(m, 4);
    const SparseMatrix e = s.embedding(), t = perturbation_t(m, 4);
    powers = std::max({powers, max_abs(Matrix(SparseMatrix(e.adjoint() * t * e))),
                       max_abs(Matrix(SparseMatrix(e.adjoint() * t * t * t * e)))});
  }
  o.at_most("odd words", odd, 1e-14);
  o.at_most("corollaries", cor, 1e-14);
  o.at_most("Pi0 T^n Pi0, n=1,3", powers, 1e-14);
}

// 10. Twist.
void criterion10(Outcome& o) {
  bool rest = true;
  double sym2 = INFINITY, sym1 = 0.0, herm = 0.0, nonherm = INFINITY, hub = 0.0;
  for (const auto& x : xx_zoo()) {
    const auto at2 = verify_r_family(twisted_family(x, Refinement::maximal(x, 2.0)), 20, 7);
    rest = rest && at2.pass_except("symmetry");
    sym2 = std::min(sym2, at2.properties.at("symmetry").value);
    sym1 = std::max(sym1, verify_r_family(twisted_family(x, Refinement::maximal(x, 1.0)), 20, 7).properties.at("symmetry").value);
    const std::size_t L = x.dim() > 3 ? 3 : 4;
    herm = std::max(herm, verify_twist(x, Refinement::maximal(x, std::polar(1.0, 0.7)), L, 3, 1).hermiticity);
    nonherm = std::min(nonherm, verify_twist(x, Refinement::maximal(x, 2.0), L, 3, 1).hermiticity);
  }
  for (const auto& m : hubbard_zoo(2.0))
    hub = std::max(hub, verify_twisted_hubbard(m, Refinement::maximal(m.up, std::polar(1.0, kPi / 3)),
                                               Refinement::maximal(m.down, std::polar(1.0, -0.4)), 3, 3, 11)
                            .ybe);
  o.require("all but symmetry pass at q=2", rest);
  o.at_least("symmetry q=2", sym2, 1e-2);
  o.at_most("symmetry q=1", sym1, 1e-12);
  o.at_most("H hermitian (phase)", herm, 1e-13);
  o.at_least("H non-hermitian (q=2)", nonherm, 0.1);
  o.at_most("twisted Hubbard YBE", hub, 1e-10);
}

// 11. Fock truncation.
void criterion11(Outcome& o) {
  bool suite = true;
  for (std::size_t n : {3u, 5u})
    for (FockKind k : {FockKind::even_odd, FockKind::small_modes})
      suite = suite && verify_r_family(fock_family(n, k, 1), 20, 3).all_pass();
  double least = INFINITY;
  for (std::size_t n = 1; n <= 6; ++n) least = std::min(least, noncyclicity_demo(n).difference);
  o.require("suite at Nmax 3,5", suite);
  o.at_least("ordering difference, Nmax 1..6", least, 1e-6);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--known-failures=", 0) != 0) {
      std::cerr << "usage: acceptance [--known-failures=N,M,...]\n";
      return 2;
    }
    std::stringstream ss(a.substr(17));
    for (std::string tok; std::getline(ss, tok, ',');) known.insert(std::stoi(tok));
  }
  void (*criteria[])(Outcome&) = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                                  criterion7, criterion8, criterion9, criterion10, criterion11};
  int unexpected = 0;
  for (int i = 0; i < 11; ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i](o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ":" << o.detail.str() << " ["
              << Outcome::fmt(seconds_since(t0)) << " s]" << (!o.pass && known.count(i + 1) ? " (known failure)" : "")
              << std::endl;
    if (!o.pass && !known.count(i + 1)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
