#include "unihub/xx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace unihub {

XXModel::XXModel(GradedSpace space, std::vector<int> subset_n) : space_(std::move(space)), n_(std::move(subset_n)) {
  std::sort(n_.begin(), n_.end());
  if (std::adjacent_find(n_.begin(), n_.end()) != n_.end()) throw std::invalid_argument("repeated index in N");
  for (int i : n_) {
    if (i < 1 || static_cast<std::size_t>(i) > space_.dim()) {
      throw std::out_of_range("index " + std::to_string(i) + " in N outside [1, " + std::to_string(space_.dim()) + "]");
    }
  }
}

XXModel XXModel::gl(int m, int n, std::vector<int> subset_n) {
  return XXModel(GradedSpace::gl(m, n), std::move(subset_n));
}

bool XXModel::in_n(std::size_t i) const {
  return std::binary_search(n_.begin(), n_.end(), static_cast<int>(i + 1));
}

std::vector<std::size_t> XXModel::unbarred_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (in_n(i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> XXModel::barred_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!in_n(i)) out.push_back(i);
  return out;
}

std::string XXModel::name() const {
  int m = 0, n = 0;
  for (int g : space_.grades) (g ? n : m) += 1;
  std::ostringstream os;
  os << "gl(" << m;
  if (n > 0) os << "|" << n;
  os << ") N={";
  for (std::size_t i = 0; i < n_.size(); ++i) os << (i ? "," : "") << n_[i];
  os << "}";
  return os.str();
}

Projectors make_projectors(const XXModel& model) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  Matrix pi = Matrix::Zero(d, d);
  for (int i : model.subset_n()) pi(i - 1, i - 1) = 1.0;
  Matrix pibar = Matrix::Identity(d, d) - pi;
  Matrix c = pi - pibar;
  return {pi, pibar, c};
}

namespace {

SiteList two_sites(const XXModel& m) { return {m.space(), m.space()}; }

Matrix kron_plain(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

ChainOperator sigma(const XXModel& model) {
  // Diagonal factors are even, so the graded product is the plain one.
  const auto p = make_projectors(model);
  return ChainOperator(two_sites(model), kron_plain(p.pi, p.pibar) + kron_plain(p.pibar, p.pi));
}

ChainOperator r_xx(const XXModel& model, double lambda) {
  const Matrix s = sigma(model).matrix;
  const Matrix p = graded_permutation(model.space(), model.space()).matrix;
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  return ChainOperator(two_sites(model), s * p + std::sin(lambda) * s + std::cos(lambda) * (id - s) * p);
}

ChainOperator r_xx_half_angle(const XXModel& model, double lambda) {
  const auto pr = make_projectors(model);
  const Matrix cc = kron_plain(pr.c, pr.c);
  const Matrix p = graded_permutation(model.space(), model.space()).matrix;
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  const double c = std::cos(lambda / 2), s = std::sin(lambda / 2);
  return ChainOperator(two_sites(model), c * (c * p + s * id) - s * cc * (s * p + c * id));
}

ChainOperator r_xx_derivative(const XXModel& model, double lambda) {
  const Matrix s = sigma(model).matrix;
  const Matrix p = graded_permutation(model.space(), model.space()).matrix;
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  return ChainOperator(two_sites(model), std::cos(lambda) * s - std::sin(lambda) * (id - s) * p);
}

RMatrixFamily xx_family(const XXModel& model) {
  return {model.space(), [model](double l) { return r_xx(model, l).matrix; }, make_projectors(model).c,
          sigma(model).matrix};
}

bool PropertyReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& kv) { return kv.second.pass(); });
}

bool PropertyReport::pass_except(const std::string& name) const {
  return std::all_of(properties.begin(), properties.end(),
                     [&](const auto& kv) { return kv.first == name || kv.second.pass(); });
}

std::vector<double> sample_lambdas(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.4, 1.4);
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    const double l = dist(gen);
    if (std::abs(std::cos(l)) >= 0.1) out.push_back(l);
  }
  return out;
}

namespace {

struct ThreeSite {
  SiteList chain;
  Matrix p;  // P on V⊗V
  Matrix c1_two, c2_two;
  Matrix c1_three;

  explicit ThreeSite(const RMatrixFamily& fam) : chain{fam.space, fam.space, fam.space} {
    p = graded_permutation(fam.space, fam.space).matrix;
    const SiteList two{fam.space, fam.space};
    c1_two = embed(fam.c, {0}, two);
    c2_two = embed(fam.c, {1}, two);
    c1_three = embed(fam.c, {0}, chain);
  }
  Matrix at(const Matrix& r, std::size_t a, std::size_t b) const { return embed(r, {a, b}, chain); }
};

void keep_max(std::map<std::string, Residual>& props, const std::string& name, double v, double tol) {
  auto it = props.find(name);
  if (it == props.end()) props[name] = {v, tol};
  else it->second.value = std::max(it->second.value, v);
}

}  // namespace

double dybe_residual(const RMatrixFamily& fam, double l1, double l2, double l3, bool with_parity) {
  ThreeSite ts(fam);
  const Matrix c1 = with_parity ? ts.c1_three : Matrix::Identity(ts.c1_three.rows(), ts.c1_three.cols());
  const Matrix r12 = ts.at(fam.r(l1 + l2), 0, 1);
  const Matrix r13 = ts.at(fam.r(l1 - l3), 0, 2);
  const Matrix r23 = ts.at(fam.r(l2 + l3), 1, 2);
  return frobenius_per_side(r12 * c1 * r13 * r23 - r23 * r13 * c1 * r12);
}

PropertyReport verify_r_family(const RMatrixFamily& fam, std::size_t n_samples, std::uint64_t seed, double tol) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  PropertyReport rep;
  rep.seed = seed;
  ThreeSite ts(fam);
  const auto d2 = ts.p.rows();
  const Matrix id2 = Matrix::Identity(d2, d2);
  const Matrix cc = ts.c1_two * ts.c2_two;
  const auto lam = sample_lambdas(3 * n_samples, seed);

  keep_max(rep.properties, "regularity", frobenius_per_side(fam.r(0.0) - ts.p), tol);
  const Matrix& sg = fam.sigma;
  keep_max(rep.properties, "sigma-projector",
           std::max(frobenius_per_side(sg * sg - sg), frobenius_per_side(sg - 0.5 * (id2 - cc))), tol);
  {
    std::array<Matrix, 9> s3;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        if (a != b) s3[a * 3 + b] = ts.at(sg, a, b);
    double worst = 0.0;
    std::array<std::size_t, 3> perm{0, 1, 2};
    do {
      const std::size_t i = perm[0], j = perm[1], k = perm[2];
      const Matrix& sij = s3[i * 3 + j];
      const Matrix& skj = s3[k * 3 + j];
      const Matrix& sik = s3[i * 3 + k];
      worst = std::max(worst, frobenius_per_side(2.0 * sij * skj - (sij + skj - sik)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    keep_max(rep.properties, "sigma-relations", worst, tol);
  }

  for (std::size_t s = 0; s < n_samples; ++s) {
    const double l1 = lam[3 * s], l2 = lam[3 * s + 1], l3 = lam[3 * s + 2];
    rep.samples.push_back({l1, l2, l3});
    const Matrix r = fam.r(l1);
    const Matrix rm = fam.r(-l1);
    keep_max(rep.properties, "parity", frobenius_per_side(cc * r - r * cc), tol);
    keep_max(rep.properties, "sign", frobenius_per_side(rm - ts.c1_two * r * ts.c2_two), tol);
    keep_max(rep.properties, "symmetry", frobenius_per_side(r - ts.p * r * ts.p), tol);
    const double c2 = std::cos(l1) * std::cos(l1);
    keep_max(rep.properties, "unitarity", frobenius_per_side(r * (ts.p * rm * ts.p) - c2 * id2), tol);
    const Matrix r2 = fam.r(l2);
    keep_max(rep.properties, "exchange",
             frobenius_per_side(r * (ts.p * r2 * ts.p) - r2 * (ts.p * r * ts.p)), tol);
    const Matrix r12 = ts.at(fam.r(l1 - l2), 0, 1);
    const Matrix r13 = ts.at(fam.r(l1 - l3), 0, 2);
    const Matrix r23 = ts.at(fam.r(l2 - l3), 1, 2);
    keep_max(rep.properties, "YBE", frobenius_per_side(r12 * r13 * r23 - r23 * r13 * r12), tol);
    keep_max(rep.properties, "dYBE", dybe_residual(fam, l1, l2, l3, true), tol);
  }
  return rep;
}

PropertyReport verify_r_matrix(const XXModel& model, std::size_t n_samples, std::uint64_t seed, double tol) {
  return verify_r_family(xx_family(model), n_samples, seed, tol);
}

ChainOperator monodromy_xx(const XXModel& model, double lambda, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  SiteList chain(length + 1, model.space());
  const Matrix r = r_xx(model, lambda).matrix;
  const auto d = static_cast<Eigen::Index>(chain_dim(chain));
  Matrix m = Matrix::Identity(d, d);
  for (std::size_t j = 1; j <= length; ++j) m = m * embed(r, {0, j}, chain);
  return ChainOperator(chain, m);
}

namespace {

bool use_super(const XXModel& model, TraceKind trace) {
  switch (trace) {
    case TraceKind::super: return true;
    case TraceKind::ordinary: return false;
    case TraceKind::automatic: break;
  }
  return !model.space().all_even();
}

}  // namespace

ChainOperator transfer_xx(const XXModel& model, double lambda, std::size_t length, TraceKind trace) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  std::vector<Matrix> loc(length, r_xx(model, lambda).matrix);
  return ChainOperator(SiteList(length, model.space()),
                       transfer_from_local(loc, model.space(), model.space(), use_super(model, trace)));
}

ChainOperator transfer_xx_derivative(const XXModel& model, double lambda, std::size_t length) {
  const Matrix r = r_xx(model, lambda).matrix;
  const Matrix dr = r_xx_derivative(model, lambda).matrix;
  const SiteList chain(length, model.space());
  const auto d = static_cast<Eigen::Index>(chain_dim(chain));
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < length; ++k) {
    std::vector<Matrix> loc(length, r);
    loc[k] = dr;
    sum += transfer_from_local(loc, model.space(), model.space(), use_super(model, TraceKind::automatic));
  }
  return ChainOperator(chain, sum);
}

Matrix hamiltonian_density_xx(const XXModel& model) {
  return graded_permutation(model.space(), model.space()).matrix * sigma(model).matrix;
}

Matrix elementary(std::size_t dim, std::size_t i, std::size_t j) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

Matrix hamiltonian_density_xx_explicit(const XXModel& model) {
  const std::size_t d = model.dim();
  const SiteList one{model.space()};
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for (std::size_t i : model.unbarred_indices()) {
    for (std::size_t a : model.barred_indices()) {
      const ChainOperator eia(one, elementary(d, i, a)), eai(one, elementary(d, a, i));
      const double sa = model.space().grade(a) ? -1.0 : 1.0;
      const double si = model.space().grade(i) ? -1.0 : 1.0;
      h += sa * graded_kron(eia, eai).matrix + si * graded_kron(eai, eia).matrix;
    }
  }
  return h;
}

std::vector<LocalTerm> hamiltonian_terms_xx(const XXModel& model, std::size_t length) {
  if (length < 2) throw std::invalid_argument("chain length must be >= 2");
  const SiteList chain(length, model.space());
  const Matrix h = hamiltonian_density_xx(model);
  std::vector<LocalTerm> terms;
  for (std::size_t j = 0; j < length; ++j) terms.emplace_back(h, std::vector<std::size_t>{j, (j + 1) % length}, chain);
  return terms;
}

ChainOperator hamiltonian_xx(const XXModel& model, std::size_t length) {
  return ChainOperator(SiteList(length, model.space()), dense_terms(hamiltonian_terms_xx(model, length)));
}

ChainOperator log_derivative_hamiltonian_xx(const XXModel& model, std::size_t length) {
  const ChainOperator t0 = transfer_xx(model, 0.0, length);
  const ChainOperator dt = transfer_xx_derivative(model, 0.0, length);
  return ChainOperator(t0.sites, t0.matrix.partialPivLu().solve(dt.matrix));
}

std::vector<Generator> symmetry_generators_xx(const XXModel& model) {
  std::vector<Generator> out;
  const std::size_t d = model.dim();
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      if (model.in_n(j) == model.in_n(k)) out.push_back({j, k, elementary(d, j, k)});
  return out;
}

std::vector<Generator> cross_block_generators_xx(const XXModel& model) {
  std::vector<Generator> out;
  const std::size_t d = model.dim();
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      if (model.in_n(j) != model.in_n(k)) out.push_back({j, k, elementary(d, j, k)});
  return out;
}

std::size_t count_models(int m, int n) {
  if (m < 1 || n < 0) throw std::invalid_argument("count_models needs m >= 1, n >= 0");
  const int mx = std::max(m, n), mn = std::min(m, n);
  return static_cast<std::size_t>((mx + 1) / 2 + 1) * static_cast<std::size_t>(mn + 1);
}

std::vector<std::vector<int>> enumerate_models(int m, int n) {
  count_models(m, n);
  const int mx = std::max(m, n), mn = std::min(m, n);
  std::vector<std::vector<int>> out;
  for (int r0 = 0; r0 <= (mx + 1) / 2; ++r0) {
    for (int r1 = 0; r1 <= mn; ++r1) {
      std::vector<int> sub;
      for (int i = 1; i <= r0; ++i) sub.push_back(i);
      for (int i = 1; i <= r1; ++i) sub.push_back(mx + i);
      out.push_back(sub);
    }
  }
  return out;
}

std::vector<XXModel> xx_zoo() {
  return {XXModel::gl(2, 0, {1}), XXModel::gl(3, 0, {1}), XXModel::gl(1, 1, {1}),   XXModel::gl(2, 1, {1}),
          XXModel::gl(2, 1, {2}), XXModel::gl(2, 1, {1, 3}), XXModel::gl(2, 2, {1, 3})};
}

std::vector<ChargeVector> xx_site_charges(const XXModel& model) {
  std::vector<ChargeVector> q(model.dim(), ChargeVector(model.dim(), 0));
  for (std::size_t i = 0; i < model.dim(); ++i) q[i][i] = 1;
  return q;
}

}  // namespace unihub
