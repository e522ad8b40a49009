#include "unihub/fock.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace unihub {

namespace {

Matrix kron_plain(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool kept(std::size_t n, FockKind kind, std::size_t ell) {
  return kind == FockKind::even_odd ? n % 2 == 0 : n <= ell;
}

void check(std::size_t nmax, FockKind kind, std::size_t ell) {
  if (nmax < 1) throw std::invalid_argument("Fock truncation needs Nmax >= 1");
  if (kind == FockKind::small_modes && ell > nmax) throw std::invalid_argument("small-modes cut ell exceeds Nmax");
}

// Π over levels <= nmax of factor 0, traced out of a three-factor operator.
Matrix partial_trace_first(const Matrix& m, std::size_t d, std::size_t nmax) {
  const auto d2 = static_cast<Eigen::Index>(d * d);
  Matrix out = Matrix::Zero(d2, d2);
  for (std::size_t n = 0; n <= nmax; ++n) {
    const auto off = static_cast<Eigen::Index>(n) * d2;
    out += m.block(off, off, d2, d2);
  }
  return out;
}

double ordering_difference(std::size_t nmax, std::size_t ambient) {
  const std::size_t d = ambient + 1;
  const SiteList three(3, GradedSpace::even(d));
  const Matrix p = graded_permutation(GradedSpace::even(d), GradedSpace::even(d)).matrix;
  const Matrix p12 = embed(p, {0, 1}, three), p13 = embed(p, {0, 2}, three);
  return (partial_trace_first(p12 * p13, d, nmax) - partial_trace_first(p13 * p12, d, nmax)).norm();
}

}  // namespace

FockProjectors fock_projectors(std::size_t nmax, FockKind kind, std::size_t ell) {
  check(nmax, kind, ell);
  const auto d = static_cast<Eigen::Index>(nmax + 1);
  FockProjectors f{Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (Eigen::Index n = 0; n < d; ++n) {
    const bool in = kept(static_cast<std::size_t>(n), kind, ell);
    f.pi(n, n) = in ? 1.0 : 0.0;
    f.pibar(n, n) = in ? 0.0 : 1.0;
    f.c(n, n) = in ? 1.0 : -1.0;
    f.number(n, n) = static_cast<double>(n);
  }
  return f;
}

XXModel fock_model(std::size_t nmax, FockKind kind, std::size_t ell) {
  check(nmax, kind, ell);
  std::vector<int> subset;
  for (std::size_t n = 0; n <= nmax; ++n)
    if (kept(n, kind, ell)) subset.push_back(static_cast<int>(n + 1));
  return XXModel(GradedSpace::even(nmax + 1), subset);
}

ChainOperator fock_xx_r(std::size_t nmax, FockKind kind, double lambda, std::size_t ell) {
  const FockProjectors f = fock_projectors(nmax, kind, ell);
  const GradedSpace v = GradedSpace::even(nmax + 1);
  const Matrix p = graded_permutation(v, v).matrix;
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  const Matrix cc = kron_plain(f.c, f.c);
  const double c = std::cos(lambda / 2), s = std::sin(lambda / 2);
  return ChainOperator({v, v}, c * (c * p + s * id) - s * cc * (s * p + c * id));
}

RMatrixFamily fock_family(std::size_t nmax, FockKind kind, std::size_t ell) {
  const XXModel m = fock_model(nmax, kind, ell);
  return {m.space(), [=](double l) { return fock_xx_r(nmax, kind, l, ell).matrix; }, fock_projectors(nmax, kind, ell).c,
          sigma(m).matrix};
}

NoncyclicityReport noncyclicity_demo(std::size_t nmax, std::size_t ambient, std::uint64_t seed) {
  if (nmax < 1) throw std::invalid_argument("Fock truncation needs Nmax >= 1");
  if (ambient < nmax) throw std::invalid_argument("ambient cutoff below the trace cutoff");
  NoncyclicityReport rep;
  rep.nmax = nmax;
  rep.ambient = ambient;
  rep.difference = ordering_difference(nmax, ambient);
  rep.predicted = std::sqrt(2.0 * static_cast<double>((nmax + 1) * (ambient - nmax)));
  rep.truncated_difference = ordering_difference(nmax, nmax);

  // Y block-diagonal in n1+n2; trace over n1+n2 <= nmax inside the ambient pair.
  const std::size_t d = ambient + 1;
  const auto d2 = static_cast<Eigen::Index>(d * d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix y = Matrix::Zero(d2, d2);
  for (Eigen::Index r = 0; r < d2; ++r)
    for (Eigen::Index c = 0; c < d2; ++c) {
      const auto tr = static_cast<std::size_t>(r) / d + static_cast<std::size_t>(r) % d;
      const auto tc = static_cast<std::size_t>(c) / d + static_cast<std::size_t>(c) % d;
      if (tr == tc) y(r, c) = cplx(g(rng), g(rng));
    }
  const Matrix p = graded_permutation(GradedSpace::even(d), GradedSpace::even(d)).matrix;
  const Matrix a = p * y, b = y * p;
  cplx diff = 0.0;
  for (Eigen::Index k = 0; k < d2; ++k)
    if (static_cast<std::size_t>(k) / d + static_cast<std::size_t>(k) % d <= nmax) diff += a(k, k) - b(k, k);
  rep.full_trace_cyclic = std::abs(diff);
  return rep;
}

}  // namespace unihub
