#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "unihub/graded.hpp"

namespace unihub {

// Graded space plus the index subset N (1-based) spanning W.
class XXModel {
 public:
  XXModel(GradedSpace space, std::vector<int> subset_n);
  static XXModel gl(int m, int n, std::vector<int> subset_n);

  const GradedSpace& space() const { return space_; }
  const std::vector<int>& subset_n() const { return n_; }
  std::size_t dim() const { return space_.dim(); }
  // 0-based index membership
  bool in_n(std::size_t i) const;
  std::size_t rank() const { return n_.size(); }
  std::size_t rank_bar() const { return dim() - n_.size(); }
  bool trivial() const { return rank() == 0 || rank_bar() == 0; }
  std::vector<std::size_t> unbarred_indices() const;
  std::vector<std::size_t> barred_indices() const;
  std::string name() const;

 private:
  GradedSpace space_;
  std::vector<int> n_;
};

struct Projectors {
  Matrix pi;
  Matrix pibar;
  Matrix c;
};

Projectors make_projectors(const XXModel& model);
ChainOperator sigma(const XXModel& model);
ChainOperator r_xx(const XXModel& model, double lambda);
ChainOperator r_xx_half_angle(const XXModel& model, double lambda);
ChainOperator r_xx_derivative(const XXModel& model, double lambda);

// Any R-matrix family on V⊗V that the property suite can exercise.
struct RMatrixFamily {
  GradedSpace space;
  std::function<Matrix(double)> r;
  Matrix c;      // one-site parity operator
  Matrix sigma;  // two-site Σ
};

RMatrixFamily xx_family(const XXModel& model);

struct PropertyReport {
  std::map<std::string, Residual> properties;
  std::vector<std::vector<double>> samples;
  std::uint64_t seed = 0;
  bool all_pass() const;
  bool pass_except(const std::string& name) const;
};

inline const std::vector<std::string>& r_property_names() {
  static const std::vector<std::string> names = {"parity",  "sign", "symmetry", "unitarity",       "regularity",
                                                 "exchange", "YBE", "dYBE",     "sigma-projector", "sigma-relations"};
  return names;
}

std::vector<double> sample_lambdas(std::size_t count, std::uint64_t seed);

PropertyReport verify_r_family(const RMatrixFamily& fam, std::size_t n_samples, std::uint64_t seed,
                               double tol = 1e-12);
PropertyReport verify_r_matrix(const XXModel& model, std::size_t n_samples, std::uint64_t seed,
                               double tol = 1e-12);

// dYBE residual at one point, optionally with the parity insertion dropped.
double dybe_residual(const RMatrixFamily& fam, double l1, double l2, double l3, bool with_parity = true);

enum class TraceKind { automatic, super, ordinary };

ChainOperator monodromy_xx(const XXModel& model, double lambda, std::size_t length);
ChainOperator transfer_xx(const XXModel& model, double lambda, std::size_t length,
                          TraceKind trace = TraceKind::automatic);
ChainOperator transfer_xx_derivative(const XXModel& model, double lambda, std::size_t length);

// Two-site density P Σ and the chain Hamiltonian with periodic boundary.
Matrix hamiltonian_density_xx(const XXModel& model);
Matrix hamiltonian_density_xx_explicit(const XXModel& model);
std::vector<LocalTerm> hamiltonian_terms_xx(const XXModel& model, std::size_t length);
ChainOperator hamiltonian_xx(const XXModel& model, std::size_t length);
// t(0)^{-1} t'(0)
ChainOperator log_derivative_hamiltonian_xx(const XXModel& model, std::size_t length);

struct Generator {
  std::size_t row;  // 0-based
  std::size_t col;
  Matrix one_site;
};

Matrix elementary(std::size_t dim, std::size_t i, std::size_t j);
std::vector<Generator> symmetry_generators_xx(const XXModel& model);
std::vector<Generator> cross_block_generators_xx(const XXModel& model);

std::size_t count_models(int m, int n);
std::vector<std::vector<int>> enumerate_models(int m, int n);

std::vector<XXModel> xx_zoo();

// Charges on one site: one-hot basis index.
std::vector<ChargeVector> xx_site_charges(const XXModel& model);

}  // namespace unihub
