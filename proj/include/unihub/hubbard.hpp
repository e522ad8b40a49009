#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "unihub/xx.hpp"

namespace unihub {

// Two XX models coupled on the composite site V↑⊗V↓.
struct HubbardModel {
  XXModel up;
  XXModel down;
  double U = 0.0;

  HubbardModel(XXModel u, XXModel d, double coupling);
  GradedSpace site() const { return tensor(up.space(), down.space()); }
  std::size_t dim() const { return up.dim() * down.dim(); }
  std::string name() const;
};

// sinh 2h = U sin 2λ, principal branch.
double h_of_lambda(double lambda, double U);
// dh/dλ
double h_derivative(double lambda, double U);

using HFunction = std::function<double(double)>;

// C↑C↓ on one composite site, and one-spin operators lifted to it.
Matrix cc_site(const HubbardModel& model);
Matrix lift_up(const HubbardModel& model, const Matrix& a);
Matrix lift_down(const HubbardModel& model, const Matrix& b);
// Operators on the two-spin pair V↑⊗V↑ or V↓⊗V↓ lifted to two composite sites.
Matrix lift_pair_up(const HubbardModel& model, const Matrix& a);
Matrix lift_pair_down(const HubbardModel& model, const Matrix& b);
Matrix composite_permutation(const HubbardModel& model);

// Coefficient (sin λ12 / sin λ'12) tanh h'12, with the joint limit at the origin.
double coupling_coefficient(double l1, double l2, double hprime);

ChainOperator r_hubbard(const HubbardModel& model, double l1, double l2);
ChainOperator r_hubbard(const HubbardModel& model, double l1, double l2, const HFunction& h);
// Same formula with C↑, C↓ acting on the second site.
ChainOperator r_hubbard_c2(const HubbardModel& model, double l1, double l2);
ChainOperator gauge_r(const HubbardModel& model, double l1, double l2);
ChainOperator gauge_r(const HubbardModel& model, double l1, double l2, const HFunction& h);
// (1/cosh h) I_1(h) R↑(λ)R↓(λ) I_1(h)
ChainOperator reduced_r(const HubbardModel& model, double lambda);
ChainOperator reduced_r_derivative(const HubbardModel& model, double lambda);

// The two closed forms of the unitarity scalar, and the scalar actually
// produced by R12(λ1,λ2)R21(λ2,λ1), cos⁴λ12 - k² cos⁴λ'12.
double unitarity_coefficient(const HubbardModel& model, double l1, double l2);
double unitarity_coefficient_alt(const HubbardModel& model, double l1, double l2);
double unitarity_coefficient_measured(const HubbardModel& model, double l1, double l2);

struct HubbardRReport {
  double ybe = 0.0;
  double unitarity = 0.0;          // against the measured scalar
  double closed_unitarity = 0.0;  // against the closed-form scalar
  double regularity = 0.0;
  double symmetry = 0.0;           // P R12 P - R12
  double symmetry_site_two = 0.0;  // P R12 P - r_hubbard_c2
  double coefficient_forms = 0.0;  // both closed-form unitarity coefficients agree
  double max() const;
};

enum class HubbardForm { plain, gauged };

double hubbard_ybe_residual(const HubbardModel& model, double l1, double l2, double l3,
                            HubbardForm form = HubbardForm::plain, const HFunction& h = {});
HubbardRReport verify_hubbard_r(const HubbardModel& model, std::size_t samples, std::uint64_t seed,
                                HubbardForm form = HubbardForm::plain);

ChainOperator transfer_hubbard(const HubbardModel& model, double lambda, std::size_t length);
ChainOperator transfer_hubbard_derivative(const HubbardModel& model, double lambda, std::size_t length);

Matrix hamiltonian_density_hubbard(const HubbardModel& model);
std::vector<LocalTerm> hamiltonian_terms_hubbard(const HubbardModel& model, std::size_t length);
ChainOperator hamiltonian_hubbard(const HubbardModel& model, std::size_t length);
ChainOperator log_derivative_hamiltonian_hubbard(const HubbardModel& model, std::size_t length);
// U Σ_j C↑_j C↓_j
ChainOperator interaction_hubbard(const HubbardModel& model, std::size_t length);

struct SymmetryReport {
  double r_commutator = 0.0;   // worst [R(λ,0), M_1+M_2]
  double h_commutator = 0.0;   // worst [H, Σ_j M_j]
  double c_commutator = 0.0;   // worst [M, C↑C↓] on one site
  double cross_block_min = 0.0;  // smallest [H, ·] over cross-block generators
  std::size_t generators = 0;
};

// One-site generators of End(W↑)⊕End(W̄↑)⊕End(W↓)⊕End(W̄↓) lifted to the composite site.
std::vector<Matrix> symmetry_generators_hubbard(const HubbardModel& model);
std::vector<Matrix> cross_block_generators_hubbard(const HubbardModel& model);
SymmetryReport symmetry_hubbard(const HubbardModel& model, std::size_t length, double lambda = 0.41);

// Charges per composite basis index: one-hot in V↑ then one-hot in V↓.
std::vector<ChargeVector> hubbard_site_charges(const HubbardModel& model);

std::vector<HubbardModel> hubbard_zoo(double U);

}  // namespace unihub
