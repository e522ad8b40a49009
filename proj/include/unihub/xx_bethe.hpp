#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unihub/xx.hpp"

namespace unihub {

// Small chain of the nested construction: every basis index except the
// vacuum, unbarred ones first.  Grades are relative to the vacuum.
struct SmallChain {
  std::size_t vacuum = 0;            // big-chain index of e_1
  std::vector<std::size_t> to_big;   // small index j (0-based) -> big index
  std::size_t unbarred = 0;          // first `unbarred` small indices lie in W
  GradedSpace space;
  std::size_t dim() const { return to_big.size(); }
  bool is_barred(std::size_t j) const { return j >= unbarred; }
};

SmallChain small_chain(const XXModel& model);

// Basis index of the chain state with the vacuum everywhere except the
// listed (0-based position, big index) pairs.
std::size_t excitation_index(const XXModel& model, std::size_t length,
                             const std::vector<std::pair<std::size_t, std::size_t>>& placed);

struct VacuumReport {
  double transfer_residual = 0.0;  // t(λ) on W^{⊗L} against cos^L shift + sin^L c
  double hamiltonian_residual = 0.0;
  double impulsion_residual = 0.0;  // t(0) Ω_a - Ω_a
  double lowering_residual = 0.0;   // Ω_a ∝ (M_{a,1})^L Ω_1
  cplx sin_coefficient;             // the scalar c, a signed count of barred states
  bool pass(double tol) const;
};

VacuumReport pseudo_vacuum_check(const XXModel& model, std::size_t length, double lambda = 0.37);

// S_12(p1,p2) on the two-site small chain.
Matrix smatrix_xx(const SmallChain& sc, double p1, double p2);
inline Matrix smatrix_xx(const XXModel& model, double p1, double p2) {
  return smatrix_xx(small_chain(model), p1, p2);
}

struct SMatrixReport {
  double unitarity = 0.0;
  double ybe = 0.0;
  double braided_ybe = 0.0;
  double braided_unitarity = 0.0;
  double max() const;
};

SMatrixReport smatrix_identities(const XXModel& model, std::size_t samples, std::uint64_t seed);

// Φ¹ for small label j (0-based).
Vector build_phi1(const XXModel& model, std::size_t length, std::size_t label, double p);
// Φ² projected on a small-chain vector ξ in (C^{s-1})^{⊗2}: amplitudes
// e^{ip·x} ξ + e^{iγ(p)·x} PS ξ at x1<x2.
Vector build_phi2(const XXModel& model, std::size_t length, const Vector& xi, double p1, double p2);

struct EigenCheck {
  cplx shift_eigenvalue;  // expected e^{i|p|}
  double energy = 0.0;
  double shift_residual = 0.0;
  double energy_residual = 0.0;
  double norm = 0.0;
};

EigenCheck check_eigenstate(const XXModel& model, std::size_t length, const Vector& state,
                            double total_momentum, double energy);

struct ExcitationSpec {
  std::size_t length = 0;
  std::vector<std::size_t> unbarred_labels;  // small labels < unbarred count
  std::vector<std::size_t> barred_labels;    // small labels >= unbarred count
  std::size_t m_unbarred() const { return unbarred_labels.size(); }
  std::size_t m_barred() const { return barred_labels.size(); }
};

void validate(const ExcitationSpec& spec, const SmallChain& sc);

struct BAERootSet {
  std::vector<double> q;     // unbarred momenta in (-π, π]
  std::vector<double> qbar;  // barred momenta in (-π, π]
  cplx kappa_unbarred{1.0};  // eigenvalue of the cyclic shift on the unbarred slots
  cplx kappa_barred{1.0};
  std::vector<int> branch_q;     // lattice integers k with q = (arg + 2πk)/(L-M'')
  std::vector<int> branch_qbar;  // lattice integers for q̄
  double energy() const;
  double momentum() const;
};

// Distinct eigenvalues of the graded cyclic shift of the small chain,
// restricted to states with the given label multiset.
std::vector<cplx> cyclic_shift_eigenvalues(const SmallChain& sc, const std::vector<std::size_t>& labels);

std::vector<BAERootSet> solve_bae_xx(const XXModel& model, const ExcitationSpec& spec);

// Largest |lhs - rhs| over the BAEs of one root set, and over their product.
double bae_residual(const ExcitationSpec& spec, const BAERootSet& roots);
double bae_product_residual(const ExcitationSpec& spec, const BAERootSet& roots);

// Operator S_{j+1,j}…S_{Mj}S_{1j}…S_{j-1,j} on the M-site small chain, both
// as a direct product and from the partition formula.  j is 0-based.
Matrix telescoped_product(const SmallChain& sc, const std::vector<double>& p, std::size_t j);
Matrix partition_formula(const SmallChain& sc, const std::vector<double>& p, std::size_t j);
double product_formula_check(const XXModel& model, const std::vector<double>& p);

struct BaeEdReport {
  std::size_t sectors = 0;
  std::size_t predicted_levels = 0;  // distinct (sector, energy) pairs from the BAEs
  std::size_t ed_levels = 0;         // distinct (sector, energy) pairs from ED
  std::size_t missing = 0;           // predicted levels absent from ED
  double worst_match = 0.0;          // largest distance from a predicted energy to ED
  bool one_sided() const { return missing == 0; }
  bool exact() const { return missing == 0 && predicted_levels == ed_levels; }
};

// Every BAE energy of every species content, compared with the exact
// spectrum of the matching charge sector.
BaeEdReport bae_vs_ed(const XXModel& model, std::size_t length, double tol = 1e-10);

}  // namespace unihub
