#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "unihub/hubbard.hpp"
#include "unihub/xx_bethe.hpp"

namespace unihub {

enum class ExcitationType { unbarred_up, barred_up, unbarred_down, barred_down };
std::string to_string(ExcitationType t);

// Small chain of s-2 labels: the up small chain followed by the down one.
struct HubbardSmallChain {
  SmallChain up;
  SmallChain down;
  GradedSpace space;
  std::size_t dim() const { return up.dim() + down.dim(); }
  bool is_up(std::size_t j) const { return j < up.dim(); }
  ExcitationType type(std::size_t j) const;
  bool is_barred(std::size_t j) const;
};

HubbardSmallChain hubbard_small_chain(const HubbardModel& model);

// Composite basis index of one site holding the vacuum except for label j (or the vacuum when j is absent).
std::size_t hubbard_site_state(const HubbardModel& model, const HubbardSmallChain& sc, std::size_t label);
std::size_t hubbard_vacuum_state(const HubbardModel& model);

// Signed count of barred states, sdim W̄.
double barred_sdim(const XXModel& model);

// (1+tanh h)^L (cos^L λ e^{i|p|} + sin^L λ r̄↑)(cos^L λ e^{i|p'|} + sin^L λ r̄↓), with r̄ = sdim W̄.
cplx vacuum_sector_eigenvalue(const HubbardModel& model, std::size_t length, cplx shift_up, cplx shift_down,
                              double lambda);
// The value t(λ) actually takes: the gauge factor is e^{±h} per site depending on
// whether the auxiliary state has C↑C↓ = ±1, so with A = cos^L λ e^{i|p|}, B = sin^L λ r̄,
// E = (1+tanh h)^L (A↑A↓ + B↑B↓) + (1-tanh h)^L (A↑B↓ + B↑A↓).
cplx vacuum_sector_eigenvalue_exact(const HubbardModel& model, std::size_t length, cplx shift_up, cplx shift_down,
                                    double lambda);

struct VacuumSectorReport {
  double factorization = 0.0;       // t on W_vac against (1+tanh h)^L t↑ t↓, plus leakage out of W_vac
  double eigenvalue = 0.0;          // worst |t Φ - E Φ| over joint shift eigenvectors, exact E
  double factorized_eigenvalue = 0.0;  // same with the factorized E
  double energy = 0.0;         // worst |H Φ - U L Φ|
  double momentum = 0.0;       // worst |t(0) Φ - e^{i(|p|+|p'|)} Φ|
  std::size_t states = 0;
  double max() const;
};

VacuumSectorReport vacuum_sector_check(const HubbardModel& model, std::size_t length, double lambda = 0.37);

// Graded cyclic shift t(0) as a sparse matrix.
SparseMatrix shift_hubbard(const HubbardModel& model, std::size_t length);
SparseMatrix sparse_hamiltonian_hubbard(const HubbardModel& model, std::size_t length);

Vector build_phi1_hubbard(const HubbardModel& model, std::size_t length, std::size_t label, double p);

struct OneExcitationReport {
  ExcitationType type = ExcitationType::barred_up;
  double energy = 0.0;        // UL or 2cos p + U(L-2)
  double shift_residual = 0.0;
  double energy_residual = 0.0;
  double charge_residual = 0.0;  // M_{j+1,j+1} = 1, M↑11 = L - D↑, M↓11 = L - D↓
  double max() const { return std::max({shift_residual, energy_residual, charge_residual}); }
};

OneExcitationReport one_excitation_hubbard(const HubbardModel& model, std::size_t length, std::size_t label, double p);

// T(p1,p2) and R(p1,p2) = T - 1.
cplx amplitude_t(double p1, double p2, double U);
cplx amplitude_r(double p1, double p2, double U);

struct SMatrixParts {
  Matrix x_up;
  Matrix x_down;
  Matrix mixed;
  Matrix heisenberg;
  cplx t;
  cplx r;
  Matrix total() const { return x_up + x_down + mixed + heisenberg; }
};

SMatrixParts smatrix_hubbard(const HubbardModel& model, double p1, double p2);

struct SMatrixPartsReport {
  double t_minus_r = 0.0;       // |T - R - 1|
  double t_modulus = 0.0;       // max |T| over real momenta
  double disjoint = 0.0;        // products of distinct support projectors
  double completeness = 0.0;    // support projectors sum to the identity
  double projection = 0.0;      // Π^ε⊗Π^ε S - S^{Xε} Π^ε⊗Π^ε
  double unbarred = 0.0;        // Π⊗Π S - S^{un} Π⊗Π
  double coincident = 0.0;      // S^H(p,p) + P on the barred mixed sector
  double max_identity() const { return std::max({t_minus_r, disjoint, completeness, projection, unbarred, coincident}); }
};

SMatrixPartsReport smatrix_hubbard_identities(const HubbardModel& model, std::size_t samples, std::uint64_t seed);

// |S^H - (uI + 2iU P)/(u - 2iU)| on the mixed barred pair, u = sin p1 - sin p2; the
// right-hand side is built from plain 2x2 matrices.  Requires one barred flavor per spin.
double xxx_oracle_residual(const HubbardModel& model, double p1, double p2);

// Φ² for a small-chain vector ξ with the same-site rule: zero for equal spins,
// weight ½ for an up/down pair on one site.
Vector build_phi2_hubbard(const HubbardModel& model, std::size_t length, const Vector& xi, double p1, double p2);

struct EigenResidual {
  double shift = 0.0;
  double energy = 0.0;
  double norm = 0.0;
  double max() const { return std::max(shift, energy); }
};

EigenResidual check_eigenstate_hubbard(const HubbardModel& model, std::size_t length, const Vector& state,
                                       double total_momentum, double energy);

// Barred-up/barred-down pair in the channel where S has eigenvalue σ ≠ 1:
// e^{ip2 L} = σ(p1,p2), e^{ip1 L} = 1/σ, with p1 + p2 = 2πK/L.
struct PairSolution {
  double p1 = 0.0;
  double p2 = 0.0;
  int total_k = 0;
  Vector xi;          // eigenvector of S(p1,p2) on the small pair
  double energy = 0.0;
  double condition = 0.0;  // |e^{ip1 L} σ - 1| + |e^{ip2 L} - σ|
};

std::vector<PairSolution> solve_barred_pair(const HubbardModel& model, std::size_t length);

struct TwoExcitationReport {
  double condition = 0.0;
  EigenResidual residual;
};

TwoExcitationReport two_excitation_hubbard(const HubbardModel& model, std::size_t length, const PairSolution& sol);

// Decoupled unbarred families e^{iqL} = (-1)^{M-1} ω_M^n.
struct UnbarredFamily {
  std::size_t count = 0;               // M for this spin
  std::vector<std::vector<double>> q;  // q[n-1]: the L roots for branch n, in (-π, π]
  double residual = 0.0;
};

struct UnbarredRoots {
  UnbarredFamily up;
  UnbarredFamily down;
};

UnbarredRoots bae_unbarred(const HubbardModel& model, std::size_t length, std::size_t m_up, std::size_t m_down);

// Largest distance between the per-particle momenta of the unbarred families and
// those of the XX Bethe equations of the separate up and down models.
double unbarred_cross_check(const HubbardModel& model, std::size_t length, std::size_t m_up, std::size_t m_down);

struct ObstructionRow {
  std::string in;
  std::string actual;
  std::string xxx;
};

struct ObstructionReport {
  bool obstruction = false;     // some spin carries at least two barred flavors
  double pure_swap = 0.0;       // S̄ + P on same-spin barred pairs
  double xxx_difference = 0.0;  // |S̄ - S_XXX| on same-spin mixed-flavor pairs
  double coincident = 0.0;      // S̄(p,p) + P on the barred space
  double mixed_spin = 0.0;      // S̄ against T, R on opposite spins
  std::vector<ObstructionRow> table;
};

ObstructionReport bar_sector_obstruction(const HubbardModel& model, double p1, double p2);

}  // namespace unihub
