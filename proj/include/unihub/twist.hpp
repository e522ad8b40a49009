#pragma once

#include <cstdint>
#include <vector>

#include "unihub/hubbard.hpp"

namespace unihub {

// Partition of N and of its complement into cells, with q[a][ā] ≠ 0 per cell pair.
struct Refinement {
  std::vector<std::vector<std::size_t>> cells;      // 0-based indices, union = N
  std::vector<std::vector<std::size_t>> bar_cells;  // union = complement of N
  std::vector<std::vector<cplx>> q;                 // cells.size() x bar_cells.size()

  // One cell per index, every q equal to the given value.
  static Refinement maximal(const XXModel& model, cplx q_all);
  // Single cell for N and for its complement.
  static Refinement coarse(const XXModel& model, cplx q);
  bool phases(double tol = 1e-12) const;
};

// Throws std::invalid_argument on overlapping or missing cells, bad indices, or q = 0.
void validate(const XXModel& model, const Refinement& ref);

ChainOperator f_matrix(const XXModel& model, const Refinement& ref);
ChainOperator f_inverse(const XXModel& model, const Refinement& ref);

// Σ̂ = Σ_{aā} (q π^(a)⊗π^(ā) + q⁻¹ π^(ā)⊗π^(a))
ChainOperator twisted_sigma(const XXModel& model, const Refinement& ref);
// F₁₂ R(λ) F₂₁⁻¹
ChainOperator twisted_r(const XXModel& model, const Refinement& ref, double lambda);
// Σ̂ sin λ + (Σ + (1-Σ) cos λ) P
ChainOperator twisted_r_closed(const XXModel& model, const Refinement& ref, double lambda);
// Family for the property suite; its Σ is the untwisted one.
RMatrixFamily twisted_family(const XXModel& model, const Refinement& ref);

Matrix twisted_density(const XXModel& model, const Refinement& ref);
ChainOperator twisted_hamiltonian(const XXModel& model, const Refinement& ref, std::size_t length);
ChainOperator twisted_transfer(const XXModel& model, const Refinement& ref, double lambda, std::size_t length);

struct TwistReport {
  PropertyReport properties;
  double closed_form = 0.0;    // conjugated against closed R̂
  double inverse = 0.0;        // F F⁻¹ - 1
  double hermiticity = 0.0;    // ‖Ĥ - Ĥ†‖ per side
  double transfer_commutator = 0.0;
  double imaginary_spectrum = 0.0;  // max |Im eig Ĥ|
};
TwistReport verify_twist(const XXModel& model, const Refinement& ref, std::size_t length, std::size_t samples,
                         std::uint64_t seed);

// Hubbard: F↑↓ = F↑ F↓ lifted to two composite sites.
ChainOperator twisted_hubbard_r(const HubbardModel& model, const Refinement& up, const Refinement& down, double l1,
                                double l2);
ChainOperator twisted_hubbard_r_closed(const HubbardModel& model, const Refinement& up, const Refinement& down,
                                       double l1, double l2);
ChainOperator twisted_hubbard_hamiltonian(const HubbardModel& model, const Refinement& up, const Refinement& down,
                                          std::size_t length);

struct TwistedHubbardReport {
  double ybe = 0.0;
  double unitarity = 0.0;  // against the untwisted measured scalar
  double regularity = 0.0;
  double closed_form = 0.0;
  double hermiticity = 0.0;
  double max_identity() const { return std::max({ybe, unitarity, regularity, closed_form}); }
};
TwistedHubbardReport verify_twisted_hubbard(const HubbardModel& model, const Refinement& up, const Refinement& down,
                                            std::size_t length, std::size_t samples, std::uint64_t seed);

}  // namespace unihub
