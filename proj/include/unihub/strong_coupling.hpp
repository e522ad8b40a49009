#pragma once

#include <vector>

#include "unihub/hubbard.hpp"

namespace unihub {

// States with exactly one barred particle per site.
struct HalfFilledSector {
  std::size_t length = 0;
  SparseMatrix projector;            // Π₀, diagonal
  std::vector<std::size_t> basis;    // image of Π₀, ascending
  double ground_energy = 0.0;        // E₀ = -LU

  ChainOperator dense(const HubbardModel& model) const;
  // n x |basis| selection matrix, Π₀ = E Eᵀ
  SparseMatrix embedding() const;
};

HalfFilledSector pi0(const HubbardModel& model, std::size_t length);
// Π_j (π↑_j - π↓_j)² or, with barred set, Π_j (π̄↑_j - π̄↓_j)²
SparseMatrix pi0_product(const HubbardModel& model, std::size_t length, bool barred);

// X_12 on two composite sites: P↑π↑⊗π̄↑ + P↓π↓⊗π̄↓
Matrix hopping_local(const HubbardModel& model);
// X_ij for adjacent i, j (periodic)
SparseMatrix hopping(const HubbardModel& model, std::size_t i, std::size_t j, std::size_t length);
ChainOperator hopping_dense(const HubbardModel& model, std::size_t i, std::size_t j, std::size_t length);
SparseMatrix perturbation_t(const HubbardModel& model, std::size_t length);
// U Σ C↑C↓, diagonal
SparseMatrix interaction_h0(const HubbardModel& model, std::size_t length);

// (1-Π₀)(E₀-H₀)⁻¹(1-Π₀) computed entrywise on the diagonal of H₀.
SparseMatrix resolvent(const HubbardModel& model, const HalfFilledSector& sector);

// U-independent coefficients of H_eff = H⁽²⁾/U + H⁽⁴⁾/U³ on the Π₀ image.
Matrix heff2_resolvent(const HubbardModel& model, std::size_t length);
// -¼ Π₀T²Π₀
Matrix heff2_square(const HubbardModel& model, std::size_t length);
// Π₀VSVSVSVΠ₀ - ½{Π₀VS²VΠ₀, Π₀VSVΠ₀}, rescaled by U³
Matrix heff4_resolvent(const HubbardModel& model, std::size_t length);
// (1/16)Π₀T²S̃T²Π₀ + (1/64)Π₀T²Π₀T²Π₀, S̃ = U S
Matrix heff4_square(const HubbardModel& model, std::size_t length);

// Closed-form densities: 2 (1+P↑P↓)(π↑π↓ + π↓π↑) on two sites, and the
// three-site fourth-order density with its 1/32.
Matrix heff2_density(const HubbardModel& model);
Matrix heff4_density(const HubbardModel& model);
Matrix heff2_closed(const HubbardModel& model, std::size_t length);
Matrix heff4_closed(const HubbardModel& model, std::size_t length);

// Best scalar c with closed ≈ c·resolvent and the residual left over.
struct ScalarFit {
  double scalar = 0.0;
  double residual = 0.0;
};
ScalarFit fit_scalar(const Matrix& closed, const Matrix& resolvent);

// Π₀ basis on n open composite sites, and a local operator restricted to it.
std::vector<std::size_t> open_half_filled_basis(const HubbardModel& model, std::size_t sites);
Matrix restrict_open(const HubbardModel& model, const Matrix& op, std::size_t sites);

struct OddWordReport {
  double odd_words = 0.0;      // worst Π₀ W Π₀ over odd words that do not wind the ring
  double winding_words = 0.0;  // worst over odd words using every bond (only possible when L = n)
  std::size_t words = 0;
};
OddWordReport odd_word_check(const HubbardModel& model, std::size_t length, std::size_t max_word);

struct CorollaryReport {
  double square = 0.0;      // X_ij² Π₀
  double back_forth = 0.0;  // (1-Π₀) X_ij X_ji Π₀
  double converge = 0.0;    // X_{j-1,j} X_{j+1,j} Π₀
  double odd_power = 0.0;   // Π₀ Tⁿ Π₀, n odd, n < L
  double redundancy = 0.0;  // π^σ_j Π₀ - π̄^{-σ}_j Π₀
  double max() const;
};
CorollaryReport corollaries(const HubbardModel& model, std::size_t length);

struct ThreeSiteSpectrum {
  std::vector<double> eigenvalues;    // all, ascending
  std::vector<double> distinct;       // clustered at 1e-8
  std::vector<std::size_t> multiplicity;
  std::vector<double> expected;       // 0, 1, 3(1 + 1/(16U²))
  double deviation = 0.0;             // worst relative distance of a distinct value to the expected set
};
// ½(H⁽²⁾_{12} + H⁽²⁾_{23}) + H⁽⁴⁾_{123}/U² on the Π₀ image of three open sites.
ThreeSiteSpectrum three_site_spectrum(const HubbardModel& model, double U);

struct ScalingRow {
  double U = 0.0;
  double error_h2 = 0.0;
  double error_h4 = 0.0;
};
struct ScalingReport {
  std::size_t length = 0;
  std::size_t states = 0;
  std::vector<ScalingRow> rows;
  double exponent_h2 = 0.0;  // fitted d log(error) / d log U between first and last rows
  double exponent_h4 = 0.0;
};
// Lowest Π₀-many levels of H + LU per charge sector against H⁽²⁾/U (+ H⁽⁴⁾/U³).
ScalingReport strong_coupling_vs_ed(const HubbardModel& model, std::size_t length, const std::vector<double>& couplings);

}  // namespace unihub
