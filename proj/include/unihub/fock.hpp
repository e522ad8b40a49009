#pragma once

#include <cstdint>

#include "unihub/xx.hpp"

namespace unihub {

enum class FockKind { even_odd, small_modes };

// Levels |0>..|Nmax>, all even.
struct FockProjectors {
  Matrix pi;
  Matrix pibar;
  Matrix c;
  Matrix number;
};

// ell is read only for small_modes and must satisfy ell <= nmax.
FockProjectors fock_projectors(std::size_t nmax, FockKind kind, std::size_t ell = 0);
XXModel fock_model(std::size_t nmax, FockKind kind, std::size_t ell = 0);

// cos(λ/2){cos(λ/2)P + sin(λ/2)} - sin(λ/2) C⊗C {sin(λ/2)P + cos(λ/2)}
ChainOperator fock_xx_r(std::size_t nmax, FockKind kind, double lambda, std::size_t ell = 0);
RMatrixFamily fock_family(std::size_t nmax, FockKind kind, std::size_t ell = 0);

struct NoncyclicityReport {
  std::size_t nmax = 0;
  std::size_t ambient = 0;            // highest level kept in every factor
  double difference = 0.0;            // ‖tr_{N,1}(P12 P13) - tr_{N,1}(P13 P12)‖_F
  double predicted = 0.0;             // sqrt(2 (Nmax+1)(ambient-Nmax))
  double truncated_difference = 0.0;  // same with ambient = Nmax
  double full_trace_cyclic = 0.0;     // |tr_{12}(P12 Y) - tr_{12}(Y P12)| for Y conserving N1+N2
};

// Partial trace over levels n <= Nmax of factor 1, inside factors cut at ambient >= Nmax.
NoncyclicityReport noncyclicity_demo(std::size_t nmax, std::size_t ambient, std::uint64_t seed = 0);
inline NoncyclicityReport noncyclicity_demo(std::size_t nmax) { return noncyclicity_demo(nmax, nmax + 1); }

}  // namespace unihub
