#pragma once

// Coherence measures of block dictionaries and the sparsity levels they
// guarantee for BOMP and mixed l2/l1 recovery.

#include <iosfwd>

#include "bsk/block.hpp"

namespace bsk {

/// Tolerance used to validate unit-norm columns and orthonormal blocks.
inline constexpr double kNormalizationTol = 1e-10;

/// Block-coherence values at or below this are treated as exactly zero.
inline constexpr double kZeroCoherence = 1e-12;

/// Throws InvalidInput naming the first (1-based) column whose norm is off by more than tol.
void require_unit_columns(const BlockDictionary& D, double tol = kNormalizationTol);

/// Throws InvalidInput naming the first (1-based) block with D[l]^H D[l] != I_d.
void require_orthonormal_blocks(const BlockDictionary& D, double tol = kNormalizationTol);

/// max_{l != r} |d_l^H d_r| over unit-norm columns.
double coherence(const BlockDictionary& D);

/// M x M grid of (1/d) * rho(D[l]^H D[r]) for all block pairs, diagonal included.
RealMatrix block_coherence_grid(const BlockDictionary& D);

/// max over l != r of (1/d) * rho(D[l]^H D[r]); requires orthonormal blocks.
/// Zero when the dictionary has a single block.
double block_coherence(const BlockDictionary& D);

/// max over all (l, r), l = r included, of (1/d) * rho(Phi[l]^H Psi[r]) for two unitary bases.
double mutual_block_coherence(const BlockMatrix& phi, const BlockMatrix& psi);

/// max over all column pairs of |phi_l^H psi_r| for two unitary bases.
double mutual_coherence(const BlockMatrix& phi, const BlockMatrix& psi);

struct RecoveryCertificate {
  double value = 0.0;  ///< rho_c(D0^+ D0bar)
  bool holds = false;  ///< value < 1
};

/// rho_c(pinv(D0) * D0bar) for the blocks in `support` against all other
/// blocks. D0 must have full column rank (relative rank tolerance 1e-10). A
/// support covering every block gives 0.
RecoveryCertificate exact_recovery_condition(const BlockDictionary& D, const SupportSet& support);

/// pinv(D0) * D0bar with rows ordered as `support.indices()` and columns as
/// `support.complement()`, block length d on both axes. The complement must be non-empty.
BlockMatrix recovery_cross_matrix(const BlockDictionary& D, const SupportSet& support);

struct SparsityGuarantee {
  Index kBlock = 0;         ///< largest k with k*d < (1/mu_B + d)/2
  Index kConventional = 0;  ///< largest s with s < (1/mu + 1)/2, in scalar nonzeros
  bool limitedByUniqueness = false;  ///< mu_B == 0: kBlock capped at floor(M/2)
};

SparsityGuarantee guarantee_from_coherence(double mu, double mu_block, Index d, Index M);
SparsityGuarantee max_guaranteed_block_sparsity(const BlockDictionary& D);

struct CoherenceReport {
  double mu = 0.0;
  double muBlock = 0.0;
  Index d = 1;
  Index M = 1;
  Index kMaxBlock = 0;
  Index kMaxConventional = 0;
  bool limitedByUniqueness = false;
  RealMatrix grid;
};

CoherenceReport coherence_report(const BlockDictionary& D);

/// Flat key-value block.
void write_report(std::ostream& out, const CoherenceReport& report);

/// CSV with columns l, r, rho_over_d (1-based indices, all pairs).
void write_grid_csv(std::ostream& out, const CoherenceReport& report);

}  // namespace bsk
