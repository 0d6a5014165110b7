#pragma once

// Block uncertainty relation for a signal expanded in two unitary bases:
//
//   (A + B)/2 >= sqrt(A B) >= 1 / (d mu_B(Phi, Psi))
//
// with A, B the block sparsity levels of the two expansions.
//
// Numerical expansions of an exactly sparse signal leak ~1e-15 into every
// block, so a block counts as nonzero only when its norm exceeds
// tol * (largest block norm of that expansion).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bsk/block.hpp"

namespace bsk {

inline constexpr double kDefaultSparsityTol = 1e-10;

/// a with a[l] = Phi[l]^H x. Phi must be unitary.
BlockVector expand_in_basis(const Vector& x, const BlockMatrix& phi);

struct UncertaintyReport {
  Index A = 0;
  Index B = 0;
  double geometricMean = 0.0;
  double arithmeticMean = 0.0;
  double muBlock = 0.0;            ///< mu_B(Phi, Psi)
  double mu = 0.0;                 ///< mu(Phi, Psi)
  double blockBound = 0.0;         ///< 1 / (d mu_B)
  double conventionalBound = 0.0;  ///< 1 / (d mu)
  bool holds = false;              ///< geometricMean >= blockBound - 1e-9
};

UncertaintyReport uncertainty_check(const Vector& x, const BlockMatrix& phi,
                                    const BlockMatrix& psi, double tol = kDefaultSparsityTol);

struct BoundComparison {
  double blockBound = 0.0;
  double conventionalDerivedBound = 0.0;
};

/// Both lower bounds on sqrt(A B); the block bound is never the smaller one.
BoundComparison conventional_uncertainty_comparison(const Vector& x, const BlockMatrix& phi,
                                                    const BlockMatrix& psi,
                                                    double tol = kDefaultSparsityTol);

void write_report(std::ostream& out, const UncertaintyReport& report);

struct SweepRow {
  Index trial = 0;
  Index A = 0;
  Index B = 0;
  double sqrtAB = 0.0;
  double bound = 0.0;
};

/// Random signals x = Phi a with a block k-sparse, k uniform in [1, M], one per trial.
std::vector<SweepRow> uncertainty_sweep(const BlockMatrix& phi, const BlockMatrix& psi,
                                        Index trials, std::uint64_t seed,
                                        double tol = kDefaultSparsityTol);

/// CSV columns: trial, A, B, sqrtAB, bound (trial 1-based).
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace bsk
