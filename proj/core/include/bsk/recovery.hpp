#pragma once

// Recovery of block-sparse x from y = D x.
//
//   bomp                   greedy block selection + joint least squares
//   l21_minimize           min sum_l ||x[l]||_2  s.t.  D x = y   (ADMM)
//   omp / basis_pursuit    the same two algorithms with scalar blocks (d = 1)
//   oracle_support_search  exhaustive least squares over all k-block supports

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "bsk/block.hpp"
#include "bsk/dictionary.hpp"

namespace bsk {

enum class Algorithm { Bomp, L21, Omp, BasisPursuit, Oracle };

std::string_view to_string(Algorithm alg);
/// Accepts bomp, l21, omp, bp, oracle.
Algorithm parse_algorithm(std::string_view name);

struct SolverParams {
  int maxIterations = 10000;
  double residualTol = 1e-8;  ///< relative to ||y||
  double penalty = 1.0;       ///< ADMM penalty
  double primalTol = 1e-8;
  double dualTol = 1e-8;
  double supportThreshold = 1e-6;  ///< relative to the largest block norm
  bool debias = true;
  Index subsetBudget = kDefaultSubsetBudget;

  void validate() const;
};

struct RecoveryResult {
  BlockVector xHat;
  SupportSet support;  ///< selection order for greedy methods, ascending otherwise
  double residualNorm = 0.0;
  int iterations = 0;
  bool converged = false;
  Algorithm algorithm = Algorithm::Bomp;
};

/// State of BOMP right after a selection, for instrumented runs.
struct BompStep {
  int iteration;             ///< 1-based stage number
  const Vector& residual;    ///< r_{l-1}, the residual the selection was made on
  Index selected;            ///< chosen block
  const RealVector& scores;  ///< ||D[i]^H r_{l-1}||_2 for every block i
};

using BompObserver = std::function<void(const BompStep&)>;

/// Block orthogonal matching pursuit. Requires orthonormal blocks. With k
/// given, runs at most k stages; without, runs until the relative residual
/// drops to residualTol or no further block fits. Ties go to the lowest index.
RecoveryResult bomp(const BlockDictionary& D, const Vector& y, std::optional<Index> k,
                    const SolverParams& params = {}, const BompObserver& observer = {});

/// Orthogonal matching pursuit: bomp on the same matrix with scalar blocks.
RecoveryResult omp(const BlockDictionary& D, const Vector& y, std::optional<Index> s,
                   const SolverParams& params = {});

/// Mixed l2/l1 minimisation under the equality constraint. Throws Infeasible
/// if y is outside range(D). Never throws on slow convergence: the last
/// iterate is returned with converged = false.
RecoveryResult l21_minimize(const BlockDictionary& D, const Vector& y,
                            const SolverParams& params = {});

/// l21_minimize with scalar blocks.
RecoveryResult basis_pursuit(const BlockDictionary& D, const Vector& y,
                             const SolverParams& params = {});

/// Exhaustive search over all k-block supports; the minimum least-squares
/// residual wins, ties (within 1e-12 ||y||) to the lexicographically smallest
/// support. Throws BudgetExceeded when C(M, k) > params.subsetBudget.
RecoveryResult oracle_support_search(const BlockDictionary& D, const Vector& y, Index k,
                                     const SolverParams& params = {});

/// argmin ||y - sum_{i in S} D[i] x[i]||_2, zero outside S. Throws RankDeficient
/// when the selected blocks are not jointly full column rank.
BlockVector least_squares_on_support(const BlockDictionary& D, const SupportSet& support,
                                     const Vector& y);

/// Block soft thresholding: each block shrunk towards zero by `threshold` in norm.
BlockVector block_soft_threshold(const BlockVector& v, double threshold);

RecoveryResult run_algorithm(Algorithm alg, const BlockDictionary& D, const Vector& y,
                             std::optional<Index> k, const SolverParams& params = {});

}  // namespace bsk
