#pragma once

// Monte-Carlo phase-transition experiments.
//
// Config file grammar: flat `key = value` lines (see keyvalue.hpp).
//
//   dictionary        generated | file | pair            (default generated)
//   L, M, d           dimensions; for `pair`, M and d of the basis pair, so
//                     the dictionary [I, F (x) U] has 2M blocks
//   dict_seed         seed for generated dictionaries and random U
//   dict_file         BSK1 dictionary for `file`
//   pair_unitary      identity | random                 (default identity)
//   k_min, k_max      inclusive block-sparsity range     (default 1..M)
//   algorithms        comma list of bomp, l21, omp, bp, oracle
//   trials            trials per (k, algorithm) cell
//   master_seed       root of all per-trial seeds
//   success_tol       relative l2 error for a success    (default 1e-6)
//   certify           also evaluate the exact recovery condition per trial
//   amplitude         gaussian | unit
//   max_iterations, residual_tol, penalty, primal_tol, dual_tol,
//   support_threshold, debias, subset_budget           solver parameters
//
// The omp and bp algorithms treat x0 as a conventional sparse vector: they
// run on the same matrix with scalar blocks and omp is given the number of
// nonzero entries of x0.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bsk/block.hpp"
#include "bsk/dictionary.hpp"
#include "bsk/keyvalue.hpp"
#include "bsk/recovery.hpp"

namespace bsk {

enum class DictionarySource { Generated, File, IncoherentPair };

struct ExperimentConfig {
  DictionarySource source = DictionarySource::Generated;
  Index L = 16;
  Index M = 8;
  Index d = 2;
  std::uint64_t dictSeed = 1;
  std::filesystem::path dictFile;
  bool pairRandomUnitary = false;

  Index kMin = 1;
  Index kMax = 0;  ///< 0 means "number of dictionary blocks"
  std::vector<Algorithm> algorithms{Algorithm::Bomp, Algorithm::L21};
  Index trialsPerCell = 100;
  std::uint64_t masterSeed = 1;
  double successTol = 1e-6;
  bool certify = false;
  AmplitudeModel amplitude = AmplitudeModel::Gaussian;
  SolverParams solver;

  /// Worker threads; 0 picks hardware concurrency capped by BSK_THREADS.
  unsigned threads = 0;
};

ExperimentConfig parse_experiment_config(const KeyValues& kv);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Solver parameters from a key-value file; unspecified keys keep defaults.
SolverParams parse_solver_params(const KeyValues& kv, SolverParams base = {});

BlockDictionary build_dictionary(const ExperimentConfig& config);

struct PhaseCell {
  Index k = 0;
  Algorithm algorithm = Algorithm::Bomp;
  Index successes = 0;
  Index trials = 0;
  double meanIterations = 0.0;
  double meanResidual = 0.0;
  double certificateRate = 0.0;  ///< NaN unless certify
  Index certifiedFailures = 0;   ///< trials with the certificate holding but no success
  bool skipped = false;          ///< oracle over budget

  double successRate() const {
    return trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  }
};

/// Per-trial seed; independent of scheduling and of the other cells.
std::uint64_t trial_seed(std::uint64_t master, Index k, Algorithm alg, Index trial);

/// Worker count: `requested` if nonzero, else hardware concurrency, capped by BSK_THREADS.
unsigned worker_count(unsigned requested);

std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& config);
std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& config,
                                            const BlockDictionary& D);

/// Header line `bsk-phase-v1`, then a CSV table, one row per cell.
void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells);

struct MonotonicityFlag {
  Algorithm algorithm;
  Index k;  ///< success rate at k exceeds the one at k-1
  double increase;
};

/// Increases of success rate with k larger than `slack`, for bomp and l21 only.
std::vector<MonotonicityFlag> monotonicity_flags(const std::vector<PhaseCell>& cells,
                                                 double slack = 0.02);

struct GuaranteeComparison {
  double mu = 0.0;
  double muBlock = 0.0;
  Index d = 1;
  Index kMaxBlock = 0;
  Index kMaxConventional = 0;
  bool limitedByUniqueness = false;

  Index blockScalarLevel() const { return kMaxBlock * d; }
  /// Guaranteed scalar nonzeros with block structure over those without.
  double scalarRatio() const;
};

GuaranteeComparison compare_guarantees(const BlockDictionary& D);
void write_guarantees(std::ostream& out, const GuaranteeComparison& g);
void write_guarantees_csv(std::ostream& out, const GuaranteeComparison& g, bool header = true);

}  // namespace bsk
