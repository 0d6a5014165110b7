#include "bsk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "bsk/bsk1_io.hpp"
#include "bsk/coherence.hpp"
#include "bsk/random.hpp"

namespace bsk {

namespace {

std::vector<Algorithm> parse_algorithm_list(const std::string& text) {
  std::vector<Algorithm> algs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const Algorithm a = parse_algorithm(item);
    if (std::find(algs.begin(), algs.end(), a) != algs.end())
      throw InvalidInput("algorithm '" + item + "' listed twice");
    algs.push_back(a);
  }
  if (algs.empty()) throw InvalidInput("no algorithms configured");
  return algs;
}

}  // namespace

SolverParams parse_solver_params(const KeyValues& kv, SolverParams p) {
  p.maxIterations = static_cast<int>(kv.get_int("max_iterations", p.maxIterations));
  p.residualTol = kv.get_double("residual_tol", p.residualTol);
  p.penalty = kv.get_double("penalty", p.penalty);
  p.primalTol = kv.get_double("primal_tol", p.primalTol);
  p.dualTol = kv.get_double("dual_tol", p.dualTol);
  p.supportThreshold = kv.get_double("support_threshold", p.supportThreshold);
  p.debias = kv.get_bool("debias", p.debias);
  p.subsetBudget = kv.get_int("subset_budget", p.subsetBudget);
  p.validate();
  return p;
}

ExperimentConfig parse_experiment_config(const KeyValues& kv) {
  kv.require_known({"dictionary", "L", "M", "d", "dict_seed", "dict_file", "pair_unitary",
                    "k_min", "k_max", "algorithms", "trials", "master_seed", "success_tol",
                    "certify", "amplitude", "max_iterations", "residual_tol", "penalty",
                    "primal_tol", "dual_tol", "support_threshold", "debias", "subset_budget"});
  ExperimentConfig c;
  const std::string source = kv.get_string("dictionary", "generated");
  if (source == "generated")
    c.source = DictionarySource::Generated;
  else if (source == "file")
    c.source = DictionarySource::File;
  else if (source == "pair")
    c.source = DictionarySource::IncoherentPair;
  else
    throw InvalidInput("dictionary must be generated, file or pair (got '" + source + "')");

  c.L = kv.get_int("L", c.L);
  c.M = kv.get_int("M", c.M);
  c.d = kv.get_int("d", c.d);
  c.dictSeed = kv.get_uint("dict_seed", c.dictSeed);
  c.dictFile = kv.get_string("dict_file", "");
  if (c.source == DictionarySource::File && c.dictFile.empty())
    throw InvalidInput("dictionary = file needs dict_file");

  const std::string unitary = kv.get_string("pair_unitary", "identity");
  if (unitary != "identity" && unitary != "random")
    throw InvalidInput("pair_unitary must be identity or random");
  c.pairRandomUnitary = unitary == "random";

  c.kMin = kv.get_int("k_min", c.kMin);
  c.kMax = kv.get_int("k_max", c.kMax);
  if (kv.has("algorithms")) c.algorithms = parse_algorithm_list(kv.get_string("algorithms", ""));
  c.trialsPerCell = kv.get_int("trials", c.trialsPerCell);
  c.masterSeed = kv.get_uint("master_seed", c.masterSeed);
  c.successTol = kv.get_double("success_tol", c.successTol);
  c.certify = kv.get_bool("certify", c.certify);

  const std::string amp = kv.get_string("amplitude", "gaussian");
  if (amp == "gaussian")
    c.amplitude = AmplitudeModel::Gaussian;
  else if (amp == "unit")
    c.amplitude = AmplitudeModel::UnitBlocks;
  else
    throw InvalidInput("amplitude must be gaussian or unit");

  c.solver = parse_solver_params(kv);
  if (c.trialsPerCell < 1) throw InvalidInput("trials must be at least 1");
  if (!(c.successTol >= 0.0)) throw InvalidInput("success_tol must be non-negative");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(KeyValues::load(path));
}

BlockDictionary build_dictionary(const ExperimentConfig& c) {
  switch (c.source) {
    case DictionarySource::Generated: return random_block_dictionary(c.L, c.M, c.d, c.dictSeed);
    case DictionarySource::File: return load_matrix(c.dictFile);
    case DictionarySource::IncoherentPair: {
      std::optional<Matrix> U;
      if (c.pairRandomUnitary) U = random_unitary(c.d, c.dictSeed);
      const BasisPair pair = build_incoherent_pair(c.M, c.d, U);
      return concatenate(pair.phi, pair.psi);
    }
  }
  throw InvalidInput("unknown dictionary source");
}

std::uint64_t trial_seed(std::uint64_t master, Index k, Algorithm alg, Index trial) {
  return mix_seed({master, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(alg),
                   static_cast<std::uint64_t>(trial)});
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BSK_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

struct TrialOutcome {
  bool success = false;
  bool certified = false;
  double iterations = 0.0;
  double residual = 0.0;
};

bool scalar_granularity(Algorithm a) {
  return a == Algorithm::Omp || a == Algorithm::BasisPursuit;
}

TrialOutcome run_trial(const ExperimentConfig& c, const BlockDictionary& D, Index k,
                       Algorithm alg, Index trial) {
  TrialOutcome out;
  const BlockVector x0 =
      random_block_sparse_vector(D.shape(), k, trial_seed(c.masterSeed, k, alg, trial), c.amplitude);
  const Vector y = D.entries() * x0.values();

  if (c.certify) {
    try {
      out.certified = exact_recovery_condition(D, block_support(x0, 0.0)).holds;
    } catch (const InvalidInput&) {
      out.certified = false;
    }
  }

  const Index granularity = scalar_granularity(alg) ? 1 : D.d();
  const BlockVector truth = x0.reshaped(granularity);
  const SupportSet true_support = block_support(truth, 0.0);
  const Index level = true_support.size();

  try {
    const RecoveryResult r = run_algorithm(alg, D, y, level, c.solver);
    out.iterations = r.iterations;
    out.residual = r.residualNorm;
    const double err = (r.xHat.values() - x0.values()).norm();
    out.success = err <= c.successTol * x0.values().norm() && r.support.same_blocks(true_support);
  } catch (const InvalidInput&) {
    // Rank-deficient selections and k*d > L count as failures.
    out.residual = y.norm();
  }
  return out;
}

}  // namespace

std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& config) {
  return run_phase_transition(config, build_dictionary(config));
}

std::vector<PhaseCell> run_phase_transition(const ExperimentConfig& c, const BlockDictionary& D) {
  c.solver.validate();
  const Index M = D.shape().M();
  const Index kMax = c.kMax == 0 ? M : c.kMax;
  if (c.kMin < 1 || kMax > M || c.kMin > kMax)
    throw InvalidInput("k range [" + std::to_string(c.kMin) + ", " + std::to_string(kMax) +
                       "] must lie within [1, " + std::to_string(M) + "]");
  if (c.trialsPerCell < 1) throw InvalidInput("trials must be at least 1");

  std::vector<PhaseCell> cells;
  for (Index k = c.kMin; k <= kMax; ++k)
    for (Algorithm a : c.algorithms) {
      PhaseCell cell;
      cell.k = k;
      cell.algorithm = a;
      cell.skipped = a == Algorithm::Oracle && binomial(M, k) > c.solver.subsetBudget;
      cells.push_back(cell);
    }

  struct Task {
    std::size_t cell;
    Index trial;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (!cells[i].skipped)
      for (Index t = 0; t < c.trialsPerCell; ++t) tasks.push_back({i, t});

  std::vector<TrialOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const PhaseCell& cell = cells[tasks[i].cell];
      outcomes[i] = run_trial(c, D, cell.k, cell.algorithm, tasks[i].trial);
    }
  };
  const unsigned n = std::min<std::size_t>(worker_count(c.threads), std::max<std::size_t>(tasks.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }

  // Reduce in (cell, trial) order so the sums do not depend on scheduling.
  std::size_t pos = 0;
  for (PhaseCell& cell : cells) {
    if (cell.skipped) {
      cell.certificateRate = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double iters = 0.0, resid = 0.0;
    Index certified = 0;
    for (Index t = 0; t < c.trialsPerCell; ++t, ++pos) {
      const TrialOutcome& o = outcomes[pos];
      cell.successes += o.success ? 1 : 0;
      iters += o.iterations;
      resid += o.residual;
      if (o.certified) {
        ++certified;
        if (!o.success) ++cell.certifiedFailures;
      }
    }
    cell.trials = c.trialsPerCell;
    const double n_trials = static_cast<double>(cell.trials);
    cell.meanIterations = iters / n_trials;
    cell.meanResidual = resid / n_trials;
    cell.certificateRate = c.certify ? static_cast<double>(certified) / n_trials
                                     : std::numeric_limits<double>::quiet_NaN();
  }
  return cells;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCell>& cells) {
  out << "bsk-phase-v1\n"
      << "k,algorithm,trials,successes,success_rate,mean_iterations,mean_residual,"
         "certificate_rate,certified_failures,status\n";
  for (const PhaseCell& c : cells) {
    out << c.k << ',' << to_string(c.algorithm) << ',' << c.trials << ',' << c.successes << ','
        << format_real(c.successRate()) << ',' << format_real(c.meanIterations) << ','
        << format_real(c.meanResidual) << ',' << format_real(c.certificateRate) << ','
        << c.certifiedFailures << ',' << (c.skipped ? "skipped" : "ok") << '\n';
  }
}

std::vector<MonotonicityFlag> monotonicity_flags(const std::vector<PhaseCell>& cells,
                                                 double slack) {
  std::vector<MonotonicityFlag> flags;
  for (Algorithm a : {Algorithm::Bomp, Algorithm::L21}) {
    const PhaseCell* prev = nullptr;
    for (const PhaseCell& c : cells) {
      if (c.algorithm != a || c.skipped) continue;
      if (prev && c.successRate() - prev->successRate() > slack)
        flags.push_back({a, c.k, c.successRate() - prev->successRate()});
      prev = &c;
    }
  }
  return flags;
}

double GuaranteeComparison::scalarRatio() const {
  if (kMaxConventional == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(blockScalarLevel()) / static_cast<double>(kMaxConventional);
}

GuaranteeComparison compare_guarantees(const BlockDictionary& D) {
  GuaranteeComparison g;
  g.d = D.d();
  g.mu = coherence(D);
  g.muBlock = block_coherence(D);
  const SparsityGuarantee s = guarantee_from_coherence(g.mu, g.muBlock, g.d, D.shape().M());
  g.kMaxBlock = s.kBlock;
  g.kMaxConventional = s.kConventional;
  g.limitedByUniqueness = s.limitedByUniqueness;
  return g;
}

void write_guarantees(std::ostream& out, const GuaranteeComparison& g) {
  out << "d = " << g.d << '\n'
      << "mu = " << format_real(g.mu) << '\n'
      << "mu_block = " << format_real(g.muBlock) << '\n'
      << "k_max_block = " << g.kMaxBlock << '\n'
      << "k_max_block_scalar = " << g.blockScalarLevel() << '\n'
      << "k_max_conventional = " << g.kMaxConventional << '\n'
      << "scalar_ratio = " << format_real(g.scalarRatio()) << '\n'
      << "limited_by_uniqueness = " << (g.limitedByUniqueness ? "true" : "false") << '\n';
}

void write_guarantees_csv(std::ostream& out, const GuaranteeComparison& g, bool header) {
  if (header) out << "d,mu,mu_block,k_max_block,k_max_block_scalar,k_max_conventional,scalar_ratio\n";
  out << g.d << ',' << format_real(g.mu) << ',' << format_real(g.muBlock) << ',' << g.kMaxBlock
      << ',' << g.blockScalarLevel() << ',' << g.kMaxConventional << ','
      << format_real(g.scalarRatio()) << '\n';
}

}  // namespace bsk
