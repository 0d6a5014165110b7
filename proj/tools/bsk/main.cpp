// bsk: command-line front end for the block-sparse recovery library.
//
// Exit codes: 0 success, 2 invalid input, 3 a solver did not converge.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsk/bsk1_io.hpp"
#include "bsk/coherence.hpp"
#include "bsk/dictionary.hpp"
#include "bsk/harness.hpp"
#include "bsk/keyvalue.hpp"
#include "bsk/recovery.hpp"
#include "bsk/uncertainty.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

// Writes to the named file, or to stdout when the name is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw bsk::InvalidInput("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string join_blocks(const std::vector<bsk::Index>& blocks) {
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(blocks[i] + 1);
  }
  return s.empty() ? "-" : s;
}

// --------------------------------------------------------------------------

struct CoherenceArgs {
  std::string dict, report, csv;
};

int run_coherence(const CoherenceArgs& a) {
  const bsk::CoherenceReport rep = bsk::coherence_report(bsk::load_matrix(a.dict));
  Output out(a.report);
  bsk::write_report(out.stream(), rep);
  if (!a.csv.empty()) {
    Output csv(a.csv);
    bsk::write_grid_csv(csv.stream(), rep);
  }
  return 0;
}

struct CompareArgs {
  std::string dict, out;
  bool csv = false;
};

int run_compare(const CompareArgs& a) {
  const bsk::GuaranteeComparison g = bsk::compare_guarantees(bsk::load_matrix(a.dict));
  Output out(a.out);
  if (a.csv)
    bsk::write_guarantees_csv(out.stream(), g);
  else
    bsk::write_guarantees(out.stream(), g);
  return 0;
}

struct RecoverArgs {
  std::string alg = "bomp", dict, y, params, out, report;
  std::optional<bsk::Index> k;
  bool certify = false;
};

void write_certificate(std::ostream& os, const bsk::BlockDictionary& D,
                       const bsk::RecoveryResult& r, bsk::Index budget) {
  if (r.support.empty()) {
    os << "certificate = none (empty support)\n";
    return;
  }
  try {
    const bsk::RecoveryCertificate erc = bsk::exact_recovery_condition(D, r.support);
    os << "erc_value = " << bsk::format_real(erc.value) << '\n'
       << "erc_holds = " << (erc.holds ? "true" : "false") << '\n';
  } catch (const bsk::RankDeficient& e) {
    os << "erc_value = nan\nerc_holds = false\nerc_error = " << e.what() << '\n';
  }
  const bsk::GuaranteeComparison g = bsk::compare_guarantees(D);
  const bsk::Index k = r.support.size();
  os << "mu_block = " << bsk::format_real(g.muBlock) << '\n'
     << "k_max_block = " << g.kMaxBlock << '\n'
     << "block_coherence_condition = " << (k <= g.kMaxBlock ? "true" : "false") << '\n';
  const bsk::UniquenessResult u = bsk::uniqueness_check(D, k, budget);
  os << "uniqueness = "
     << (u.verdict == bsk::UniquenessVerdict::Unique      ? "unique"
         : u.verdict == bsk::UniquenessVerdict::NotUnique ? "not-unique"
                                                          : "undecided")
     << '\n';
  if (u.witness) os << "uniqueness_witness = " << join_blocks(u.witness->sorted()) << '\n';
}

int run_recover(const RecoverArgs& a) {
  const bsk::Algorithm alg = bsk::parse_algorithm(a.alg);
  const bsk::BlockDictionary D = bsk::load_matrix(a.dict);
  const bsk::Vector y = bsk::load_vector(a.y);
  bsk::SolverParams params;
  if (!a.params.empty()) params = bsk::parse_solver_params(bsk::KeyValues::load(a.params));

  const bsk::RecoveryResult r = bsk::run_algorithm(alg, D, y, a.k, params);
  if (!a.out.empty()) bsk::save_vector(a.out, r.xHat);

  Output rep(a.report);
  std::ostream& os = rep.stream();
  os << "algorithm = " << bsk::to_string(alg) << '\n'
     << "block_length = " << r.xHat.shape().d() << '\n'
     << "support = " << join_blocks(r.support.indices()) << '\n'
     << "support_size = " << r.support.size() << '\n'
     << "iterations = " << r.iterations << '\n'
     << "residual = " << bsk::format_real(r.residualNorm) << '\n'
     << "converged = " << (r.converged ? "true" : "false") << '\n';
  if (a.certify) write_certificate(os, D.reshaped(r.xHat.shape().d()), r, params.subsetBudget);
  return r.converged ? 0 : kExitNotConverged;
}

struct GenArgs {
  bsk::Index L = 0, M = 0, d = 1, k = 0;
  std::uint64_t seed = 1;
  std::string out, outPhi, outPsi, unitary, amplitude = "gaussian", dict, x;
};

int run_gen_dict(const GenArgs& a) {
  bsk::save_matrix(a.out, bsk::random_block_dictionary(a.L, a.M, a.d, a.seed));
  return 0;
}

int run_gen_pair(const GenArgs& a) {
  std::optional<bsk::Matrix> U;
  if (!a.unitary.empty()) U = bsk::load_bsk1(a.unitary).entries;
  const bsk::BasisPair pair = bsk::build_incoherent_pair(a.M, a.d, U);
  bsk::save_matrix(a.outPhi, pair.phi);
  bsk::save_matrix(a.outPsi, pair.psi);
  return 0;
}

int run_gen_signal(const GenArgs& a) {
  const auto model =
      a.amplitude == "unit" ? bsk::AmplitudeModel::UnitBlocks : bsk::AmplitudeModel::Gaussian;
  if (a.amplitude != "unit" && a.amplitude != "gaussian")
    throw bsk::InvalidInput("amplitude must be gaussian or unit");
  bsk::save_vector(a.out, bsk::random_block_sparse_vector(bsk::BlockShape(a.d, a.M), a.k, a.seed, model));
  return 0;
}

int run_gen_measure(const GenArgs& a) {
  const bsk::BlockDictionary D = bsk::load_matrix(a.dict);
  const bsk::Vector x = bsk::load_vector(a.x);
  if (x.size() != D.cols()) throw bsk::InvalidInput("x length does not match dictionary columns");
  bsk::save_bsk1(a.out, D.entries() * x, 1);
  return 0;
}

struct UncertaintyArgs {
  std::string phi, psi, x, out;
  double tol = bsk::kDefaultSparsityTol;
  std::vector<std::uint64_t> sweep;
};

int run_uncertainty(const UncertaintyArgs& a) {
  const bsk::BlockMatrix phi = bsk::load_matrix(a.phi);
  const bsk::BlockMatrix psi = bsk::load_matrix(a.psi);
  Output out(a.out);
  if (!a.sweep.empty()) {
    const auto rows = bsk::uncertainty_sweep(phi, psi, static_cast<bsk::Index>(a.sweep[0]),
                                             a.sweep[1], a.tol);
    bsk::write_sweep_csv(out.stream(), rows);
    return 0;
  }
  if (a.x.empty()) throw bsk::InvalidInput("uncertainty needs --x or --sweep");
  bsk::write_report(out.stream(), bsk::uncertainty_check(bsk::load_vector(a.x), phi, psi, a.tol));
  return 0;
}

struct PhaseArgs {
  std::string config, out;
  unsigned threads = 0;
};

int run_phase(const PhaseArgs& a) {
  bsk::ExperimentConfig config = bsk::load_experiment_config(a.config);
  config.threads = a.threads;
  const auto cells = bsk::run_phase_transition(config);
  Output out(a.out);
  bsk::write_phase_csv(out.stream(), cells);
  for (const auto& f : bsk::monotonicity_flags(cells))
    std::cerr << "note: " << bsk::to_string(f.algorithm) << " success rate rises by "
              << bsk::format_real(f.increase) << " at k=" << f.k << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-sparse compressed sensing toolkit"};
  app.require_subcommand(1);
  int status = 0;

  CoherenceArgs coh;
  auto* c_coh = app.add_subcommand("coherence", "Coherence, block-coherence and sparsity guarantees");
  c_coh->add_option("--dict", coh.dict, "Dictionary (BSK1)")->required();
  c_coh->add_option("--report", coh.report, "Report file (default stdout)");
  c_coh->add_option("--csv", coh.csv, "Write the block-pair grid as CSV");
  c_coh->callback([&] { status = run_coherence(coh); });

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "Block vs conventional recovery guarantees");
  c_cmp->add_option("--dict", cmp.dict, "Dictionary (BSK1)")->required();
  c_cmp->add_option("--out", cmp.out, "Output file (default stdout)");
  c_cmp->add_flag("--csv", cmp.csv, "CSV instead of key-value text");
  c_cmp->callback([&] { status = run_compare(cmp); });

  RecoverArgs rec;
  auto* c_rec = app.add_subcommand("recover", "Recover x from y = D x");
  c_rec->add_option("--alg", rec.alg, "bomp | l21 | omp | bp | oracle")
      ->check(CLI::IsMember({"bomp", "l21", "omp", "bp", "oracle"}));
  c_rec->add_option("--dict", rec.dict, "Dictionary (BSK1)")->required();
  c_rec->add_option("--y", rec.y, "Measurement vector (BSK1)")->required();
  c_rec->add_option("--k", rec.k, "Sparsity (blocks; scalars for omp)");
  c_rec->add_option("--params", rec.params, "Solver parameter file (key = value)");
  c_rec->add_option("--out", rec.out, "Recovered coefficients (BSK1)");
  c_rec->add_option("--report", rec.report, "Report file (default stdout)");
  c_rec->add_flag("--certify", rec.certify, "Add recovery-guarantee certificates to the report");
  c_rec->callback([&] { status = run_recover(rec); });

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate dictionaries, basis pairs and signals");
  c_gen->require_subcommand(1);
  auto* g_dict = c_gen->add_subcommand("dict", "Random dictionary with orthonormal blocks");
  g_dict->add_option("--L", gen.L)->required();
  g_dict->add_option("--M", gen.M)->required();
  g_dict->add_option("--d", gen.d)->required();
  g_dict->add_option("--seed", gen.seed);
  g_dict->add_option("--out", gen.out)->required();
  g_dict->callback([&] { status = run_gen_dict(gen); });

  auto* g_pair = c_gen->add_subcommand("pair", "Identity / DFT-Kronecker basis pair");
  g_pair->add_option("--M", gen.M)->required();
  g_pair->add_option("--d", gen.d)->required();
  g_pair->add_option("--unitary", gen.unitary, "d x d unitary U (BSK1), default identity");
  g_pair->add_option("--out-phi", gen.outPhi)->required();
  g_pair->add_option("--out-psi", gen.outPsi)->required();
  g_pair->callback([&] { status = run_gen_pair(gen); });

  auto* g_sig = c_gen->add_subcommand("signal", "Random block k-sparse coefficient vector");
  g_sig->add_option("--M", gen.M)->required();
  g_sig->add_option("--d", gen.d)->required();
  g_sig->add_option("--k", gen.k)->required();
  g_sig->add_option("--seed", gen.seed);
  g_sig->add_option("--amplitude", gen.amplitude, "gaussian | unit");
  g_sig->add_option("--out", gen.out)->required();
  g_sig->callback([&] { status = run_gen_signal(gen); });

  auto* g_meas = c_gen->add_subcommand("measure", "y = D x");
  g_meas->add_option("--dict", gen.dict)->required();
  g_meas->add_option("--x", gen.x)->required();
  g_meas->add_option("--out", gen.out)->required();
  g_meas->callback([&] { status = run_gen_measure(gen); });

  UncertaintyArgs unc;
  auto* c_unc = app.add_subcommand("uncertainty", "Check the block uncertainty relation");
  c_unc->add_option("--phi", unc.phi)->required();
  c_unc->add_option("--psi", unc.psi)->required();
  c_unc->add_option("--x", unc.x, "Signal (BSK1)");
  c_unc->add_option("--tol", unc.tol, "Relative block sparsity tolerance");
  c_unc->add_option("--sweep", unc.sweep, "TRIALS SEED: random sweep, CSV output")
      ->expected(2);
  c_unc->add_option("--out", unc.out, "Output file (default stdout)");
  c_unc->callback([&] { status = run_uncertainty(unc); });

  PhaseArgs ph;
  auto* c_ph = app.add_subcommand("phase", "Monte-Carlo phase-transition experiment");
  c_ph->add_option("--config", ph.config, "Experiment config (key = value)")->required();
  c_ph->add_option("--out", ph.out, "CSV output (default stdout)");
  c_ph->add_option("--threads", ph.threads, "Worker threads (0 = auto, capped by BSK_THREADS)");
  c_ph->callback([&] { status = run_phase(ph); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const bsk::InvalidInput& e) {
    std::cerr << "bsk: " << e.what() << '\n';
    return kExitInvalid;
  }
  return status;
}
