// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "bsk/coherence.hpp"
#include "bsk/dictionary.hpp"
#include "bsk/harness.hpp"
#include "bsk/random.hpp"
#include "bsk/recovery.hpp"
#include "bsk/uncertainty.hpp"

using namespace bsk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

BlockDictionary pair_dictionary(Index M, Index d, std::uint64_t seed) {
  const BasisPair p = build_incoherent_pair(M, d, random_unitary(d, seed));
  return concatenate(p.phi, p.psi);
}

bool admissible(Index k, double mu_block, Index d) {
  return static_cast<double>(k * d) < 0.5 * (1.0 / mu_block + static_cast<double>(d));
}

double rel_error(const BlockVector& a, const BlockVector& b) {
  return (a.values() - b.values()).norm() / b.values().norm();
}

// ---------------------------------------------------------------------------

Outcome optimal_pair_coherence() {
  double worst = 0.0;
  const std::vector<std::pair<Index, Index>> cases{{4, 2}, {8, 4}, {16, 2}};
  for (auto [M, d] : cases) {
    const BasisPair p = build_incoherent_pair(M, d, random_unitary(d, static_cast<std::uint64_t>(M * 100 + d)));
    const double N = static_cast<double>(M * d);
    worst = std::max(worst, std::abs(mutual_block_coherence(p.phi, p.psi) - 1.0 / std::sqrt(d * N)));
  }
  return {worst <= 1e-10, "max deviation " + fmt(worst)};
}

Outcome coherence_lower_bound() {
  Rng rng(2);
  double min_slack = 1e300;
  for (int t = 0; t < 200; ++t) {
    const Index d = Index{1} << rng.below(3);
    const Index M = 1 + rng.below(32 / d);
    const Index N = M * d;
    const BlockMatrix phi(random_unitary(N, rng.bits()), d);
    const BlockMatrix psi(random_unitary(N, rng.bits()), d);
    min_slack = std::min(min_slack, mutual_block_coherence(phi, psi) -
                                        1.0 / std::sqrt(static_cast<double>(d * N)));
  }
  return {min_slack >= -1e-12, "min(mu_B - 1/sqrt(dN)) = " + fmt(min_slack)};
}

Outcome coherence_ordering() {
  Rng rng(3);
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    const Index d = 1 + rng.below(4);
    const Index L = d + rng.below(33 - d);
    const Index M = 2 + rng.below(12);
    const BlockDictionary D = random_block_dictionary(L, M, d, rng.bits());
    const double muB = block_coherence(D);
    const double mu = coherence(D);
    if (muB < -1e-12 || muB > 1.0 + 1e-12 || muB > mu + 1e-12) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 200 dictionaries"};
}

// Families used by the guaranteed-recovery criteria. Each call draws a fresh
// dictionary, so random families are redrawn per instance.
struct Family {
  std::string name;
  std::function<BlockDictionary(std::uint64_t)> make;
};

std::vector<Family> recovery_families() {
  return {
      {"pair M=8 d=4", [](std::uint64_t s) { return pair_dictionary(8, 4, s); }},
      {"pair M=16 d=2", [](std::uint64_t s) { return pair_dictionary(16, 2, s); }},
      {"spike/fourier N=64", [](std::uint64_t s) { return pair_dictionary(64, 1, s); }},
      {"random L=128 M=16 d=2", [](std::uint64_t s) { return random_block_dictionary(128, 16, 2, s); }},
      {"random L=256 M=12 d=4", [](std::uint64_t s) { return random_block_dictionary(256, 12, 4, s); }},
  };
}

Outcome coherence_condition_recovery() {
  std::ostringstream detail;
  bool ok = true;
  const std::vector<Family> families = recovery_families();
  for (std::size_t i = 0; i < families.size(); ++i) {
    const Family& f = families[i];
    Rng rng(mix_seed({4, i}));
    int successes = 0, tried = 0, draws = 0;
    while (tried < 500) {
      if (++draws > 50000) return {false, f.name + ": condition never holds"};
      const BlockDictionary D = f.make(rng.bits());
      const SparsityGuarantee g = max_guaranteed_block_sparsity(D);
      if (g.kBlock < 1) continue;
      const Index k = 1 + rng.below(g.kBlock);
      if (!admissible(k, block_coherence(D), D.d())) continue;
      ++tried;
      const BlockVector x0 = random_block_sparse_vector(D.shape(), k, rng.bits());
      const RecoveryResult r = bomp(D, D.entries() * x0.values(), k);
      if (r.iterations == k && r.support.same_blocks(block_support(x0, 0.0)) &&
          rel_error(r.xHat, x0) <= 1e-8)
        ++successes;
    }
    ok = ok && successes == tried;
    detail << f.name << " " << successes << "/" << tried << "; ";
  }
  return {ok, detail.str()};
}

// Instances with the recovery certificate holding on the true support.
struct CertifiedInstance {
  BlockDictionary D;
  BlockVector x0;
  bool coherenceConditionHolds;
};

std::vector<CertifiedInstance> certified_instances(int count) {
  std::vector<CertifiedInstance> out;
  Rng rng(5);
  while (static_cast<int>(out.size()) < count) {
    const BlockDictionary D = random_block_dictionary(16, 8, 2, rng.bits());
    const Index k = 1 + rng.below(3);
    BlockVector x0 = random_block_sparse_vector(D.shape(), k, rng.bits());
    if (!exact_recovery_condition(D, block_support(x0, 0.0)).holds) continue;
    const bool coh = admissible(k, block_coherence(D), D.d());
    out.push_back({D, std::move(x0), coh});
  }
  return out;
}

Outcome certificate_recovery(const std::vector<CertifiedInstance>& instances) {
  int failures = 0, beyond = 0;
  for (const CertifiedInstance& in : instances) {
    const Vector y = in.D.entries() * in.x0.values();
    const SupportSet truth = block_support(in.x0, 0.0);
    const RecoveryResult a = bomp(in.D, y, truth.size());
    const RecoveryResult b = l21_minimize(in.D, y);
    const bool ok_a = a.support.same_blocks(truth) && rel_error(a.xHat, in.x0) <= 1e-6;
    const bool ok_b = b.support.same_blocks(truth) && rel_error(b.xHat, in.x0) <= 1e-6;
    failures += (ok_a && ok_b) ? 0 : 1;
    beyond += in.coherenceConditionHolds ? 0 : 1;
  }
  return {failures == 0 && beyond > 0,
          std::to_string(failures) + " failures in " + std::to_string(instances.size()) +
              " certified instances (" + std::to_string(beyond) +
              " outside the block-coherence condition)"};
}

Outcome bomp_selection_invariant(const std::vector<CertifiedInstance>& instances) {
  double worst = 0.0;
  int wrong = 0;
  for (const CertifiedInstance& in : instances) {
    const SupportSet truth = block_support(in.x0, 0.0);
    bomp(in.D, in.D.entries() * in.x0.values(), truth.size(), {}, [&](const BompStep& s) {
      double inside = 0.0, outside = 0.0;
      for (Index l = 0; l < s.scores.size(); ++l) {
        if (truth.contains(l))
          inside = std::max(inside, s.scores(l));
        else
          outside = std::max(outside, s.scores(l));
      }
      worst = std::max(worst, outside / inside);
      wrong += truth.contains(s.selected) ? 0 : 1;
    });
  }
  return {worst < 1.0 && wrong == 0,
          "max z = " + fmt(worst) + ", off-support selections " + std::to_string(wrong)};
}

Outcome uncertainty_relation() {
  Rng rng(7);
  double worst = 0.0;  // largest violation of either inequality
  for (int t = 0; t < 1000; ++t) {
    const Index d = Index{1} << rng.below(3);
    const Index M = 1 + rng.below(32 / d);
    const Index N = M * d;
    BlockMatrix phi(Matrix::Identity(N, N), d), psi = phi;
    BlockVector a = BlockVector::zeros(phi.shape());
    if (t % 2 == 0) {
      phi = BlockMatrix(random_unitary(N, rng.bits()), d);
      psi = BlockMatrix(random_unitary(N, rng.bits()), d);
      a = random_block_sparse_vector(phi.shape(), 1 + rng.below(M), rng.bits());
    } else {
      // Spike/Fourier pair with comb signals, which meet the bound with equality.
      const BasisPair p = build_incoherent_pair(M, d, random_unitary(d, rng.bits()));
      phi = p.phi;
      psi = p.psi;
      std::vector<Index> divisors;
      for (Index s = 1; s <= M; ++s)
        if (M % s == 0) divisors.push_back(s);
      const Index step = divisors[static_cast<std::size_t>(rng.below(static_cast<Index>(divisors.size())))];
      const Vector v = rng.complex_normal_vector(d);
      const Index offset = rng.below(step);
      for (Index l = offset; l < M; l += step) a.block(l) = v;
    }
    const UncertaintyReport r = uncertainty_check(phi.entries() * a.values(), phi, psi);
    worst = std::max({worst, r.geometricMean - r.arithmeticMean, r.blockBound - r.geometricMean});
  }

  const BasisPair p = build_incoherent_pair(8, 4, random_unitary(4, 77));
  Vector e1 = Vector::Zero(32);
  e1(0) = 1.0;
  const UncertaintyReport eq = uncertainty_check(e1, p.phi, p.psi);
  const double gap = std::abs(eq.geometricMean - eq.blockBound);
  return {worst <= 1e-9 && gap <= 1e-10,
          "max violation " + fmt(worst) + " over 1000 triples, equality gap " + fmt(gap)};
}

Outcome mixed_norm_bounds() {
  Rng rng(8);
  double worst = -1e300;
  for (int t = 0; t < 200; ++t) {
    const Index d = 1 + rng.below(3);
    const Index R = 1 + rng.below(6);
    const Index C = 1 + rng.below(6);
    const BlockMatrix A(rng.complex_normal_matrix(R * d, C * d), d);
    const double rc = rho_c(A), rr = rho_r(A);
    for (int v = 0; v < 100; ++v) {
      Vector x = rng.complex_normal_vector(C * d);
      // Mix in block-sparse vectors, which probe the extreme points of the l2/l1 ball.
      if (v % 3 == 0)
        for (Index l = 0; l < C; ++l)
          if (rng.below(2) == 0 && l != v % C) x.segment(l * d, d).setZero();
      const BlockVector bx(BlockShape(d, C), x);
      const BlockVector Ax(BlockShape(d, R), A.entries() * x);
      worst = std::max(worst, mixed_norm(Ax, MixedNorm::One) / mixed_norm(bx, MixedNorm::One) - rc);
      worst = std::max(worst, mixed_norm(Ax, MixedNorm::Inf) / mixed_norm(bx, MixedNorm::Inf) - rr);
    }
    worst = std::max(worst, mixed_operator_norm_lower_bound(A, MixedNorm::One, 2, rng.bits()) - rc);
    worst = std::max(worst, mixed_operator_norm_lower_bound(A, MixedNorm::Inf, 2, rng.bits()) - rr);
  }
  return {worst <= 1e-10, "max(ratio - bound) = " + fmt(worst)};
}

Outcome oracle_equivalence() {
  Rng rng(9);
  int instances = 0, mismatches = 0;
  double worst = 0.0;
  auto check = [&](const BlockDictionary& D, Index k) {
    const BlockVector x0 = random_block_sparse_vector(D.shape(), k, rng.bits());
    const Vector y = D.entries() * x0.values();
    const RecoveryResult o = oracle_support_search(D, y, k);
    const RecoveryResult b = bomp(D, y, k);
    const RecoveryResult l = l21_minimize(D, y);
    ++instances;
    const SupportSet so(D.shape().M(), o.support.sorted());
    if (!so.same_blocks(b.support) || !so.same_blocks(l.support)) ++mismatches;
    const double scale = x0.values().norm();
    worst = std::max({worst, (o.xHat.values() - b.xHat.values()).norm() / scale,
                      (o.xHat.values() - l.xHat.values()).norm() / scale});
  };

  for (int t = 0; t < 240; ++t) {
    const Index d = 1 + rng.below(2);
    const Index L = std::vector<Index>{64, 256, 512}[static_cast<std::size_t>(rng.below(3))];
    const Index M = 4 + rng.below(7);
    const BlockDictionary D = random_block_dictionary(L, M, d, rng.bits());
    const double muB = block_coherence(D);
    const Index k = 1 + rng.below(3);
    if (!admissible(k, muB, d)) continue;
    check(D, k);
  }
  const std::vector<std::pair<Index, Index>> pairs{{4, 1}, {5, 1}, {4, 2}, {5, 2}};
  for (auto [M, d] : pairs)
    for (int t = 0; t < 15; ++t) {
      const BlockDictionary D = pair_dictionary(M, d, rng.bits());
      const double muB = block_coherence(D);
      for (Index k = 1; k <= 3; ++k)
        if (admissible(k, muB, d)) check(D, k);
    }
  return {mismatches == 0 && worst <= 1e-6 && instances > 0,
          std::to_string(instances) + " instances, " + std::to_string(mismatches) +
              " support mismatches, max coefficient gap " + fmt(worst)};
}

Outcome block_advantage() {
  ExperimentConfig c;
  c.source = DictionarySource::IncoherentPair;
  c.M = 8;
  c.d = 4;
  c.dictSeed = 10;
  c.pairRandomUnitary = true;
  c.kMin = 1;
  c.kMax = 6;
  c.algorithms = {Algorithm::Bomp, Algorithm::Omp};
  c.trialsPerCell = 500;
  c.masterSeed = 10;
  const std::vector<PhaseCell> cells = run_phase_transition(c);

  std::ostringstream detail;
  bool found = false;
  for (Index k = c.kMin; k <= c.kMax; ++k) {
    double b = 0.0, o = 0.0;
    for (const PhaseCell& cell : cells)
      if (cell.k == k) (cell.algorithm == Algorithm::Bomp ? b : o) = cell.successRate();
    detail << "k=" << k << " bomp " << b << " omp " << o << "; ";
    found = found || (b >= 0.99 && o <= 0.9);
  }
  return {found, detail.str()};
}

#ifdef BSK_CLI_PATH
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_reproducibility() {
  namespace fs = std::filesystem;
  const fs::path work = fs::current_path() / "acceptance_cli";
  fs::remove_all(work);
  const std::string cli = BSK_CLI_PATH;

  std::ofstream(work.parent_path() / "acceptance_phase.cfg")
      << "dictionary = generated\nL = 16\nM = 8\nd = 2\nk_max = 4\ntrials = 20\n"
         "algorithms = bomp,l21,omp,oracle\ncertify = true\n";
  const std::string cfg = (work.parent_path() / "acceptance_phase.cfg").string();

  const std::vector<std::string> commands{
      "gen dict --L 24 --M 8 --d 3 --seed 11 --out D.bsk1",
      "gen signal --M 8 --d 3 --k 2 --seed 12 --out x.bsk1",
      "gen measure --dict D.bsk1 --x x.bsk1 --out y.bsk1",
      "gen pair --M 8 --d 2 --out-phi phi.bsk1 --out-psi psi.bsk1",
      "coherence --dict D.bsk1 --report coh.txt --csv grid.csv",
      "compare --dict D.bsk1 --out cmp.txt",
      "recover --alg bomp --dict D.bsk1 --y y.bsk1 --k 2 --out xb.bsk1 --report rb.txt --certify",
      "recover --alg l21 --dict D.bsk1 --y y.bsk1 --out xl.bsk1 --report rl.txt",
      "recover --alg oracle --dict D.bsk1 --y y.bsk1 --k 2 --out xo.bsk1 --report ro.txt",
      "uncertainty --phi phi.bsk1 --psi psi.bsk1 --sweep 50 13 --out sweep.csv",
      "phase --config " + cfg + " --out phase.csv",
  };

  std::vector<std::string> first;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = work / ("run" + std::to_string(run));
    fs::create_directories(dir);
    for (const std::string& cmd : commands) {
      const std::string line = "cd \"" + dir.string() + "\" && \"" + cli + "\" " + cmd;
      if (std::system(line.c_str()) != 0) return {false, "command failed: " + cmd};
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<std::string> contents;
    for (const fs::path& f : files) contents.push_back(f.filename().string() + "\n" + slurp(f));
    if (run == 0)
      first = std::move(contents);
    else if (contents != first)
      return {false, "outputs differ between runs"};
  }
  return {true, std::to_string(first.size()) + " output files byte-identical across two runs"};
}
#endif

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto start = clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": "
              << o.detail << " [" << fmt(secs) << "s]" << std::endl;
    failed += o.pass ? 0 : 1;
  };

  report(1, "optimal pair block-coherence", optimal_pair_coherence);
  report(2, "block-coherence lower bound", coherence_lower_bound);
  report(3, "0 <= mu_B <= mu", coherence_ordering);
  report(4, "recovery under the block-coherence condition", coherence_condition_recovery);
  const std::vector<CertifiedInstance> certified = certified_instances(500);
  report(5, "recovery under the exact recovery condition",
         [&] { return certificate_recovery(certified); });
  report(6, "BOMP selection ratio", [&] { return bomp_selection_invariant(certified); });
  report(7, "block uncertainty relation", uncertainty_relation);
  report(8, "mixed operator norm bounds", mixed_norm_bounds);
  report(9, "oracle / bomp / l21 agreement", oracle_equivalence);
  report(10, "block advantage on the incoherent pair", block_advantage);
#ifdef BSK_CLI_PATH
  report(11, "CLI reproducibility", cli_reproducibility);
#else
  report(11, "CLI reproducibility", [] { return Outcome{false, "built without the CLI"}; });
#endif
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
