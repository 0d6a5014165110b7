#include "bsk/uncertainty.hpp"

#include <cmath>
#include <ostream>

#include "bsk/coherence.hpp"
#include "bsk/dictionary.hpp"
#include "bsk/keyvalue.hpp"
#include "bsk/random.hpp"

namespace bsk {

namespace {

Index relative_sparsity(const BlockVector& v, double tol) {
  return block_support(v, tol).size();
}

}  // namespace

BlockVector expand_in_basis(const Vector& x, const BlockMatrix& phi) {
  if (!is_unitary(phi.entries(), kNormalizationTol)) throw InvalidInput("basis is not unitary");
  if (x.size() != phi.rows())
    throw InvalidInput("signal length does not match basis dimension");
  return BlockVector(phi.shape(), phi.entries().adjoint() * x);
}

UncertaintyReport uncertainty_check(const Vector& x, const BlockMatrix& phi,
                                    const BlockMatrix& psi, double tol) {
  if (tol < 0.0) throw InvalidInput("sparsity tolerance must be non-negative");
  if (x.size() == 0 || x.norm() == 0.0)
    throw InvalidInput("uncertainty relation is vacuous for x = 0");

  UncertaintyReport rep;
  rep.muBlock = mutual_block_coherence(phi, psi);
  rep.mu = mutual_coherence(phi, psi);
  const BlockVector a = expand_in_basis(x, phi);
  const BlockVector b = expand_in_basis(x, psi);
  rep.A = relative_sparsity(a, tol);
  rep.B = relative_sparsity(b, tol);
  rep.geometricMean = std::sqrt(static_cast<double>(rep.A) * static_cast<double>(rep.B));
  rep.arithmeticMean = 0.5 * static_cast<double>(rep.A + rep.B);
  const double d = static_cast<double>(phi.d());
  rep.blockBound = 1.0 / (d * rep.muBlock);
  rep.conventionalBound = 1.0 / (d * rep.mu);
  rep.holds = rep.geometricMean >= rep.blockBound - 1e-9;
  return rep;
}

BoundComparison conventional_uncertainty_comparison(const Vector& x, const BlockMatrix& phi,
                                                    const BlockMatrix& psi, double tol) {
  const UncertaintyReport rep = uncertainty_check(x, phi, psi, tol);
  return {rep.blockBound, rep.conventionalBound};
}

void write_report(std::ostream& out, const UncertaintyReport& r) {
  out << "A = " << r.A << '\n'
      << "B = " << r.B << '\n'
      << "arithmetic_mean = " << format_real(r.arithmeticMean) << '\n'
      << "geometric_mean = " << format_real(r.geometricMean) << '\n'
      << "mu_block = " << format_real(r.muBlock) << '\n'
      << "mu = " << format_real(r.mu) << '\n'
      << "block_bound = " << format_real(r.blockBound) << '\n'
      << "conventional_bound = " << format_real(r.conventionalBound) << '\n'
      << "holds = " << (r.holds ? "true" : "false") << '\n';
}

std::vector<SweepRow> uncertainty_sweep(const BlockMatrix& phi, const BlockMatrix& psi,
                                        Index trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw InvalidInput("sweep needs at least one trial");
  const double bound = 1.0 / (static_cast<double>(phi.d()) * mutual_block_coherence(phi, psi));
  const Index M = phi.shape().M();
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(trials));
  for (Index t = 0; t < trials; ++t) {
    Rng rng(mix_seed({seed, static_cast<std::uint64_t>(t)}));
    const Index k = 1 + rng.below(M);
    const BlockVector a = random_block_sparse_vector(phi.shape(), k, rng.bits());
    const Vector x = phi.entries() * a.values();
    const UncertaintyReport rep = uncertainty_check(x, phi, psi, tol);
    rows.push_back({t, rep.A, rep.B, rep.geometricMean, bound});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "trial,A,B,sqrtAB,bound\n";
  for (const SweepRow& r : rows)
    out << r.trial + 1 << ',' << r.A << ',' << r.B << ',' << format_real(r.sqrtAB) << ','
        << format_real(r.bound) << '\n';
}

}  // namespace bsk
