#include "bsk/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bsk/keyvalue.hpp"

namespace bsk {

void require_unit_columns(const BlockDictionary& D, double tol) {
  for (Index j = 0; j < D.cols(); ++j) {
    const double n = D.entries().col(j).norm();
    if (std::abs(n - 1.0) > tol)
      throw InvalidInput("column " + std::to_string(j + 1) + " has norm " + format_real(n) +
                         ", expected unit norm");
  }
}

void require_orthonormal_blocks(const BlockDictionary& D, double tol) {
  for (Index l = 0; l < D.shape().M(); ++l)
    if (!has_orthonormal_columns(D.block(l), tol))
      throw InvalidInput("block " + std::to_string(l + 1) +
                         " does not have orthonormal columns; orthonormalize blocks first");
}

double coherence(const BlockDictionary& D) {
  require_unit_columns(D);
  const Matrix gram = D.entries().adjoint() * D.entries();
  double mu = 0.0;
  for (Index r = 0; r < gram.cols(); ++r)
    for (Index l = 0; l < gram.rows(); ++l)
      if (l != r) mu = std::max(mu, std::abs(gram(l, r)));
  return mu;
}

RealMatrix block_coherence_grid(const BlockDictionary& D) {
  require_orthonormal_blocks(D);
  const Index M = D.shape().M();
  const double inv_d = 1.0 / static_cast<double>(D.d());
  RealMatrix grid(M, M);
  for (Index l = 0; l < M; ++l) {
    grid(l, l) = inv_d * spectral_norm(D.block(l).adjoint() * D.block(l));
    for (Index r = l + 1; r < M; ++r) {
      // rho(B^H) = rho(B), so the grid is symmetric.
      grid(l, r) = inv_d * spectral_norm(D.block(l).adjoint() * D.block(r));
      grid(r, l) = grid(l, r);
    }
  }
  return grid;
}

namespace {

double off_diagonal_max(const RealMatrix& grid) {
  double m = 0.0;
  for (Index r = 0; r < grid.cols(); ++r)
    for (Index l = 0; l < grid.rows(); ++l)
      if (l != r) m = std::max(m, grid(l, r));
  return m;
}

void require_unitary_pair(const BlockMatrix& phi, const BlockMatrix& psi) {
  if (!(phi.shape() == psi.shape()) || phi.rows() != psi.rows())
    throw InvalidInput("basis pair must share the same block shape");
  if (!is_unitary(phi.entries(), kNormalizationTol))
    throw InvalidInput("first basis (Phi) is not unitary");
  if (!is_unitary(psi.entries(), kNormalizationTol))
    throw InvalidInput("second basis (Psi) is not unitary");
}

// Largest k >= 0 with k * step < bound.
Index largest_below(double bound, Index step) {
  if (!(bound > 0.0)) return 0;
  Index k = static_cast<Index>(std::floor(bound / static_cast<double>(step)));
  while (k > 0 && static_cast<double>(k * step) >= bound) --k;
  while (static_cast<double>((k + 1) * step) < bound) ++k;
  return k;
}

}  // namespace

double block_coherence(const BlockDictionary& D) {
  return off_diagonal_max(block_coherence_grid(D));
}

double mutual_block_coherence(const BlockMatrix& phi, const BlockMatrix& psi) {
  require_unitary_pair(phi, psi);
  const Index M = phi.shape().M();
  const double inv_d = 1.0 / static_cast<double>(phi.d());
  double m = 0.0;
  for (Index l = 0; l < M; ++l)
    for (Index r = 0; r < M; ++r)
      m = std::max(m, inv_d * spectral_norm(phi.block(l).adjoint() * psi.block(r)));
  return m;
}

double mutual_coherence(const BlockMatrix& phi, const BlockMatrix& psi) {
  require_unitary_pair(phi, psi);
  return (phi.entries().adjoint() * psi.entries()).cwiseAbs().maxCoeff();
}

namespace {

// QR of the support blocks after the size and rank checks.
Eigen::ColPivHouseholderQR<Matrix> factor_support(const BlockDictionary& D,
                                                  const SupportSet& support) {
  const Index d = D.d();
  if (support.bound() != D.shape().M())
    throw InvalidInput("support is defined over a different number of blocks");
  if (support.empty()) throw InvalidInput("support must contain at least one block");
  if (support.size() * d > D.rows())
    throw RankDeficient("support spans " + std::to_string(support.size() * d) +
                        " columns but there are only " + std::to_string(D.rows()) + " rows");

  Eigen::ColPivHouseholderQR<Matrix> qr(D.gather(support.indices()));
  qr.setThreshold(1e-10);
  if (qr.rank() < qr.cols())
    throw RankDeficient("blocks in the support are linearly dependent (rank " +
                        std::to_string(qr.rank()) + " < " + std::to_string(qr.cols()) + ")");
  return qr;
}

}  // namespace

BlockMatrix recovery_cross_matrix(const BlockDictionary& D, const SupportSet& support) {
  const auto qr = factor_support(D, support);
  if (support.size() == D.shape().M()) throw InvalidInput("support covers every block");
  return BlockMatrix(qr.solve(D.gather(support.complement())), D.d());
}

RecoveryCertificate exact_recovery_condition(const BlockDictionary& D, const SupportSet& support) {
  RecoveryCertificate cert;
  if (support.size() == D.shape().M()) {
    factor_support(D, support);
    cert.value = 0.0;
  } else {
    cert.value = rho_c(recovery_cross_matrix(D, support));
  }
  cert.holds = cert.value < 1.0;
  return cert;
}

SparsityGuarantee guarantee_from_coherence(double mu, double mu_block, Index d, Index M) {
  SparsityGuarantee g;
  if (mu_block <= kZeroCoherence) {
    g.kBlock = M / 2;
    g.limitedByUniqueness = true;
  } else {
    g.kBlock = largest_below(0.5 * (1.0 / mu_block + static_cast<double>(d)), d);
  }
  if (mu <= kZeroCoherence)
    g.kConventional = (M * d) / 2;
  else
    g.kConventional = largest_below(0.5 * (1.0 / mu + 1.0), 1);
  return g;
}

SparsityGuarantee max_guaranteed_block_sparsity(const BlockDictionary& D) {
  return guarantee_from_coherence(coherence(D), block_coherence(D), D.d(), D.shape().M());
}

CoherenceReport coherence_report(const BlockDictionary& D) {
  CoherenceReport rep;
  rep.d = D.d();
  rep.M = D.shape().M();
  rep.mu = coherence(D);
  rep.grid = block_coherence_grid(D);
  rep.muBlock = off_diagonal_max(rep.grid);
  const SparsityGuarantee g = guarantee_from_coherence(rep.mu, rep.muBlock, rep.d, rep.M);
  rep.kMaxBlock = g.kBlock;
  rep.kMaxConventional = g.kConventional;
  rep.limitedByUniqueness = g.limitedByUniqueness;
  return rep;
}

void write_report(std::ostream& out, const CoherenceReport& r) {
  out << "d = " << r.d << '\n'
      << "M = " << r.M << '\n'
      << "mu = " << format_real(r.mu) << '\n'
      << "mu_block = " << format_real(r.muBlock) << '\n'
      << "k_max_block = " << r.kMaxBlock << '\n'
      << "k_max_conventional = " << r.kMaxConventional << '\n'
      << "k_max_block_scalar = " << r.kMaxBlock * r.d << '\n'
      << "limited_by_uniqueness = " << (r.limitedByUniqueness ? "true" : "false") << '\n';
}

void write_grid_csv(std::ostream& out, const CoherenceReport& r) {
  out << "l,r,rho_over_d\n";
  for (Index l = 0; l < r.grid.rows(); ++l)
    for (Index c = 0; c < r.grid.cols(); ++c)
      out << l + 1 << ',' << c + 1 << ',' << format_real(r.grid(l, c)) << '\n';
}

}  // namespace bsk
