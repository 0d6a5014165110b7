#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bsk/block.hpp"

namespace bsk {

/// Default number of subsets an exhaustive search may visit.
inline constexpr Index kDefaultSubsetBudget = 1'000'000;

/// D = A W with orthonormal blocks A[l] and block-diagonal W = diag(W_0, ..., W_{M-1}).
struct OrthonormalizedDictionary {
  BlockDictionary A;
  std::vector<Matrix> weights;  ///< W_l, upper triangular with real positive diagonal

  /// Dense N x N block-diagonal W.
  Matrix W() const;

  /// c = W x. Block l of c depends only on block l of x, so block sparsity is preserved.
  BlockVector transport(const BlockVector& x) const;
};

/// Per-block QR with the diagonal of each W_l made real positive.
/// Throws RankDeficient naming the first block without full column rank.
OrthonormalizedDictionary orthonormalize_blocks(const BlockDictionary& D);

/// Unitary M-point DFT, F(l, r) = exp(+2 pi i l r / M) / sqrt(M) with 0-based l, r.
Matrix dft_matrix(Index M);

/// a (x) b
Matrix kronecker(const Matrix& a, const Matrix& b);

/// [a b], keeping the block length.
BlockMatrix concatenate(const BlockMatrix& a, const BlockMatrix& b);

struct BasisPair {
  BlockMatrix phi;
  BlockMatrix psi;
};

/// Phi = I_N and Psi = F_M (x) U with U = I_d unless given. Throws if U is not d x d unitary.
BasisPair build_incoherent_pair(Index M, Index d, const std::optional<Matrix>& U = std::nullopt);

enum class UniquenessVerdict { Unique, NotUnique, Undecided };

struct UniquenessResult {
  UniquenessVerdict verdict = UniquenessVerdict::Undecided;
  std::optional<SupportSet> witness;  ///< first rank-deficient block set, lexicographic order
  Index subsetsChecked = 0;

  bool unique() const { return verdict == UniquenessVerdict::Unique; }
};

/// Every block k-sparse representation y = D x is unique iff every set of
/// min(2k, M) blocks has full column rank. Decided by exhaustive enumeration;
/// if C(M, min(2k, M)) exceeds `budget` the verdict is Undecided.
UniquenessResult uniqueness_check(const BlockDictionary& D, Index k,
                                  Index budget = kDefaultSubsetBudget);

/// C(n, k), saturating at INT64_MAX.
Index binomial(Index n, Index k);

/// Visits k-subsets of [0, n) in lexicographic order until `visit` returns false.
template <typename Visit>
void for_each_subset(Index n, Index k, Visit&& visit) {
  std::vector<Index> s(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  while (true) {
    if (!visit(static_cast<const std::vector<Index>&>(s))) return;
    Index i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++s[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// L x (M d) complex Gaussian dictionary with every block orthonormalized.
BlockDictionary random_block_dictionary(Index L, Index M, Index d, std::uint64_t seed);

enum class AmplitudeModel {
  Gaussian,   ///< i.i.d. standard complex normal entries
  UnitBlocks  ///< Gaussian direction, each nonzero block scaled to unit norm
};

/// Uniformly random k of M blocks, filled per `model`.
BlockVector random_block_sparse_vector(BlockShape shape, Index k, std::uint64_t seed,
                                       AmplitudeModel model = AmplitudeModel::Gaussian);

}  // namespace bsk
