#include "bsk/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "bsk/random.hpp"

namespace bsk {

Matrix OrthonormalizedDictionary::W() const {
  const Index d = A.d();
  const Index N = A.cols();
  Matrix w = Matrix::Zero(N, N);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Index off = static_cast<Index>(l) * d;
    w.block(off, off, d, d) = weights[l];
  }
  return w;
}

BlockVector OrthonormalizedDictionary::transport(const BlockVector& x) const {
  if (!(x.shape() == A.shape())) throw InvalidInput("vector shape does not match dictionary");
  BlockVector c = BlockVector::zeros(x.shape());
  for (std::size_t l = 0; l < weights.size(); ++l)
    c.block(static_cast<Index>(l)) = weights[l] * x.block(static_cast<Index>(l));
  return c;
}

OrthonormalizedDictionary orthonormalize_blocks(const BlockDictionary& D) {
  const Index d = D.d();
  const Index M = D.shape().M();
  if (D.rows() < d)
    throw RankDeficient("blocks of width " + std::to_string(d) + " cannot have full rank with " +
                        std::to_string(D.rows()) + " rows");

  Matrix a(D.rows(), D.cols());
  std::vector<Matrix> weights;
  weights.reserve(static_cast<std::size_t>(M));
  for (Index l = 0; l < M; ++l) {
    Eigen::HouseholderQR<Matrix> qr(D.block(l));
    Matrix q = qr.householderQ() * Matrix::Identity(D.rows(), d);
    Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();

    Eigen::JacobiSVD<Matrix> svd(r);
    const auto& sv = svd.singularValues();
    if (!(sv(d - 1) > 1e-10 * sv(0)))
      throw RankDeficient("block " + std::to_string(l + 1) + " does not have full column rank");

    // Rotate phases so that diag(W_l) is real positive: D[l] = (Q P)(P^H R).
    for (Index i = 0; i < d; ++i) {
      const cplx rii = r(i, i);
      const cplx phase = rii / std::abs(rii);
      q.col(i) *= phase;
      r.row(i) *= std::conj(phase);
      r(i, i) = std::abs(rii);
    }
    a.middleCols(l * d, d) = q;
    weights.push_back(std::move(r));
  }
  return {BlockDictionary(std::move(a), d), std::move(weights)};
}

Matrix dft_matrix(Index M) {
  if (M < 1) throw InvalidInput("DFT size must be positive");
  Matrix F(M, M);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  for (Index l = 0; l < M; ++l)
    for (Index r = 0; r < M; ++r) {
      // Reduce l*r mod M first so the angle stays in [0, 2 pi).
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((l * r) % M) /
                           static_cast<double>(M);
      F(l, r) = std::polar(scale, angle);
    }
  return F;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

BlockMatrix concatenate(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.rows() != b.rows() || a.d() != b.d())
    throw InvalidInput("cannot concatenate matrices with different rows or block length");
  Matrix m(a.rows(), a.cols() + b.cols());
  m << a.entries(), b.entries();
  return BlockMatrix(std::move(m), a.d());
}

BasisPair build_incoherent_pair(Index M, Index d, const std::optional<Matrix>& U) {
  const BlockShape shape(d, M);
  Matrix u = Matrix::Identity(d, d);
  if (U) {
    if (U->rows() != d || U->cols() != d)
      throw InvalidInput("U must be " + std::to_string(d) + " x " + std::to_string(d));
    if (!is_unitary(*U)) throw InvalidInput("U is not unitary");
    u = *U;
  }
  const Index N = shape.N();
  return {BlockMatrix(Matrix::Identity(N, N), d), BlockMatrix(kronecker(dft_matrix(M), u), d)};
}

Index binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Index c = 1;
  for (Index i = 1; i <= k; ++i) {
    // c * (n - k + i) / i is exact at each step; guard the multiplication.
    const Index g = std::gcd(c, i);
    const Index num = n - k + i;
    const Index c1 = c / g;
    const Index den = i / g;
    if (c1 > std::numeric_limits<Index>::max() / num) return std::numeric_limits<Index>::max();
    c = c1 * (num / den);
  }
  return c;
}

UniquenessResult uniqueness_check(const BlockDictionary& D, Index k, Index budget) {
  if (k < 1) throw InvalidInput("uniqueness check needs k >= 1");
  const Index M = D.shape().M();
  const Index size = std::min(2 * k, M);

  UniquenessResult result;
  if (binomial(M, size) > budget) {
    result.verdict = UniquenessVerdict::Undecided;
    return result;
  }

  result.verdict = UniquenessVerdict::Unique;
  for_each_subset(M, size, [&](const std::vector<Index>& subset) {
    ++result.subsetsChecked;
    const Matrix cols = D.gather(subset);
    bool deficient = cols.cols() > cols.rows();
    if (!deficient) {
      Eigen::ColPivHouseholderQR<Matrix> qr(cols);
      qr.setThreshold(1e-10);
      deficient = qr.rank() < cols.cols();
    }
    if (deficient) {
      result.verdict = UniquenessVerdict::NotUnique;
      result.witness = SupportSet(M, subset);
      return false;
    }
    return true;
  });
  return result;
}

BlockDictionary random_block_dictionary(Index L, Index M, Index d, std::uint64_t seed) {
  const BlockShape shape(d, M);
  if (L < d) throw InvalidInput("need L >= d for orthonormal blocks");
  Rng rng(seed);
  const BlockDictionary raw(rng.complex_normal_matrix(L, shape.N()), d);
  return orthonormalize_blocks(raw).A;
}

BlockVector random_block_sparse_vector(BlockShape shape, Index k, std::uint64_t seed,
                                       AmplitudeModel model) {
  const Index M = shape.M();
  if (k < 0 || k > M)
    throw InvalidInput("sparsity k=" + std::to_string(k) + " outside [0, " + std::to_string(M) +
                       "]");
  Rng rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(M));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    const Index j = i + rng.below(M - i);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::sort(order.begin(), order.begin() + k);

  BlockVector x = BlockVector::zeros(shape);
  for (Index i = 0; i < k; ++i) {
    const Index l = order[static_cast<std::size_t>(i)];
    Vector b = rng.complex_normal_vector(shape.d());
    if (model == AmplitudeModel::UnitBlocks) b.normalize();
    x.block(l) = b;
  }
  return x;
}

}  // namespace bsk
