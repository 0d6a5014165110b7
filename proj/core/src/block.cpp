#include "bsk/block.hpp"

#include <algorithm>
#include <string>

#include "bsk/random.hpp"

namespace bsk {

BlockShape::BlockShape(Index d, Index M) : d_(d), M_(M) {
  if (d < 1 || M < 1)
    throw InvalidInput("block shape needs d >= 1 and M >= 1 (got d=" + std::to_string(d) +
                       ", M=" + std::to_string(M) + ")");
}

BlockShape BlockShape::covering(Index N, Index d) {
  if (d < 1 || N < d || N % d != 0)
    throw InvalidInput("length " + std::to_string(N) + " is not a positive multiple of d=" +
                       std::to_string(d));
  return BlockShape(d, N / d);
}

// ---------------------------------------------------------------------------

BlockVector::BlockVector(BlockShape shape, Vector values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape_.N())
    throw InvalidInput("block vector has " + std::to_string(values_.size()) +
                       " entries, shape needs " + std::to_string(shape_.N()));
}

BlockVector BlockVector::zeros(BlockShape shape) {
  return BlockVector(shape, Vector::Zero(shape.N()));
}

BlockVector BlockVector::reshaped(Index d) const {
  return BlockVector(BlockShape::covering(values_.size(), d), values_);
}

// ---------------------------------------------------------------------------

BlockMatrix::BlockMatrix(Matrix entries, Index d)
    : entries_(std::move(entries)), shape_(BlockShape::covering(entries_.cols(), d)) {}

Index BlockMatrix::row_blocks() const {
  if (!rows_partitioned())
    throw InvalidInput("matrix has " + std::to_string(rows()) +
                       " rows, not a multiple of block length d=" + std::to_string(d()));
  return rows() / d();
}

BlockMatrix BlockMatrix::adjoint() const {
  row_blocks();
  return BlockMatrix(entries_.adjoint(), d());
}

Matrix BlockMatrix::gather(const std::vector<Index>& blocks) const {
  Matrix out(rows(), static_cast<Index>(blocks.size()) * d());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out.middleCols(static_cast<Index>(i) * d(), d()) = block(blocks[i]);
  return out;
}

// ---------------------------------------------------------------------------

SupportSet::SupportSet(Index M) : M_(M), member_(static_cast<std::size_t>(M), false) {}

SupportSet::SupportSet(Index M, std::vector<Index> indices) : SupportSet(M) {
  for (Index l : indices)
    if (!insert(l)) throw InvalidInput("duplicate block index " + std::to_string(l + 1));
}

bool SupportSet::insert(Index l) {
  if (l < 0 || l >= M_)
    throw InvalidInput("block index " + std::to_string(l + 1) + " outside [1, " +
                       std::to_string(M_) + "]");
  if (member_[static_cast<std::size_t>(l)]) return false;
  member_[static_cast<std::size_t>(l)] = true;
  order_.push_back(l);
  return true;
}

bool SupportSet::contains(Index l) const {
  return l >= 0 && l < M_ && member_[static_cast<std::size_t>(l)];
}

std::vector<Index> SupportSet::sorted() const {
  std::vector<Index> s = order_;
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<Index> SupportSet::complement() const {
  std::vector<Index> c;
  for (Index l = 0; l < M_; ++l)
    if (!member_[static_cast<std::size_t>(l)]) c.push_back(l);
  return c;
}

bool SupportSet::same_blocks(const SupportSet& other) const {
  return M_ == other.M_ && member_ == other.member_;
}

// ---------------------------------------------------------------------------

RealVector block_l2_norms(const BlockVector& x) {
  const Index M = x.shape().M();
  RealVector v(M);
  for (Index l = 0; l < M; ++l) v(l) = x.block(l).stableNorm();
  return v;
}

double mixed_norm(const BlockVector& x, MixedNorm p) {
  const RealVector v = block_l2_norms(x);
  switch (p) {
    case MixedNorm::One: return v.sum();
    case MixedNorm::Two: return v.norm();
    case MixedNorm::Inf: return v.maxCoeff();
  }
  return 0.0;
}

Index block_sparsity(const BlockVector& x, double tol) {
  if (tol < 0.0) throw InvalidInput("sparsity tolerance must be non-negative");
  const RealVector v = block_l2_norms(x);
  return static_cast<Index>((v.array() > tol).count());
}

SupportSet block_support(const BlockVector& x, double rel_tol) {
  const RealVector v = block_l2_norms(x);
  SupportSet s(x.shape().M());
  const double cutoff = rel_tol * v.maxCoeff();
  for (Index l = 0; l < v.size(); ++l)
    if (v(l) > cutoff) s.insert(l);
  return s;
}

double spectral_norm(const Eigen::Ref<const Matrix>& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

namespace {

// Spectral norm of every d x d block, rows x cols in block units.
RealMatrix block_spectral_grid(const BlockMatrix& A) {
  const Index R = A.row_blocks();
  const Index M = A.shape().M();
  RealMatrix g(R, M);
  for (Index l = 0; l < M; ++l)
    for (Index r = 0; r < R; ++r) g(r, l) = spectral_norm(A.block(r, l));
  return g;
}

double ratio(const BlockMatrix& A, const Vector& x, MixedNorm p) {
  const Index d = A.d();
  const BlockVector in(BlockShape::covering(x.size(), d), x);
  const BlockVector out(BlockShape::covering(A.rows(), d), A.entries() * x);
  const double den = mixed_norm(in, p);
  return den > 0.0 ? mixed_norm(out, p) / den : 0.0;
}

constexpr int kAscentSteps = 200;

// Maximise sum_r ||A[r,l] u|| over unit u. The objective is convex, so moving
// to the normalised (sub)gradient never decreases it.
Vector ascend_column(const BlockMatrix& A, Index l, Vector u) {
  const Index R = A.row_blocks();
  double last = -1.0;
  for (int step = 0; step < kAscentSteps; ++step) {
    Vector g = Vector::Zero(A.d());
    double value = 0.0;
    for (Index r = 0; r < R; ++r) {
      const Vector w = A.block(r, l) * u;
      const double n = w.norm();
      value += n;
      if (n > 0.0) g += A.block(r, l).adjoint() * w / n;
    }
    const double gn = g.norm();
    if (gn == 0.0 || value <= last * (1.0 + 1e-15)) break;
    last = value;
    u = g / gn;
  }
  return u;
}

// Maximise ||sum_l A[r,l] x[l]|| over x with unit-norm blocks.
Vector ascend_row(const BlockMatrix& A, Index r, Vector x) {
  const Index d = A.d();
  const Index M = A.shape().M();
  double last = -1.0;
  for (int step = 0; step < kAscentSteps; ++step) {
    const Vector y = A.entries().middleRows(r * d, d) * x;
    const double value = y.norm();
    if (value == 0.0 || value <= last * (1.0 + 1e-15)) break;
    last = value;
    for (Index l = 0; l < M; ++l) {
      const Vector g = A.block(r, l).adjoint() * y;
      const double gn = g.norm();
      if (gn > 0.0) x.segment(l * d, d) = g / gn;
    }
  }
  return x;
}

}  // namespace

double rho_c(const BlockMatrix& A) {
  const RealMatrix g = block_spectral_grid(A);
  return g.colwise().sum().maxCoeff();
}

double rho_r(const BlockMatrix& A) {
  const RealMatrix g = block_spectral_grid(A);
  return g.rowwise().sum().maxCoeff();
}

double mixed_operator_norm_lower_bound(const BlockMatrix& A, MixedNorm p, Index trials,
                                       std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("operator norm estimate needs at least one trial");
  if (p == MixedNorm::Two)
    throw InvalidInput("mixed operator norm estimate supports p = 1 and p = inf only");
  const Index R = A.row_blocks();
  const Index d = A.d();
  const Index M = A.shape().M();
  const Index N = A.cols();

  Rng rng(seed);
  double best = 0.0;
  for (Index t = 0; t < trials; ++t) {
    Vector x = rng.complex_normal_vector(N);
    best = std::max(best, ratio(A, x, p));

    // Extreme points of the unit ball: a single unit block for p = 1, all
    // blocks unit-norm for p = inf.
    if (p == MixedNorm::One) {
      const Index l = t % M;
      Vector u = rng.complex_normal_vector(d);
      u.normalize();
      u = ascend_column(A, l, u);
      Vector full = Vector::Zero(N);
      full.segment(l * d, d) = u;
      best = std::max(best, ratio(A, full, p));
    } else {
      const Index r = t % R;
      for (Index l = 0; l < M; ++l) x.segment(l * d, d).normalize();
      x = ascend_row(A, r, x);
      best = std::max(best, ratio(A, x, p));
    }
  }
  return best;
}

bool has_orthonormal_columns(const Eigen::Ref<const Matrix>& Q, double tol) {
  const Matrix gram = Q.adjoint() * Q;
  const Matrix diff = gram - Matrix::Identity(Q.cols(), Q.cols());
  return diff.size() == 0 || diff.cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Eigen::Ref<const Matrix>& U, double tol) {
  return U.rows() == U.cols() && has_orthonormal_columns(U, tol);
}

}  // namespace bsk
