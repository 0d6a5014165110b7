#pragma once

// Block-structured vectors and matrices.
//
// Blocks are contiguous runs of length d. Block indices are 0-based in the
// library API; every piece of user-facing output (CLI reports, CSV files)
// prints them 1-based, i.e. block l of the API is block l+1 on screen.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bsk/errors.hpp"

namespace bsk {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Partition grid: M blocks of length d, N = M*d.
class BlockShape {
 public:
  BlockShape(Index d, Index M);

  /// Shape with block length d covering a length-N axis; N must be a multiple of d.
  static BlockShape covering(Index N, Index d);

  Index d() const { return d_; }
  Index M() const { return M_; }
  Index N() const { return d_ * M_; }

  bool operator==(const BlockShape&) const = default;

 private:
  Index d_;
  Index M_;
};

class BlockVector {
 public:
  BlockVector(BlockShape shape, Vector values);

  static BlockVector zeros(BlockShape shape);

  const BlockShape& shape() const { return shape_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  auto block(Index l) const { return values_.segment(l * shape_.d(), shape_.d()); }
  auto block(Index l) { return values_.segment(l * shape_.d(), shape_.d()); }

  /// Same coefficients viewed with a different block length.
  BlockVector reshaped(Index d) const;

 private:
  BlockShape shape_;
  Vector values_;
};

/// Dense L x N matrix whose columns are grouped into M blocks of width d.
/// Operations that also need d x d row blocks check rows() % d themselves.
class BlockMatrix {
 public:
  BlockMatrix(Matrix entries, Index d);

  Index rows() const { return entries_.rows(); }
  Index cols() const { return entries_.cols(); }
  Index d() const { return shape_.d(); }
  const BlockShape& shape() const { return shape_; }
  const Matrix& entries() const { return entries_; }

  /// Column block D[l], an L x d view.
  auto block(Index l) const { return entries_.middleCols(l * d(), d()); }

  /// The d x d block A[r, l]; requires rows() % d == 0.
  auto block(Index r, Index l) const { return entries_.block(r * d(), l * d(), d(), d()); }

  bool rows_partitioned() const { return rows() % d() == 0; }
  Index row_blocks() const;

  /// Conjugate transpose, keeping block length d. Requires partitioned rows.
  BlockMatrix adjoint() const;

  BlockMatrix reshaped(Index d) const { return BlockMatrix(entries_, d); }

  /// Columns of the listed blocks, in the order given.
  Matrix gather(const std::vector<Index>& blocks) const;

 private:
  Matrix entries_;
  BlockShape shape_;
};

using BlockDictionary = BlockMatrix;

/// Distinct block indices in [0, M), kept in insertion order so that the
/// greedy selection order of BOMP is preserved.
class SupportSet {
 public:
  explicit SupportSet(Index M);
  SupportSet(Index M, std::vector<Index> indices);

  /// Returns false when l is already present.
  bool insert(Index l);
  bool contains(Index l) const;

  Index bound() const { return M_; }
  Index size() const { return static_cast<Index>(order_.size()); }
  bool empty() const { return order_.empty(); }
  const std::vector<Index>& indices() const { return order_; }
  std::vector<Index> sorted() const;
  std::vector<Index> complement() const;

  auto begin() const { return order_.begin(); }
  auto end() const { return order_.end(); }

  /// Set equality, ignoring insertion order.
  bool same_blocks(const SupportSet& other) const;

 private:
  Index M_;
  std::vector<Index> order_;
  std::vector<bool> member_;
};

enum class MixedNorm { One, Two, Inf };

RealVector block_l2_norms(const BlockVector& x);

/// ||x||_{2,p}: the p-norm of the vector of block Euclidean norms.
double mixed_norm(const BlockVector& x, MixedNorm p);

/// Number of blocks whose Euclidean norm exceeds tol (absolute). tol = 0 gives ||x||_{2,0}.
Index block_sparsity(const BlockVector& x, double tol = 0.0);

/// Blocks whose norm exceeds rel_tol * (largest block norm), ascending.
SupportSet block_support(const BlockVector& x, double rel_tol);

/// Largest singular value.
double spectral_norm(const Eigen::Ref<const Matrix>& A);

/// max over block columns l of sum_r rho(A[r, l]).
double rho_c(const BlockMatrix& A);

/// max over block rows r of sum_l rho(A[r, l]).
double rho_r(const BlockMatrix& A);

/// Largest value of ||A x||_{2,p} / ||x||_{2,p} found over `trials` random
/// starts, each refined by a monotone ascent. Every returned value is attained
/// by an actual x, so it never exceeds the true mixed operator norm.
/// Only p = One and p = Inf are supported.
double mixed_operator_norm_lower_bound(const BlockMatrix& A, MixedNorm p, Index trials,
                                       std::uint64_t seed);

/// ||Q^H Q - I|| (max entry) <= tol.
bool has_orthonormal_columns(const Eigen::Ref<const Matrix>& Q, double tol = 1e-10);

/// Square with orthonormal columns.
bool is_unitary(const Eigen::Ref<const Matrix>& U, double tol = 1e-10);

}  // namespace bsk
