#pragma once

// Dense/sparse matrix primitives, full SVD with numeric rank, the
// Moore-Penrose pseudoinverse and the SVD block decomposition
// Gamma = V^T H U = [X Y; Z W] used to characterize generalized inverses.

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sgi {

using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-8;
inline constexpr double kDefaultZeroTol = 1e-5;

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const DenseMatrix& m, std::string_view what);

/// Throws InputError unless `m` is `rows` x `cols`.
void require_shape(const DenseMatrix& m, Index rows, Index cols, std::string_view what);

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Coordinate-format sparse matrix. Triplets are kept canonical: sorted by
/// (col, row), one entry per position, no stored zeros.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate positions are summed; resulting zeros are dropped.
  SparseMatrix(Index rows, Index cols, std::vector<Triplet> triplets);

  static SparseMatrix from_dense(const DenseMatrix& m);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return triplets_.size(); }
  const std::vector<Triplet>& triplets() const noexcept { return triplets_; }

  DenseMatrix to_dense() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Triplet> triplets_;
};

/// Complete SVD A = U Sigma V^T with U (m x m) and V (n x n) orthogonal.
struct SvdFactors {
  DenseMatrix U;
  Vector sigma;  // nonincreasing, length min(m, n)
  DenseMatrix V;
  Index rank = 0;
  double rank_tol = kDefaultRankTol;

  Index rows() const noexcept { return U.rows(); }
  Index cols() const noexcept { return V.rows(); }

  // Leading / trailing column blocks split at the numeric rank.
  DenseMatrix U1() const { return U.leftCols(rank); }
  DenseMatrix U2() const { return U.rightCols(rows() - rank); }
  DenseMatrix V1() const { return V.leftCols(rank); }
  DenseMatrix V2() const { return V.rightCols(cols() - rank); }
  /// Diagonal of D, the leading rank x rank block of Sigma.
  Vector d() const { return sigma.head(rank); }
};

SvdFactors svd_full(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

/// V Sigma^+ U^T.
DenseMatrix pseudoinverse(const SvdFactors& f);
DenseMatrix pseudoinverse(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

/// Count of singular values above rank_tol * sigma_max.
Index numeric_rank(const DenseMatrix& m, double rank_tol = kDefaultRankTol);

/// Partition of Gamma = V^T H U for H (n x m) against the SVD of A (m x n).
struct GammaBlocks {
  DenseMatrix X;  // r x r
  DenseMatrix Y;  // r x (m - r)
  DenseMatrix Z;  // (n - r) x r
  DenseMatrix W;  // (n - r) x (m - r)
};

GammaBlocks gamma_blocks(const DenseMatrix& h, const SvdFactors& f);
DenseMatrix reconstruct_from_blocks(const GammaBlocks& g, const SvdFactors& f);

/// Number of entries with magnitude strictly above tol.
Index norm0(const DenseMatrix& m, double tol = kDefaultZeroTol);
/// Entrywise 1-norm.
double norm1(const DenseMatrix& m);
double frobenius(const DenseMatrix& m);

/// Frobenius residuals of the four Penrose equations.
struct MpResiduals {
  double p1 = 0.0;  // ||AHA - A||
  double p2 = 0.0;  // ||HAH - H||
  double p3 = 0.0;  // ||(AH)^T - AH||
  double p4 = 0.0;  // ||(HA)^T - HA||
  // p1 relative to ||A||, p2..p4 relative to ||H|| (absolute when the norm is 0).
  double p1_rel = 0.0;
  double p2_rel = 0.0;
  double p3_rel = 0.0;
  double p4_rel = 0.0;
};

MpResiduals mp_residuals(const DenseMatrix& a, const DenseMatrix& h);

}  // namespace sgi
