#include "sgi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgi/error.hpp"

namespace sgi {

void require_finite(const DenseMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_shape(const DenseMatrix& m, Index rows, Index cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InputError("sparse matrix: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InputError("sparse matrix: index (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") out of range");
    }
    if (!std::isfinite(t.value)) throw InputError("sparse matrix: non-finite value");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  triplets_.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!triplets_.empty() && triplets_.back().row == t.row && triplets_.back().col == t.col) {
      triplets_.back().value += t.value;
    } else {
      triplets_.push_back(t);
    }
  }
  std::erase_if(triplets_, [](const Triplet& t) { return t.value == 0.0; });
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  require_finite(m, "from_dense");
  std::vector<Triplet> ts;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != 0.0) ts.push_back({i, j, m(i, j)});
    }
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(ts));
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix m = DenseMatrix::Zero(rows_, cols_);
  for (const auto& t : triplets_) m(t.row, t.col) = t.value;
  return m;
}

// ---------------------------------------------------------------------------
// SVD and friends

SvdFactors svd_full(const DenseMatrix& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError("svd_full: empty matrix");
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw InputError("svd_full: rank_tol must lie in (0, 1)");
  require_finite(a, "svd_full");

  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericError("svd_full: SVD did not converge");

  SvdFactors f;
  f.U = svd.matrixU();
  f.V = svd.matrixV();
  f.sigma = svd.singularValues();
  f.rank_tol = rank_tol;
  const double cutoff = f.sigma.size() > 0 ? rank_tol * f.sigma(0) : 0.0;
  f.rank = 0;
  while (f.rank < f.sigma.size() && f.sigma(f.rank) > cutoff) ++f.rank;
  return f;
}

DenseMatrix pseudoinverse(const SvdFactors& f) {
  const Index r = f.rank;
  // V1 D^-1 U1^T; the trailing blocks of Sigma^+ are zero.
  return f.V.leftCols(r) * f.sigma.head(r).cwiseInverse().asDiagonal() *
         f.U.leftCols(r).transpose();
}

DenseMatrix pseudoinverse(const DenseMatrix& a, double rank_tol) {
  return pseudoinverse(svd_full(a, rank_tol));
}

Index numeric_rank(const DenseMatrix& m, double rank_tol) {
  if (m.size() == 0) return 0;
  return svd_full(m, rank_tol).rank;
}

GammaBlocks gamma_blocks(const DenseMatrix& h, const SvdFactors& f) {
  const Index m = f.rows();
  const Index n = f.cols();
  const Index r = f.rank;
  require_shape(h, n, m, "gamma_blocks");
  const DenseMatrix gamma = f.V.transpose() * h * f.U;
  return GammaBlocks{
      gamma.topLeftCorner(r, r),
      gamma.topRightCorner(r, m - r),
      gamma.bottomLeftCorner(n - r, r),
      gamma.bottomRightCorner(n - r, m - r),
  };
}

DenseMatrix reconstruct_from_blocks(const GammaBlocks& g, const SvdFactors& f) {
  const Index m = f.rows();
  const Index n = f.cols();
  const Index r = f.rank;
  require_shape(g.X, r, r, "reconstruct_from_blocks: X");
  require_shape(g.Y, r, m - r, "reconstruct_from_blocks: Y");
  require_shape(g.Z, n - r, r, "reconstruct_from_blocks: Z");
  require_shape(g.W, n - r, m - r, "reconstruct_from_blocks: W");
  DenseMatrix gamma(n, m);
  gamma << g.X, g.Y, g.Z, g.W;
  return f.V * gamma * f.U.transpose();
}

Index norm0(const DenseMatrix& m, double tol) {
  return (m.array().abs() > tol).count();
}

double norm1(const DenseMatrix& m) { return m.cwiseAbs().sum(); }

double frobenius(const DenseMatrix& m) { return m.norm(); }

namespace {

double relative(double value, double scale) { return scale > 0.0 ? value / scale : value; }

}  // namespace

MpResiduals mp_residuals(const DenseMatrix& a, const DenseMatrix& h) {
  require_shape(h, a.cols(), a.rows(), "mp_residuals");
  const DenseMatrix ah = a * h;
  const DenseMatrix ha = h * a;

  MpResiduals res;
  res.p1 = (ah * a - a).norm();
  res.p2 = (h * ah - h).norm();
  res.p3 = (ah.transpose() - ah).norm();
  res.p4 = (ha.transpose() - ha).norm();

  const double a_norm = a.norm();
  const double h_norm = h.norm();
  res.p1_rel = relative(res.p1, a_norm);
  res.p2_rel = relative(res.p2, h_norm);
  res.p3_rel = relative(res.p3, h_norm);
  res.p4_rel = relative(res.p4, h_norm);
  return res;
}

}  // namespace sgi
