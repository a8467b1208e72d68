#pragma once

// Closed-form least-squares / generalized Tikhonov solvers built on
// generalized inverses:
//
//   min ||A theta - b||^2 + lambda ||L theta||^2
//
// is solved by theta = Hhat A^T b for any generalized inverse Hhat of
// Ahat = A^T A + lambda L^T L, and (lambda = 0 only) by theta = H b for any
// ah-symmetric generalized inverse H of A.

#include <optional>
#include <vector>

#include "sgi/drs.hpp"
#include "sgi/linalg.hpp"

namespace sgi {

struct LsqInstance {
  DenseMatrix A;
  Vector b;
  std::optional<DenseMatrix> L;
  double ridge_lambda = 0.0;

  /// Throws InputError on inconsistent dimensions or a missing L.
  void validate() const;
};

enum class LsqStrategy { via_hhat, via_h };

const char* to_string(LsqStrategy s) noexcept;

struct LsqSolution {
  Vector theta;
  LsqStrategy strategy = LsqStrategy::via_hhat;
  double normal_residual = 0.0;  // ||(A^T A + lambda L^T L) theta - A^T b||_inf
  double objective = 0.0;        // ||A theta - b||^2 + lambda ||L theta||^2
  Index mult_count = 0;          // nonzero scalar products in the operator(s) applied
};

DenseMatrix build_ahat(const DenseMatrix& a, const std::optional<DenseMatrix>& l,
                       double ridge_lambda);

/// theta = Hhat (A^T b). Hhat must satisfy Ahat Hhat Ahat = Ahat to 1e-6 relative.
LsqSolution solve_via_hhat(const LsqInstance& inst, const DenseMatrix& hhat,
                           double zero_tol = kDefaultZeroTol);

/// theta = H b, for ridge_lambda = 0 and H satisfying P1 and P3 to 1e-6 relative.
LsqSolution solve_via_h(const LsqInstance& inst, const DenseMatrix& h,
                        double zero_tol = kDefaultZeroTol);

struct SolvabilityCertificate {
  bool solvable = false;
  Vector theta;            // Ahat^+ A^T b
  double residual = 0.0;   // ||Ahat theta - A^T b||_2
  double relative = 0.0;   // residual / max(1, ||A^T b||_2)
};

/// Verifies that the normal equations admit a solution by exhibiting one.
SolvabilityCertificate check_solvability(const DenseMatrix& a, const std::optional<DenseMatrix>& l,
                                         double ridge_lambda, const Vector& b,
                                         double rank_tol = kDefaultRankTol);

struct StrategySample {
  double residual_via_hhat = 0.0;  // ||A theta - b||_2
  double residual_via_h = 0.0;
  double normal_residual_via_hhat = 0.0;
  double normal_residual_via_h = 0.0;
  bool agree = false;  // residual norms equal to 1e-6 relative
};

struct StrategyReport {
  DrsResult h_run;     // ah-symmetric reflexive inverse of A
  DrsResult hhat_run;  // symmetric inverse of A^T A
  Index h_norm0 = 0;
  double h_norm1 = 0.0;
  Index hhat_norm0 = 0;
  double hhat_norm1 = 0.0;
  Index at_norm0 = 0;
  Index mult_count_via_h = 0;     // ||H||_0
  Index mult_count_via_hhat = 0;  // ||Hhat||_0 + ||A^T||_0
  std::vector<StrategySample> samples;

  bool all_agree() const;
};

/// Computes both inverses with DRS and solves each b both ways.
StrategyReport compare_strategies(const DenseMatrix& a, const DrsConfig& cfg,
                                  const std::vector<Vector>& b_samples,
                                  double rank_tol = kDefaultRankTol,
                                  double zero_tol = kDefaultZeroTol);

}  // namespace sgi
