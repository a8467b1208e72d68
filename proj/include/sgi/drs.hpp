#pragma once

// Douglas-Rachford splitting for  min ||H||_1  s.t.  H in C,  C affine.
//
// With f = ||.||_1 and g the indicator of C, one sweep is
//
//   H_half = soft_threshold(V_k, lambda)
//   V_half = 2 H_half - V_k
//   H_next = project_C(V_half)
//   V_next = V_k + H_next - H_half
//
// and the run stops once ||H_next - H_half||_F <= eps_abs + eps_rel ||V_1 - V_0||_F
// for some k > 0. The returned matrix is the last H_next, which is always a
// member of C.

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "sgi/linalg.hpp"

namespace sgi {

struct DrsConfig {
  double step_lambda = 1e-2;
  double eps_abs = 1e-5;
  double eps_rel = 1e-3;
  long max_iter = 50'000;
  bool record_history = false;
  /// Wall-clock budget checked between iterations; unset means unlimited.
  std::optional<std::chrono::duration<double>> time_limit;

  /// Throws InputError on out-of-range parameters.
  void validate() const;
};

/// Snapshot handed to an iteration observer after each sweep.
struct DrsState {
  const DenseMatrix& V;       // V_k
  const DenseMatrix& H_half;  // H_{k+1/2}
  const DenseMatrix& H_next;  // H_{k+1}
  long k;
  double tau_norm;  // ||V_{k+1} - V_k||_F
  double ref_norm;  // ||V_1 - V_0||_F
};

struct DrsHistoryEntry {
  double objective;
  double tau_norm;
};

struct DrsResult {
  DenseMatrix H;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
  bool timed_out = false;
  double tau_norm = 0.0;
  double ref_norm = 0.0;
  /// Filled by the problem-specific drivers, which know A.
  std::optional<MpResiduals> residuals;
  std::chrono::duration<double> elapsed{0.0};
  std::vector<DrsHistoryEntry> history;
};

using Projection = std::function<DenseMatrix(const DenseMatrix&)>;
using DrsObserver = std::function<void(const DrsState&)>;

/// Entrywise shrinkage toward zero by t, the prox of t * ||.||_1.
DenseMatrix soft_threshold(const DenseMatrix& m, double t);

/// Runs the splitting from V_0 = start. Hitting max_iter or the time limit is
/// reported through `converged`, never thrown.
DrsResult drs_solve(const Projection& project, const DenseMatrix& start, const DrsConfig& cfg,
                    const DrsObserver& observer = {});

/// C = {H : AHA = A, H = H^T} for symmetric A, with A^+ and AA^+ cached.
class SymmetricGinvSet {
 public:
  explicit SymmetricGinvSet(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

  const DenseMatrix& a() const noexcept { return a_; }
  const DenseMatrix& a_dagger() const noexcept { return a_dagger_; }
  /// Orthogonal projector AA^+ (= A^+A since A is symmetric).
  const DenseMatrix& projector() const noexcept { return p_; }
  Index rank() const noexcept { return rank_; }

  /// Relative distance to the set: max(||AHA - A|| / ||A||, ||H - H^T|| / ||H||).
  double membership_residual(const DenseMatrix& h) const;

 private:
  DenseMatrix a_;
  DenseMatrix a_dagger_;
  DenseMatrix p_;
  Index rank_ = 0;
};

/// The ah-symmetric reflexive generalized inverses of A, parametrized as
/// {G + V2 Z U1^T : Z}, with G = V1 D^-1 U1^T.
class AhRefGinvSet {
 public:
  explicit AhRefGinvSet(const DenseMatrix& a, double rank_tol = kDefaultRankTol);

  const DenseMatrix& a() const noexcept { return a_; }
  const SvdFactors& svd() const noexcept { return svd_; }
  const DenseMatrix& g() const noexcept { return g_; }
  const DenseMatrix& v2() const noexcept { return v2_; }
  const DenseMatrix& u1() const noexcept { return u1_; }
  Index rank() const noexcept { return svd_.rank; }

  /// G + V2 Z U1^T for a free block Z of size (n - r) x r.
  DenseMatrix point(const DenseMatrix& z) const;

  /// Max of the relative P1, P2, P3 residuals.
  double membership_residual(const DenseMatrix& h) const;

 private:
  DenseMatrix a_;
  SvdFactors svd_;
  DenseMatrix g_;
  DenseMatrix v2_;
  DenseMatrix u1_;
};

/// 1/2 (V + V^T) - 1/2 P (V + V^T) P + A^+, with P = AA^+.
DenseMatrix project_symmetric_ginv(const SymmetricGinvSet& s, const DenseMatrix& v);

/// G + V2 V2^T (M - G) U1 U1^T.
DenseMatrix project_ahref_affine(const AhRefGinvSet& s, const DenseMatrix& m);

/// Sparse symmetric generalized inverse of a symmetric A, started at A^+.
DrsResult solve_symmetric_ginv(const DenseMatrix& a, const DrsConfig& cfg,
                               double rank_tol = kDefaultRankTol,
                               const DrsObserver& observer = {});

/// Sparse ah-symmetric reflexive generalized inverse of A, started at A^+.
DrsResult solve_ahref_ginv(const DenseMatrix& a, const DrsConfig& cfg,
                           double rank_tol = kDefaultRankTol, const DrsObserver& observer = {});

/// True iff ||AHA + H - A - H^T||_F <= tol * max(1, ||A||_F). For symmetric A
/// this single equation is equivalent to H being a symmetric generalized inverse.
bool check_sym_characterization(const DenseMatrix& a, const DenseMatrix& h, double tol);

}  // namespace sgi
