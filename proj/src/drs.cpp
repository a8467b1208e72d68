#include "sgi/drs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sgi/error.hpp"

namespace sgi {

void DrsConfig::validate() const {
  if (!(step_lambda > 0.0) || !std::isfinite(step_lambda)) {
    throw InputError("DRS step_lambda must be positive");
  }
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0)) throw InputError("DRS tolerances must be positive");
  if (max_iter < 1) throw InputError("DRS max_iter must be at least 1");
  if (time_limit && time_limit->count() <= 0.0) throw InputError("DRS time limit must be positive");
}

DenseMatrix soft_threshold(const DenseMatrix& m, double t) {
  if (t < 0.0) throw InputError("soft_threshold: negative threshold");
  return m.unaryExpr([t](double x) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
  });
}

DrsResult drs_solve(const Projection& project, const DenseMatrix& start, const DrsConfig& cfg,
                    const DrsObserver& observer) {
  cfg.validate();
  require_finite(start, "drs_solve start");
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  DrsResult result;
  DenseMatrix v = start;
  DenseMatrix h_half;
  DenseMatrix h_next;
  double ref_norm = 0.0;

  for (long k = 0; k < cfg.max_iter; ++k) {
    h_half = soft_threshold(v, cfg.step_lambda);
    h_next = project(2.0 * h_half - v);
    if (h_next.rows() != v.rows() || h_next.cols() != v.cols()) {
      throw InputError("drs_solve: projection changed the iterate shape");
    }
    const double tau_norm = (h_next - h_half).norm();
    if (k == 0) ref_norm = tau_norm;

    if (observer) observer(DrsState{v, h_half, h_next, k, tau_norm, ref_norm});
    v += h_next - h_half;

    result.iterations = k + 1;
    result.tau_norm = tau_norm;
    if (cfg.record_history) result.history.push_back({norm1(h_next), tau_norm});

    if (k > 0 && tau_norm <= cfg.eps_abs + cfg.eps_rel * ref_norm) {
      result.converged = true;
      break;
    }
    if (cfg.time_limit && Clock::now() - t0 > *cfg.time_limit) {
      result.timed_out = true;
      break;
    }
  }

  result.ref_norm = ref_norm;
  result.objective = norm1(h_next);
  result.H = std::move(h_next);
  result.elapsed = Clock::now() - t0;
  return result;
}

// ---------------------------------------------------------------------------
// Symmetric generalized inverses

namespace {

double rel(double value, double scale) { return scale > 0.0 ? value / scale : value; }

void require_symmetric(const DenseMatrix& a, std::string_view what) {
  if (a.rows() != a.cols()) throw InputError(std::string(what) + ": matrix is not square");
  require_finite(a, what);
  if ((a - a.transpose()).norm() > 1e-10 * a.norm()) {
    throw InputError(std::string(what) + ": matrix is not symmetric");
  }
}

}  // namespace

SymmetricGinvSet::SymmetricGinvSet(const DenseMatrix& a, double rank_tol) : a_(a) {
  require_symmetric(a, "SymmetricGinvSet");
  if (a.size() == 0) throw InputError("SymmetricGinvSet: empty matrix");
  const SvdFactors f = svd_full(a, rank_tol);
  rank_ = f.rank;
  a_dagger_ = pseudoinverse(f);
  a_dagger_ = 0.5 * (a_dagger_ + a_dagger_.transpose()).eval();
  const DenseMatrix u1 = f.U.leftCols(rank_);
  p_ = u1 * u1.transpose();
}

double SymmetricGinvSet::membership_residual(const DenseMatrix& h) const {
  require_shape(h, a_.rows(), a_.cols(), "membership_residual");
  const double p1 = rel((a_ * h * a_ - a_).norm(), a_.norm());
  const double sym = rel((h - h.transpose()).norm(), h.norm());
  return std::max(p1, sym);
}

DenseMatrix project_symmetric_ginv(const SymmetricGinvSet& s, const DenseMatrix& v) {
  require_shape(v, s.a().rows(), s.a().cols(), "project_symmetric_ginv");
  const DenseMatrix sym = v + v.transpose();
  DenseMatrix out = 0.5 * sym - 0.5 * s.projector() * sym * s.projector() + s.a_dagger();
  return 0.5 * (out + out.transpose());
}

// ---------------------------------------------------------------------------
// ah-symmetric reflexive generalized inverses

AhRefGinvSet::AhRefGinvSet(const DenseMatrix& a, double rank_tol)
    : a_(a), svd_(svd_full(a, rank_tol)) {
  const Index r = svd_.rank;
  if (r == 0) throw InputError("AhRefGinvSet: matrix has rank zero");
  g_ = pseudoinverse(svd_);
  v2_ = svd_.V2();
  u1_ = svd_.U1();
}

DenseMatrix AhRefGinvSet::point(const DenseMatrix& z) const {
  require_shape(z, v2_.cols(), u1_.cols(), "AhRefGinvSet::point");
  return g_ + v2_ * z * u1_.transpose();
}

double AhRefGinvSet::membership_residual(const DenseMatrix& h) const {
  const MpResiduals res = mp_residuals(a_, h);
  return std::max({res.p1_rel, res.p2_rel, res.p3_rel});
}

DenseMatrix project_ahref_affine(const AhRefGinvSet& s, const DenseMatrix& m) {
  require_shape(m, s.g().rows(), s.g().cols(), "project_ahref_affine");
  if (s.v2().cols() == 0) return s.g();
  const DenseMatrix z = s.v2().transpose() * (m - s.g()) * s.u1();
  return s.g() + s.v2() * z * s.u1().transpose();
}

// ---------------------------------------------------------------------------
// Drivers

DrsResult solve_symmetric_ginv(const DenseMatrix& a, const DrsConfig& cfg, double rank_tol,
                               const DrsObserver& observer) {
  cfg.validate();
  require_symmetric(a, "solve_symmetric_ginv");
  if (a.size() == 0) throw InputError("solve_symmetric_ginv: empty matrix");

  if (a.isZero(0.0)) {
    // Every symmetric H is feasible; 0 is the unique 1-norm minimizer.
    DrsResult result;
    result.H = DenseMatrix::Zero(a.rows(), a.cols());
    result.converged = true;
    result.residuals = mp_residuals(a, result.H);
    return result;
  }

  const SymmetricGinvSet set(a, rank_tol);
  DrsResult result = drs_solve(
      [&set](const DenseMatrix& v) { return project_symmetric_ginv(set, v); }, set.a_dagger(), cfg,
      observer);
  result.residuals = mp_residuals(a, result.H);
  return result;
}

DrsResult solve_ahref_ginv(const DenseMatrix& a, const DrsConfig& cfg, double rank_tol,
                           const DrsObserver& observer) {
  cfg.validate();
  require_finite(a, "solve_ahref_ginv");
  if (a.size() == 0) throw InputError("solve_ahref_ginv: empty matrix");
  if (a.isZero(0.0)) throw InputError("solve_ahref_ginv: zero matrix has no meaningful constraint");

  const AhRefGinvSet set(a, rank_tol);
  DrsResult result = drs_solve(
      [&set](const DenseMatrix& m) { return project_ahref_affine(set, m); }, set.g(), cfg,
      observer);
  result.residuals = mp_residuals(a, result.H);
  return result;
}

bool check_sym_characterization(const DenseMatrix& a, const DenseMatrix& h, double tol) {
  if (a.rows() != a.cols()) throw InputError("check_sym_characterization: A is not square");
  require_shape(h, a.rows(), a.cols(), "check_sym_characterization");
  const double lhs = (a * h * a + h - a - h.transpose()).norm();
  return lhs <= tol * std::max(1.0, a.norm());
}

}  // namespace sgi
