#include "sgi/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "sgi/error.hpp"

namespace sgi {

namespace {

constexpr double kPropertyTol = 1e-6;
constexpr double kAgreeTol = 1e-6;

double objective_value(const LsqInstance& inst, const Vector& theta) {
  double value = (inst.A * theta - inst.b).squaredNorm();
  if (inst.ridge_lambda > 0.0) value += inst.ridge_lambda * (*inst.L * theta).squaredNorm();
  return value;
}

// Residual norms agree relatively, or are both negligible against ||b||
// (consistent systems, where relative comparison of rounding noise is moot).
bool agree(double x, double y, double b_norm) {
  if (std::max(x, y) <= 1e-10 * b_norm) return true;
  return std::abs(x - y) <= kAgreeTol * std::max(x, y);
}

}  // namespace

const char* to_string(LsqStrategy s) noexcept {
  switch (s) {
    case LsqStrategy::via_hhat: return "via_hhat";
    case LsqStrategy::via_h: return "via_h";
  }
  return "unknown";
}

void LsqInstance::validate() const {
  require_finite(A, "least squares A");
  if (b.size() != A.rows()) throw InputError("least squares: b length does not match rows of A");
  if (!b.allFinite()) throw InputError("least squares: b has non-finite entries");
  if (!(ridge_lambda >= 0.0) || !std::isfinite(ridge_lambda)) {
    throw InputError("least squares: ridge lambda must be finite and nonnegative");
  }
  if (ridge_lambda > 0.0 && !L) throw InputError("least squares: L is required when lambda > 0");
  if (L) {
    require_finite(*L, "least squares L");
    if (L->cols() != A.cols()) throw InputError("least squares: L must have as many columns as A");
  }
}

DenseMatrix build_ahat(const DenseMatrix& a, const std::optional<DenseMatrix>& l,
                       double ridge_lambda) {
  if (ridge_lambda < 0.0) throw InputError("build_ahat: negative ridge lambda");
  DenseMatrix ahat = a.transpose() * a;
  if (l && ridge_lambda > 0.0) {
    if (l->cols() != a.cols()) throw InputError("build_ahat: L and A column counts differ");
    ahat += ridge_lambda * (l->transpose() * *l);
  }
  // The products above are symmetric only up to rounding.
  return 0.5 * (ahat + ahat.transpose());
}

LsqSolution solve_via_hhat(const LsqInstance& inst, const DenseMatrix& hhat, double zero_tol) {
  inst.validate();
  const Index n = inst.A.cols();
  require_shape(hhat, n, n, "solve_via_hhat");
  const DenseMatrix ahat = build_ahat(inst.A, inst.L, inst.ridge_lambda);
  const MpResiduals res = mp_residuals(ahat, hhat);
  if (res.p1_rel > kPropertyTol) {
    throw PreconditionError("solve_via_hhat: Hhat is not a generalized inverse of A^T A + lambda L^T L");
  }

  const Vector atb = inst.A.transpose() * inst.b;
  LsqSolution sol;
  sol.strategy = LsqStrategy::via_hhat;
  sol.theta = hhat * atb;
  sol.normal_residual = (ahat * sol.theta - atb).lpNorm<Eigen::Infinity>();
  sol.objective = objective_value(inst, sol.theta);
  sol.mult_count = norm0(hhat, zero_tol) + norm0(inst.A.transpose(), zero_tol);
  return sol;
}

LsqSolution solve_via_h(const LsqInstance& inst, const DenseMatrix& h, double zero_tol) {
  inst.validate();
  if (inst.ridge_lambda > 0.0) {
    throw UnsupportedStrategyError("solve_via_h: only defined for the unregularized problem");
  }
  require_shape(h, inst.A.cols(), inst.A.rows(), "solve_via_h");
  const MpResiduals res = mp_residuals(inst.A, h);
  if (res.p1_rel > kPropertyTol || res.p3_rel > kPropertyTol) {
    throw PreconditionError("solve_via_h: H is not an ah-symmetric generalized inverse of A");
  }

  const Vector atb = inst.A.transpose() * inst.b;
  LsqSolution sol;
  sol.strategy = LsqStrategy::via_h;
  sol.theta = h * inst.b;
  sol.normal_residual = (inst.A.transpose() * (inst.A * sol.theta) - atb).lpNorm<Eigen::Infinity>();
  sol.objective = objective_value(inst, sol.theta);
  sol.mult_count = norm0(h, zero_tol);
  return sol;
}

SolvabilityCertificate check_solvability(const DenseMatrix& a, const std::optional<DenseMatrix>& l,
                                         double ridge_lambda, const Vector& b, double rank_tol) {
  LsqInstance inst{a, b, l, ridge_lambda};
  inst.validate();
  const DenseMatrix ahat = build_ahat(a, l, ridge_lambda);
  const Vector atb = a.transpose() * b;

  SolvabilityCertificate cert;
  cert.theta = pseudoinverse(ahat, rank_tol) * atb;
  cert.residual = (ahat * cert.theta - atb).norm();
  cert.relative = cert.residual / std::max(1.0, atb.norm());
  cert.solvable = cert.relative <= 1e-8;
  return cert;
}

bool StrategyReport::all_agree() const {
  return std::all_of(samples.begin(), samples.end(), [](const auto& s) { return s.agree; });
}

StrategyReport compare_strategies(const DenseMatrix& a, const DrsConfig& cfg,
                                  const std::vector<Vector>& b_samples, double rank_tol,
                                  double zero_tol) {
  StrategyReport report;
  report.h_run = solve_ahref_ginv(a, cfg, rank_tol);
  report.hhat_run = solve_symmetric_ginv(build_ahat(a, std::nullopt, 0.0), cfg, rank_tol);

  const DenseMatrix& h = report.h_run.H;
  const DenseMatrix& hhat = report.hhat_run.H;
  report.h_norm0 = norm0(h, zero_tol);
  report.h_norm1 = norm1(h);
  report.hhat_norm0 = norm0(hhat, zero_tol);
  report.hhat_norm1 = norm1(hhat);
  report.at_norm0 = norm0(a.transpose(), zero_tol);
  report.mult_count_via_h = report.h_norm0;
  report.mult_count_via_hhat = report.hhat_norm0 + report.at_norm0;

  for (const Vector& b : b_samples) {
    const LsqInstance inst{a, b, std::nullopt, 0.0};
    const LsqSolution s1 = solve_via_hhat(inst, hhat, zero_tol);
    const LsqSolution s2 = solve_via_h(inst, h, zero_tol);
    StrategySample sample;
    sample.residual_via_hhat = std::sqrt(s1.objective);
    sample.residual_via_h = std::sqrt(s2.objective);
    sample.normal_residual_via_hhat = s1.normal_residual;
    sample.normal_residual_via_h = s2.normal_residual;
    sample.agree = agree(sample.residual_via_hhat, sample.residual_via_h, b.norm());
    report.samples.push_back(sample);
  }
  return report;
}

}  // namespace sgi
