// Command-line front end: instance generation, pseudoinverses, sparse
// generalized inverses via DRS, least-squares solves, LP export and
// benchmark grids.
//
// Exit codes: 0 success, 2 usage/input error, 3 solver did not converge
// within its iteration or time limits.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgi/bench.hpp"
#include "sgi/drs.hpp"
#include "sgi/error.hpp"
#include "sgi/instance_gen.hpp"
#include "sgi/least_squares.hpp"
#include "sgi/lp_export.hpp"
#include "sgi/matrix_market.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

struct GlobalOptions {
  double rank_tol = sgi::kDefaultRankTol;
  double zero_tol = sgi::kDefaultZeroTol;
  sgi::DrsConfig drs;
  std::optional<double> time_limit;
  std::uint64_t seed = 1;
  std::string format = "csv";

  sgi::DrsConfig drs_config() const {
    sgi::DrsConfig cfg = drs;
    if (time_limit) cfg.time_limit = std::chrono::duration<double>(*time_limit);
    return cfg;
  }
};

void emit_rows(const std::vector<sgi::ExperimentRow>& rows, const std::string& format) {
  if (format == "json") sgi::write_json(std::cout, rows);
  else sgi::write_csv(std::cout, rows);
}

void write_dense(const sgi::DenseMatrix& m, const std::string& path) {
  if (path.empty() || path == "-") sgi::write_matrix_market_dense(std::cout, m);
  else sgi::write_matrix_market_dense(m, path);
}

int solve_exit_code(const sgi::DrsResult& r) { return r.converged ? kExitOk : kExitNoConvergence; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse generalized inverses by 1-norm minimization (Douglas-Rachford splitting)"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--rank-tol", g.rank_tol, "Relative singular-value cutoff for numeric rank")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--zero-tol", g.zero_tol, "Magnitude above which an entry counts as nonzero")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--step-lambda", g.drs.step_lambda, "DRS prox step")->check(CLI::PositiveNumber);
  app.add_option("--eps-abs", g.drs.eps_abs, "DRS absolute stopping tolerance")->check(CLI::PositiveNumber);
  app.add_option("--eps-rel", g.drs.eps_rel, "DRS relative stopping tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.drs.max_iter, "DRS iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--time-limit", g.time_limit, "Wall-clock limit per solve, seconds")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  // gen ---------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance as Matrix Market");
  sgi::GenSpec spec;
  std::string gen_kind = "sym_gram";
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "rect_lowrank | sym_gram")
      ->check(CLI::IsMember({"rect_lowrank", "sym_gram"}));
  gen->add_option("--m", spec.m, "Rows (rect_lowrank)");
  gen->add_option("--n", spec.n, "Columns")->required();
  gen->add_option("--r", spec.r, "Rank")->required();
  gen->add_option("--density", spec.density, "Density of the sparse factor");
  gen->add_option("-o,--output", gen_out, "Output .mtx (stdout if omitted)");

  // pinv --------------------------------------------------------------------
  auto* pinv = app.add_subcommand("pinv", "Moore-Penrose pseudoinverse");
  std::string pinv_in, pinv_out;
  pinv->add_option("matrix", pinv_in, "Input .mtx")->required();
  pinv->add_option("-o,--output", pinv_out, "Output .mtx (stdout if omitted)");

  // solve-sym / solve-ahref --------------------------------------------------
  std::string solve_in, solve_out;
  auto* solve_sym = app.add_subcommand("solve-sym", "Sparse symmetric generalized inverse of a symmetric matrix");
  solve_sym->add_option("matrix", solve_in, "Input .mtx")->required();
  solve_sym->add_option("-o,--output", solve_out, "Write H as .mtx");
  auto* solve_ahref = app.add_subcommand("solve-ahref", "Sparse ah-symmetric reflexive generalized inverse");
  solve_ahref->add_option("matrix", solve_in, "Input .mtx")->required();
  solve_ahref->add_option("-o,--output", solve_out, "Write H as .mtx");

  // lsq ---------------------------------------------------------------------
  auto* lsq = app.add_subcommand("lsq", "Least squares / generalized Tikhonov via a generalized inverse");
  std::string lsq_a, lsq_b, lsq_l, lsq_inv, lsq_out;
  std::string lsq_strategy = "via_hhat";
  double lsq_lambda = 0.0;
  lsq->add_option("--A", lsq_a, "Matrix A (.mtx)")->required();
  lsq->add_option("--b", lsq_b, "Right-hand side (.mtx, m x 1)")->required();
  lsq->add_option("--L", lsq_l, "Regularization matrix L (.mtx)");
  lsq->add_option("--lambda", lsq_lambda, "Ridge weight")->check(CLI::NonNegativeNumber);
  lsq->add_option("--strategy", lsq_strategy, "via_hhat | via_h")->check(CLI::IsMember({"via_hhat", "via_h"}));
  lsq->add_option("--inverse", lsq_inv, "Precomputed Hhat (via_hhat) or H (via_h); computed with DRS if omitted");
  lsq->add_option("-o,--output", lsq_out, "Write theta as .mtx (stdout if omitted)");

  // compare -----------------------------------------------------------------
  auto* compare = app.add_subcommand("compare", "Compare theta = Hhat A^T b against theta = H b");
  std::string cmp_in;
  int cmp_samples = 10;
  compare->add_option("matrix", cmp_in, "Input .mtx")->required();
  compare->add_option("--samples", cmp_samples, "Number of standard-normal right-hand sides")
      ->check(CLI::PositiveNumber);

  // export-lp ---------------------------------------------------------------
  auto* export_lp = app.add_subcommand("export-lp", "Write the LP reformulation for a symmetric matrix");
  std::string lp_in, lp_out;
  export_lp->add_option("matrix", lp_in, "Input .mtx")->required();
  export_lp->add_option("-o,--output", lp_out, "Output .lp")->required();

  // bench -------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid described by a JSON file");
  std::string bench_cfg;
  std::optional<int> bench_workers;
  bench->add_option("config", bench_cfg, "Benchmark JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--workers", bench_workers, "Concurrent instances")->check(CLI::PositiveNumber);

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Penrose residuals of H against A");
  std::string ver_a, ver_h;
  double ver_tol = 1e-6;
  verify->add_option("A", ver_a, "Matrix A (.mtx)")->required();
  verify->add_option("H", ver_h, "Candidate inverse H (.mtx)")->required();
  verify->add_option("--tol", ver_tol, "Tolerance of the symmetric characterization check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*gen) {
      spec.kind = sgi::gen_kind_from_string(gen_kind);
      spec.seed = g.seed;
      if (spec.kind == sgi::GenKind::sym_gram) spec.m = spec.n;
      const sgi::SparseMatrix a = sgi::SparseMatrix::from_dense(sgi::generate(spec));
      if (gen_out.empty()) sgi::write_matrix_market(std::cout, a);
      else sgi::write_matrix_market(a, gen_out);
      return kExitOk;
    }

    if (*pinv) {
      write_dense(sgi::pseudoinverse(sgi::read_matrix_market_dense(pinv_in), g.rank_tol), pinv_out);
      return kExitOk;
    }

    if (*solve_sym || *solve_ahref) {
      const bool symmetric = static_cast<bool>(*solve_sym);
      const sgi::DenseMatrix a = sgi::read_matrix_market_dense(solve_in);
      const sgi::DrsResult result = symmetric ? sgi::solve_symmetric_ginv(a, g.drs_config(), g.rank_tol)
                                              : sgi::solve_ahref_ginv(a, g.drs_config(), g.rank_tol);
      if (!solve_out.empty()) sgi::write_matrix_market_dense(result.H, solve_out);
      const double density = static_cast<double>(sgi::norm0(a, 0.0)) / static_cast<double>(a.size());
      emit_rows({sgi::make_row(solve_in, symmetric ? "sym" : "ahref", a, density, result, g.rank_tol,
                               g.zero_tol)},
                g.format);
      return solve_exit_code(result);
    }

    if (*lsq) {
      sgi::LsqInstance inst;
      inst.A = sgi::read_matrix_market_dense(lsq_a);
      const sgi::DenseMatrix b = sgi::read_matrix_market_dense(lsq_b);
      if (b.cols() != 1) throw sgi::InputError("b must be a single column");
      inst.b = b.col(0);
      if (!lsq_l.empty()) inst.L = sgi::read_matrix_market_dense(lsq_l);
      inst.ridge_lambda = lsq_lambda;
      inst.validate();

      std::optional<sgi::DrsResult> run;
      sgi::DenseMatrix inverse;
      const bool via_h = lsq_strategy == "via_h";
      if (!lsq_inv.empty()) {
        inverse = sgi::read_matrix_market_dense(lsq_inv);
      } else {
        run = via_h ? sgi::solve_ahref_ginv(inst.A, g.drs_config(), g.rank_tol)
                    : sgi::solve_symmetric_ginv(sgi::build_ahat(inst.A, inst.L, inst.ridge_lambda),
                                                g.drs_config(), g.rank_tol);
        inverse = run->H;
      }
      const sgi::LsqSolution sol = via_h ? sgi::solve_via_h(inst, inverse, g.zero_tol)
                                         : sgi::solve_via_hhat(inst, inverse, g.zero_tol);
      write_dense(sol.theta, lsq_out);
      std::cerr << "strategy=" << sgi::to_string(sol.strategy) << " objective=" << sol.objective
                << " normal_residual=" << sol.normal_residual << " mult_count=" << sol.mult_count << '\n';
      return run ? solve_exit_code(*run) : kExitOk;
    }

    if (*compare) {
      const sgi::DenseMatrix a = sgi::read_matrix_market_dense(cmp_in);
      std::mt19937_64 rng(g.seed);
      std::normal_distribution<double> normal;
      std::vector<sgi::Vector> bs(static_cast<std::size_t>(cmp_samples), sgi::Vector(a.rows()));
      for (auto& b : bs) {
        for (auto& x : b) x = normal(rng);
      }
      const sgi::StrategyReport rep = sgi::compare_strategies(a, g.drs_config(), bs, g.rank_tol, g.zero_tol);
      nlohmann::json j{{"h_norm0", rep.h_norm0},
                       {"h_norm1", rep.h_norm1},
                       {"hhat_norm0", rep.hhat_norm0},
                       {"hhat_norm1", rep.hhat_norm1},
                       {"at_norm0", rep.at_norm0},
                       {"mult_count_via_h", rep.mult_count_via_h},
                       {"mult_count_via_hhat", rep.mult_count_via_hhat},
                       {"h_iterations", rep.h_run.iterations},
                       {"hhat_iterations", rep.hhat_run.iterations},
                       {"all_agree", rep.all_agree()},
                       {"samples", nlohmann::json::array()}};
      for (const auto& s : rep.samples) {
        j["samples"].push_back({{"residual_via_hhat", s.residual_via_hhat},
                                {"residual_via_h", s.residual_via_h},
                                {"normal_residual_via_hhat", s.normal_residual_via_hhat},
                                {"normal_residual_via_h", s.normal_residual_via_h},
                                {"agree", s.agree}});
      }
      std::cout << j.dump(2) << '\n';
      const bool converged = rep.h_run.converged && rep.hhat_run.converged;
      return converged ? kExitOk : kExitNoConvergence;
    }

    if (*export_lp) {
      sgi::export_lp(sgi::read_matrix_market_dense(lp_in), lp_out);
      return kExitOk;
    }

    if (*bench) {
      std::ifstream in(bench_cfg);
      sgi::BenchConfig cfg = sgi::bench_config_from_json(in);
      if (bench_workers) cfg.workers = *bench_workers;
      const sgi::BenchTable table = sgi::run_benchmark(cfg);
      std::vector<sgi::ExperimentRow> all = table.rows;
      all.insert(all.end(), table.averages.begin(), table.averages.end());
      emit_rows(all, g.format);
      return kExitOk;
    }

    if (*verify) {
      const sgi::DenseMatrix a = sgi::read_matrix_market_dense(ver_a);
      const sgi::DenseMatrix h = sgi::read_matrix_market_dense(ver_h);
      const sgi::MpResiduals res = sgi::mp_residuals(a, h);
      nlohmann::json j{{"p1", res.p1},         {"p2", res.p2},         {"p3", res.p3},
                       {"p4", res.p4},         {"p1_rel", res.p1_rel}, {"p2_rel", res.p2_rel},
                       {"p3_rel", res.p3_rel}, {"p4_rel", res.p4_rel}};
      const bool symmetric = a.rows() == a.cols() && (a - a.transpose()).norm() <= 1e-10 * a.norm();
      if (symmetric) j["symmetric_characterization"] = sgi::check_sym_characterization(a, h, ver_tol);
      else j["symmetric_characterization"] = nullptr;
      std::cout << j.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const sgi::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
