#pragma once

// Experiment rows, per-cell averaging and CSV/JSON reporting for benchmark
// grids of generated instances.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sgi/drs.hpp"
#include "sgi/instance_gen.hpp"
#include "sgi/linalg.hpp"

namespace sgi {

/// One solved instance (or a per-cell average when `is_average`). Counts are
/// stored as doubles so averages keep their fractional part.
struct ExperimentRow {
  std::string id;
  std::string kind;  // "sym" or "ahref"
  Index m = 0;
  Index n = 0;
  Index r = 0;
  double density = 0.0;
  double a_nnz = 0.0;    // exact nonzeros of A
  double a_norm0 = 0.0;  // entries above zero_tol
  double adag_norm0 = 0.0;
  double adag_norm1 = 0.0;
  double h_norm0 = 0.0;
  double h_norm1 = 0.0;
  double rank_h = 0.0;
  double ratio_h0_bound = 0.0;  // ||H||_0 / (r^2 + r)
  double ratio_h0_adag0 = 0.0;  // ||H||_0 / ||A^+||_0
  double ratio_h1_adag1 = 0.0;  // ||H||_1 / ||A^+||_1
  double ratio_rank = 0.0;      // rank(H) / r
  double iterations = 0.0;
  double elapsed_s = 0.0;
  bool converged = false;
  std::string status = "ok";  // "ok", "*" (time limit), "error"
  std::string message;
  bool is_average = false;
  int averaged_over = 0;

  /// Fills the four ratio columns from the raw norms.
  void compute_ratios();

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

/// Builds a row from a solve of A (the problem the row describes is `kind`).
ExperimentRow make_row(std::string id, std::string kind, const DenseMatrix& a, double density,
                       const DrsResult& result, double rank_tol = kDefaultRankTol,
                       double zero_tol = kDefaultZeroTol);

/// Averages the numeric columns of rows with status "ok"; ratios are the
/// means of per-instance ratios, not ratios of means.
ExperimentRow average_rows(const std::vector<ExperimentRow>& rows, std::string id);

struct BenchConfig {
  std::vector<GenSpec> grid;  // one entry per cell; seed is the first seed of the cell
  int seeds_per_cell = 5;
  DrsConfig drs;
  double time_limit_s = 7200.0;
  double rank_tol = kDefaultRankTol;
  double zero_tol = kDefaultZeroTol;
  int workers = 1;
  std::optional<std::filesystem::path> csv_path;
  std::optional<std::filesystem::path> json_path;

  void validate() const;
};

/// Reads a JSON benchmark description (see README for the schema).
BenchConfig bench_config_from_json(std::istream& in);

struct BenchTable {
  std::vector<ExperimentRow> rows;      // per instance, ordered by id
  std::vector<ExperimentRow> averages;  // per cell, in grid order
};

/// Runs every (cell, seed) instance. sym_gram cells solve the symmetric
/// problem, rect_lowrank cells the ah-symmetric reflexive one. Failures are
/// recorded in the row, never thrown. Writes CSV/JSON when paths are set.
BenchTable run_benchmark(const BenchConfig& cfg);

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_csv(std::istream& in);
void write_json(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_json(std::istream& in);

}  // namespace sgi
