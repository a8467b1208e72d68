#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "sgi/bench.hpp"
#include "sgi/error.hpp"

using namespace sgi;

namespace {

ExperimentRow sample_row(const std::string& id) {
  ExperimentRow r;
  r.id = id;
  r.kind = "sym";
  r.m = 20;
  r.n = 20;
  r.r = 5;
  r.density = 0.1;
  r.a_nnz = 125;
  r.a_norm0 = 123;
  r.adag_norm0 = 400;
  r.adag_norm1 = 3.25;
  r.h_norm0 = 30;
  r.h_norm1 = 1.0 / 3.0;
  r.rank_h = 11;
  r.iterations = 417;
  r.elapsed_s = 0.0123456789;
  r.converged = true;
  r.message = "note, with \"quotes\"";
  r.compute_ratios();
  return r;
}

void expect_rows_close(const ExperimentRow& a, const ExperimentRow& b) {
  EXPECT_EQ(a.id, b.id);
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.message, b.message);
  EXPECT_EQ(a.converged, b.converged);
  EXPECT_EQ(a.is_average, b.is_average);
  EXPECT_EQ(a.averaged_over, b.averaged_over);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.r, b.r);
  for (auto member : {&ExperimentRow::density, &ExperimentRow::a_nnz, &ExperimentRow::a_norm0,
                      &ExperimentRow::adag_norm0, &ExperimentRow::adag_norm1, &ExperimentRow::h_norm0, &ExperimentRow::h_norm1,
                      &ExperimentRow::rank_h, &ExperimentRow::ratio_h0_bound, &ExperimentRow::ratio_h0_adag0,
                      &ExperimentRow::ratio_h1_adag1, &ExperimentRow::ratio_rank, &ExperimentRow::iterations,
                      &ExperimentRow::elapsed_s}) {
    EXPECT_NEAR(a.*member, b.*member, 1e-12 * std::max(1.0, std::abs(a.*member)));
  }
}

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.grid.push_back(GenSpec{0, 20, 5, 0.3, 1, GenKind::sym_gram});
  cfg.seeds_per_cell = 1;
  return cfg;
}

}  // namespace

TEST(ExperimentRow, RatiosFromComponents) {
  const ExperimentRow r = sample_row("x");
  EXPECT_DOUBLE_EQ(r.ratio_h0_bound, 30.0 / 30.0);
  EXPECT_DOUBLE_EQ(r.ratio_h0_adag0, 30.0 / 400.0);
  EXPECT_DOUBLE_EQ(r.ratio_h1_adag1, (1.0 / 3.0) / 3.25);
  EXPECT_DOUBLE_EQ(r.ratio_rank, 11.0 / 5.0);
}

TEST(ExperimentRow, AverageUsesFinishedRowsOnly) {
  ExperimentRow a = sample_row("a");
  ExperimentRow b = sample_row("b");
  b.h_norm1 = 2.0 / 3.0;
  b.compute_ratios();
  ExperimentRow c = sample_row("c");
  c.status = "*";
  c.h_norm1 = 100.0;
  const ExperimentRow avg = average_rows({a, b, c}, "avg");
  EXPECT_TRUE(avg.is_average);
  EXPECT_EQ(avg.averaged_over, 2);
  EXPECT_NEAR(avg.h_norm1, 0.5, 1e-15);
  EXPECT_NEAR(avg.ratio_h1_adag1, 0.5 * (a.ratio_h1_adag1 + b.ratio_h1_adag1), 1e-15);

  const ExperimentRow none = average_rows({c}, "none");
  EXPECT_EQ(none.averaged_over, 0);
  EXPECT_EQ(none.status, "*");
}

TEST(BenchIo, CsvRoundTrip) {
  std::vector<ExperimentRow> rows{sample_row("r1"), sample_row("r2")};
  rows[1].status = "error";
  rows[1].converged = false;
  rows[1].is_average = true;
  rows[1].averaged_over = 3;
  std::stringstream ss;
  write_csv(ss, rows);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) expect_rows_close(rows[i], back[i]);
}

TEST(BenchIo, JsonRoundTrip) {
  const std::vector<ExperimentRow> rows{sample_row("r1"), sample_row("r2")};
  std::stringstream ss;
  write_json(ss, rows);
  const auto back = read_json(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) expect_rows_close(rows[i], back[i]);
}

TEST(BenchIo, RejectsWrongHeader) {
  std::istringstream in("id,kind\nx,sym\n");
  EXPECT_THROW(read_csv(in), Error);
}

TEST(BenchConfigJson, ParsesGridAndOptions) {
  std::istringstream in(R"({
    "cells": [{"kind": "sym_gram", "n": 30, "r": 4, "density": 0.2, "seed": 9},
              {"kind": "rect_lowrank", "m": 50, "n": 10, "r": 3}],
    "seeds_per_cell": 2, "time_limit": 60, "workers": 2,
    "drs": {"step_lambda": 0.02, "eps_abs": 1e-6, "max_iter": 1000}
  })");
  const BenchConfig cfg = bench_config_from_json(in);
  ASSERT_EQ(cfg.grid.size(), 2u);
  EXPECT_EQ(cfg.grid[0].kind, GenKind::sym_gram);
  EXPECT_EQ(cfg.grid[0].n, 30);
  EXPECT_EQ(cfg.grid[0].seed, 9u);
  EXPECT_EQ(cfg.grid[1].m, 50);
  EXPECT_EQ(cfg.seeds_per_cell, 2);
  EXPECT_DOUBLE_EQ(cfg.time_limit_s, 60.0);
  EXPECT_EQ(cfg.workers, 2);
  EXPECT_DOUBLE_EQ(cfg.drs.step_lambda, 0.02);
  EXPECT_DOUBLE_EQ(cfg.drs.eps_abs, 1e-6);
  EXPECT_DOUBLE_EQ(cfg.drs.eps_rel, 1e-3);
  EXPECT_EQ(cfg.drs.max_iter, 1000);

  std::istringstream bad(R"({"cells": [{"kind": "dense", "n": 3, "r": 1}]})");
  EXPECT_THROW(bench_config_from_json(bad), InputError);
}

TEST(RunBenchmark, SmallGrid) {
  const BenchTable t = run_benchmark(small_config());
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.averages.size(), 1u);
  const ExperimentRow& row = t.rows[0];
  EXPECT_EQ(row.status, "ok") << row.message;
  EXPECT_EQ(row.kind, "sym");
  EXPECT_TRUE(row.converged);
  EXPECT_EQ(row.r, 5);
  EXPECT_LE(row.ratio_h1_adag1, 1.0 + 1e-9);
  EXPECT_GT(row.h_norm0, 0.0);
  EXPECT_GE(row.a_nnz, row.a_norm0);
  ExperimentRow again = row;
  again.compute_ratios();
  EXPECT_EQ(again, row);
  EXPECT_EQ(t.averages[0].averaged_over, 1);
  EXPECT_DOUBLE_EQ(t.averages[0].h_norm1, row.h_norm1);
}

TEST(RunBenchmark, EmptyGrid) {
  BenchConfig cfg;
  const BenchTable t = run_benchmark(cfg);
  EXPECT_TRUE(t.rows.empty());
  EXPECT_TRUE(t.averages.empty());
}

TEST(RunBenchmark, TimeLimitMarksRows) {
  BenchConfig cfg = small_config();
  cfg.time_limit_s = 1e-9;
  cfg.drs.eps_abs = 1e-12;
  cfg.drs.eps_rel = 1e-12;
  const BenchTable t = run_benchmark(cfg);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].status, "*");
  EXPECT_FALSE(t.rows[0].converged);
  EXPECT_EQ(t.averages[0].averaged_over, 0);
}

TEST(RunBenchmark, FailingInstanceIsRecorded) {
  BenchConfig cfg;
  cfg.grid.push_back(GenSpec{20, 20, 20, 0.05, 1, GenKind::rect_lowrank});
  cfg.grid.push_back(GenSpec{30, 10, 3, 0.3, 1, GenKind::rect_lowrank});
  cfg.seeds_per_cell = 2;
  cfg.workers = 2;
  const BenchTable t = run_benchmark(cfg);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].status, "error");
  EXPECT_FALSE(t.rows[0].message.empty());
  EXPECT_EQ(t.rows[2].status, "ok") << t.rows[2].message;
  EXPECT_EQ(t.rows[2].kind, "ahref");
  EXPECT_EQ(t.averages[0].averaged_over, 0);
  EXPECT_EQ(t.averages[1].averaged_over, 2);
}

TEST(RunBenchmark, WorkersDoNotChangeResults) {
  BenchConfig cfg = small_config();
  cfg.seeds_per_cell = 3;
  const BenchTable one = run_benchmark(cfg);
  cfg.workers = 3;
  const BenchTable three = run_benchmark(cfg);
  ASSERT_EQ(one.rows.size(), three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].id, three.rows[i].id);
    EXPECT_EQ(one.rows[i].h_norm1, three.rows[i].h_norm1);
    EXPECT_EQ(one.rows[i].iterations, three.rows[i].iterations);
  }
}

TEST(RunBenchmark, WritesFiles) {
  BenchConfig cfg = small_config();
  const auto dir = std::filesystem::temp_directory_path();
  cfg.csv_path = dir / "sgi_bench_test.csv";
  cfg.json_path = dir / "sgi_bench_test.json";
  run_benchmark(cfg);
  std::ifstream csv(*cfg.csv_path);
  std::ifstream json(*cfg.json_path);
  EXPECT_EQ(read_csv(csv).size(), 2u);
  EXPECT_EQ(read_json(json).size(), 2u);
  std::filesystem::remove(*cfg.csv_path);
  std::filesystem::remove(*cfg.json_path);
}

TEST(BenchConfig, Validation) {
  BenchConfig cfg;
  cfg.seeds_per_cell = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = BenchConfig{};
  cfg.workers = 0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = BenchConfig{};
  cfg.time_limit_s = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
}
