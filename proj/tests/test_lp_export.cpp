#include <sstream>

#include <gtest/gtest.h>

#include "sgi/error.hpp"
#include "sgi/lp_export.hpp"
#include "support/lp_oracle.hpp"
#include "support/random.hpp"

using namespace sgi;
using sgi::testing::Rng;

namespace {

sgi::testing::LpSolution solve(const DenseMatrix& a) {
  std::stringstream ss;
  export_lp(ss, a);
  return sgi::testing::solve_lp(sgi::testing::parse_lp(ss));
}

DenseMatrix h_from(const sgi::testing::LpSolution& sol, Index n) {
  DenseMatrix h = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const auto it = sol.values.find(lp_h_name(i, j));
      if (it != sol.values.end()) h(i, j) = it->second;
    }
  }
  return h;
}

}  // namespace

TEST(LpExport, Names) {
  EXPECT_EQ(lp_h_name(0, 0), "h_1_1");
  EXPECT_EQ(lp_h_name(2, 10), "h_3_11");
  EXPECT_EQ(lp_t_name(4, 1), "t_5_2");
}

TEST(LpExport, OneByOne) {
  std::stringstream ss;
  export_lp(ss, DenseMatrix::Identity(1, 1));
  const std::string text = ss.str();
  EXPECT_NE(text.find("Minimize"), std::string::npos);
  EXPECT_NE(text.find("gi_1_1: h_1_1 = 1"), std::string::npos);
  EXPECT_NE(text.find("h_1_1 free"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 4), "End\n");
  const auto sol = sgi::testing::solve_lp(sgi::testing::parse_lp(ss));
  ASSERT_TRUE(sol.feasible);
  EXPECT_NEAR(sol.objective, 1.0, 1e-12);
}

TEST(LpExport, Deterministic) {
  Rng rng(51);
  const DenseMatrix a = sgi::testing::random_symmetric_rank(4, 2, rng);
  std::ostringstream x, y;
  export_lp(x, a);
  export_lp(y, a);
  EXPECT_EQ(x.str(), y.str());
}

TEST(LpExport, KnownOptima) {
  DenseMatrix ones = DenseMatrix::Ones(2, 2);
  EXPECT_NEAR(solve(ones).objective, 1.0, 1e-10);
  DenseMatrix d = DenseMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  const auto sol = solve(d);
  EXPECT_NEAR(sol.objective, 0.5, 1e-12);
  EXPECT_NEAR(h_from(sol, 2)(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(solve(DenseMatrix::Identity(3, 3)).objective, 3.0, 1e-12);
}

TEST(LpExport, LeadingNegativeCoefficient) {
  DenseMatrix a(2, 2);
  a << 1, -1, -1, 1;
  std::stringstream ss;
  export_lp(ss, a);
  EXPECT_NE(ss.str().find("gi_1_2: - h_1_1 + h_1_2 + h_2_1 - h_2_2 = -1\n"), std::string::npos);
  EXPECT_NEAR(sgi::testing::solve_lp(sgi::testing::parse_lp(ss)).objective, 1.0, 1e-12);
}

TEST(LpExport, ZeroMatrixOptimumIsZero) {
  EXPECT_NEAR(solve(DenseMatrix::Zero(2, 2)).objective, 0.0, 1e-14);
}

TEST(LpExport, RejectsAsymmetric) {
  DenseMatrix a = DenseMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  std::ostringstream out;
  EXPECT_THROW(export_lp(out, a), InputError);
}

// Basic optimal solutions are sparse: at most r^2 + r nonzeros.
TEST(LpExport, BasicSolutionsRespectSparsityBound) {
  Rng rng(52);
  for (int trial = 0; trial < 12; ++trial) {
    const Index n = sgi::testing::uniform_int(2, 6, rng);
    const Index r = sgi::testing::uniform_int(1, static_cast<int>(n), rng);
    const DenseMatrix a = sgi::testing::random_symmetric_rank(n, r, rng);
    const auto sol = solve(a);
    ASSERT_TRUE(sol.feasible);
    const DenseMatrix h = h_from(sol, n);
    EXPECT_LE((a * h * a - a).norm(), 1e-7 * std::max(1.0, a.norm()));
    EXPECT_LE((h - h.transpose()).norm(), 1e-9);
    EXPECT_LE(norm0(h, 1e-9), r * r + r) << "n=" << n << " r=" << r;
    EXPECT_NEAR(norm1(h), sol.objective, 1e-7 * std::max(1.0, sol.objective));
  }
}
