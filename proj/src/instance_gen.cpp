#include "sgi/instance_gen.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sgi/error.hpp"

namespace sgi {

namespace {

constexpr int kMaxAttempts = 10;
constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kCombinationStream = 0xD1B54A32D192ED03ULL;

double uniform_open01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

Index uniform_index(std::mt19937_64& rng, Index bound) {
  return static_cast<Index>(rng() % static_cast<std::uint64_t>(bound));
}

DenseMatrix lowrank_attempt(Index m, Index n, Index r, double density, std::uint64_t seed) {
  DenseMatrix a = DenseMatrix::Zero(m, n);
  a.leftCols(r) = gen_sparse(m, r, density, seed).to_dense();

  std::mt19937_64 rng(seed ^ kCombinationStream);
  const Index picks = std::min<Index>(2, r);
  for (Index j = r; j < n; ++j) {
    std::vector<Index> cols;
    while (static_cast<Index>(cols.size()) < picks) {
      const Index c = uniform_index(rng, r);
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    for (Index c : cols) a.col(j) += uniform_open01(rng) * a.col(c);
  }
  return a;
}

}  // namespace

const char* to_string(GenKind k) noexcept {
  switch (k) {
    case GenKind::rect_lowrank: return "rect_lowrank";
    case GenKind::sym_gram: return "sym_gram";
  }
  return "unknown";
}

GenKind gen_kind_from_string(const std::string& s) {
  if (s == "rect_lowrank") return GenKind::rect_lowrank;
  if (s == "sym_gram") return GenKind::sym_gram;
  throw InputError("unknown instance kind '" + s + "'");
}

void GenSpec::validate() const {
  const Index rows = kind == GenKind::sym_gram ? n : m;
  if (rows < 1 || n < 1) throw InputError("GenSpec: dimensions must be positive");
  if (r < 1 || r > std::min(rows, n)) throw InputError("GenSpec: rank must lie in [1, min(m, n)]");
  if (!(density > 0.0 && density <= 1.0)) throw InputError("GenSpec: density must lie in (0, 1]");
  if (density * static_cast<double>(rows) < 1.0) {
    throw InputError("GenSpec: density too low to reach the requested rank");
  }
}

SparseMatrix gen_sparse(Index m, Index n, double density, std::uint64_t seed) {
  if (m < 0 || n < 0) throw InputError("gen_sparse: negative dimension");
  if (!(density > 0.0 && density <= 1.0)) throw InputError("gen_sparse: density must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(density * static_cast<double>(m * n)) + 16);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      if (uniform_open01(rng) < density) ts.push_back({i, j, uniform_open01(rng)});
    }
  }
  return SparseMatrix(m, n, std::move(ts));
}

DenseMatrix gen_rect_lowrank(const GenSpec& spec) {
  spec.validate();
  const Index m = spec.kind == GenKind::sym_gram ? spec.n : spec.m;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(attempt) * kSeedStride;
    DenseMatrix a = lowrank_attempt(m, spec.n, spec.r, spec.density, seed);
    if (numeric_rank(a) == spec.r) return a;
  }
  throw NumericError("gen_rect_lowrank: could not reach rank " + std::to_string(spec.r) +
                     " in " + std::to_string(kMaxAttempts) + " attempts");
}

DenseMatrix gram(const DenseMatrix& b) {
  const Index n = b.cols();
  DenseMatrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double v = b.col(i).dot(b.col(j));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

DenseMatrix gen_sym_gram(const GenSpec& spec) {
  spec.validate();
  GenSpec base = spec;
  base.kind = GenKind::sym_gram;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    base.seed = spec.seed + static_cast<std::uint64_t>(attempt) * kSeedStride * 7;
    DenseMatrix a = gram(gen_rect_lowrank(base));
    if (numeric_rank(a) == spec.r) return a;
  }
  throw NumericError("gen_sym_gram: could not reach rank " + std::to_string(spec.r));
}

DenseMatrix generate(const GenSpec& spec) {
  return spec.kind == GenKind::sym_gram ? gen_sym_gram(spec) : gen_rect_lowrank(spec);
}

}  // namespace sgi
