#pragma once

// Seeded synthetic instances: sparse random low-rank rectangular matrices and
// symmetric PSD low-rank Gram matrices.
//
// Randomness comes from std::mt19937_64 (fully specified by the C++ standard)
// with doubles formed as (x >> 11 + 0.5) * 2^-53, so an instance is
// bit-reproducible from its GenSpec on any conforming platform.

#include <cstdint>
#include <string>

#include "sgi/linalg.hpp"

namespace sgi {

enum class GenKind { rect_lowrank, sym_gram };

const char* to_string(GenKind k) noexcept;
/// Throws InputError for unknown names.
GenKind gen_kind_from_string(const std::string& s);

struct GenSpec {
  Index m = 0;  // rows; ignored for sym_gram, which is n x n
  Index n = 0;
  Index r = 0;
  double density = 0.1;
  std::uint64_t seed = 0;
  GenKind kind = GenKind::rect_lowrank;

  /// Throws InputError unless 1 <= r <= min(m, n), density in (0, 1] and
  /// density * m >= 1 (columns of the rank-r factor are not expected empty).
  void validate() const;
};

/// m x n matrix with each entry independently nonzero with probability
/// `density`, values uniform in (0, 1). Stand-in for MATLAB's sprand.
SparseMatrix gen_sparse(Index m, Index n, double density, std::uint64_t seed);

/// m x n matrix of rank exactly r: an m x r sparse sample followed by n - r
/// columns, each a combination of (up to) two of the first r columns with
/// uniform(0, 1) weights. Resamples up to 10 times if the rank falls short.
DenseMatrix gen_rect_lowrank(const GenSpec& spec);

/// B^T B with B = gen_rect_lowrank(n, n, r, density, seed).
DenseMatrix gen_sym_gram(const GenSpec& spec);

/// B^T B, accumulated on the upper triangle and mirrored, so exactly symmetric.
DenseMatrix gram(const DenseMatrix& b);

/// Dispatches on spec.kind.
DenseMatrix generate(const GenSpec& spec);

}  // namespace sgi
