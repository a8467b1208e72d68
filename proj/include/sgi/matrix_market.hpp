#pragma once

// Matrix Market text IO: coordinate (real/integer/pattern, general/symmetric)
// and array (real, general/symmetric). Values are written with 17 significant
// digits, which round-trips every double exactly.

#include <filesystem>
#include <iosfwd>

#include "sgi/linalg.hpp"

namespace sgi {

/// Reads either storage variant; symmetric storage is expanded. Throws
/// ParseError (with line number) on malformed content, out-of-range or
/// duplicate entries.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Same as above, densified.
DenseMatrix read_matrix_market_dense(const std::filesystem::path& path);

/// Coordinate real general, 1-based, in canonical (col, row) order.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path);

/// Array real general, column-major.
void write_matrix_market_dense(std::ostream& out, const DenseMatrix& m);
void write_matrix_market_dense(const DenseMatrix& m, const std::filesystem::path& path);

}  // namespace sgi
