#pragma once

// LP-format export of  min ||H||_1  over symmetric generalized inverses of a
// symmetric A:
//
//   minimize   sum_ij t_i_j
//   subject to t_i_j - h_i_j >= 0,  t_i_j + h_i_j >= 0          (abs_p / abs_m)
//              sum_kl A_ik A_lj h_k_l = A_ij   for all (i, j)    (gi_i_j)
//              h_i_j - h_j_i = 0               for i < j         (sym_i_j)
//              h_i_j free, t_i_j >= 0
//
// Indices in names are 1-based. Variables are declared h_1_1, h_1_2, ...,
// then t_1_1, ... in row-major order; constraint order is as listed. Rows of
// the generalized-inverse block whose coefficients all vanish (zero row or
// column of A) are omitted, since their right-hand side is then zero as well.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sgi/linalg.hpp"

namespace sgi {

std::string lp_h_name(Index i, Index j);  // 0-based in, 1-based out
std::string lp_t_name(Index i, Index j);

void export_lp(std::ostream& out, const DenseMatrix& a);
void export_lp(const DenseMatrix& a, const std::filesystem::path& path);

}  // namespace sgi
