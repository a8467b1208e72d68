#include "sgi/lp_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sgi/error.hpp"

namespace sgi {

namespace {

std::string format_coef(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Emits " + c name" / " - c name", omitting unit coefficients.
void term(std::ostream& out, double c, const std::string& name, bool first) {
  if (c < 0.0) out << " -";
  else if (!first) out << " +";
  const double mag = std::abs(c);
  if (mag != 1.0) out << ' ' << format_coef(mag);
  out << ' ' << name;
}

}  // namespace

std::string lp_h_name(Index i, Index j) {
  return "h_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string lp_t_name(Index i, Index j) {
  return "t_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

void export_lp(std::ostream& out, const DenseMatrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) throw InputError("export_lp: A must be square and nonempty");
  require_finite(a, "export_lp");
  if ((a - a.transpose()).norm() > 1e-10 * a.norm()) throw InputError("export_lp: A is not symmetric");
  const Index n = a.rows();

  out << "\\ Minimum 1-norm symmetric generalized inverse, n = " << n << "\n";
  out << "Minimize\n obj:";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) term(out, 1.0, lp_t_name(i, j), i == 0 && j == 0);
  }
  out << "\nSubject To\n";

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out << " abs_p_" << i + 1 << '_' << j + 1 << ": " << lp_t_name(i, j) << " - " << lp_h_name(i, j)
          << " >= 0\n";
      out << " abs_m_" << i + 1 << '_' << j + 1 << ": " << lp_t_name(i, j) << " + " << lp_h_name(i, j)
          << " >= 0\n";
    }
  }

  // (A kron A) vec(H) = vec(A): the (i, j) entry of A H A.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      bool first = true;
      std::string row;
      for (Index k = 0; k < n; ++k) {
        if (a(i, k) == 0.0) continue;
        for (Index l = 0; l < n; ++l) {
          const double c = a(i, k) * a(l, j);
          if (c == 0.0) continue;
          if (first) out << " gi_" << i + 1 << '_' << j + 1 << ":";
          term(out, c, lp_h_name(k, l), first);
          first = false;
        }
      }
      if (!first) out << " = " << format_coef(a(i, j)) << '\n';
    }
  }

  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out << " sym_" << i + 1 << '_' << j + 1 << ": " << lp_h_name(i, j) << " - " << lp_h_name(j, i)
          << " = 0\n";
    }
  }

  out << "Bounds\n";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out << ' ' << lp_h_name(i, j) << " free\n";
  }
  out << "End\n";
}

void export_lp(const DenseMatrix& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  export_lp(out, a);
  out.flush();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace sgi
