#include "sgi/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sgi/error.hpp"

namespace sgi {

namespace {

enum class Layout { coordinate, array };
enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric };

struct Header {
  Layout layout = Layout::coordinate;
  Field field = Field::real;
  Symmetry symmetry = Symmetry::general;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

Header parse_header(const std::string& line) {
  const auto tok = split(line);
  if (tok.size() != 5 || tok[0] != "%%MatrixMarket" || lower(tok[1]) != "matrix") {
    throw ParseError("malformed Matrix Market header", 1);
  }
  Header h;
  const std::string layout = lower(tok[2]);
  const std::string field = lower(tok[3]);
  const std::string symmetry = lower(tok[4]);

  if (layout == "coordinate") h.layout = Layout::coordinate;
  else if (layout == "array") h.layout = Layout::array;
  else throw ParseError("unsupported storage '" + tok[2] + "'", 1);

  if (field == "real" || field == "double") h.field = Field::real;
  else if (field == "integer") h.field = Field::integer;
  else if (field == "pattern" && h.layout == Layout::coordinate) h.field = Field::pattern;
  else throw ParseError("unsupported field '" + tok[3] + "'", 1);

  if (symmetry == "general") h.symmetry = Symmetry::general;
  else if (symmetry == "symmetric") h.symmetry = Symmetry::symmetric;
  else throw ParseError("unsupported symmetry '" + tok[4] + "'", 1);
  return h;
}

template <typename T>
T parse_number(const std::string& tok, std::size_t line) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError("invalid number '" + tok + "'", line);
  return value;
}

// Yields the next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '%' || blank(line)) continue;
    return true;
  }
  return false;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  ++line_no;
  const Header header = parse_header(line);

  if (!next_data_line(in, line, line_no)) throw ParseError("missing size line", line_no);
  const auto size_tok = split(line);
  const std::size_t expected_tokens = header.layout == Layout::coordinate ? 3 : 2;
  if (size_tok.size() != expected_tokens) throw ParseError("malformed size line", line_no);
  const auto rows = parse_number<long long>(size_tok[0], line_no);
  const auto cols = parse_number<long long>(size_tok[1], line_no);
  if (rows < 0 || cols < 0) throw ParseError("negative dimension", line_no);
  const bool symmetric = header.symmetry == Symmetry::symmetric;
  if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", line_no);

  std::vector<Triplet> triplets;

  if (header.layout == Layout::array) {
    // Column-major; symmetric storage lists the lower triangle only.
    for (long long j = 0; j < cols; ++j) {
      for (long long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line, line_no)) throw ParseError("unexpected end of array data", line_no);
        const auto tok = split(line);
        if (tok.size() != 1) throw ParseError("expected one value per line", line_no);
        const double v = parse_number<double>(tok[0], line_no);
        if (v == 0.0) continue;
        triplets.push_back({static_cast<Index>(i), static_cast<Index>(j), v});
        if (symmetric && i != j) triplets.push_back({static_cast<Index>(j), static_cast<Index>(i), v});
      }
    }
  } else {
    const auto entries = parse_number<long long>(size_tok[2], line_no);
    if (entries < 0) throw ParseError("negative entry count", line_no);
    std::set<std::pair<long long, long long>> seen;
    const std::size_t value_tokens = header.field == Field::pattern ? 2 : 3;
    for (long long e = 0; e < entries; ++e) {
      if (!next_data_line(in, line, line_no)) {
        throw ParseError("expected " + std::to_string(entries) + " entries, found " +
                             std::to_string(e),
                         line_no);
      }
      const auto tok = split(line);
      if (tok.size() != value_tokens) throw ParseError("malformed entry", line_no);
      const auto i = parse_number<long long>(tok[0], line_no);
      const auto j = parse_number<long long>(tok[1], line_no);
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError("index (" + tok[0] + ", " + tok[1] + ") out of range", line_no);
      }
      const double v = header.field == Field::pattern ? 1.0 : parse_number<double>(tok[2], line_no);
      const auto key = symmetric ? std::pair{std::max(i, j), std::min(i, j)} : std::pair{i, j};
      if (!seen.insert(key).second) throw ParseError("duplicate entry", line_no);
      triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), v});
      if (symmetric && i != j) triplets.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), v});
    }
  }

  if (next_data_line(in, line, line_no)) throw ParseError("trailing data after last entry", line_no);
  return SparseMatrix(static_cast<Index>(rows), static_cast<Index>(cols), std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return read_matrix_market(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

DenseMatrix read_matrix_market_dense(const std::filesystem::path& path) {
  return read_matrix_market(path).to_dense();
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (const auto& t : m.triplets()) {
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_double(t.value) << '\n';
  }
}

void write_matrix_market(const SparseMatrix& m, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_matrix_market(out, m); });
}

void write_matrix_market_dense(std::ostream& out, const DenseMatrix& m) {
  require_finite(m, "write_matrix_market_dense");
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) out << format_double(m(i, j)) << '\n';
  }
}

void write_matrix_market_dense(const DenseMatrix& m, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_matrix_market_dense(out, m); });
}

}  // namespace sgi
