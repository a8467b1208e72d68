#include "sgi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sgi/error.hpp"

namespace sgi {

using nlohmann::json;

void ExperimentRow::compute_ratios() {
  const double bound = static_cast<double>(r) * static_cast<double>(r) + static_cast<double>(r);
  ratio_h0_bound = bound > 0.0 ? h_norm0 / bound : 0.0;
  ratio_h0_adag0 = adag_norm0 > 0.0 ? h_norm0 / adag_norm0 : 0.0;
  ratio_h1_adag1 = adag_norm1 > 0.0 ? h_norm1 / adag_norm1 : 0.0;
  ratio_rank = r > 0 ? rank_h / static_cast<double>(r) : 0.0;
}

ExperimentRow make_row(std::string id, std::string kind, const DenseMatrix& a, double density,
                       const DrsResult& result, double rank_tol, double zero_tol) {
  const SvdFactors f = svd_full(a, rank_tol);
  const DenseMatrix adag = pseudoinverse(f);

  ExperimentRow row;
  row.id = std::move(id);
  row.kind = std::move(kind);
  row.m = a.rows();
  row.n = a.cols();
  row.r = f.rank;
  row.density = density;
  row.a_nnz = static_cast<double>(norm0(a, 0.0));
  row.a_norm0 = static_cast<double>(norm0(a, zero_tol));
  row.adag_norm0 = static_cast<double>(norm0(adag, zero_tol));
  row.adag_norm1 = norm1(adag);
  row.h_norm0 = static_cast<double>(norm0(result.H, zero_tol));
  row.h_norm1 = norm1(result.H);
  row.rank_h = static_cast<double>(numeric_rank(result.H, rank_tol));
  row.iterations = static_cast<double>(result.iterations);
  row.elapsed_s = result.elapsed.count();
  row.converged = result.converged;
  row.status = result.timed_out ? "*" : "ok";
  row.compute_ratios();
  return row;
}

ExperimentRow average_rows(const std::vector<ExperimentRow>& rows, std::string id) {
  ExperimentRow avg;
  avg.id = std::move(id);
  avg.is_average = true;
  std::vector<const ExperimentRow*> ok;
  for (const auto& row : rows) {
    if (row.status == "ok") ok.push_back(&row);
  }
  if (!rows.empty()) {
    avg.kind = rows.front().kind;
    avg.m = rows.front().m;
    avg.n = rows.front().n;
    avg.r = rows.front().r;
    avg.density = rows.front().density;
  }
  avg.averaged_over = static_cast<int>(ok.size());
  if (ok.empty()) {
    avg.status = rows.empty() ? "error" : rows.front().status;
    avg.message = "no instance finished";
    return avg;
  }
  const double k = static_cast<double>(ok.size());
  auto mean = [&](auto member) {
    double s = 0.0;
    for (const auto* row : ok) s += static_cast<double>(row->*member);
    return s / k;
  };
  avg.a_nnz = mean(&ExperimentRow::a_nnz);
  avg.a_norm0 = mean(&ExperimentRow::a_norm0);
  avg.adag_norm0 = mean(&ExperimentRow::adag_norm0);
  avg.adag_norm1 = mean(&ExperimentRow::adag_norm1);
  avg.h_norm0 = mean(&ExperimentRow::h_norm0);
  avg.h_norm1 = mean(&ExperimentRow::h_norm1);
  avg.rank_h = mean(&ExperimentRow::rank_h);
  avg.ratio_h0_bound = mean(&ExperimentRow::ratio_h0_bound);
  avg.ratio_h0_adag0 = mean(&ExperimentRow::ratio_h0_adag0);
  avg.ratio_h1_adag1 = mean(&ExperimentRow::ratio_h1_adag1);
  avg.ratio_rank = mean(&ExperimentRow::ratio_rank);
  avg.iterations = mean(&ExperimentRow::iterations);
  avg.elapsed_s = mean(&ExperimentRow::elapsed_s);
  avg.converged = std::all_of(ok.begin(), ok.end(), [](const auto* row) { return row->converged; });
  return avg;
}

void BenchConfig::validate() const {
  if (seeds_per_cell < 1) throw InputError("bench: seeds_per_cell must be at least 1");
  if (workers < 1) throw InputError("bench: workers must be at least 1");
  if (!(time_limit_s > 0.0)) throw InputError("bench: time limit must be positive");
  drs.validate();
  for (const auto& spec : grid) spec.validate();
}

BenchConfig bench_config_from_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bench config: ") + e.what(), 0);
  }
  try {
    BenchConfig cfg;
    for (const auto& cell : j.value("cells", json::array())) {
      GenSpec spec;
      spec.kind = gen_kind_from_string(cell.value("kind", std::string("sym_gram")));
      spec.n = cell.at("n").get<Index>();
      spec.m = cell.value("m", spec.n);
      spec.r = cell.at("r").get<Index>();
      spec.density = cell.value("density", spec.density);
      spec.seed = cell.value("seed", std::uint64_t{1});
      cfg.grid.push_back(spec);
    }
    cfg.seeds_per_cell = j.value("seeds_per_cell", cfg.seeds_per_cell);
    cfg.time_limit_s = j.value("time_limit", cfg.time_limit_s);
    cfg.rank_tol = j.value("rank_tol", cfg.rank_tol);
    cfg.zero_tol = j.value("zero_tol", cfg.zero_tol);
    cfg.workers = j.value("workers", cfg.workers);
    if (j.contains("drs")) {
      const auto& d = j["drs"];
      cfg.drs.step_lambda = d.value("step_lambda", cfg.drs.step_lambda);
      cfg.drs.eps_abs = d.value("eps_abs", cfg.drs.eps_abs);
      cfg.drs.eps_rel = d.value("eps_rel", cfg.drs.eps_rel);
      cfg.drs.max_iter = d.value("max_iter", cfg.drs.max_iter);
    }
    if (j.contains("csv")) cfg.csv_path = j["csv"].get<std::string>();
    if (j.contains("json")) cfg.json_path = j["json"].get<std::string>();
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw InputError(std::string("bench config: ") + e.what());
  }
}

namespace {

std::string instance_id(std::size_t cell, int seed_index, const GenSpec& spec) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "c%03zu_s%02d_%s_m%lld_n%lld_r%lld_d%g_seed%llu", cell, seed_index,
                to_string(spec.kind), static_cast<long long>(spec.kind == GenKind::sym_gram ? spec.n : spec.m),
                static_cast<long long>(spec.n), static_cast<long long>(spec.r), spec.density,
                static_cast<unsigned long long>(spec.seed));
  return buf;
}

ExperimentRow run_instance(const GenSpec& spec, std::string id, const BenchConfig& cfg) {
  const bool symmetric = spec.kind == GenKind::sym_gram;
  const std::string kind = symmetric ? "sym" : "ahref";
  try {
    const DenseMatrix a = generate(spec);
    DrsConfig drs = cfg.drs;
    drs.time_limit = std::chrono::duration<double>(cfg.time_limit_s);
    const DrsResult result = symmetric ? solve_symmetric_ginv(a, drs, cfg.rank_tol)
                                       : solve_ahref_ginv(a, drs, cfg.rank_tol);
    return make_row(std::move(id), kind, a, spec.density, result, cfg.rank_tol, cfg.zero_tol);
  } catch (const std::exception& e) {
    ExperimentRow row;
    row.id = std::move(id);
    row.kind = kind;
    row.m = symmetric ? spec.n : spec.m;
    row.n = spec.n;
    row.r = spec.r;
    row.density = spec.density;
    row.status = "error";
    row.message = e.what();
    return row;
  }
}

}  // namespace

BenchTable run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  struct Job {
    GenSpec spec;
    std::string id;
    std::size_t cell;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cfg.grid.size(); ++c) {
    for (int s = 0; s < cfg.seeds_per_cell; ++s) {
      GenSpec spec = cfg.grid[c];
      spec.seed += static_cast<std::uint64_t>(s);
      jobs.push_back({spec, instance_id(c, s, spec), c});
    }
  }

  std::vector<ExperimentRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      rows[i] = run_instance(jobs[i].spec, jobs[i].id, cfg);
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  BenchTable table;
  for (std::size_t c = 0; c < cfg.grid.size(); ++c) {
    std::vector<ExperimentRow> cell_rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].cell == c) cell_rows.push_back(rows[i]);
    }
    char id[32];
    std::snprintf(id, sizeof id, "c%03zu_avg", c);
    table.averages.push_back(average_rows(cell_rows, id));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  table.rows = std::move(rows);

  std::vector<ExperimentRow> all = table.rows;
  all.insert(all.end(), table.averages.begin(), table.averages.end());
  if (cfg.csv_path) {
    std::ofstream out(*cfg.csv_path);
    if (!out) throw InputError("cannot write '" + cfg.csv_path->string() + "'");
    write_csv(out, all);
  }
  if (cfg.json_path) {
    std::ofstream out(*cfg.json_path);
    if (!out) throw InputError("cannot write '" + cfg.json_path->string() + "'");
    write_json(out, all);
  }
  return table;
}

// ---------------------------------------------------------------------------
// CSV / JSON

namespace {

const std::vector<std::string> kColumns = {
    "id",         "kind",           "m",              "n",          "r",
    "density",    "a_nnz",          "a_norm0",        "adag_norm0",     "adag_norm1", "h_norm0",
    "h_norm1",    "rank_h",         "ratio_h0_bound", "ratio_h0_adag0",
    "ratio_h1_adag1", "ratio_rank", "iterations",     "elapsed_s",  "converged",
    "status",     "message",        "is_average",     "averaged_over"};

json to_json(const ExperimentRow& r) {
  return json{{"id", r.id},
              {"kind", r.kind},
              {"m", r.m},
              {"n", r.n},
              {"r", r.r},
              {"density", r.density},
              {"a_nnz", r.a_nnz},
              {"a_norm0", r.a_norm0},
              {"adag_norm0", r.adag_norm0},
              {"adag_norm1", r.adag_norm1},
              {"h_norm0", r.h_norm0},
              {"h_norm1", r.h_norm1},
              {"rank_h", r.rank_h},
              {"ratio_h0_bound", r.ratio_h0_bound},
              {"ratio_h0_adag0", r.ratio_h0_adag0},
              {"ratio_h1_adag1", r.ratio_h1_adag1},
              {"ratio_rank", r.ratio_rank},
              {"iterations", r.iterations},
              {"elapsed_s", r.elapsed_s},
              {"converged", r.converged},
              {"status", r.status},
              {"message", r.message},
              {"is_average", r.is_average},
              {"averaged_over", r.averaged_over}};
}

ExperimentRow from_json(const json& j) {
  ExperimentRow r;
  r.id = j.at("id").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.m = j.at("m").get<Index>();
  r.n = j.at("n").get<Index>();
  r.r = j.at("r").get<Index>();
  r.density = j.at("density").get<double>();
  r.a_nnz = j.at("a_nnz").get<double>();
  r.a_norm0 = j.at("a_norm0").get<double>();
  r.adag_norm0 = j.at("adag_norm0").get<double>();
  r.adag_norm1 = j.at("adag_norm1").get<double>();
  r.h_norm0 = j.at("h_norm0").get<double>();
  r.h_norm1 = j.at("h_norm1").get<double>();
  r.rank_h = j.at("rank_h").get<double>();
  r.ratio_h0_bound = j.at("ratio_h0_bound").get<double>();
  r.ratio_h0_adag0 = j.at("ratio_h0_adag0").get<double>();
  r.ratio_h1_adag1 = j.at("ratio_h1_adag1").get<double>();
  r.ratio_rank = j.at("ratio_rank").get<double>();
  r.iterations = j.at("iterations").get<double>();
  r.elapsed_s = j.at("elapsed_s").get<double>();
  r.converged = j.at("converged").get<bool>();
  r.status = j.at("status").get<std::string>();
  r.message = j.at("message").get<std::string>();
  r.is_average = j.at("is_average").get<bool>();
  r.averaged_over = j.at("averaged_over").get<int>();
  return r;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field", line_no);
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& r : rows) {
    out << quote(r.id) << ',' << quote(r.kind) << ',' << r.m << ',' << r.n << ',' << r.r << ','
        << num(r.density) << ',' << num(r.a_nnz) << ',' << num(r.a_norm0) << ',' << num(r.adag_norm0) << ','
        << num(r.adag_norm1) << ',' << num(r.h_norm0) << ',' << num(r.h_norm1) << ','
        << num(r.rank_h) << ',' << num(r.ratio_h0_bound) << ',' << num(r.ratio_h0_adag0) << ','
        << num(r.ratio_h1_adag1) << ',' << num(r.ratio_rank) << ',' << num(r.iterations) << ','
        << num(r.elapsed_s) << ',' << (r.converged ? "true" : "false") << ',' << quote(r.status)
        << ',' << quote(r.message) << ',' << (r.is_average ? "true" : "false") << ','
        << r.averaged_over << '\n';
  }
}

std::vector<ExperimentRow> read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 0);
  if (split_csv(line, line_no) != kColumns) throw ParseError("unexpected CSV header", 1);
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line, line_no);
    if (f.size() != kColumns.size()) throw ParseError("wrong number of CSV fields", line_no);
    json j;
    try {
      for (std::size_t i = 0; i < kColumns.size(); ++i) {
        const std::string& name = kColumns[i];
        if (name == "id" || name == "kind" || name == "status" || name == "message") {
          j[name] = f[i];
        } else if (name == "converged" || name == "is_average") {
          j[name] = f[i] == "true";
        } else if (name == "m" || name == "n" || name == "r" || name == "averaged_over") {
          j[name] = std::stoll(f[i]);
        } else {
          j[name] = std::stod(f[i]);
        }
      }
    } catch (const std::exception&) {
      throw ParseError("invalid CSV value", line_no);
    }
    rows.push_back(from_json(j));
  }
  return rows;
}

void write_json(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  out << arr.dump(2) << '\n';
}

std::vector<ExperimentRow> read_json(std::istream& in) {
  try {
    json arr;
    in >> arr;
    std::vector<ExperimentRow> rows;
    for (const auto& j : arr) rows.push_back(from_json(j));
    return rows;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what(), 0);
  }
}

}  // namespace sgi
