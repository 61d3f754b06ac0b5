#pragma once

// Graph file formats (edge lists and chemical tables), dataset loading and
// JSON/CSV result emission.

#include <gedlb/errors.hpp>
#include <gedlb/graph.hpp>
#include <gedlb/relax.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace gedlb {

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<long long> to_int(std::string_view s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// "n <count>" followed by "i j" lines (0-indexed); '#' starts a comment.
inline Graph read_edgelist(std::string_view text) {
  std::optional<int> n;
  std::vector<Edge> es;
  std::vector<std::string> lines = detail::split_lines(text);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const int lineno = static_cast<int>(k) + 1;
    std::string_view line = lines[k];
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto tk = detail::tokens(line);
    if (tk.empty()) continue;
    if (!n) {
      if (tk.size() != 2 || tk[0] != "n") throw ParseError("expected header 'n <count>'", lineno);
      auto v = detail::to_int(tk[1]);
      if (!v || *v < 0 || *v > 1000000) throw ParseError("bad vertex count", lineno);
      n = static_cast<int>(*v);
      continue;
    }
    if (tk.size() != 2) throw ParseError("expected 'i j'", lineno);
    auto a = detail::to_int(tk[0]), b = detail::to_int(tk[1]);
    if (!a || !b) throw ParseError("non-integer endpoint", lineno);
    if (*a < 0 || *b < 0 || *a >= *n || *b >= *n) throw ParseError("endpoint out of range", lineno);
    if (*a == *b) throw ParseError("self-loop", lineno);
    Edge e(static_cast<int>(*a), static_cast<int>(*b));
    if (std::find(es.begin(), es.end(), e) != es.end()) throw ParseError("duplicate edge", lineno);
    es.push_back(e);
  }
  if (!n) throw ParseError("missing header 'n <count>'", 0);
  return Graph(*n, std::move(es));
}

inline std::string write_edgelist(const Graph& g) {
  std::string out = "n " + std::to_string(g.n()) + "\n";
  for (const Edge& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

namespace detail {

// Leading pair of integers, either whitespace separated or in the fixed
// three-column layout of MDL tables.
inline std::optional<std::pair<long long, long long>> leading_pair(std::string_view line) {
  auto tk = tokens(line);
  if (tk.size() >= 2) {
    auto a = to_int(tk[0]), b = to_int(tk[1]);
    if (a && b) return std::pair{*a, *b};
  }
  if (line.size() >= 6) {
    auto a = to_int(tokens(line.substr(0, 3)).empty() ? "" : tokens(line.substr(0, 3))[0]);
    auto b = to_int(tokens(line.substr(3, 3)).empty() ? "" : tokens(line.substr(3, 3))[0]);
    if (a && b) return std::pair{*a, *b};
  }
  return std::nullopt;
}

}  // namespace detail

// Chemical table: name line, counts line "atoms bonds ...", atom records
// (ignored), then bond records "i j ..." with 1-indexed atoms. Lines before
// the first line that starts with two integers are skipped, so files without
// a name line or with extra header lines are accepted.
inline Graph read_ct(std::string_view text) {
  std::vector<std::string> lines = detail::split_lines(text);
  std::size_t k = 0;
  std::optional<std::pair<long long, long long>> counts;
  for (; k < lines.size(); ++k)
    if ((counts = detail::leading_pair(lines[k]))) break;
  if (!counts) throw ParseError("no counts line found", 0);
  const int count_line = static_cast<int>(k) + 1;
  const auto [atoms, bonds] = *counts;
  if (atoms < 0 || bonds < 0 || atoms > 100000) throw ParseError("bad atom/bond counts", count_line);
  if (lines.size() < k + 1 + static_cast<std::size_t>(atoms + bonds))
    throw ParseError("file ends before " + std::to_string(atoms) + " atoms and " + std::to_string(bonds) +
                         " bonds were read",
                     static_cast<int>(lines.size()));
  std::vector<Edge> es;
  const std::size_t first_bond = k + 1 + static_cast<std::size_t>(atoms);
  for (std::size_t b = 0; b < static_cast<std::size_t>(bonds); ++b) {
    const int lineno = static_cast<int>(first_bond + b) + 1;
    auto p = detail::leading_pair(lines[first_bond + b]);
    if (!p) throw ParseError("malformed bond record", lineno);
    if (p->first < 1 || p->second < 1 || p->first > atoms || p->second > atoms)
      throw ParseError("bond atom index out of range", lineno);
    if (p->first == p->second) throw ParseError("bond joins an atom to itself", lineno);
    es.emplace_back(static_cast<int>(p->first - 1), static_cast<int>(p->second - 1));
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return Graph(static_cast<int>(atoms), std::move(es));
}

struct DatasetStats {
  int count = 0;
  double mean_vertices = 0.0;
  double mean_degree = 0.0;  // 2 |E| / |V| pooled over the dataset
};

struct Dataset {
  std::vector<std::pair<std::string, Graph>> graphs;
  std::vector<std::pair<std::string, std::string>> errors;  // file, message
  DatasetStats stats;
};

inline DatasetStats dataset_stats(const std::vector<std::pair<std::string, Graph>>& graphs) {
  DatasetStats s;
  s.count = static_cast<int>(graphs.size());
  long long v = 0, e = 0;
  for (const auto& [name, g] : graphs) {
    v += g.n();
    e += g.edge_count();
  }
  if (s.count > 0) s.mean_vertices = static_cast<double>(v) / s.count;
  if (v > 0) s.mean_degree = 2.0 * static_cast<double>(e) / static_cast<double>(v);
  return s;
}

// Files in `directory` whose names match the glob `pattern`; .ct files are
// read as chemical tables and everything else as edge lists.
inline Dataset load_dataset(const std::filesystem::path& directory, const std::string& pattern = "*") {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) throw EmptyDataset("not a directory: " + directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && fnmatch(pattern.c_str(), entry.path().filename().c_str(), 0) == 0)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  Dataset d;
  for (const fs::path& f : files) {
    try {
      std::string text = detail::read_file(f);
      d.graphs.emplace_back(f.filename().string(),
                            f.extension() == ".ct" ? read_ct(text) : read_edgelist(text));
    } catch (const Error& e) {
      d.errors.emplace_back(f.filename().string(), e.what());
    }
  }
  if (d.graphs.empty()) throw EmptyDataset("no graphs loaded from " + directory.string());
  d.stats = dataset_stats(d.graphs);
  return d;
}

// Result records: ordered fields, homogeneous across a batch.
using FieldValue = std::variant<std::int64_t, double, bool, std::string>;
using Record = std::vector<std::pair<std::string, FieldValue>>;

enum class OutputFormat { Json, Csv };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw BadParams("unknown output format '" + s + "'");
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_cell(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) return format_double(x);
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
        else {
          if (x.find_first_of(",\"\n") == std::string::npos) return x;
          std::string q = "\"";
          for (char c : x) q += c == '"' ? std::string("\"\"") : std::string(1, c);
          return q + "\"";
        }
      },
      v);
}

inline nlohmann::ordered_json json_value(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(x)) return nullptr;
          return std::stod(format_double(x));
        } else {
          return x;
        }
      },
      v);
}

}  // namespace detail

// Column order comes from `fields` when given, otherwise from the first record.
inline std::string emit_results(const std::vector<Record>& records, OutputFormat format,
                                std::vector<std::string> fields = {}) {
  if (fields.empty() && !records.empty())
    for (const auto& [k, v] : records.front()) fields.push_back(k);
  auto lookup = [](const Record& r, const std::string& key) -> const FieldValue* {
    for (const auto& [k, v] : r)
      if (k == key) return &v;
    return nullptr;
  };
  if (format == OutputFormat::Csv) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
    out += "\n";
    for (const Record& r : records) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        if (const FieldValue* v = lookup(r, fields[i])) out += detail::csv_cell(*v);
      }
      out += "\n";
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Record& r : records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const std::string& f : fields) {
      const FieldValue* v = lookup(r, f);
      obj[f] = v ? detail::json_value(*v) : nlohmann::ordered_json(nullptr);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

inline Record to_record(const BoundResult& b) {
  Record r;
  r.emplace_back("lower_bound", b.lower_bound);
  r.emplace_back("direction", std::string(to_string(b.direction)));
  r.emplace_back("status", std::string(to_string(b.status)));
  r.emplace_back("forward", b.forward);
  r.emplace_back("backward", b.backward);
  r.emplace_back("achieved_by", std::string(to_string(b.achieved_by)));
  r.emplace_back("iterations", static_cast<std::int64_t>(b.iterations));
  return r;
}

}  // namespace gedlb
