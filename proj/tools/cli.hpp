#pragma once

// Command-line driver. run() parses arguments, dispatches to a subcommand
// and maps library errors onto exit codes:
//   0 ok, 2 parse/IO/parameter error, 3 solver failure, 4 over budget.

#include <gedlb/gedlb.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gedlb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitBudget = 4;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw BadParams("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw BadParams("not a number: '" + s + "'");
  return v;
}

inline int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw BadParams("not an integer: '" + s + "'");
  return static_cast<int>(v);
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (std::filesystem::path(path).extension() == ".ct") return read_ct(ss.str());
  return read_edgelist(ss.str());
}

inline std::vector<SetKind> parse_kinds(const std::string& list, char sep) {
  std::vector<SetKind> kinds;
  for (const std::string& s : split(list, sep)) kinds.push_back(parse_set_kind(s));
  if (kinds.empty()) throw BadParams("empty set list");
  return kinds;
}

inline std::string kinds_name(const std::vector<SetKind>& kinds) {
  std::string s;
  for (SetKind k : kinds) s += (s.empty() ? "" : "+") + std::string(to_string(k));
  return s;
}

// "a:b:s" (inclusive) or a single value.
inline std::vector<int> parse_grid(const std::string& spec) {
  std::vector<std::string> p = split(spec, ':');
  if (p.size() == 1) return {parse_int(p[0])};
  if (p.size() != 3) throw BadParams("edit grid must be 'start:stop:step'");
  const int a = parse_int(p[0]), b = parse_int(p[1]), s = parse_int(p[2]);
  if (a < 1 || b < a || s < 1) throw BadParams("edit grid needs 1 <= start <= stop and step >= 1");
  std::vector<int> out;
  for (int k = a; k <= b; k += s) out.push_back(k);
  return out;
}

// "family:name:p1:p2..." or a file path.
inline Graph graph_from_spec(const std::string& spec) {
  if (spec.rfind("family:", 0) != 0) return read_graph_file(spec);
  std::vector<std::string> p = split(spec.substr(7), ':');
  if (p.empty()) throw BadParams("missing family name");
  std::vector<int> args;
  for (std::size_t i = 1; i < p.size(); ++i) args.push_back(parse_int(p[i]));
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw BadParams("family '" + p[0] + "' takes " + std::to_string(k) + " parameter(s)");
  };
  const std::string& name = p[0];
  if (name == "johnson") return need(2), johnson(args[0], args[1]);
  if (name == "kneser") return need(2), kneser(args[0], args[1]);
  if (name == "hamming") return need(2), hamming(args[0], args[1]);
  if (name == "triangular") return need(1), triangular(args[0]);
  if (name == "windmill") return need(2), windmill(args[0], args[1]);
  if (name == "extremal") return need(1), extremal_e(args[0]);
  if (name == "gq24") return need(0), gq24();
  throw BadParams("unknown family '" + name + "'");
}

// Lines "add i j" / "del i j" (0-indexed), '#' comments.
inline EditSet read_edit_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<Edge> adds, dels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    int i = 0, j = 0;
    if (!(ls >> i >> j)) throw ParseError("expected '<add|del> i j'", lineno);
    if (op == "add") adds.emplace_back(i, j);
    else if (op == "del") dels.emplace_back(i, j);
    else throw ParseError("unknown edit '" + op + "'", lineno);
  }
  return EditSet(n, std::move(adds), std::move(dels));
}

template <class Fn>
void parallel_for(int count, int threads, Fn fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct Output {
  std::string path;
  std::string format = "json";

  void add_to(CLI::App* app) {
    app->add_option("--out", path, "Write results to this file");
    app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  void emit(const std::vector<Record>& records, std::ostream& out) const {
    const std::string text = emit_results(records, parse_output_format(format));
    out << text;
    if (!path.empty()) {
      std::ofstream f(path);
      if (!f) throw Error("cannot write " + path);
      f << text;
    }
  }
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double std_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct BoundOptions {
  std::string g1, g2, sets = "sh";
  bool ext = false;
  double cost = 1.0;
  double tol = 1e-6;
  detail::Output output;
};

inline int cmd_bound(const BoundOptions& o, std::ostream& out) {
  const Graph g1 = detail::read_graph_file(o.g1);
  const Graph g2 = detail::read_graph_file(o.g2);
  const std::vector<SetKind> kinds = detail::parse_kinds(o.sets, ',');
  SolverSettings settings;
  settings.tol = o.tol;
  const auto t0 = std::chrono::steady_clock::now();
  BoundResult r;
  if (o.ext) {
    r = lower_bound_ext(g1, g2, kinds, o.cost, settings);
  } else {
    if (g1.n() != g2.n()) throw BadParams("graphs differ in vertex count; use --ext");
    r = symmetric_lower_bound(g1, g2, kinds, settings);
    r.lower_bound *= o.cost;
    r.forward *= o.cost;
    r.backward *= o.cost;
  }
  Record rec{{"command", std::string("bound")},
             {"g1", o.g1},
             {"g2", o.g2},
             {"sets", detail::kinds_name(kinds)},
             {"ext", o.ext},
             {"cost", o.cost},
             {"tol", o.tol}};
  for (auto& field : to_record(r)) rec.push_back(std::move(field));
  rec.emplace_back("seconds", detail::seconds_since(t0));
  o.output.emit({rec}, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExactOptions {
  std::string g1, g2;
  bool ext = false;
  detail::Output output;
};

inline int cmd_exact(const ExactOptions& o, std::ostream& out) {
  const Graph g1 = detail::read_graph_file(o.g1);
  const Graph g2 = detail::read_graph_file(o.g2);
  if (!o.ext && g1.n() != g2.n()) throw BadParams("graphs differ in vertex count; use --ext");
  const auto t0 = std::chrono::steady_clock::now();
  const int d = o.ext ? exact_ged_ext(g1, g2) : exact_ged(g1, g2);
  o.output.emit({{{"command", std::string("exact")},
                  {"g1", o.g1},
                  {"g2", o.g2},
                  {"ext", o.ext},
                  {"ged", static_cast<std::int64_t>(d)},
                  {"seconds", detail::seconds_since(t0)}}},
                out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ExperimentOptions {
  std::string name;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string grid;  // empty: the experiment's default grid
  std::string sets;  // empty: the experiment's default sets
  std::string dataset_dir;
  std::string pattern = "*";
  int pairs = 0;  // 0: all pairs
  double cost = 3.0;
  double tol = 1e-6;
  int threads = 0;
  detail::Output output;
};

struct ExperimentSpec {
  Graph graph;
  std::string grid;
  double add_fraction = 0.5;
  std::string sets;
};

inline ExperimentSpec experiment_spec(const std::string& name) {
  if (name == "t9") return {triangular(9), "4:200:4", 0.5, "sh"};
  if (name == "gq24") return {gq24(), "2:100:2", 0.5, "sh"};
  if (name == "e30") return {extremal_e(30), "5:45:5", 0.2, "is,sh,mc"};
  if (name == "windmill47") return {windmill(4, 7), "10:200:5", 0.8, "sh,is,mc"};
  throw BadParams("unknown experiment '" + name + "'");
}

struct GridPointResult {
  int edits = 0;
  std::string set;
  std::vector<double> ratios;
  int successes = 0;
  int incomplete = 0;
};

// One configuration of a synthetic edit experiment: random edits of `count`
// operations applied to g, bound computed with the given sets.
inline std::vector<GridPointResult> run_edit_experiment(const Graph& g, const std::vector<int>& grid,
                                                        double add_fraction,
                                                        const std::vector<std::vector<SetKind>>& configs,
                                                        int trials, std::uint64_t seed, double tol,
                                                        int threads) {
  const Matrix a1 = adjacency(g);
  const Vector lam = eigenvalues_desc(a1);
  std::vector<std::optional<InvariantSet>> sets;
  for (const auto& kinds : configs)
    if (kinds == std::vector<SetKind>{SetKind::SH}) sets.emplace_back();
    else sets.emplace_back(make_set(a1, kinds));
  SolverSettings settings;
  settings.tol = tol;
  AdmmSettings admm;
  admm.tol = tol;

  const int points = static_cast<int>(grid.size());
  const int c_count = static_cast<int>(configs.size());
  std::vector<double> ratio(static_cast<std::size_t>(points * c_count * trials));
  std::vector<char> success(ratio.size()), complete(ratio.size());
  detail::parallel_for(points * trials, threads, [&](int job) {
    const int p = job / trials, t = job % trials;
    const int count = grid[static_cast<std::size_t>(p)];
    const EditSet e = random_edits(g, count, add_fraction,
                                   derive_seed(seed, {static_cast<std::uint64_t>(count), static_cast<std::uint64_t>(t)}));
    const Graph g2 = apply_edits(g, e);
    const Matrix e_star = e.matrix();
    for (int c = 0; c < c_count; ++c) {
      BoundResult b;
      if (sets[static_cast<std::size_t>(c)]) b = lower_bound(*sets[static_cast<std::size_t>(c)], g2, settings);
      else b = sh_admm(adjacency(g2), lam, admm);
      const std::size_t slot = static_cast<std::size_t>((p * c_count + c) * trials + t);
      ratio[slot] = b.lower_bound / count;
      success[slot] = success_check(b.E_hat, e_star);
      complete[slot] = b.status == SolveStatus::Optimal;
    }
  });
  std::vector<GridPointResult> out;
  for (int p = 0; p < points; ++p)
    for (int c = 0; c < c_count; ++c) {
      GridPointResult r;
      r.edits = grid[static_cast<std::size_t>(p)];
      r.set = detail::kinds_name(configs[static_cast<std::size_t>(c)]);
      for (int t = 0; t < trials; ++t) {
        const std::size_t slot = static_cast<std::size_t>((p * c_count + c) * trials + t);
        r.ratios.push_back(ratio[slot]);
        r.successes += success[slot];
        r.incomplete += !complete[slot];
      }
      out.push_back(std::move(r));
    }
  return out;
}

inline std::vector<std::vector<SetKind>> parse_configs(const std::string& sets) {
  std::vector<std::vector<SetKind>> configs;
  for (const std::string& c : detail::split(sets, ',')) configs.push_back(detail::parse_kinds(c, '+'));
  if (configs.empty()) throw BadParams("no set configurations given");
  return configs;
}

inline int default_threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

struct DatasetRow {
  std::string set;
  double mean = 0.0;
  double std_error = 0.0;
  int pairs = 0;
};

// Average cost-scaled bounds over all pairs (or `pairs` sampled pairs) of a
// dataset, for every set configuration.
inline std::vector<DatasetRow> run_dataset_experiment(const Dataset& d,
                                                      const std::vector<std::vector<SetKind>>& configs,
                                                      int pairs, double cost, std::uint64_t seed, double tol,
                                                      int threads) {
  std::vector<std::pair<int, int>> all;
  const int n = static_cast<int>(d.graphs.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  if (pairs > 0 && pairs < static_cast<int>(all.size())) {
    Rng rng(derive_seed(seed, {0x9a17}));
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(pairs));
    std::sort(all.begin(), all.end());
  }
  SolverSettings settings;
  settings.tol = tol;
  const int c_count = static_cast<int>(configs.size());
  const int p_count = static_cast<int>(all.size());
  std::vector<double> value(static_cast<std::size_t>(c_count * p_count));
  detail::parallel_for(c_count * p_count, threads, [&](int job) {
    const int c = job / p_count, p = job % p_count;
    const auto [i, j] = all[static_cast<std::size_t>(p)];
    value[static_cast<std::size_t>(job)] =
        lower_bound_ext(d.graphs[static_cast<std::size_t>(i)].second, d.graphs[static_cast<std::size_t>(j)].second,
                        configs[static_cast<std::size_t>(c)], cost, settings)
            .lower_bound;
  });
  std::vector<DatasetRow> rows;
  for (int c = 0; c < c_count; ++c) {
    std::vector<double> v(value.begin() + c * p_count, value.begin() + (c + 1) * p_count);
    rows.push_back({detail::kinds_name(configs[static_cast<std::size_t>(c)]), detail::mean(v),
                    detail::std_error(v), p_count});
  }
  return rows;
}

inline int cmd_experiment(const ExperimentOptions& o, std::ostream& out) {
  if (o.trials < 1) throw BadParams("--trials must be positive");
  const int threads = o.threads > 0 ? o.threads : default_threads();
  std::vector<Record> records;
  if (o.name == "dataset") {
    if (o.dataset_dir.empty()) throw BadParams("the dataset experiment requires --dataset-dir");
    const Dataset d = load_dataset(o.dataset_dir, o.pattern);
    const std::string sets = o.sets.empty() ? "mc,is,sh,mc+is+sh" : o.sets;
    for (const DatasetRow& r : run_dataset_experiment(d, parse_configs(sets), o.pairs, o.cost, o.seed, o.tol, threads))
      records.push_back({{"experiment", std::string("dataset")},
                         {"dataset_dir", o.dataset_dir},
                         {"graphs", static_cast<std::int64_t>(d.stats.count)},
                         {"load_errors", static_cast<std::int64_t>(d.errors.size())},
                         {"mean_vertices", d.stats.mean_vertices},
                         {"mean_degree", d.stats.mean_degree},
                         {"seed", static_cast<std::int64_t>(o.seed)},
                         {"sets", sets},
                         {"cost", o.cost},
                         {"tol", o.tol},
                         {"set", r.set},
                         {"pairs", static_cast<std::int64_t>(r.pairs)},
                         {"mean_bound", r.mean},
                         {"std_error", r.std_error}});
    o.output.emit(records, out);
    return kExitOk;
  }
  const ExperimentSpec spec = experiment_spec(o.name);
  const std::string grid = o.grid.empty() ? spec.grid : o.grid;
  const std::string sets = o.sets.empty() ? spec.sets : o.sets;
  for (const GridPointResult& r : run_edit_experiment(spec.graph, detail::parse_grid(grid), spec.add_fraction,
                                                      parse_configs(sets), o.trials, o.seed, o.tol, threads))
    records.push_back({{"experiment", o.name},
                       {"seed", static_cast<std::int64_t>(o.seed)},
                       {"grid", grid},
                       {"sets", sets},
                       {"tol", o.tol},
                       {"add_fraction", spec.add_fraction},
                       {"trials", static_cast<std::int64_t>(o.trials)},
                       {"edits", static_cast<std::int64_t>(r.edits)},
                       {"set", r.set},
                       {"success_probability", static_cast<double>(r.successes) / o.trials},
                       {"mean_ratio", detail::mean(r.ratios)},
                       {"std_error", detail::std_error(r.ratios)},
                       {"incomplete", static_cast<std::int64_t>(r.incomplete)}});
  o.output.emit(records, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CertifyOptions {
  std::string graph;
  int d = 1;
  std::string edits;
  std::string c1 = "0.05,0.1,0.2,0.5,1";
  std::string eps = "0.001,0.01,0.1";
  std::string alpha;  // comma list overriding the one-hot default
  double corollary_c = 1.0;
  int probes = 50;
  std::uint64_t seed = 1;
  detail::Output output;
};

inline int cmd_certify(const CertifyOptions& o, std::ostream& out) {
  if (o.d < 1) throw BadParams("--d must be at least 1");
  const Graph g = detail::graph_from_spec(o.graph);
  const EigStructure es = eigenspaces(adjacency(g));
  std::optional<EditSet> edit;
  if (!o.edits.empty()) edit = detail::read_edit_file(o.edits, g.n());
  std::optional<std::vector<double>> alpha;
  if (!o.alpha.empty()) {
    alpha.emplace();
    for (const std::string& s : detail::split(o.alpha, ',')) alpha->push_back(detail::parse_double(s));
  }

  std::optional<bool> recovered;
  if (edit) {
    const ShAdmmResult b = sh_admm(g, apply_edits(g, *edit));
    recovered = success_check(b.E_hat, edit->matrix());
  }

  std::vector<Record> records;
  for (const std::string& c1s : detail::split(o.c1, ','))
    for (const std::string& epss : detail::split(o.eps, ',')) {
      const double c1 = detail::parse_double(c1s), eps = detail::parse_double(epss);
      CertificateParams p = default_params(es, c1, eps);
      if (alpha) p.alpha = *alpha;
      const TheoremCheck th = check_theorem(es, o.d, p);
      Record r{{"command", std::string("certify")},
               {"graph", o.graph},
               {"n", static_cast<std::int64_t>(g.n())},
               {"m", static_cast<std::int64_t>(es.m())},
               {"d", static_cast<std::int64_t>(o.d)},
               {"c1", c1},
               {"eps", eps},
               {"seed", static_cast<std::int64_t>(o.seed)},
               {"kappa", static_cast<std::int64_t>(es.kappa())},
               {"corollary_c", o.corollary_c},
               {"corollary_bound", static_cast<std::int64_t>(corollary_bound(es, o.corollary_c))},
               {"rho", th.rho},
               {"xi_lower", xi_lower(p.alpha, o.d, es, o.probes, o.seed)},
               {"xi_upper", th.xi_upper},
               {"condition1", th.condition1},
               {"margin1", th.margin1},
               {"condition2", th.condition2},
               {"margin2", th.margin2},
               {"theorem_holds", th.holds}};
      if (edit) {
        const CertificateReport rep = check_sufficient(g, *edit, p);
        r.emplace_back("edits", static_cast<std::int64_t>(edit->size()));
        r.emplace_back("sufficient_passed", rep.passed);
        for (const auto& [k, v] : rep.flags) r.emplace_back("flag_" + k, v);
        for (const auto& [k, v] : rep.margins) r.emplace_back("margin_" + k, v);
        r.emplace_back("sh_recovered", *recovered);
      }
      records.push_back(std::move(r));
    }
  o.output.emit(records, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct FamilyOptions {
  std::string name;
  std::vector<int> params;
  std::string out;
};

inline int cmd_family(const FamilyOptions& o, std::ostream& out) {
  std::string spec = "family:" + o.name;
  for (int p : o.params) spec += ":" + std::to_string(p);
  const Graph g = detail::graph_from_spec(spec);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw Error("cannot write " + o.out);
    f << write_edgelist(g);
  }
  out << "n " << g.n() << "\nedges " << g.edge_count() << "\n";
  const EigStructure es = eigenspaces(adjacency(g));
  out << "spectrum";
  for (int i = 0; i < es.m(); ++i)
    out << " " << es.distinct_values[static_cast<std::size_t>(i)] << "^" << es.multiplicities[static_cast<std::size_t>(i)];
  out << "\n";
  if (auto p = check_srg(g)) out << "srg(" << p->n << "," << p->r << "," << p->d_a << "," << p->d_na << ")\n";
  else out << "srg no\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds on graph edit distance from invariant convex relaxations", "gedlb"};
  app.require_subcommand(1);

  BoundOptions bo;
  auto* bound = app.add_subcommand("bound", "Symmetric lower bound between two graph files");
  bound->add_option("--g1", bo.g1)->required();
  bound->add_option("--g2", bo.g2)->required();
  bound->add_option("--sets", bo.sets, "Comma list of sets, intersected");
  bound->add_flag("--ext", bo.ext, "Allow vertex edits");
  bound->add_option("--cost", bo.cost, "Cost per edit operation");
  bound->add_option("--tol", bo.tol);
  bo.output.add_to(bound);

  ExactOptions xo;
  auto* exact = app.add_subcommand("exact", "Exact edit distance by search");
  exact->add_option("--g1", xo.g1)->required();
  exact->add_option("--g2", xo.g2)->required();
  exact->add_flag("--ext", xo.ext, "Allow vertex edits");
  xo.output.add_to(exact);

  ExperimentOptions eo;
  auto* experiment = app.add_subcommand("experiment", "Random-edit and dataset experiments");
  experiment->add_option("--name", eo.name)->required()->check(
      CLI::IsMember({"t9", "gq24", "e30", "windmill47", "dataset"}));
  experiment->add_option("--trials", eo.trials);
  experiment->add_option("--seed", eo.seed);
  experiment->add_option("--edit-grid", eo.grid, "start:stop:step");
  experiment->add_option("--sets", eo.sets, "Comma-separated configurations; '+' intersects");
  experiment->add_option("--dataset-dir", eo.dataset_dir);
  experiment->add_option("--pattern", eo.pattern, "Filename glob for dataset files");
  experiment->add_option("--pairs", eo.pairs, "Sample this many pairs (0: all)");
  experiment->add_option("--cost", eo.cost, "Cost per edit operation (dataset)");
  experiment->add_option("--tol", eo.tol);
  experiment->add_option("--threads", eo.threads);
  eo.output.add_to(experiment);

  CertifyOptions co;
  auto* certify = app.add_subcommand("certify", "Certificate parameters and conditions");
  certify->add_option("--graph", co.graph, "File or family:name:params")->required();
  certify->add_option("--d", co.d);
  certify->add_option("--edits", co.edits, "Edit file with 'add i j' / 'del i j' lines");
  certify->add_option("--c1", co.c1, "Comma list");
  certify->add_option("--eps", co.eps, "Comma list");
  certify->add_option("--alpha", co.alpha, "Comma list overriding alpha");
  certify->add_option("--corollary-c", co.corollary_c);
  certify->add_option("--probes", co.probes);
  certify->add_option("--seed", co.seed);
  co.output.add_to(certify);

  FamilyOptions fo;
  auto* family = app.add_subcommand("family", "Generate a named graph");
  family->add_option("--name", fo.name)->required()->check(
      CLI::IsMember({"johnson", "kneser", "hamming", "triangular", "windmill", "extremal", "gq24"}));
  family->add_option("--params", fo.params)->delimiter(',');
  family->add_option("--out", fo.out);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*bound) return cmd_bound(bo, out);
    if (*exact) return cmd_exact(xo, out);
    if (*experiment) return cmd_experiment(eo, out);
    if (*certify) return cmd_certify(co, out);
    return cmd_family(fo, out);
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NumericalBreakdown& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NotContracting& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace gedlb::cli
