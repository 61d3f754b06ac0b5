#include <gedlb/io.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"

using namespace gedlb;
namespace fs = std::filesystem;

namespace {

const fs::path kCtDir = fs::path(GEDLB_TEST_DATA_DIR) / "ct";

Graph ct(const std::string& name) { return read_ct(detail::read_file(kCtDir / (name + ".ct"))); }

int parse_error_line(std::string_view text, bool ct_format) {
  try {
    if (ct_format) read_ct(text);
    else read_edgelist(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gedlb_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

}  // namespace

TEST(EdgeList, Examples) {
  EXPECT_EQ(read_edgelist("n 3\n0 1\n1 2"), Graph::path(3));
  EXPECT_EQ(write_edgelist(Graph::complete(3)), "n 3\n0 1\n0 2\n1 2\n");
  EXPECT_EQ(read_edgelist("# comment\n\nn 2   # trailing\r\n0 1\r\n"), Graph::complete(2));
  EXPECT_EQ(read_edgelist("n 0\n"), Graph::empty(0));
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  EXPECT_THROW(read_edgelist("n 2\n0 0"), ParseError);
  EXPECT_EQ(parse_error_line("n 2\n0 0", false), 2);
  EXPECT_EQ(parse_error_line("n 3\n0 1\n\n1 0\n", false), 4);
  EXPECT_EQ(parse_error_line("n 3\n0 3\n", false), 2);
  EXPECT_EQ(parse_error_line("0 1\n", false), 1);
  EXPECT_EQ(parse_error_line("n 3\n0 x\n", false), 2);
  EXPECT_EQ(parse_error_line("n 3\n0 1 2\n", false), 2);
  EXPECT_THROW(read_edgelist(""), ParseError);
}

TEST(EdgeList, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_graph(t % 15, 0.1 + 0.008 * t, rng);
    const std::string text = write_edgelist(g);
    EXPECT_EQ(read_edgelist(text), g);
    EXPECT_EQ(write_edgelist(read_edgelist(text)), text);
  }
}

TEST(ChemicalTable, Examples) {
  EXPECT_EQ(read_ct("propane\n3 2\nC\nC\nC\n1 2 1\n2 3 1\n"), Graph::path(3));
  EXPECT_EQ(read_ct("methane\n1 0\n  0.0 0.0 0.0 C\n"), Graph::empty(1));
  EXPECT_THROW(read_ct("x\n3 1\nC\nC\nC\n1 4 1\n"), ParseError);
  EXPECT_EQ(parse_error_line("x\n3 1\nC\nC\nC\n1 4 1\n", true), 6);
  EXPECT_EQ(parse_error_line("x\n3 2\nC\nC\nC\n1 2\n", true), 6);
  EXPECT_EQ(parse_error_line("x\n3 1\nC\nC\nC\n2 2\n", true), 6);
  EXPECT_THROW(read_ct("nothing here\n"), ParseError);
  // Duplicate bonds collapse; fixed-width columns are accepted.
  EXPECT_EQ(read_ct("d\n2 2\nC\nC\n1 2 1\n2 1 1\n"), Graph::complete(2));
  EXPECT_EQ(read_ct("w\n  3  2  0  0\nC\nC\nC\n  1  2  1\n  2  3  2\n"), Graph::path(3));
}

TEST(ChemicalTable, BundledFiles) {
  EXPECT_EQ(ct("01_methane"), Graph::empty(1));
  EXPECT_EQ(ct("02_ethane"), Graph::complete(2));
  EXPECT_EQ(ct("03_propane"), Graph::path(3));
  EXPECT_EQ(ct("04_isobutane"), Graph::star(3));
  EXPECT_EQ(ct("05_butane"), Graph::path(4));
  EXPECT_EQ(ct("06_neopentane"), Graph::star(4));
  EXPECT_EQ(ct("07_methylbutane"), Graph(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}}));
  EXPECT_EQ(ct("08_benzene"), Graph::cycle(6));
}

TEST(Dataset, BundledCorpus) {
  const Dataset d = load_dataset(kCtDir);
  ASSERT_EQ(d.graphs.size(), 8u);
  EXPECT_TRUE(d.errors.empty());
  EXPECT_EQ(d.graphs.front().first, "01_methane.ct");
  EXPECT_EQ(d.stats.count, 8);
  EXPECT_DOUBLE_EQ(d.stats.mean_vertices, 30.0 / 8.0);
  EXPECT_DOUBLE_EQ(d.stats.mean_degree, 2.0 * 23.0 / 30.0);
  EXPECT_EQ(load_dataset(kCtDir, "0[1-3]*.ct").graphs.size(), 3u);
}

TEST(Dataset, StatsAreOrderIndependent) {
  auto graphs = load_dataset(kCtDir).graphs;
  const DatasetStats a = dataset_stats(graphs);
  std::reverse(graphs.begin(), graphs.end());
  const DatasetStats b = dataset_stats(graphs);
  EXPECT_EQ(a.count, b.count);
  EXPECT_DOUBLE_EQ(a.mean_vertices, b.mean_vertices);
  EXPECT_DOUBLE_EQ(a.mean_degree, b.mean_degree);
}

TEST(Dataset, CollectsPerFileErrors) {
  TempDir dir;
  dir.write("a.txt", "n 2\n0 1\n");
  dir.write("b.txt", "n 2\n0 0\n");
  dir.write("c.ct", "x\n2 1\nC\nC\n1 2\n");
  const Dataset d = load_dataset(dir.path);
  EXPECT_EQ(d.graphs.size(), 2u);
  ASSERT_EQ(d.errors.size(), 1u);
  EXPECT_EQ(d.errors[0].first, "b.txt");
}

TEST(Dataset, EmptyDirectoryThrows) {
  TempDir dir;
  EXPECT_THROW(load_dataset(dir.path), EmptyDataset);
  EXPECT_THROW(load_dataset(dir.path / "missing"), EmptyDataset);
  dir.write("bad.txt", "garbage\n");
  EXPECT_THROW(load_dataset(dir.path), EmptyDataset);
}

TEST(Emit, CsvHeaderAndRows) {
  EXPECT_EQ(emit_results({}, OutputFormat::Csv, {"a", "b"}), "a,b\n");
  BoundResult b;
  b.lower_bound = 1.0 / 3.0;
  b.iterations = 42;
  const std::string csv = emit_results({to_record(b)}, OutputFormat::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lower_bound,direction,status,forward,backward,achieved_by,iterations");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_NE(csv.find("0.333333,"), std::string::npos);
  Record quoted{{"s", std::string("a,\"b\"")}};
  EXPECT_EQ(emit_results({quoted}, OutputFormat::Csv), "s\n\"a,\"\"b\"\"\"\n");
}

TEST(Emit, JsonRoundTrip) {
  std::vector<Record> recs;
  for (int i = 0; i < 3; ++i)
    recs.push_back({{"i", static_cast<std::int64_t>(i)}, {"x", 0.1 * i + 1e-9}, {"ok", i % 2 == 0}, {"name", std::string("g") + std::to_string(i)}});
  const auto j = nlohmann::json::parse(emit_results(recs, OutputFormat::Json));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[2]["i"], 2);
  EXPECT_DOUBLE_EQ(j[2]["x"].get<double>(), 0.2);
  EXPECT_EQ(j[1]["ok"], false);
  EXPECT_EQ(j[0]["name"], "g0");
  EXPECT_EQ(nlohmann::json::parse(emit_results({}, OutputFormat::Json)).size(), 0u);
  EXPECT_EQ(parse_output_format("csv"), OutputFormat::Csv);
  EXPECT_THROW(parse_output_format("xml"), BadParams);
}
