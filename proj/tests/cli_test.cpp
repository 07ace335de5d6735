#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "homdens/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with `args`, capturing stdout; stderr is discarded.
Run run_cli(const std::string& args) {
  const std::string cmd = std::string(HOMDENS_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("homdens_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& data) const {
    homdens::write_file(path(name), data);
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, DensityOfEdgeInTriangle) {
  const auto g = write("k3.edges", "3 3\n0 1\n1 2\n0 2\n");
  const auto r = run_cli("density --graph " + g + " --pattern K2 --epsilon 0.01 --delta 0.05 --seed 7 --filter exact");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["t"].get<double>(), 2.0 / 3.0, 0.01);
  EXPECT_EQ(j["N"].get<std::uint64_t>(), 18445u);
  EXPECT_EQ(j["n_nodes"].get<std::uint64_t>(), 3u);
  EXPECT_EQ(j["pattern"].get<std::string>(), "K2");
  EXPECT_DOUBLE_EQ(j["epsilon"].get<double>(), 0.01);
  EXPECT_DOUBLE_EQ(j["delta"].get<double>(), 0.05);
  EXPECT_TRUE(j.contains("elapsed_ms"));
}

TEST_F(Cli, DensityIsReproducibleAndAcceptsConfidence) {
  const auto g = write("g.edges", "4 4\n0 1\n1 2\n2 3\n0 3\n");
  const auto a = run_cli("density --graph " + g + " --pattern atlas:4 --seed 3 --filter bloom --confidence 0.9");
  const auto b = run_cli("density --graph " + g + " --pattern atlas:4 --seed 3 --filter bloom --confidence 0.9 --threads 4");
  ASSERT_EQ(a.status, 0);
  const auto ja = nlohmann::json::parse(a.out);
  const auto jb = nlohmann::json::parse(b.out);
  EXPECT_EQ(ja["t"], jb["t"]);
  EXPECT_NEAR(ja["delta"].get<double>(), 0.1, 1e-12);
  const auto p = write("p.edges", "3 2\n0 1\n1 2\n");
  const auto c = run_cli("density --graph " + g + " --pattern " + p + " --weights degree");
  EXPECT_EQ(c.status, 0);
}

TEST_F(Cli, UsageAndDataErrors) {
  const auto g = write("k3.edges", "3 3\n0 1\n1 2\n0 2\n");
  EXPECT_EQ(run_cli("").status, 1);
  EXPECT_EQ(run_cli("frobnicate").status, 1);
  EXPECT_EQ(run_cli("density --graph " + g + " --pattern K2 --bogus 1").status, 1);
  EXPECT_EQ(run_cli("density --graph " + g + " --pattern K2 --epsilon -1").status, 1);
  EXPECT_EQ(run_cli("density --graph " + g + " --pattern K2 --filter cuckoo").status, 1);
  EXPECT_EQ(run_cli("density --graph " + g + " --pattern K2 --delta 0.1 --confidence 0.9").status, 1);
  EXPECT_EQ(run_cli("atlas --count 32").status, 1);
  const auto bad = write("bad.edges", "2 1\n0 5\n");
  EXPECT_EQ(run_cli("density --graph " + bad + " --pattern K2").status, 2);
  EXPECT_EQ(run_cli("density --graph " + path("missing.edges") + " --pattern K2").status, 2);
}

TEST_F(Cli, GenErWritesEdgeList) {
  auto r = run_cli("gen-er --n 100 --p 0 --seed 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "100 0\n");
  const auto out = path("k4.edges");
  r = run_cli("gen-er --n 4 --p 1 --seed 1 --out " + out);
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(homdens::read_file(out), "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
}

TEST_F(Cli, AtlasListsConnectedPatterns) {
  const auto r = run_cli("atlas --count 10");
  ASSERT_EQ(r.status, 0);
  const auto recs = homdens::parse_dataset(r.out);
  ASSERT_EQ(recs.size(), 10u);
  EXPECT_EQ(recs[0].id, "atlas:0");
  EXPECT_EQ(recs[9].graph.m(), 6u);
  for (const auto& rec : recs) EXPECT_LE(rec.graph.n(), 4u);
}

TEST_F(Cli, EmbedWritesCsvAndReportsFailures) {
  const auto ds = write("d.jsonl",
                        R"({"id":"a","n":3,"edges":[[0,1],[1,2]],"label":1})"
                        "\n"
                        R"({"id":"b","n":4,"edges":[[0,1],[1,2],[2,3],[0,3]],"label":0})"
                        "\n");
  const auto out = path("emb.csv");
  auto r = run_cli("embed --dataset " + ds + " --patterns atlas:10 --epsilon 0.1 --seed 2 --out " + out);
  ASSERT_EQ(r.status, 0);
  const auto csv = homdens::read_file(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,label,n,t_0,t_1,t_2,t_3,t_4,t_5,t_6,t_7,t_8,t_9");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const auto again = path("emb2.csv");
  run_cli("embed --dataset " + ds + " --patterns atlas:10 --epsilon 0.1 --seed 2 --threads 8 --out " + again);
  EXPECT_EQ(homdens::read_file(again), csv);

  r = run_cli("embed --dataset " + ds + " --patterns atlas:3 --weights attrs");
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out, "id,label,n,t_0,t_1,t_2\n");
  const auto broken = write("broken.jsonl", "{\"id\": 1\n");
  EXPECT_EQ(run_cli("embed --dataset " + broken).status, 2);
}

TEST_F(Cli, BenchWritesCsv) {
  const auto out = path("bench.csv");
  const auto r = run_cli("bench --ns 100,1e3 --pattern K3 --variants exact:0.05,bloom:0.05 --reps 1 --warmup 0 --out " + out);
  ASSERT_EQ(r.status, 0);
  const auto csv = homdens::read_file(out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,pattern,oracle,epsilon,N,build_ms,sample_ms,t_bar");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(run_cli("bench --ns 100,abc").status, 1);
  EXPECT_EQ(run_cli("bench --ns 100 --variants bloom").status, 1);
}
