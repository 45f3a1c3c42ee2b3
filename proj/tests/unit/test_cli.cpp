#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("seriate_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliRun run(const std::string& args, const std::string& env = "") const {
    const std::string err = path("stderr.txt");
    const std::string cmd = env + " " + SERIATE_CLI_PATH + " " + args + " 2>" + err + " >" + path("stdout.txt");
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = read(err);
    return r;
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenSeriateRoundTrip) {
  ASSERT_EQ(run("gen --dataset markov --n 12 --p 0.1 --samples 1000 --seed 3 --out " + path("m.txt")).code, 0);
  const auto r = run("seriate --input " + path("m.txt") + " --output " + path("ord.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("seriate:"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  const auto j = nlohmann::json::parse(read(path("ord.json")));
  std::vector<std::size_t> id(12);
  for (std::size_t i = 0; i < 12; ++i) id[i] = i;
  EXPECT_EQ(j["perm"].get<std::vector<std::size_t>>(), id);
  for (const char* key : {"cost", "stable", "lambda1", "gap"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(Cli, SeriateApplyAndBruteForce) {
  write("d.txt", "# tiny\n0011\n0111\n1100\n1000\n0001\n");
  ASSERT_EQ(run("seriate -i " + path("d.txt") + " --brute-force --apply " + path("s.txt") + " --out " + path("o.json")).code, 0);
  EXPECT_FALSE(read(path("s.txt")).empty());
  ASSERT_EQ(run("mi -i " + path("d.txt") + " --out " + path("w.csv") + " --spectrum-out " + path("s.json")).code, 0);
  ASSERT_EQ(run("seriate --weights " + path("w.csv") + " --out " + path("o2.json")).code, 0);
  const auto spec = nlohmann::json::parse(read(path("s.json")));
  EXPECT_EQ(spec["kind"], "unnormalized");
  EXPECT_EQ(spec["eigenvalues"].size(), 4u);
}

TEST_F(Cli, MiFormats) {
  write("d.txt", "00\n00\n11\n10\n");
  ASSERT_EQ(run("mi -i " + path("d.txt") + " --format json --out " + path("w.json")).code, 0);
  const auto j = nlohmann::json::parse(read(path("w.json")));
  EXPECT_NEAR(j["mi"][0][1].get<double>(), 0.2158, 1e-4);
  ASSERT_EQ(run("mi -i " + path("d.txt") + " --out " + path("w.csv")).code, 0);
  const auto csv = read(path("w.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST_F(Cli, EmbedAndTrain) {
  ASSERT_EQ(run("gen --dataset bas --rows 2 --cols 3 --out " + path("b.txt")).code, 0);
  ASSERT_EQ(run("gen --dataset markov --n 6 --samples 500 --out " + path("m.txt")).code, 0);
  ASSERT_EQ(run("embed -i " + path("m.txt") + " --dims 2 --out " + path("e.csv")).code, 0);
  const auto csv = read(path("e.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "site_index,coord_1,coord_2");
  const auto r = run("train -i " + path("b.txt") + " --chi 3 --epochs 20 --seed 2 --out " + path("model.json") +
                     " --trace " + path("trace.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = nlohmann::json::parse(read(path("model.json")));
  EXPECT_EQ(model["n"], 6);
  EXPECT_EQ(model["encoding"], "base64-f64le");
  EXPECT_EQ(read(path("trace.csv")).substr(0, 12), "epoch,kl,nll");
}

TEST_F(Cli, ExperimentReport) {
  const auto r = run("experiment --dataset bas --rows 2 --cols 3 --shuffles 3 --chi 3 --epochs 10 --seed 1 --out " +
                     path("report.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read(path("report.json")));
  EXPECT_EQ(j["trials"].size(), 3u);
  for (const char* key : {"median_kl_random", "median_kl_seriated", "win_fraction", "margin"})
    EXPECT_TRUE(j["summary"].contains(key)) << key;
  EXPECT_EQ(j["trials"][0]["init_hash_random"], j["trials"][0]["init_hash_seriated"]);
  EXPECT_TRUE(j["trials"][0].contains("kl_trace_random"));
}

TEST_F(Cli, SweepsWriteTables) {
  ASSERT_EQ(run("stability --dataset markov --n 8 --p 0.2 --counts 100,1000 --seeds 3 --out " + path("st.csv")).code, 0);
  const auto st = read(path("st.csv"));
  EXPECT_EQ(std::count(st.begin(), st.end(), '\n'), 4);
  ASSERT_EQ(run("stability --dataset markov --n 8 --counts 100 --seeds 2 --no-exact --format json --out " + path("st.json")).code, 0);
  EXPECT_EQ(nlohmann::json::parse(read(path("st.json")))["rows"].size(), 1u);
  ASSERT_EQ(run("connectivity --n 6 --chis 1,2 --samples 200 --seeds 3 --out " + path("c.csv")).code, 0);
  EXPECT_EQ(read(path("c.csv")).substr(0, 31), "chi,median_lambda1,seeds,isolat");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("seriate --bogus").code, 2);
  EXPECT_EQ(run("gen --dataset markov --n 4").code, 2);
  EXPECT_EQ(run("stability --dataset markov --counts 10,x --out " + path("x")).code, 2);
  write("bad.txt", "0101\n0102\n");
  const auto r = run("seriate -i " + path("bad.txt") + " --out " + path("o.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run("gen --dataset markov --p 1.5 --out " + path("x")).code, 3);
  EXPECT_EQ(run("gen --dataset bas --rows 5 --cols 5 --out " + path("x")).code, 4);
  write("d11.txt", "00000000000\n11111111111\n01010101010\n");
  EXPECT_EQ(run("seriate -i " + path("d11.txt") + " --brute-force --out " + path("o.json")).code, 4);
  EXPECT_EQ(run("seriate -i " + path("missing.txt") + " --out " + path("o.json")).code, 5);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, DeterministicAcrossThreads) {
  const std::string base = "experiment --dataset mps --n 6 --chi-data 2 --samples 200 --shuffles 4 --chi 2 --epochs 10 --seed 5";
  ASSERT_EQ(run(base + " --threads 1 --out " + path("a.json")).code, 0);
  ASSERT_EQ(run(base + " --threads 3 --out " + path("b.json")).code, 0);
  ASSERT_EQ(run(base + " --out " + path("c.json"), "SERIATE_TN_THREADS=2").code, 0);
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));
  EXPECT_EQ(read(path("a.json")), read(path("c.json")));
}
