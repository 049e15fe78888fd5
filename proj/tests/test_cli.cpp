#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "json_io.hpp"

using namespace mpuc;
using cli::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mpuc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return std::string(MPUC_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST(Cli, ModelsList) {
  const Result r = run({"models", "list"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["models"].size(), zoo().size());
  EXPECT_EQ(j["manifest"]["command"], "models");
}

TEST(Cli, ClassifyMatchesExpected) {
  const Result r = run({"classify", "--model", "bilayer-swap", "--n", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["spi"]["1"].get<double>(), std::log(0.5), 1e-9);
  EXPECT_LT(j["expected_deviation"].get<double>(), 1e-7);
  EXPECT_FALSE(j["manifest"].contains("wall_time_s"));
}

TEST(Cli, OutputIsDeterministic) {
  const std::string a = tmp_path("det_a.json"), b = tmp_path("det_b.json");
  ASSERT_EQ(run({"classify", "--model", "z3-refined", "--out", a}).code, 0);
  ASSERT_EQ(run({"classify", "--model", "z3-refined", "--out", b}).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
}

TEST(Cli, RecordTimeAddsWallTime) {
  const Result r = run({"--record-time", "classify", "--model", "identity"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["manifest"].contains("wall_time_s"));
}

TEST(Cli, ExitCodes) {
  Result r = run({"classify", "--model", "no-such-model"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"], "spec");
  EXPECT_EQ(run({"classify"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--tol", "nonsense=1", "models", "list"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);

  const std::string bad = tmp_path("malformed.json");
  write(bad, "{\"group\": [1, 2,");
  r = run({"classify", "--input", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["exit_code"], 2);
  EXPECT_EQ(run({"classify", "--input", tmp_path("does-not-exist.json")}).code, 2);

  write(bad, R"({"group": {"type": "product_cyclic", "orders": [2]}, "rep": {"matrices": {"0": [[[1,0]]]}}})");
  EXPECT_EQ(run({"classify", "--input", bad}).code, 2);
}

TEST(Cli, InputRoundTripFromGates) {
  ModelParams p;
  p.n = 3;
  const SymmetricMpu b = instantiate("bilayer-swap", p);
  json j;
  j["name"] = "bilayer-from-json";
  j["group"] = {{"type", "product_cyclic"}, {"orders", {3}}};
  json mats = json::object();
  for (int g = 0; g < 3; ++g) mats[std::to_string(g)] = cli::to_json(b.rep[g]);
  j["rep"] = {{"matrices", mats}};
  j["gates"] = {{"u", cli::to_json(b.sf.u)}, {"v", cli::to_json(b.sf.v)}, {"l", b.sf.l}, {"r", b.sf.r}, {"k", b.sf.k}, {"d", b.sf.d}};
  const std::string path = tmp_path("bilayer_gates.json");
  write(path, j.dump());
  const Result r = run({"classify", "--input", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const json out = json::parse(r.out);
  EXPECT_EQ(out["model"], "bilayer-from-json");
  EXPECT_NEAR(out["spi"]["1"].get<double>(), std::log(0.5), 1e-9);
  EXPECT_NEAR(out["ind"].get<double>(), 0.0, 1e-12);
}

TEST(Cli, SearchDecomp) {
  const Result r = run({"search-decomp", "--group", "Z3", "--rho", "2,2,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["partial"].get<bool>());
  EXPECT_EQ(j["count"].get<size_t>(), j["decompositions"].size());
  EXPECT_EQ(run({"search-decomp", "--group", "Zq", "--rho", "1"}).code, 2);
  EXPECT_EQ(run({"search-decomp", "--group", "Z2", "--rho", "1,2,3"}).code, 2);
  const Result p = run({"search-decomp", "--group", "Z2", "--rho", "32,32", "--budget", "100"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_TRUE(json::parse(p.out)["partial"].get<bool>());
}

TEST(Cli, InterferometryFit) {
  const Result r = run({"interferometry", "--model", "bilayer-swap", "--n", "3", "--g", "1", "--kmax", "3", "--fit"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["fit"]["slope"].get<double>(), j["expected"]["slope"].get<double>(), 1e-6);
  EXPECT_NEAR(j["fit"]["intercept"].get<double>(), std::log(0.5), 1e-6);
}

TEST(Cli, FloquetVerify) {
  const Result r = run({"floquet-verify", "--model", "zdzd-spt", "--d", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, Homotopy) {
  const Result r = run({"homotopy", "--model", "bilayer-swap", "--n", "3", "--samples", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"homotopy", "--model", "zdzd-spt"}).code, 1);
}

TEST(Cli, EvolveWritesCsvAndManifest) {
  const std::string out = tmp_path("evolve.csv");
  std::filesystem::remove(out);
  std::filesystem::remove(out + ".json");
  const Result r = run({"evolve", "--model", "zdzd-spt", "--d", "2", "--L", "4", "--steps", "4", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(out));
  std::string header, line;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("t,entropy", 0), 0u) << header;
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 5);
  const json m = json::parse(slurp(out + ".json"));
  EXPECT_EQ(m["manifest"]["command"], "evolve");
}
