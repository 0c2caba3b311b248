#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "catfish/cli.hpp"
#include "catfish/corpus.hpp"
#include "catfish/detector.hpp"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace catfish;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t eligible_unverified(const Corpus& c, std::size_t min_comments) {
  std::size_t n = 0;
  for (const auto& p : c.profiles) n += !p.verified && p.comments.size() >= min_comments;
  return n;
}

// synth -> train x2 -> detect -> analyze inside `dir`.
void pipeline(const fs::path& dir) {
  const auto s = (dir / "corpus.jsonl").string();
  ASSERT_EQ(run({"synth", "--out", s, "--n", "600", "--verified-fraction", "0.2", "--seed", "5"}).code, 0);
  ASSERT_EQ(run({"train", "--corpus", s, "--task", "gender", "--out", (dir / "g.json").string()}).code, 0);
  ASSERT_EQ(run({"train", "--corpus", s, "--task", "age", "--features", "content", "--out",
                 (dir / "a.json").string()})
                .code,
            0);
  const auto d = run({"detect", "--corpus", s, "--gender-model", (dir / "g.json").string(), "--age-model",
                      (dir / "a.json").string(), "--out", (dir / "verdicts.csv").string(), "--summary",
                      (dir / "summary.csv").string(), "--truth", (dir / "corpus.truth.jsonl").string()});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NE(d.out.find("oracle:"), std::string::npos);
  const auto a = run({"analyze", "--corpus", s, "--verdicts", (dir / "verdicts.csv").string(), "--out-dir",
                      (dir / "reports").string()});
  ASSERT_EQ(a.code, 0) << a.err;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({"--version"}).code, cli::kExitOk);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"synth", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"evaluate", "--corpus", "/definitely/missing.jsonl"}).code, cli::kExitUsage);

  const auto dir = fixture::temp_dir("cli_codes");
  const auto bad = dir / "bad.jsonl";
  std::ofstream(bad) << "{\"id\": \"x\"}\n";
  const auto r = run({"train", "--corpus", bad.string(), "--task", "gender", "--out", (dir / "m.json").string()});
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;

  const auto range = run({"synth", "--out", (dir / "c.jsonl").string(), "--catfish-fraction", "2"});
  EXPECT_EQ(range.code, cli::kExitValidation);
}

TEST(Cli, EndToEndArtifacts) {
  const auto dir = fixture::temp_dir("cli_e2e");
  pipeline(dir);
  const auto corpus = load_corpus(dir / "corpus.jsonl");
  const auto verdicts = load_verdicts(dir / "verdicts.csv");
  EXPECT_EQ(verdicts.size(), eligible_unverified(corpus, 10));
  for (const char* f : {"corpus.jsonl", "g.json", "a.json", "verdicts.csv"}) {
    const auto m = dir / (std::string(f) + ".manifest.json");
    ASSERT_TRUE(fs::exists(m)) << m;
    const auto j = nlohmann::json::parse(slurp(m));
    for (const char* key : {"command", "options", "inputs", "output", "seed", "tool_version", "duration_seconds"})
      EXPECT_TRUE(j.contains(key)) << f << " " << key;
  }
  for (const char* f : {"demographics_age.csv", "demographics_summary.csv", "popularity_groups.csv",
                        "popularity_points.csv", "interest_friends_by_age.csv", "interest_shares.csv",
                        "age_diff.csv"})
    EXPECT_TRUE(fs::exists(dir / "reports" / f)) << f;
}

TEST(Cli, RerunIsByteIdentical) {
  const auto a = fixture::temp_dir("cli_rerun_a");
  const auto b = fixture::temp_dir("cli_rerun_b");
  pipeline(a);
  pipeline(b);
  for (const char* f : {"corpus.jsonl", "corpus.truth.jsonl", "verdicts.csv", "summary.csv",
                        "reports/popularity_groups.csv", "reports/age_diff.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  // model files embed their training paths only through manifests
  EXPECT_EQ(slurp(a / "g.json"), slurp(b / "g.json"));
}

TEST(Cli, SeedFromEnvironment) {
  const auto dir = fixture::temp_dir("cli_env");
  ::setenv(cli::kSeedEnv, "77", 1);
  const auto env = run({"synth", "--out", (dir / "env.jsonl").string(), "--n", "80"});
  ::unsetenv(cli::kSeedEnv);
  ASSERT_EQ(env.code, 0);
  ASSERT_EQ(run({"synth", "--out", (dir / "flag.jsonl").string(), "--n", "80", "--seed", "77"}).code, 0);
  ASSERT_EQ(run({"synth", "--out", (dir / "zero.jsonl").string(), "--n", "80"}).code, 0);
  EXPECT_EQ(slurp(dir / "env.jsonl"), slurp(dir / "flag.jsonl"));
  EXPECT_NE(slurp(dir / "env.jsonl"), slurp(dir / "zero.jsonl"));

  ::setenv(cli::kSeedEnv, "not-a-number", 1);
  EXPECT_EQ(run({"synth", "--out", (dir / "x.jsonl").string()}).code, cli::kExitUsage);
  ::unsetenv(cli::kSeedEnv);
}

TEST(Cli, EvaluateWritesReport) {
  const auto dir = fixture::temp_dir("cli_eval");
  const auto s = (dir / "c.jsonl").string();
  ASSERT_EQ(run({"synth", "--out", s, "--n", "600", "--verified-fraction", "0.2", "--seed", "3"}).code, 0);
  const auto r = run({"evaluate", "--corpus", s, "--task", "gender", "--k", "5", "--out", (dir / "r.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pooled"), std::string::npos);
  std::istringstream in(slurp(dir / "r.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1u + 5u + 2u);
}
