#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ris/pipeline.hpp"
#include "ris/svg.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixture = fs::path(RIS_SOURCE_DIR) / "fixtures" / "synthetic";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int status{-1};
  std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const auto err_file = scratch / "stderr.txt";
  const std::string cmd = std::string("\"") + RIS_CLI + "\" " + args + " 2> \"" + err_file.string() + "\"";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.err = slurp(err_file);
  return r;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    scratch_ = fs::temp_directory_path() / ("ris_pipeline_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(scratch_);
    fs::create_directories(scratch_);
  }
  void TearDown() override { fs::remove_all(scratch_); }

  fs::path scratch_;
};

TEST_F(PipelineTest, RunAllWritesEveryArtifact) {
  const auto out = scratch_ / "out";
  const auto r = run_cli("run-all -q -c \"" + (kFixture / "config.ini").string() + "\" -o \"" + out.string() + "\"",
                         scratch_);
  ASSERT_EQ(r.status, 0) << r.err;

  using namespace ris::pipeline::artifact;
  for (const char* f : {ingested, buckets, ingest_summary, scored, series_json, validation_json, correlations_csv,
                        granger_csv, changepoints_csv, lexshift_csv, report_json}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  for (const char* f : {ingest_summary, series_json, validation_json, report_json}) {
    const auto j = json::parse(slurp(out / f));
    EXPECT_TRUE(j.contains("provenance")) << f;
    EXPECT_EQ(j["provenance"]["version"], ris::pipeline::kVersion);
  }
  for (const char* f : {buckets, correlations_csv, granger_csv, changepoints_csv, lexshift_csv}) {
    EXPECT_EQ(slurp(out / f).rfind("# ris ", 0), 0u) << f;
  }

  const auto scored_posts = ris::pipeline::read_scored_jsonl(out / scored);
  EXPECT_FALSE(scored_posts.empty());
  const auto all = ris::pipeline::read_series_json(out / series_json);
  bool has_smoothed = false;
  for (const auto& s : all) {
    if (s.name == "ris_aggregate_ma3") {
      has_smoothed = true;
      EXPECT_EQ(s.points.front().month, (ris::YearMonth{2012, 3}));
    }
  }
  EXPECT_TRUE(has_smoothed);
  EXPECT_TRUE(fs::exists(out / "series" / "ris_aggregate.csv"));
  EXPECT_TRUE(fs::exists(out / charts_dir / "ris_aggregate.svg"));

  const auto changepoints = slurp(out / changepoints_csv);
  EXPECT_NE(changepoints.find("community,c,m,n_changepoints,dates"), std::string::npos);
  const auto lex = slurp(out / lexshift_csv);
  EXPECT_NE(lex.find("bigram,mean_before,mean_after,delta,period"), std::string::npos);
  EXPECT_NE(lex.find(",emerging"), std::string::npos);
  EXPECT_NE(lex.find(",declining"), std::string::npos);
}

TEST_F(PipelineTest, RerunsAreByteIdentical) {
  const auto cfg = (kFixture / "config.ini").string();
  ASSERT_EQ(run_cli("run-all -q -c \"" + cfg + "\" -o \"" + (scratch_ / "a").string() + "\"", scratch_).status, 0);
  ASSERT_EQ(run_cli("run-all -q -c \"" + cfg + "\" -o \"" + (scratch_ / "b").string() + "\"", scratch_).status, 0);
  const auto a = tree(scratch_ / "a");
  const auto b = tree(scratch_ / "b");
  EXPECT_GT(a.size(), 15u);
  EXPECT_TRUE(a == b);
}

TEST_F(PipelineTest, SeedOverrideChangesSample) {
  const auto cfg = (kFixture / "config.ini").string();
  ASSERT_EQ(run_cli("ingest -q -c \"" + cfg + "\" -o \"" + (scratch_ / "a").string() + "\"", scratch_).status, 0);
  ASSERT_EQ(run_cli("ingest -q --seed 99 -c \"" + cfg + "\" -o \"" + (scratch_ / "b").string() + "\"", scratch_).status,
            0);
  EXPECT_NE(slurp(scratch_ / "a" / "ingested.jsonl"), slurp(scratch_ / "b" / "ingested.jsonl"));
}

TEST_F(PipelineTest, ShortOverlapFailsNamingBothSeries) {
  std::ofstream(scratch_ / "short.csv") << "DATE,VALUE\n2012-03-01,1.0\n2012-04-01,2.0\n";
  std::string text = slurp(kFixture / "config.ini");
  const auto rebase = [&](const std::string& key, const fs::path& target) {
    const auto pos = text.find(key + " = ");
    const auto end = text.find('\n', pos);
    text.replace(pos, end - pos, key + " = " + target.string());
  };
  rebase("corpus", kFixture / "corpus.jsonl");
  rebase("labels", kFixture / "labels.csv");
  rebase("lexicon", kFixture / "lexicon.tsv");
  rebase("stopwords", fs::path(RIS_SOURCE_DIR) / "data" / "stopwords_en.txt");
  rebase("indicator.cpi", scratch_ / "short.csv");
  rebase("indicator.mich", kFixture / "mich.csv");
  std::ofstream(scratch_ / "config.ini") << text;

  const auto cfg = (scratch_ / "config.ini").string();
  const auto out = (scratch_ / "out").string();
  for (const char* stage : {"ingest", "classify", "score"}) {
    ASSERT_EQ(run_cli(std::string(stage) + " -q -c \"" + cfg + "\" -o \"" + out + "\"", scratch_).status, 0) << stage;
  }
  const auto r = run_cli("validate -q -c \"" + cfg + "\" -o \"" + out + "\"", scratch_);
  EXPECT_NE(r.status, 0);
  const auto line = r.err.substr(0, r.err.find('\n'));
  const auto j = json::parse(line);
  EXPECT_EQ(j["error"]["stage"], "validate");
  const std::string msg = j["error"]["message"];
  EXPECT_NE(msg.find("ris_aggregate_ma3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cpi"), std::string::npos) << msg;
}

TEST_F(PipelineTest, MissingArtifactAndUsageErrors) {
  const auto cfg = (kFixture / "config.ini").string();
  const auto r = run_cli("validate -q -c \"" + cfg + "\" -o \"" + (scratch_ / "empty").string() + "\"", scratch_);
  EXPECT_EQ(r.status, 1);
  const auto j = json::parse(r.err.substr(0, r.err.find('\n')));
  EXPECT_EQ(j["error"]["stage"], "validate");

  EXPECT_EQ(run_cli("-c \"" + cfg + "\"", scratch_).status, 2);
  EXPECT_EQ(run_cli("ingest -c \"" + (scratch_ / "absent.ini").string() + "\"", scratch_).status, 2);
}

TEST(ErrorLine, SingleLineJson) {
  const auto line = ris::pipeline::error_line("lexshift", "empty_vocabulary", "no bigram\nsurvives \"bounds\"");
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = json::parse(line);
  EXPECT_EQ(j["error"]["type"], "empty_vocabulary");
  EXPECT_EQ(j["error"]["message"], "no bigram\nsurvives \"bounds\"");
}

TEST(Provenance, NoPathsOrClock) {
  const ris::pipeline::Provenance p{"score", "00000000deadbeef", 7};
  EXPECT_EQ(p.csv_comment(), "# ris 0.1.0 stage=score config=00000000deadbeef seed=7");
  EXPECT_EQ(p.to_json()["seed"], 7);
}

TEST(Svg, DeterministicChartWithMarkersAndGaps) {
  ris::MonthlySeries s{"ris <food>", ris::SeriesUnit::score, {}};
  for (int i = 0; i < 24; ++i) {
    if (i == 10) continue;
    s.points.push_back({ris::YearMonth{2020, 1}.plus(i), std::sin(i * 0.3), 3});
  }
  ris::svg::Chart chart{"RIS & friends", {s}, {{2020, 6}, {2021, 3}}, ris::YearMonth{2021, 3}, "seed=7", 900, 360};
  const auto a = ris::svg::line_chart(chart);
  EXPECT_EQ(a, ris::svg::line_chart(chart));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("RIS &amp; friends"), std::string::npos);
  EXPECT_NE(a.find("ris &lt;food&gt;"), std::string::npos);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
  EXPECT_NE(a.find("<!-- seed=7 -->"), std::string::npos);
  // The gap starts a second subpath.
  const auto d = a.substr(a.find("<path d=\""));
  const auto path = d.substr(0, d.find('"', 9));
  EXPECT_EQ(std::count(path.begin(), path.end(), 'M'), 2);
  EXPECT_EQ(ris::svg::escape("a\"b<>&"), "a&quot;b&lt;&gt;&amp;");
}

}  // namespace
