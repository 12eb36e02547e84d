#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ris/classify.hpp"
#include "ris/config.hpp"
#include "ris/corpus.hpp"
#include "ris/series.hpp"

namespace ris::pipeline {

inline constexpr const char* kVersion = "0.1.0";

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message, std::string type = "pipeline")
      : std::runtime_error(message), stage_(std::move(stage)), type_(std::move(type)) {}
  [[nodiscard]] const std::string& stage() const { return stage_; }
  [[nodiscard]] const std::string& type() const { return type_; }

 private:
  std::string stage_;
  std::string type_;
};

// Command-line overrides layered on top of the config file.
struct RunOptions {
  std::filesystem::path out{"out"};
  std::optional<std::uint64_t> seed;
  std::optional<bool> smoothed;
  std::optional<bool> difference;
  std::optional<MonthRange> before;
  std::optional<MonthRange> after;
  std::optional<std::string> community;
  std::optional<YearMonth> focus;
  bool quiet{false};
};

// Stamped into every artifact. Contains no paths or clock readings, so
// identical inputs give identical bytes.
struct Provenance {
  std::string stage;
  std::string config_hash;
  std::uint64_t seed{0};

  [[nodiscard]] std::string csv_comment() const;  // "# ris ... " line without newline
  [[nodiscard]] nlohmann::json to_json() const;
};

// Artifact file names relative to --out.
namespace artifact {
inline constexpr const char* ingested = "ingested.jsonl";
inline constexpr const char* buckets = "buckets.csv";
inline constexpr const char* ingest_summary = "ingest_summary.json";
inline constexpr const char* scored = "scored.jsonl";
inline constexpr const char* series_json = "series.json";
inline constexpr const char* series_dir = "series";
inline constexpr const char* validation_json = "validation.json";
inline constexpr const char* correlations_csv = "correlations.csv";
inline constexpr const char* granger_csv = "granger.csv";
inline constexpr const char* changepoints_csv = "changepoints.csv";
inline constexpr const char* lexshift_csv = "lexshift.csv";
inline constexpr const char* report_json = "report.json";
inline constexpr const char* charts_dir = "charts";
}  // namespace artifact

// Line-delimited stores. The first line is a {"provenance": ...} object that
// readers skip.
void write_posts_jsonl(const std::filesystem::path& path, const std::vector<corpus::PostRecord>& posts,
                       const Provenance& prov);
std::vector<corpus::PostRecord> read_posts_jsonl(const std::filesystem::path& path);
void write_scored_jsonl(const std::filesystem::path& path, const std::vector<classify::ScoredPost>& scored,
                        const Provenance& prov);
std::vector<classify::ScoredPost> read_scored_jsonl(const std::filesystem::path& path);

// "community,month,n_total_prefilter,n_filtered,n_sampled"; posts are not stored.
void write_buckets_csv(const std::filesystem::path& path, const std::vector<corpus::MonthBucket>& buckets,
                       const Provenance& prov);
std::vector<corpus::MonthBucket> read_buckets_csv(const std::filesystem::path& path);

nlohmann::json series_to_json(const MonthlySeries& s);
MonthlySeries series_from_json(const nlohmann::json& j);
std::vector<MonthlySeries> read_series_json(const std::filesystem::path& path);

// Stages. Each reads only the config, its inputs and earlier artifacts under
// opts.out.
void ingest(const config::PipelineConfig& cfg, const RunOptions& opts);
void classify_stage(const config::PipelineConfig& cfg, const RunOptions& opts);
void score(const config::PipelineConfig& cfg, const RunOptions& opts);
void validate(const config::PipelineConfig& cfg, const RunOptions& opts);
void changepoint_stage(const config::PipelineConfig& cfg, const RunOptions& opts);
void lexshift_stage(const config::PipelineConfig& cfg, const RunOptions& opts);
void report(const config::PipelineConfig& cfg, const RunOptions& opts);
void run_all(const config::PipelineConfig& cfg, const RunOptions& opts);

const std::vector<std::string>& subcommands();  // in pipeline order, then "run-all"
void run(const std::string& subcommand, const config::PipelineConfig& cfg, const RunOptions& opts);

// Single-line JSON error record for stderr.
std::string error_line(const std::string& stage, const std::string& type, const std::string& message);

}  // namespace ris::pipeline
