#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ris/corpus.hpp"
#include "ris/month.hpp"

namespace ris::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed "[section]" / "key = value" text. Blank lines and lines starting
// with '#' or ';' are ignored. Keys are unique within a section.
using IniData = std::map<std::string, std::map<std::string, std::string>>;
IniData parse_ini(const std::string& text, const std::string& origin = "<config>");

struct PathsConfig {
  std::vector<std::filesystem::path> corpus;
  std::vector<std::filesystem::path> labels;
  // Indicator name -> "DATE,VALUE" CSV.
  std::map<std::string, std::filesystem::path> indicators;
  std::optional<std::filesystem::path> lexicon;
  std::filesystem::path stopwords;
  std::optional<std::filesystem::path> keywords;
};

struct CorpusConfig {
  MonthRange range{{2012, 1}, {2022, 12}};
  std::vector<std::string> communities;  // empty: every community seen
  corpus::SamplingCaps caps;
  std::uint64_t seed{42};
  corpus::FieldSchema schema;
  corpus::KeywordConfig keywords;
};

enum class BackendKind { label_file, remote };

struct ClassifyConfig {
  BackendKind backend{BackendKind::label_file};
  std::string url;
  std::string token_env{"RIS_API_TOKEN"};
  int max_attempts{3};
  int max_in_flight{4};
  double requests_per_second{0.0};
  int timeout_ms{30000};
  std::size_t workers{1};
};

struct ValidateConfig {
  std::optional<MonthRange> window;
  std::vector<std::size_t> lags{1, 2, 3};
  bool smoothed{true};
  bool difference{false};
  std::vector<std::string> series{"ris_aggregate", "volume_share", "sentiment"};
};

struct ChangepointConfig {
  std::vector<double> c{0.5, 1.0, 2.0};
  std::vector<std::size_t> m{2};
  double plot_c{1.0};
  std::optional<YearMonth> focus;
};

struct LexshiftConfig {
  std::size_t min_df{5};
  double max_df_ratio{0.95};
  std::size_t top_k{15};
  std::optional<MonthRange> before;
  std::optional<MonthRange> after;
  std::string community;  // empty: all communities
};

struct PipelineConfig {
  std::filesystem::path source;  // the config file itself
  std::string text;              // raw bytes, hashed for provenance
  PathsConfig paths;
  CorpusConfig corpus;
  ClassifyConfig classify;
  int smoothing_window{3};
  ValidateConfig validate;
  ChangepointConfig changepoint;
  LexshiftConfig lexshift;

  // FNV-1a of the raw config bytes, hex.
  [[nodiscard]] std::string hash() const;
};

// Relative paths resolve against the config file's directory. Every
// referenced input must exist and every window must have start < end.
PipelineConfig load(const std::filesystem::path& path);
PipelineConfig from_text(const std::string& text, const std::filesystem::path& base_dir,
                         const std::filesystem::path& source = "<config>");

}  // namespace ris::config
