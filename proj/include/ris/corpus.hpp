#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ris/month.hpp"

namespace ris::corpus {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PostKind { submission, comment };

const char* to_string(PostKind kind);
PostKind parse_kind(std::string_view s);

struct PostRecord {
  std::string id;
  std::string community;  // lowercase, no "r/" prefix
  PostKind kind{PostKind::comment};
  std::int64_t created{0};  // UTC epoch seconds
  std::string text;         // title and body joined for submissions
};

// Maps source field names onto PostRecord fields. Text fields that are
// present are joined with a newline, in the listed order.
struct FieldSchema {
  std::string id{"id"};
  std::string community{"subreddit"};
  std::string created{"created_utc"};
  std::string kind{"kind"};
  // When the kind field is missing a record with this field is a submission.
  std::string title{"title"};
  std::vector<std::string> text_fields{"title", "selftext", "body", "text"};
};

struct ParseStats {
  std::size_t lines{0};
  std::size_t blank{0};
  std::size_t malformed{0};
  std::size_t duplicates{0};
};

struct ParsedPosts {
  std::vector<PostRecord> posts;
  ParseStats stats;
};

// One JSON object per line. Malformed lines are skipped and counted,
// duplicate ids keep the first occurrence. Throws CorpusError when more than
// half of the non-blank lines are malformed.
ParsedPosts parse_posts(std::istream& in, const FieldSchema& schema = {});
ParsedPosts parse_posts_file(const std::filesystem::path& path, const FieldSchema& schema = {});

std::string normalize_community(std::string_view name);

struct KeywordConfig {
  std::vector<std::string> price_terms;
  std::vector<std::string> geo_terms;
  std::set<std::string> geo_required;

  static KeywordConfig defaults();

  // Sections [price_terms], [geo_terms], [geo_required], one entry per line.
  // Sections that are absent keep their default values.
  static KeywordConfig load(const std::filesystem::path& path);
};

struct FilterCounts {
  std::size_t kept{0};
  std::size_t dropped{0};
};

struct FilterResult {
  std::vector<PostRecord> posts;
  std::map<std::string, FilterCounts> per_community;
};

// Word-boundary matching: a price term matches a token it prefixes
// ("price" matches "prices" but "car" never matches "scarcity"); geo terms
// must match whole tokens, multi-word terms as contiguous token runs.
class KeywordMatcher {
 public:
  explicit KeywordMatcher(const KeywordConfig& cfg);

  [[nodiscard]] bool has_price_term(const std::vector<std::string>& tokens) const;
  [[nodiscard]] bool has_geo_term(const std::vector<std::string>& tokens) const;
  [[nodiscard]] bool accepts(const PostRecord& post) const;

 private:
  std::vector<std::vector<std::string>> price_;
  std::vector<std::vector<std::string>> geo_;
  std::set<std::string> geo_required_;
};

FilterResult filter_price_related(const std::vector<PostRecord>& posts, const KeywordConfig& cfg);

struct MonthBucket {
  std::string community;
  YearMonth month;
  std::vector<PostRecord> posts;
  // Keyword-matched posts before sampling; the volume-share numerator.
  std::size_t n_filtered{0};
  // All posts of the community-month before keyword filtering.
  std::size_t n_total_prefilter{0};
};

struct BucketResult {
  std::vector<MonthBucket> buckets;  // ordered by community, then month
  std::size_t out_of_range{0};
};

// One bucket per (community, month) over the whole range, empty months
// included. Communities default to those seen in `posts`.
BucketResult bucket_by_month(const std::vector<PostRecord>& posts, MonthRange range,
                             const std::vector<std::string>& communities = {});

// Sets n_total_prefilter from the unfiltered post stream.
void set_prefilter_totals(std::vector<MonthBucket>& buckets, const std::vector<PostRecord>& unfiltered);

struct SamplingCaps {
  std::size_t submissions{200};
  std::size_t comments{800};
};

// Caps submissions and comments independently with a uniform sample without
// replacement. The generator is keyed by (seed, community, month, kind) so
// the draw for one bucket never depends on any other bucket.
MonthBucket sample_month(const MonthBucket& bucket, SamplingCaps caps, std::uint64_t seed);

}  // namespace ris::corpus
