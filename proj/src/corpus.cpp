#include "ris/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ris/rng.hpp"
#include "ris/text.hpp"

namespace ris::corpus {

using json = nlohmann::json;

const char* to_string(PostKind kind) { return kind == PostKind::submission ? "submission" : "comment"; }

PostKind parse_kind(std::string_view s) {
  const auto k = text::to_lower(text::trim(s));
  if (k == "submission" || k == "t3" || k == "post") return PostKind::submission;
  if (k == "comment" || k == "t1") return PostKind::comment;
  throw std::invalid_argument("unknown post kind '" + std::string(s) + "'");
}

std::string normalize_community(std::string_view name) {
  auto n = text::to_lower(text::trim(name));
  if (n.rfind("/r/", 0) == 0) n.erase(0, 3);
  if (n.rfind("r/", 0) == 0) n.erase(0, 2);
  return n;
}

namespace {

// Returns an empty string on success, otherwise the reason the record was
// rejected.
std::string record_from_json(const json& obj, const FieldSchema& schema, PostRecord& out) {
  if (!obj.is_object()) return "not an object";

  auto id_it = obj.find(schema.id);
  if (id_it == obj.end()) return "missing '" + schema.id + "'";
  if (id_it->is_string()) {
    out.id = id_it->get<std::string>();
  } else if (id_it->is_number_integer()) {
    out.id = std::to_string(id_it->get<long long>());
  } else {
    return "bad '" + schema.id + "'";
  }
  if (out.id.empty()) return "empty id";

  auto com_it = obj.find(schema.community);
  if (com_it == obj.end() || !com_it->is_string()) return "missing '" + schema.community + "'";
  out.community = normalize_community(com_it->get<std::string>());
  if (out.community.empty()) return "empty community";

  auto cr_it = obj.find(schema.created);
  if (cr_it == obj.end()) return "missing '" + schema.created + "'";
  if (cr_it->is_number()) {
    out.created = static_cast<std::int64_t>(cr_it->get<double>());
  } else if (cr_it->is_string()) {
    try {
      out.created = std::stoll(cr_it->get<std::string>());
    } catch (const std::exception&) {
      return "bad '" + schema.created + "'";
    }
  } else {
    return "bad '" + schema.created + "'";
  }
  if (out.created <= 0) return "non-positive timestamp";

  if (auto k = obj.find(schema.kind); k != obj.end() && k->is_string()) {
    try {
      out.kind = parse_kind(k->get<std::string>());
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
  } else {
    out.kind = obj.contains(schema.title) ? PostKind::submission : PostKind::comment;
  }

  out.text.clear();
  for (const auto& field : schema.text_fields) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) continue;
    const auto& s = it->get_ref<const std::string&>();
    if (s.empty()) continue;
    if (!out.text.empty()) out.text.push_back('\n');
    out.text += s;
  }
  if (out.text.empty() && out.kind == PostKind::comment) return "empty comment text";
  return {};
}

}  // namespace

ParsedPosts parse_posts(std::istream& in, const FieldSchema& schema) {
  if (!in) throw CorpusError("post stream is not readable");
  ParsedPosts result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t first_bad_line = 0;
  std::string first_bad_reason;

  while (std::getline(in, line)) {
    ++result.stats.lines;
    if (text::trim(line).empty()) {
      ++result.stats.blank;
      continue;
    }
    PostRecord rec;
    std::string reason;
    try {
      reason = record_from_json(json::parse(line), schema, rec);
    } catch (const json::exception& e) {
      reason = "invalid JSON";
    }
    if (!reason.empty()) {
      if (result.stats.malformed == 0) {
        first_bad_line = result.stats.lines;
        first_bad_reason = reason;
      }
      ++result.stats.malformed;
      continue;
    }
    if (!seen.insert(rec.id).second) {
      ++result.stats.duplicates;
      continue;
    }
    result.posts.push_back(std::move(rec));
  }
  if (in.bad()) throw CorpusError("error while reading post stream");

  const std::size_t non_blank = result.stats.lines - result.stats.blank;
  if (non_blank > 0 && 2 * result.stats.malformed > non_blank) {
    throw CorpusError(std::to_string(result.stats.malformed) + " of " + std::to_string(non_blank) +
                      " records are malformed (first at line " + std::to_string(first_bad_line) + ": " +
                      first_bad_reason + "); check the field schema");
  }
  return result;
}

ParsedPosts parse_posts_file(const std::filesystem::path& path, const FieldSchema& schema) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open post file '" + path.string() + "'");
  return parse_posts(in, schema);
}

KeywordConfig KeywordConfig::defaults() {
  KeywordConfig cfg;
  cfg.price_terms = {"price", "cost", "inflation", "deflation", "expensive", "cheap", "purchase", "sale"};
  cfg.geo_required = {"travel"};
  cfg.geo_terms = {
      // country
      "america", "united states", "usa", "the us", "u.s.", "stateside", "across the states",
      // states
      "alabama", "alaska", "arizona", "arkansas", "california", "colorado", "connecticut", "delaware",
      "florida", "georgia", "hawaii", "idaho", "illinois", "indiana", "iowa", "kansas", "kentucky",
      "louisiana", "maine", "maryland", "massachusetts", "michigan", "minnesota", "mississippi", "missouri",
      "montana", "nebraska", "nevada", "new hampshire", "new jersey", "new mexico", "new york",
      "north carolina", "north dakota", "ohio", "oklahoma", "oregon", "pennsylvania", "rhode island",
      "south carolina", "south dakota", "tennessee", "texas", "utah", "vermont", "virginia", "washington",
      "dc", "west virginia", "wisconsin", "wyoming",
      // cities
      "new york", "ny", "nyc", "los angeles", "chicago", "houston", "phoenix", "philadelphia",
      "san antonio", "san diego", "dallas", "san jose", "austin", "jacksonville", "fort worth", "columbus",
      "indianapolis", "charlotte", "san francisco", "seattle", "nashville", "denver", "oklahoma city",
      "el paso", "boston", "portland", "las vegas", "vegas", "detroit", "memphis", "louisville",
      "baltimore", "milwaukee", "albuquerque", "tucson", "fresno", "sacramento", "kansas city", "mesa",
      "atlanta", "omaha", "colorado springs", "raleigh", "long beach", "virginia beach", "miami",
      "oakland", "minneapolis", "tulsa", "bakersfield", "wichita", "arlington", "aurora", "tampa",
      "new orleans", "cleveland", "honorolulu", "anaheim", "lexington", "stockton", "corpus christi",
      "henderson", "riverside", "newark", "st. paul", "santa ana", "cincinnati", "irvine", "orlando",
      "pittsburgh", "st. louis", "greensboro", "jersey city", "anchorage", "lincoln", "plano", "durham",
      "buffalo", "chandler", "chula vista", "toledo", "madison", "gilbert", "reno", "fort wayne",
      "north las vegas", "st. petersburg", "lubbock", "irving", "laredo", "winston-salem", "chesapeake",
      "glendale", "garland", "scottsdale", "norfolk", "boise", "fremont", "spokane", "santa clarita",
      "baton rouge", "richmond", "hialeah",
      // landmarks
      "grand canyon", "yellowstone", "hollywood", "niagara", "disney world", "yosemite", "central park",
      // transport
      "amtrak", "greyhound", "interstate"};
  return cfg;
}

KeywordConfig KeywordConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open keyword config '" + path.string() + "'");
  KeywordConfig cfg = defaults();
  std::map<std::string, std::vector<std::string>> sections;
  std::string current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = text::trim(v);
    if (v.empty()) continue;
    if (v.front() == '[' && v.back() == ']') {
      current = text::to_lower(text::trim(v.substr(1, v.size() - 2)));
      if (current != "price_terms" && current != "geo_terms" && current != "geo_required") {
        throw CorpusError(path.string() + ":" + std::to_string(lineno) + ": unknown section '" + current + "'");
      }
      sections[current];
      continue;
    }
    if (current.empty()) {
      throw CorpusError(path.string() + ":" + std::to_string(lineno) + ": entry outside of a section");
    }
    sections[current].push_back(text::to_lower(v));
  }
  if (auto it = sections.find("price_terms"); it != sections.end()) cfg.price_terms = it->second;
  if (auto it = sections.find("geo_terms"); it != sections.end()) cfg.geo_terms = it->second;
  if (auto it = sections.find("geo_required"); it != sections.end()) {
    cfg.geo_required.clear();
    for (const auto& c : it->second) cfg.geo_required.insert(normalize_community(c));
  }
  return cfg;
}

namespace {

std::vector<std::vector<std::string>> compile_terms(const std::vector<std::string>& terms) {
  std::vector<std::vector<std::string>> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    auto toks = text::word_tokens(t);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

bool match_at(const std::vector<std::string>& tokens, std::size_t pos, const std::vector<std::string>& term,
              bool prefix_last) {
  if (pos + term.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < term.size(); ++k) {
    const auto& tok = tokens[pos + k];
    const bool last = k + 1 == term.size();
    if (last && prefix_last) {
      if (tok.compare(0, term[k].size(), term[k]) != 0) return false;
    } else if (tok != term[k]) {
      return false;
    }
  }
  return true;
}

bool contains_any(const std::vector<std::string>& tokens, const std::vector<std::vector<std::string>>& terms,
                  bool prefix_last) {
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    for (const auto& term : terms) {
      if (match_at(tokens, pos, term, prefix_last)) return true;
    }
  }
  return false;
}

}  // namespace

KeywordMatcher::KeywordMatcher(const KeywordConfig& cfg)
    : price_(compile_terms(cfg.price_terms)), geo_(compile_terms(cfg.geo_terms)), geo_required_(cfg.geo_required) {}

bool KeywordMatcher::has_price_term(const std::vector<std::string>& tokens) const {
  return contains_any(tokens, price_, true);
}

bool KeywordMatcher::has_geo_term(const std::vector<std::string>& tokens) const {
  return contains_any(tokens, geo_, false);
}

bool KeywordMatcher::accepts(const PostRecord& post) const {
  const auto tokens = text::word_tokens(post.text);
  if (!has_price_term(tokens)) return false;
  if (geo_required_.count(post.community) != 0 && !has_geo_term(tokens)) return false;
  return true;
}

FilterResult filter_price_related(const std::vector<PostRecord>& posts, const KeywordConfig& cfg) {
  const KeywordMatcher matcher(cfg);
  FilterResult out;
  for (const auto& p : posts) {
    auto& counts = out.per_community[p.community];
    if (matcher.accepts(p)) {
      ++counts.kept;
      out.posts.push_back(p);
    } else {
      ++counts.dropped;
    }
  }
  return out;
}

BucketResult bucket_by_month(const std::vector<PostRecord>& posts, MonthRange range,
                             const std::vector<std::string>& communities) {
  if (range.end < range.start) throw std::invalid_argument("bucket_by_month: range end precedes start");

  std::set<std::string> names(communities.begin(), communities.end());
  if (communities.empty()) {
    for (const auto& p : posts) names.insert(p.community);
  }

  BucketResult out;
  const int months = range.size();
  std::map<std::string, std::size_t> first_index;
  for (const auto& name : names) {
    first_index[name] = out.buckets.size();
    for (int k = 0; k < months; ++k) {
      MonthBucket b;
      b.community = name;
      b.month = range.start.plus(k);
      out.buckets.push_back(std::move(b));
    }
  }

  for (const auto& p : posts) {
    const auto month = YearMonth::from_epoch(p.created);
    auto it = first_index.find(p.community);
    if (!range.contains(month) || it == first_index.end()) {
      ++out.out_of_range;
      continue;
    }
    auto& bucket = out.buckets[it->second + static_cast<std::size_t>(month.ordinal() - range.start.ordinal())];
    bucket.posts.push_back(p);
  }
  for (auto& b : out.buckets) {
    b.n_filtered = b.posts.size();
    b.n_total_prefilter = b.posts.size();
  }
  return out;
}

void set_prefilter_totals(std::vector<MonthBucket>& buckets, const std::vector<PostRecord>& unfiltered) {
  std::map<std::pair<std::string, int>, std::size_t> counts;
  for (const auto& p : unfiltered) ++counts[{p.community, YearMonth::from_epoch(p.created).ordinal()}];
  for (auto& b : buckets) {
    auto it = counts.find({b.community, b.month.ordinal()});
    b.n_total_prefilter = it == counts.end() ? 0 : it->second;
  }
}

namespace {

// Indices of a uniform k-subset of [0, n), returned in ascending order.
std::vector<std::size_t> choose_subset(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(gen, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

MonthBucket sample_month(const MonthBucket& bucket, SamplingCaps caps, std::uint64_t seed) {
  if (caps.submissions == 0 || caps.comments == 0) throw std::invalid_argument("sampling caps must be positive");

  std::vector<std::size_t> subs;
  std::vector<std::size_t> coms;
  for (std::size_t i = 0; i < bucket.posts.size(); ++i) {
    (bucket.posts[i].kind == PostKind::submission ? subs : coms).push_back(i);
  }

  const std::string key = bucket.community + "/" + bucket.month.str();
  auto pick = [&](const std::vector<std::size_t>& pool, std::size_t cap, const char* kind) {
    if (pool.size() <= cap) return pool;
    std::vector<std::size_t> chosen;
    for (auto i : choose_subset(pool.size(), cap, derive_seed(seed, key + "/" + kind))) chosen.push_back(pool[i]);
    return chosen;
  };
  auto keep = pick(subs, caps.submissions, "submission");
  const auto keep_c = pick(coms, caps.comments, "comment");
  keep.insert(keep.end(), keep_c.begin(), keep_c.end());
  std::sort(keep.begin(), keep.end());

  MonthBucket out;
  out.community = bucket.community;
  out.month = bucket.month;
  out.n_filtered = bucket.n_filtered;
  out.n_total_prefilter = bucket.n_total_prefilter;
  out.posts.reserve(keep.size());
  for (auto i : keep) out.posts.push_back(bucket.posts[i]);
  return out;
}

}  // namespace ris::corpus
