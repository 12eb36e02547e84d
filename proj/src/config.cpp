#include "ris/config.hpp"

#include <charconv>
#include <set>

#include "ris/text.hpp"

namespace ris::config {

namespace fs = std::filesystem;

IniData parse_ini(const std::string& text, const std::string& origin) {
  IniData data;
  std::string section;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const auto where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    if (section.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!data[section].emplace(key, value).second) {
      throw ConfigError(where + ": duplicate key '" + key + "' in [" + section + "]");
    }
  }
  return data;
}

std::string PipelineConfig::hash() const { return text::hex64(text::fnv1a64(text)); }

namespace {

// Pops keys out of one section so leftovers can be reported as unknown.
class Section {
 public:
  Section(IniData& data, std::string name) : name_(std::move(name)) {
    auto it = data.find(name_);
    if (it != data.end()) {
      values_ = std::move(it->second);
      data.erase(it);
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    auto v = std::move(it->second);
    values_.erase(it);
    return v;
  }

  std::map<std::string, std::string> take_prefixed(const std::string& prefix) {
    std::map<std::string, std::string> out;
    for (auto it = values_.begin(); it != values_.end();) {
      if (it->first.rfind(prefix, 0) == 0) {
        out.emplace(it->first.substr(prefix.size()), it->second);
        it = values_.erase(it);
      } else {
        ++it;
      }
    }
    return out;
  }

  [[nodiscard]] std::string where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void finish() const {
    if (!values_.empty()) throw ConfigError("unknown key " + where(values_.begin()->first));
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

template <typename T>
T parse_number(const std::string& s, const std::string& where) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(where + ": invalid number '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, const std::string& where) {
  const auto v = text::to_lower(s);
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(where + ": expected a boolean, got '" + s + "'");
}

MonthRange parse_window(const std::string& s, const std::string& where) {
  MonthRange r;
  try {
    r = MonthRange::parse(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (!(r.start < r.end)) throw ConfigError(where + ": window start must be before its end");
  return r;
}

fs::path existing(const fs::path& base, const std::string& value, const std::string& where) {
  fs::path p(value);
  if (p.is_relative()) p = base / p;
  p = p.lexically_normal();
  if (!fs::exists(p)) throw ConfigError(where + ": file not found: " + p.string());
  return p;
}

template <typename T>
std::vector<T> number_list(const std::string& s, const std::string& where) {
  std::vector<T> out;
  for (const auto& item : text::split_list(s)) out.push_back(parse_number<T>(item, where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

}  // namespace

PipelineConfig from_text(const std::string& text, const fs::path& base_dir, const fs::path& source) {
  auto data = parse_ini(text, source.string());
  PipelineConfig cfg;
  cfg.source = source;
  cfg.text = text;

  {
    Section s(data, "paths");
    if (auto v = s.take("corpus")) {
      for (const auto& item : text::split_list(*v)) cfg.paths.corpus.push_back(existing(base_dir, item, s.where("corpus")));
    }
    if (cfg.paths.corpus.empty()) throw ConfigError("missing " + s.where("corpus"));
    if (auto v = s.take("labels")) {
      for (const auto& item : text::split_list(*v)) cfg.paths.labels.push_back(existing(base_dir, item, s.where("labels")));
    }
    if (auto v = s.take("lexicon")) cfg.paths.lexicon = existing(base_dir, *v, s.where("lexicon"));
    if (auto v = s.take("keywords")) cfg.paths.keywords = existing(base_dir, *v, s.where("keywords"));
    auto stop = s.take("stopwords");
    if (!stop) throw ConfigError("missing " + s.where("stopwords"));
    cfg.paths.stopwords = existing(base_dir, *stop, s.where("stopwords"));
    for (const auto& [name, value] : s.take_prefixed("indicator.")) {
      if (name.empty()) throw ConfigError(s.where("indicator.") + ": empty indicator name");
      cfg.paths.indicators[name] = existing(base_dir, value, s.where("indicator." + name));
    }
    s.finish();
  }

  {
    Section s(data, "corpus");
    auto& c = cfg.corpus;
    if (auto v = s.take("range")) c.range = parse_window(*v, s.where("range"));
    if (auto v = s.take("communities")) {
      for (const auto& item : text::split_list(*v)) c.communities.push_back(corpus::normalize_community(item));
    }
    if (auto v = s.take("max_submissions")) c.caps.submissions = parse_number<std::size_t>(*v, s.where("max_submissions"));
    if (auto v = s.take("max_comments")) c.caps.comments = parse_number<std::size_t>(*v, s.where("max_comments"));
    if (auto v = s.take("seed")) c.seed = parse_number<std::uint64_t>(*v, s.where("seed"));
    if (auto v = s.take("field.id")) c.schema.id = *v;
    if (auto v = s.take("field.community")) c.schema.community = *v;
    if (auto v = s.take("field.created")) c.schema.created = *v;
    if (auto v = s.take("field.kind")) c.schema.kind = *v;
    if (auto v = s.take("field.title")) c.schema.title = *v;
    if (auto v = s.take("text_fields")) {
      c.schema.text_fields = text::split_list(*v);
      if (c.schema.text_fields.empty()) throw ConfigError(s.where("text_fields") + ": empty list");
    }
    s.finish();
    c.keywords = cfg.paths.keywords ? corpus::KeywordConfig::load(*cfg.paths.keywords) : corpus::KeywordConfig::defaults();
  }

  {
    Section s(data, "classify");
    auto& c = cfg.classify;
    if (auto v = s.take("backend")) {
      if (*v == "label-file" || *v == "labels") {
        c.backend = BackendKind::label_file;
      } else if (*v == "remote") {
        c.backend = BackendKind::remote;
      } else {
        throw ConfigError(s.where("backend") + ": expected 'label-file' or 'remote', got '" + *v + "'");
      }
    }
    if (auto v = s.take("url")) c.url = *v;
    if (auto v = s.take("token_env")) c.token_env = *v;
    if (auto v = s.take("max_attempts")) c.max_attempts = parse_number<int>(*v, s.where("max_attempts"));
    if (auto v = s.take("max_in_flight")) c.max_in_flight = parse_number<int>(*v, s.where("max_in_flight"));
    if (auto v = s.take("requests_per_second")) {
      c.requests_per_second = parse_number<double>(*v, s.where("requests_per_second"));
    }
    if (auto v = s.take("timeout_ms")) c.timeout_ms = parse_number<int>(*v, s.where("timeout_ms"));
    if (auto v = s.take("workers")) c.workers = parse_number<std::size_t>(*v, s.where("workers"));
    s.finish();
    if (c.backend == BackendKind::label_file && cfg.paths.labels.empty()) {
      throw ConfigError("label-file backend needs [paths] labels");
    }
    if (c.backend == BackendKind::remote && c.url.empty()) throw ConfigError("remote backend needs [classify] url");
    if (c.max_attempts < 1 || c.max_in_flight < 1 || c.workers < 1) {
      throw ConfigError("[classify] max_attempts, max_in_flight and workers must be >= 1");
    }
  }

  {
    Section s(data, "index");
    if (auto v = s.take("window")) cfg.smoothing_window = parse_number<int>(*v, s.where("window"));
    if (cfg.smoothing_window < 1) throw ConfigError(s.where("window") + ": must be >= 1");
    s.finish();
  }

  {
    Section s(data, "validate");
    auto& c = cfg.validate;
    if (auto v = s.take("window")) c.window = parse_window(*v, s.where("window"));
    if (auto v = s.take("lags")) c.lags = number_list<std::size_t>(*v, s.where("lags"));
    if (auto v = s.take("smoothed")) c.smoothed = parse_bool(*v, s.where("smoothed"));
    if (auto v = s.take("diff")) c.difference = parse_bool(*v, s.where("diff"));
    if (auto v = s.take("series")) c.series = text::split_list(*v);
    for (auto lag : c.lags) {
      if (lag < 1) throw ConfigError(s.where("lags") + ": lags must be >= 1");
    }
    s.finish();
  }

  {
    Section s(data, "changepoint");
    auto& c = cfg.changepoint;
    if (auto v = s.take("c")) c.c = number_list<double>(*v, s.where("c"));
    if (auto v = s.take("m")) c.m = number_list<std::size_t>(*v, s.where("m"));
    if (auto v = s.take("plot_c")) c.plot_c = parse_number<double>(*v, s.where("plot_c"));
    if (auto v = s.take("focus")) {
      try {
        c.focus = YearMonth::parse(*v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(s.where("focus") + ": " + e.what());
      }
    }
    for (double x : c.c) {
      if (!(x > 0.0)) throw ConfigError(s.where("c") + ": penalty factors must be positive");
    }
    for (auto m : c.m) {
      if (m < 1) throw ConfigError(s.where("m") + ": minimum segment length must be >= 1");
    }
    s.finish();
  }

  {
    Section s(data, "lexshift");
    auto& c = cfg.lexshift;
    if (auto v = s.take("min_df")) c.min_df = parse_number<std::size_t>(*v, s.where("min_df"));
    if (auto v = s.take("max_df_ratio")) c.max_df_ratio = parse_number<double>(*v, s.where("max_df_ratio"));
    if (auto v = s.take("top_k")) c.top_k = parse_number<std::size_t>(*v, s.where("top_k"));
    if (auto v = s.take("before")) c.before = parse_window(*v, s.where("before"));
    if (auto v = s.take("after")) c.after = parse_window(*v, s.where("after"));
    if (auto v = s.take("community")) c.community = corpus::normalize_community(*v);
    if (!(c.max_df_ratio > 0.0 && c.max_df_ratio <= 1.0)) throw ConfigError(s.where("max_df_ratio") + ": must be in (0, 1]");
    s.finish();
  }

  if (!data.empty()) throw ConfigError("unknown section [" + data.begin()->first + "]");
  return cfg;
}

PipelineConfig load(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  const auto text = text::read_file(path);
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return from_text(text, base, path);
}

}  // namespace ris::config
