#include "ris/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ris/changepoint.hpp"
#include "ris/index.hpp"
#include "ris/lexicon.hpp"
#include "ris/lexshift.hpp"
#include "ris/remote_backend.hpp"
#include "ris/stats.hpp"
#include "ris/svg.hpp"
#include "ris/text.hpp"

namespace ris::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string Provenance::csv_comment() const {
  return "# ris " + std::string(kVersion) + " stage=" + stage + " config=" + config_hash + " seed=" +
         std::to_string(seed);
}

json Provenance::to_json() const {
  return {{"tool", "ris"},
          {"version", kVersion},
          {"stage", stage},
          {"config_hash", config_hash},
          {"seed", seed},
          {"libraries",
           {{"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
}

std::string error_line(const std::string& stage, const std::string& type, const std::string& message) {
  return json{{"error", {{"stage", stage}, {"type", type}, {"message", message}}}}.dump();
}

namespace {

Provenance provenance(const config::PipelineConfig& cfg, const RunOptions& opts, std::string stage) {
  return {std::move(stage), cfg.hash(), opts.seed.value_or(cfg.corpus.seed)};
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

fs::path require(const RunOptions& opts, const std::string& stage, const std::string& name,
                 const std::string& producer) {
  const auto p = opts.out / name;
  if (!fs::exists(p)) {
    throw PipelineError(stage, "missing input artifact " + name + " in the output directory; run '" + producer +
                                   "' first");
  }
  return p;
}

void note(const RunOptions& opts, const std::string& stage, const std::string& msg) {
  if (!opts.quiet) std::cerr << "[" << stage << "] " << msg << '\n';
}

json post_json(const corpus::PostRecord& p) {
  return {{"id", p.id},
          {"subreddit", p.community},
          {"created_utc", p.created},
          {"kind", corpus::to_string(p.kind)},
          {"text", p.text}};
}

corpus::PostRecord post_from_json(const json& j) {
  corpus::PostRecord p;
  p.id = j.at("id").get<std::string>();
  p.community = j.at("subreddit").get<std::string>();
  p.created = j.at("created_utc").get<std::int64_t>();
  p.kind = corpus::parse_kind(j.at("kind").get<std::string>());
  p.text = j.at("text").get<std::string>();
  return p;
}

template <typename F>
void for_each_record(const fs::path& path, F&& f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
      if (j.contains("provenance")) continue;
      f(j);
    } catch (const json::exception& e) {
      throw std::runtime_error(path.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string series_csv(const MonthlySeries& s, const Provenance& prov) {
  std::ostringstream o;
  o << prov.csv_comment() << " series=" << s.name << " unit=" << to_string(s.unit) << '\n';
  write_series_csv(o, s);
  return o.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const MonthlySeries* find_series(const std::vector<MonthlySeries>& all, const std::string& name) {
  for (const auto& s : all) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string ma_suffix(const config::PipelineConfig& cfg) { return "_ma" + std::to_string(cfg.smoothing_window); }

std::string join_months(const std::vector<YearMonth>& months) {
  std::string out;
  for (const auto& m : months) {
    if (!out.empty()) out += ';';
    out += m.str();
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text::read_file(path));
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(text::split(line, ','));
  }
  return rows;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("invalid number '" + s + "'");
  return v;
}

}  // namespace

void write_posts_jsonl(const fs::path& path, const std::vector<corpus::PostRecord>& posts, const Provenance& prov) {
  std::string out = json{{"provenance", prov.to_json()}}.dump() + "\n";
  for (const auto& p : posts) out += post_json(p).dump() + "\n";
  write_text(path, out);
}

std::vector<corpus::PostRecord> read_posts_jsonl(const fs::path& path) {
  std::vector<corpus::PostRecord> posts;
  for_each_record(path, [&](const json& j) { posts.push_back(post_from_json(j)); });
  return posts;
}

void write_scored_jsonl(const fs::path& path, const std::vector<classify::ScoredPost>& scored,
                        const Provenance& prov) {
  std::string out = json{{"provenance", prov.to_json()}}.dump() + "\n";
  for (const auto& s : scored) {
    auto j = post_json(s.post);
    j["label"] = classify::value(s.label);
    j["score"] = s.score;
    j["failed"] = s.failed;
    out += j.dump() + "\n";
  }
  write_text(path, out);
}

std::vector<classify::ScoredPost> read_scored_jsonl(const fs::path& path) {
  std::vector<classify::ScoredPost> scored;
  for_each_record(path, [&](const json& j) {
    scored.push_back(classify::make_scored(post_from_json(j), classify::label_from_int(j.at("label").get<int>()),
                                           j.value("failed", false)));
  });
  return scored;
}

void write_buckets_csv(const fs::path& path, const std::vector<corpus::MonthBucket>& buckets,
                       const Provenance& prov) {
  std::ostringstream o;
  o << prov.csv_comment() << '\n';
  o << "community,month,n_total_prefilter,n_filtered,n_sampled\n";
  for (const auto& b : buckets) {
    o << b.community << ',' << b.month.str() << ',' << b.n_total_prefilter << ',' << b.n_filtered << ','
      << b.posts.size() << '\n';
  }
  write_text(path, o.str());
}

std::vector<corpus::MonthBucket> read_buckets_csv(const fs::path& path) {
  std::vector<corpus::MonthBucket> buckets;
  for (const auto& row : read_csv_rows(path)) {
    if (row.size() != 5) throw std::runtime_error(path.filename().string() + ": expected 5 columns");
    corpus::MonthBucket b;
    b.community = row[0];
    b.month = YearMonth::parse(row[1]);
    b.n_total_prefilter = std::stoull(row[2]);
    b.n_filtered = std::stoull(row[3]);
    buckets.push_back(std::move(b));
  }
  return buckets;
}

json series_to_json(const MonthlySeries& s) {
  json points = json::array();
  for (const auto& p : s.points) points.push_back({{"month", p.month.str()}, {"value", p.value}, {"n", p.n}});
  return {{"name", s.name}, {"unit", to_string(s.unit)}, {"points", std::move(points)}};
}

MonthlySeries series_from_json(const json& j) {
  MonthlySeries s;
  s.name = j.at("name").get<std::string>();
  s.unit = parse_unit(j.at("unit").get<std::string>());
  for (const auto& p : j.at("points")) {
    s.points.push_back({YearMonth::parse(p.at("month").get<std::string>()), p.at("value").get<double>(),
                        p.at("n").get<std::size_t>()});
  }
  s.check_ordered();
  return s;
}

std::vector<MonthlySeries> read_series_json(const fs::path& path) {
  const auto j = json::parse(text::read_file(path));
  std::vector<MonthlySeries> out;
  for (const auto& s : j.at("series")) out.push_back(series_from_json(s));
  return out;
}

void ingest(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "ingest";
  const auto prov = provenance(cfg, opts, stage);

  std::vector<corpus::PostRecord> all;
  corpus::ParseStats stats;
  std::set<std::string> seen_ids;
  for (const auto& path : cfg.paths.corpus) {
    auto parsed = corpus::parse_posts_file(path, cfg.corpus.schema);
    stats.lines += parsed.stats.lines;
    stats.blank += parsed.stats.blank;
    stats.malformed += parsed.stats.malformed;
    stats.duplicates += parsed.stats.duplicates;
    for (auto& p : parsed.posts) {
      if (!seen_ids.insert(p.id).second) {
        ++stats.duplicates;
        continue;
      }
      all.push_back(std::move(p));
    }
  }

  std::vector<std::string> communities = cfg.corpus.communities;
  if (communities.empty()) {
    std::set<std::string> names;
    for (const auto& p : all) names.insert(p.community);
    communities.assign(names.begin(), names.end());
  } else {
    const std::set<std::string> wanted(communities.begin(), communities.end());
    std::erase_if(all, [&](const corpus::PostRecord& p) { return wanted.count(p.community) == 0; });
  }
  if (all.empty()) throw PipelineError(stage, "no posts left after parsing and community selection");

  const auto filtered = corpus::filter_price_related(all, cfg.corpus.keywords);
  auto bucketed = corpus::bucket_by_month(filtered.posts, cfg.corpus.range, communities);
  corpus::set_prefilter_totals(bucketed.buckets, all);

  const auto seed = opts.seed.value_or(cfg.corpus.seed);
  std::vector<corpus::MonthBucket> sampled;
  std::vector<corpus::PostRecord> kept;
  sampled.reserve(bucketed.buckets.size());
  for (const auto& b : bucketed.buckets) {
    sampled.push_back(corpus::sample_month(b, cfg.corpus.caps, seed));
    kept.insert(kept.end(), sampled.back().posts.begin(), sampled.back().posts.end());
  }

  write_posts_jsonl(opts.out / artifact::ingested, kept, prov);
  write_buckets_csv(opts.out / artifact::buckets, sampled, prov);

  json per = json::object();
  for (const auto& [name, c] : filtered.per_community) per[name] = {{"kept", c.kept}, {"dropped", c.dropped}};
  const json summary{{"provenance", prov.to_json()},
                     {"range", cfg.corpus.range.str()},
                     {"parse",
                      {{"lines", stats.lines},
                       {"blank", stats.blank},
                       {"malformed", stats.malformed},
                       {"duplicates", stats.duplicates}}},
                     {"posts", all.size()},
                     {"keyword_filter", per},
                     {"out_of_range", bucketed.out_of_range},
                     {"sampled", kept.size()}};
  write_text(opts.out / artifact::ingest_summary, dump(summary));
  note(opts, stage, std::to_string(kept.size()) + " posts kept of " + std::to_string(all.size()));
}

void classify_stage(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "classify";
  const auto posts = read_posts_jsonl(require(opts, stage, artifact::ingested, "ingest"));
  if (posts.empty()) throw PipelineError(stage, "ingested store holds no posts");

  std::unique_ptr<classify::ClassifierBackend> backend;
  if (cfg.classify.backend == config::BackendKind::label_file) {
    std::unordered_map<std::string, classify::Label> labels;
    for (const auto& p : cfg.paths.labels) {
      for (auto& [id, label] : classify::read_label_csv(p)) labels[id] = label;
    }
    backend = std::make_unique<classify::LabelFileBackend>(std::move(labels));
  } else {
    classify::RemoteConfig rc;
    rc.url = cfg.classify.url;
    rc.token_env = cfg.classify.token_env;
    rc.max_attempts = cfg.classify.max_attempts;
    rc.max_in_flight = cfg.classify.max_in_flight;
    rc.requests_per_second = cfg.classify.requests_per_second;
    rc.timeout = std::chrono::milliseconds(cfg.classify.timeout_ms);
    backend = std::make_unique<classify::RemoteBackend>(std::move(rc));
  }

  auto batch = classify::classify_batch(*backend, posts, cfg.classify.workers);
  write_scored_jsonl(opts.out / artifact::scored, batch.scored, provenance(cfg, opts, stage));
  std::string msg = std::to_string(batch.stats.classified) + " classified, " + std::to_string(batch.stats.failed) +
                    " failed (labelled neither)";
  if (!batch.stats.first_error.empty()) msg += "; first error: " + batch.stats.first_error;
  note(opts, stage, msg);
}

void score(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "score";
  const auto scored = read_scored_jsonl(require(opts, stage, artifact::scored, "classify"));
  const auto buckets = read_buckets_csv(require(opts, stage, artifact::buckets, "ingest"));
  const auto prov = provenance(cfg, opts, stage);
  const int w = cfg.smoothing_window;

  std::vector<MonthlySeries> out;
  auto add = [&](MonthlySeries s) {
    auto smoothed = index::moving_average(s, w);
    out.push_back(std::move(s));
    out.push_back(std::move(smoothed));
  };
  for (auto& s : index::all_subreddit_ris(scored)) add(std::move(s));
  add(index::aggregate_ris(scored));
  add(index::volume_share(buckets));
  if (cfg.paths.lexicon) {
    const auto lex = classify::Lexicon::load(*cfg.paths.lexicon);
    std::vector<corpus::PostRecord> posts;
    posts.reserve(scored.size());
    for (const auto& s : scored) posts.push_back(s.post);
    add(index::sentiment_baseline(posts, lex));
  }

  json arr = json::array();
  for (const auto& s : out) {
    write_text(opts.out / artifact::series_dir / (s.name + ".csv"), series_csv(s, prov));
    arr.push_back(series_to_json(s));
  }
  write_text(opts.out / artifact::series_json, dump({{"provenance", prov.to_json()}, {"series", arr}}));
  note(opts, stage, std::to_string(out.size()) + " series written");
}

void validate(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "validate";
  const auto all = read_series_json(require(opts, stage, artifact::series_json, "score"));
  const auto prov = provenance(cfg, opts, stage);
  const bool smoothed = opts.smoothed.value_or(cfg.validate.smoothed);
  const bool diff = opts.difference.value_or(cfg.validate.difference);
  if (cfg.paths.indicators.empty()) throw PipelineError(stage, "no indicators configured ([paths] indicator.<name>)");

  std::vector<MonthlySeries> indicators;
  for (const auto& [name, path] : cfg.paths.indicators) {
    auto s = read_indicator_csv(path, name);
    indicators.push_back(diff ? stats::difference(s) : std::move(s));
  }

  json correlations = json::array();
  json granger = json::array();
  json skipped = json::array();
  std::ostringstream corr_csv;
  std::ostringstream granger_csv;
  corr_csv << prov.csv_comment() << '\n' << "series,indicator,n,pearson_r,pearson_p,spearman_rho,spearman_p\n";
  granger_csv << prov.csv_comment() << '\n' << "cause,effect,lag,n,f_statistic,p_value,df_num,df_den\n";

  std::size_t tested = 0;
  for (const auto& base : cfg.validate.series) {
    const auto name = smoothed ? base + ma_suffix(cfg) : base;
    const auto* found = find_series(all, name);
    if (found == nullptr) {
      skipped.push_back(name);
      note(opts, stage, "series " + name + " not found, skipped");
      continue;
    }
    const auto series = diff ? stats::difference(*found) : *found;
    ++tested;
    for (const auto& ind : indicators) {
      const auto pair = stats::align(series, ind, cfg.validate.window);
      const auto p = stats::pearson(pair);
      const auto s = stats::spearman(pair);
      correlations.push_back({{"series", series.name},
                              {"indicator", ind.name},
                              {"n", pair.size()},
                              {"first", pair.months.front().str()},
                              {"last", pair.months.back().str()},
                              {"pearson", {{"r", p.coefficient}, {"p", p.p_value}}},
                              {"spearman", {{"rho", s.coefficient}, {"p", s.p_value}}}});
      corr_csv << series.name << ',' << ind.name << ',' << pair.size() << ',' << text::format_double(p.coefficient)
               << ',' << text::format_double(p.p_value) << ',' << text::format_double(s.coefficient) << ','
               << text::format_double(s.p_value) << '\n';
      for (auto lag : cfg.validate.lags) {
        const auto g = stats::granger(pair, lag);
        for (const auto* r : {&g.forward, &g.reverse}) {
          granger.push_back({{"cause", r->cause},
                             {"effect", r->effect},
                             {"lag", r->lag},
                             {"n", r->n_effective},
                             {"f_statistic", r->f_statistic},
                             {"p_value", r->p_value},
                             {"df_num", r->df_num},
                             {"df_den", r->df_den}});
          granger_csv << r->cause << ',' << r->effect << ',' << r->lag << ',' << r->n_effective << ','
                      << text::format_double(r->f_statistic) << ',' << text::format_double(r->p_value) << ','
                      << text::format_double(r->df_num) << ',' << text::format_double(r->df_den) << '\n';
        }
      }
    }
  }
  if (tested == 0) throw PipelineError(stage, "none of the configured series exist in series.json");

  const json result{{"provenance", prov.to_json()},
                    {"window", cfg.validate.window ? json(cfg.validate.window->str()) : json(nullptr)},
                    {"smoothed", smoothed},
                    {"differenced", diff},
                    {"correlations", correlations},
                    {"granger", granger},
                    {"skipped", skipped}};
  write_text(opts.out / artifact::validation_json, dump(result));
  write_text(opts.out / artifact::correlations_csv, corr_csv.str());
  write_text(opts.out / artifact::granger_csv, granger_csv.str());
  note(opts, stage, std::to_string(correlations.size()) + " correlation pairs, " + std::to_string(granger.size()) +
                        " Granger tests");
}

void changepoint_stage(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "changepoint";
  const auto all = read_series_json(require(opts, stage, artifact::series_json, "score"));
  const auto prov = provenance(cfg, opts, stage);
  const auto suffix = ma_suffix(cfg);
  const auto focus = opts.focus ? opts.focus : cfg.changepoint.focus;
  const auto max_m = *std::max_element(cfg.changepoint.m.begin(), cfg.changepoint.m.end());

  std::ostringstream csv;
  csv << prov.csv_comment() << '\n' << "community,c,m,n_changepoints,dates\n";
  std::size_t done = 0;
  for (const auto& s : all) {
    if (s.name.rfind("ris_", 0) != 0 || s.name.size() <= 4 + suffix.size() ||
        s.name.compare(s.name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    const auto community = s.name.substr(4, s.name.size() - 4 - suffix.size());
    if (s.size() < 2 * max_m) {
      note(opts, stage, s.name + " has " + std::to_string(s.size()) + " points, too short, skipped");
      continue;
    }
    const auto rows = changepoint::sensitivity_scan(s, cfg.changepoint.c, cfg.changepoint.m);
    for (const auto& r : rows) {
      csv << community << ',' << text::format_double(r.c) << ',' << r.min_segment << ',' << r.changepoints.size()
          << ',' << join_months(r.months) << '\n';
    }
    const auto* plot = &rows.front();
    for (const auto& r : rows) {
      if (std::fabs(r.c - cfg.changepoint.plot_c) < std::fabs(plot->c - cfg.changepoint.plot_c)) plot = &r;
    }
    svg::Chart chart;
    chart.title = "RIS " + community + " (" + std::to_string(cfg.smoothing_window) + "-month MA), PELT c=" +
                  text::format_double(plot->c) + " m=" + std::to_string(plot->min_segment);
    chart.series.push_back(s);
    chart.markers = plot->months;
    if (focus) chart.highlight = changepoint::nearest_changepoint(plot->months, *focus);
    chart.comment = prov.csv_comment().substr(2);
    write_text(opts.out / artifact::charts_dir / ("changepoints_" + community + ".svg"), svg::line_chart(chart));
    ++done;
  }
  if (done == 0) throw PipelineError(stage, "no smoothed RIS series long enough for segmentation");
  write_text(opts.out / artifact::changepoints_csv, csv.str());
  note(opts, stage, std::to_string(done) + " series segmented");
}

void lexshift_stage(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "lexshift";
  const auto before = opts.before ? opts.before : cfg.lexshift.before;
  const auto after = opts.after ? opts.after : cfg.lexshift.after;
  if (!before || !after) throw PipelineError(stage, "before and after windows are required ([lexshift] or --before/--after)");
  const auto community = opts.community.value_or(cfg.lexshift.community);
  const auto scored = read_scored_jsonl(require(opts, stage, artifact::scored, "classify"));

  lexshift::StopSet stop;
  for (auto& w : text::read_word_list(cfg.paths.stopwords)) stop.insert(text::to_lower(w));
  lexshift::StopSet extra;
  for (const auto& t : cfg.corpus.keywords.price_terms) extra.insert(text::to_lower(t));

  std::vector<lexshift::Tokens> docs_before;
  std::vector<lexshift::Tokens> docs_after;
  for (const auto& s : scored) {
    if (!community.empty() && s.post.community != community) continue;
    const auto month = YearMonth::from_epoch(s.post.created);
    const bool in_before = before->contains(month);
    const bool in_after = after->contains(month);
    if (!in_before && !in_after) continue;
    auto tokens = lexshift::preprocess(s, stop, extra);
    if (tokens.empty()) continue;
    if (in_before) docs_before.push_back(tokens);
    if (in_after) docs_after.push_back(std::move(tokens));
  }
  const std::string scope = community.empty() ? "all communities" : community;
  if (docs_before.empty() || docs_after.empty()) {
    throw PipelineError(stage, "no inflation-labelled documents for " + scope + " in the " +
                                   (docs_before.empty() ? "before window " + before->str()
                                                        : "after window " + after->str()));
  }

  std::vector<lexshift::Tokens> corpus_docs = docs_before;
  corpus_docs.insert(corpus_docs.end(), docs_after.begin(), docs_after.end());
  const auto model = lexshift::fit_tfidf(corpus_docs, cfg.lexshift.min_df, cfg.lexshift.max_df_ratio);
  const auto res = lexshift::shift(model, docs_before, docs_after, cfg.lexshift.top_k);

  std::ostringstream csv;
  csv << provenance(cfg, opts, stage).csv_comment() << " scope=" << (community.empty() ? "all" : community)
      << " before=" << before->str() << " after=" << after->str() << '\n';
  csv << "bigram,mean_before,mean_after,delta,period\n";
  auto put = [&](const std::vector<lexshift::ShiftEntry>& entries, const char* period) {
    for (const auto& e : entries) {
      csv << e.bigram << ',' << text::format_double(e.mean_before) << ',' << text::format_double(e.mean_after) << ','
          << text::format_double(e.delta) << ',' << period << '\n';
    }
  };
  put(res.emerging, "emerging");
  put(res.declining, "declining");
  write_text(opts.out / artifact::lexshift_csv, csv.str());
  note(opts, stage, std::to_string(docs_before.size()) + " before / " + std::to_string(docs_after.size()) +
                        " after documents, vocabulary " + std::to_string(model.vocabulary.size()));
}

void report(const config::PipelineConfig& cfg, const RunOptions& opts) {
  const std::string stage = "report";
  const auto all = read_series_json(require(opts, stage, artifact::series_json, "score"));
  const auto prov = provenance(cfg, opts, stage);
  const auto suffix = ma_suffix(cfg);
  const auto focus = opts.focus ? opts.focus : cfg.changepoint.focus;

  json out{{"provenance", prov.to_json()}};
  json missing = json::array();

  if (fs::exists(opts.out / artifact::ingest_summary)) {
    auto j = json::parse(text::read_file(opts.out / artifact::ingest_summary));
    j.erase("provenance");
    out["ingest"] = j;
  } else {
    missing.push_back(artifact::ingest_summary);
  }

  json series = json::array();
  for (const auto& s : all) {
    json item{{"name", s.name}, {"unit", to_string(s.unit)}, {"points", s.size()}};
    if (!s.empty()) {
      const auto v = s.values();
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      item["first"] = s.points.front().month.str();
      item["last"] = s.points.back().month.str();
      item["min"] = *lo;
      item["max"] = *hi;
    }
    series.push_back(item);
  }
  out["series"] = series;

  if (fs::exists(opts.out / artifact::validation_json)) {
    auto j = json::parse(text::read_file(opts.out / artifact::validation_json));
    j.erase("provenance");
    out["validation"] = j;
  } else {
    missing.push_back(artifact::validation_json);
  }

  std::map<std::string, std::vector<YearMonth>> plotted;
  if (fs::exists(opts.out / artifact::changepoints_csv)) {
    json rows = json::array();
    for (const auto& r : read_csv_rows(opts.out / artifact::changepoints_csv)) {
      if (r.size() != 5) throw PipelineError(stage, "changepoints.csv: expected 5 columns");
      std::vector<YearMonth> months;
      json dates = json::array();
      for (const auto& d : text::split(r[4], ';')) {
        if (d.empty()) continue;
        months.push_back(YearMonth::parse(d));
        dates.push_back(d);
      }
      json row{{"community", r[0]},
               {"c", parse_double(r[1])},
               {"m", std::stoul(r[2])},
               {"n_changepoints", std::stoul(r[3])},
               {"dates", dates}};
      if (focus) {
        const auto near = changepoint::nearest_changepoint(months, *focus);
        row["nearest_to_focus"] = near ? json(near->str()) : json(nullptr);
      }
      if (std::fabs(parse_double(r[1]) - cfg.changepoint.plot_c) < 1e-12 && plotted.count(r[0]) == 0) {
        plotted[r[0]] = months;
      }
      rows.push_back(row);
    }
    out["changepoints"] = rows;
    if (focus) out["focus"] = focus->str();
  } else {
    missing.push_back(artifact::changepoints_csv);
  }

  if (fs::exists(opts.out / artifact::lexshift_csv)) {
    json emerging = json::array();
    json declining = json::array();
    for (const auto& r : read_csv_rows(opts.out / artifact::lexshift_csv)) {
      if (r.size() != 5) throw PipelineError(stage, "lexshift.csv: expected 5 columns");
      json e{{"bigram", r[0]},
             {"mean_before", parse_double(r[1])},
             {"mean_after", parse_double(r[2])},
             {"delta", parse_double(r[3])}};
      (r[4] == "emerging" ? emerging : declining).push_back(e);
    }
    out["lexshift"] = {{"emerging", emerging}, {"declining", declining}};
  } else {
    missing.push_back(artifact::lexshift_csv);
  }
  out["missing"] = missing;

  const auto comment = prov.csv_comment().substr(2);
  const auto charts = opts.out / artifact::charts_dir;
  json chart_files = json::array();
  auto emit = [&](const std::string& file, svg::Chart chart) {
    chart.comment = comment;
    write_text(charts / file, svg::line_chart(chart));
    chart_files.push_back(std::string(artifact::charts_dir) + "/" + file);
  };

  {
    svg::Chart c;
    c.title = "Aggregate RIS";
    if (const auto* s = find_series(all, "ris_aggregate")) c.series.push_back(*s);
    if (const auto* s = find_series(all, "ris_aggregate" + suffix)) c.series.push_back(*s);
    if (auto it = plotted.find("aggregate"); it != plotted.end()) c.markers = it->second;
    if (focus && !c.markers.empty()) c.highlight = changepoint::nearest_changepoint(c.markers, *focus);
    emit("ris_aggregate.svg", std::move(c));
  }
  {
    svg::Chart c;
    c.title = "RIS by community (" + std::to_string(cfg.smoothing_window) + "-month MA)";
    for (const auto& s : all) {
      if (s.name.rfind("ris_", 0) == 0 && s.name != "ris_aggregate" + suffix && s.name.size() > suffix.size() &&
          s.name.compare(s.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        c.series.push_back(s);
      }
    }
    emit("ris_communities.svg", std::move(c));
  }
  {
    svg::Chart c;
    c.title = "RIS and baselines (" + std::to_string(cfg.smoothing_window) + "-month MA)";
    for (const auto* name : {"ris_aggregate", "volume_share", "sentiment"}) {
      if (const auto* s = find_series(all, name + suffix)) c.series.push_back(*s);
    }
    emit("baselines.svg", std::move(c));
  }
  if (!cfg.paths.indicators.empty()) {
    for (const auto& [name, path] : cfg.paths.indicators) {
      svg::Chart c;
      c.title = "Indicator " + name;
      c.series.push_back(read_indicator_csv(path, name));
      emit("indicator_" + name + ".svg", std::move(c));
    }
  }
  out["charts"] = chart_files;
  write_text(opts.out / artifact::report_json, dump(out));
  note(opts, stage, "report written with " + std::to_string(chart_files.size()) + " charts");
}

void run_all(const config::PipelineConfig& cfg, const RunOptions& opts) {
  for (const auto& name : subcommands()) {
    if (name != "run-all") run(name, cfg, opts);
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"ingest",    "classify", "score",  "validate",
                                              "changepoint", "lexshift", "report", "run-all"};
  return names;
}

void run(const std::string& subcommand, const config::PipelineConfig& cfg, const RunOptions& opts) {
  auto wrap = [&](auto&& fn) {
    try {
      fn(cfg, opts);
    } catch (const PipelineError&) {
      throw;
    } catch (const corpus::CorpusError& e) {
      throw PipelineError(subcommand, e.what(), "corpus");
    } catch (const lexshift::EmptyVocabularyError& e) {
      throw PipelineError(subcommand, e.what(), "empty_vocabulary");
    } catch (const std::invalid_argument& e) {
      throw PipelineError(subcommand, e.what(), "invalid_argument");
    } catch (const std::exception& e) {
      throw PipelineError(subcommand, e.what(), "runtime");
    }
  };
  if (subcommand == "ingest") return wrap(ingest);
  if (subcommand == "classify") return wrap(classify_stage);
  if (subcommand == "score") return wrap(score);
  if (subcommand == "validate") return wrap(validate);
  if (subcommand == "changepoint") return wrap(changepoint_stage);
  if (subcommand == "lexshift") return wrap(lexshift_stage);
  if (subcommand == "report") return wrap(report);
  if (subcommand == "run-all") return run_all(cfg, opts);
  throw PipelineError(subcommand, "unknown subcommand '" + subcommand + "'");
}

}  // namespace ris::pipeline
