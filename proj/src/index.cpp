#include "ris/index.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace ris::index {

namespace {

struct Accum {
  long long score_sum{0};
  std::size_t n{0};
};

MonthlySeries from_accum(std::string name, const std::map<int, Accum>& acc) {
  MonthlySeries s{std::move(name), SeriesUnit::score, {}};
  s.points.reserve(acc.size());
  for (const auto& [ord, a] : acc) {
    s.points.push_back({YearMonth::from_ordinal(ord), static_cast<double>(a.score_sum) / static_cast<double>(a.n), a.n});
  }
  return s;
}

}  // namespace

MonthlySeries subreddit_ris(const std::vector<classify::ScoredPost>& scored, const std::string& community) {
  std::map<int, Accum> acc;
  for (const auto& sp : scored) {
    if (sp.post.community != community) {
      throw std::invalid_argument("subreddit_ris(" + community + "): post '" + sp.post.id + "' belongs to '" +
                                  sp.post.community + "'");
    }
    auto& a = acc[YearMonth::from_epoch(sp.post.created).ordinal()];
    a.score_sum += sp.score;
    ++a.n;
  }
  return from_accum("ris_" + community, acc);
}

MonthlySeries aggregate_ris(const std::vector<classify::ScoredPost>& scored) {
  std::map<int, Accum> acc;
  for (const auto& sp : scored) {
    auto& a = acc[YearMonth::from_epoch(sp.post.created).ordinal()];
    a.score_sum += sp.score;
    ++a.n;
  }
  return from_accum("ris_aggregate", acc);
}

std::vector<MonthlySeries> all_subreddit_ris(const std::vector<classify::ScoredPost>& scored) {
  std::map<std::string, std::vector<classify::ScoredPost>> by_community;
  for (const auto& sp : scored) by_community[sp.post.community].push_back(sp);
  std::vector<MonthlySeries> out;
  out.reserve(by_community.size());
  for (const auto& [name, posts] : by_community) out.push_back(subreddit_ris(posts, name));
  return out;
}

MonthlySeries moving_average(const MonthlySeries& series, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  series.check_ordered();
  MonthlySeries out{window == 1 ? series.name : series.name + "_ma" + std::to_string(window), series.unit, {}};
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = w - 1; i < series.points.size(); ++i) {
    const std::size_t first = i + 1 - w;
    const int span = series.points[i].month.ordinal() - series.points[first].month.ordinal();
    if (span != window - 1) continue;  // a month inside the window is missing
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = first; k <= i; ++k) {
      sum += series.points[k].value;
      n += series.points[k].n;
    }
    out.points.push_back({series.points[i].month, sum / static_cast<double>(window), n});
  }
  return out;
}

MonthlySeries volume_share(const std::vector<corpus::MonthBucket>& buckets) {
  std::map<int, std::pair<std::size_t, std::size_t>> acc;  // filtered, total
  for (const auto& b : buckets) {
    if (b.n_filtered > b.n_total_prefilter) {
      throw std::invalid_argument("volume_share: bucket " + b.community + "/" + b.month.str() +
                                  " has more matched posts than total posts");
    }
    auto& a = acc[b.month.ordinal()];
    a.first += b.n_filtered;
    a.second += b.n_total_prefilter;
  }
  MonthlySeries s{"volume_share", SeriesUnit::fraction, {}};
  for (const auto& [ord, a] : acc) {
    if (a.second == 0) continue;
    s.points.push_back({YearMonth::from_ordinal(ord), static_cast<double>(a.first) / static_cast<double>(a.second),
                        a.second});
  }
  return s;
}

MonthlySeries sentiment_baseline(const std::vector<corpus::PostRecord>& posts, const classify::Lexicon& lexicon) {
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& p : posts) {
    auto& a = acc[YearMonth::from_epoch(p.created).ordinal()];
    a.first += classify::lexicon_compound(p.text, lexicon);
    ++a.second;
  }
  MonthlySeries s{"sentiment", SeriesUnit::score, {}};
  for (const auto& [ord, a] : acc) {
    s.points.push_back({YearMonth::from_ordinal(ord), a.first / static_cast<double>(a.second), a.second});
  }
  return s;
}

}  // namespace ris::index
