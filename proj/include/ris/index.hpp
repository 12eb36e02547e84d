#pragma once

#include <string>
#include <vector>

#include "ris/classify.hpp"
#include "ris/corpus.hpp"
#include "ris/lexicon.hpp"
#include "ris/series.hpp"

namespace ris::index {

// Monthly mean score of one community's posts. Months without posts have no
// point. Throws std::invalid_argument if a post belongs to another community.
MonthlySeries subreddit_ris(const std::vector<classify::ScoredPost>& scored, const std::string& community);

// Pooled monthly mean over every post of every community, so large
// communities weigh more. This is not the mean of the community means.
MonthlySeries aggregate_ris(const std::vector<classify::ScoredPost>& scored);

// Per-community series for every community present, sorted by name.
std::vector<MonthlySeries> all_subreddit_ris(const std::vector<classify::ScoredPost>& scored);

// Trailing mean over `window` consecutive months. The first window-1 months
// are dropped and any window touching a missing month yields no point. The
// output n is the sum of n over the window.
MonthlySeries moving_average(const MonthlySeries& series, int window = 3);

// Keyword-matched share of all posts per month across communities. Months
// with no posts at all are missing.
MonthlySeries volume_share(const std::vector<corpus::MonthBucket>& buckets);

// Monthly mean lexicon compound score.
MonthlySeries sentiment_baseline(const std::vector<corpus::PostRecord>& posts, const classify::Lexicon& lexicon);

}  // namespace ris::index
