#include "ris/lexshift.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <unordered_map>

#include "ris/text.hpp"

namespace ris::lexshift {

namespace {

std::string strip_urls(const std::string& lower) {
  static const std::regex kUrl(R"((https?://|www\.)[^\s]+)");
  return std::regex_replace(lower, kUrl, " ");
}

std::string drop_apostrophes(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\'') continue;
    // U+2019 RIGHT SINGLE QUOTATION MARK
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 && static_cast<unsigned char>(s[i + 1]) == 0x80 &&
        static_cast<unsigned char>(s[i + 2]) == 0x99) {
      i += 2;
      continue;
    }
    out.push_back(s[i]);
  }
  return out;
}

}  // namespace

Tokens preprocess_text(std::string_view text, const StopSet& stopwords, const StopSet& extra_stopwords) {
  const auto cleaned = drop_apostrophes(strip_urls(text::to_lower(text)));
  Tokens out;
  for (auto& tok : text::word_tokens(cleaned)) {
    if (stopwords.count(tok) != 0 || extra_stopwords.count(tok) != 0) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

Tokens preprocess(const classify::ScoredPost& post, const StopSet& stopwords, const StopSet& extra_stopwords) {
  if (post.label != classify::Label::inflation) return {};
  return preprocess_text(post.post.text, stopwords, extra_stopwords);
}

std::vector<std::string> bigrams(const Tokens& tokens) {
  std::vector<std::string> out;
  if (tokens.size() < 2) return out;
  out.reserve(tokens.size() - 1);
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(tokens[i] + " " + tokens[i + 1]);
  return out;
}

std::size_t TfidfModel::column(const std::string& bigram) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), bigram);
  if (it == vocabulary.end() || *it != bigram) return npos;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

SparseVector TfidfModel::transform(const Tokens& doc) const {
  std::map<std::size_t, double> counts;
  for (const auto& bg : bigrams(doc)) {
    const auto col = column(bg);
    if (col != npos) counts[col] += 1.0;
  }
  SparseVector v;
  v.reserve(counts.size());
  double norm2 = 0.0;
  for (const auto& [col, count] : counts) {
    const double w = count * idf[col];
    v.emplace_back(col, w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double norm = std::sqrt(norm2);
    for (auto& e : v) e.second /= norm;
  }
  return v;
}

TfidfModel fit_tfidf(const std::vector<Tokens>& docs, std::size_t min_df, double max_df_ratio) {
  const bool any = std::any_of(docs.begin(), docs.end(), [](const Tokens& d) { return !d.empty(); });
  if (!any) throw std::invalid_argument("fit_tfidf: no non-empty documents");
  if (max_df_ratio <= 0.0 || max_df_ratio > 1.0) throw std::invalid_argument("fit_tfidf: max_df_ratio must be in (0, 1]");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    auto bgs = bigrams(doc);
    std::sort(bgs.begin(), bgs.end());
    bgs.erase(std::unique(bgs.begin(), bgs.end()), bgs.end());
    for (auto& bg : bgs) ++df[std::move(bg)];
  }

  TfidfModel model;
  model.doc_count = docs.size();
  const double n = static_cast<double>(docs.size());
  const double max_df = max_df_ratio * n;
  for (const auto& [bg, count] : df) {
    if (count < min_df || static_cast<double>(count) > max_df) continue;
    model.vocabulary.push_back(bg);
    model.df.push_back(count);
    model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  if (model.vocabulary.empty()) {
    throw EmptyVocabularyError("fit_tfidf: no bigram survives the document-frequency bounds (" +
                               std::to_string(docs.size()) + " documents, " + std::to_string(df.size()) +
                               " distinct bigrams, min_df=" + std::to_string(min_df) +
                               ", max_df_ratio=" + text::format_double(max_df_ratio) + ")");
  }
  return model;
}

namespace {

std::vector<double> mean_weights(const TfidfModel& model, const std::vector<Tokens>& docs) {
  std::vector<double> sum(model.vocabulary.size(), 0.0);
  for (const auto& doc : docs) {
    for (const auto& [col, w] : model.transform(doc)) sum[col] += w;
  }
  const double n = static_cast<double>(docs.size());
  for (auto& s : sum) s /= n;
  return sum;
}

}  // namespace

ShiftResult shift(const TfidfModel& model, const std::vector<Tokens>& before, const std::vector<Tokens>& after,
                  std::size_t top_k) {
  if (before.empty() || after.empty()) throw std::invalid_argument("shift: both periods need at least one document");
  const auto mb = mean_weights(model, before);
  const auto ma = mean_weights(model, after);

  ShiftResult res;
  res.all.reserve(model.vocabulary.size());
  for (std::size_t c = 0; c < model.vocabulary.size(); ++c) {
    res.all.push_back({model.vocabulary[c], mb[c], ma[c], ma[c] - mb[c]});
  }

  const std::size_t k = std::min(top_k, res.all.size());
  res.emerging = res.all;
  std::partial_sort(res.emerging.begin(), res.emerging.begin() + static_cast<std::ptrdiff_t>(k), res.emerging.end(),
                    [](const ShiftEntry& a, const ShiftEntry& b) {
                      return a.delta != b.delta ? a.delta > b.delta : a.bigram < b.bigram;
                    });
  res.emerging.resize(k);
  res.declining = res.all;
  std::partial_sort(res.declining.begin(), res.declining.begin() + static_cast<std::ptrdiff_t>(k),
                    res.declining.end(), [](const ShiftEntry& a, const ShiftEntry& b) {
                      return a.delta != b.delta ? a.delta < b.delta : a.bigram < b.bigram;
                    });
  res.declining.resize(k);
  return res;
}

}  // namespace ris::lexshift
