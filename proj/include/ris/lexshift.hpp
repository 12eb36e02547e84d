#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ris/classify.hpp"

namespace ris::lexshift {

using Tokens = std::vector<std::string>;
using StopSet = std::set<std::string, std::less<>>;

class EmptyVocabularyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tokens of an inflation-labelled post; any other label gives no tokens.
// Lowercases, strips URLs, deletes apostrophes ("don't" -> "dont"), splits on
// remaining punctuation and drops stopwords and extra stopwords as exact tokens.
Tokens preprocess(const classify::ScoredPost& post, const StopSet& stopwords, const StopSet& extra_stopwords = {});

// Text-only variant with no label check.
Tokens preprocess_text(std::string_view text, const StopSet& stopwords, const StopSet& extra_stopwords = {});

// Adjacent pairs of the filtered token stream, joined by a single space.
std::vector<std::string> bigrams(const Tokens& tokens);

// Sparse document vector, sorted by column.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

struct TfidfModel {
  std::vector<std::string> vocabulary;  // sorted; position is the column
  std::vector<double> idf;              // ln((1 + N) / (1 + df)) + 1
  std::vector<std::size_t> df;
  std::size_t doc_count{0};

  [[nodiscard]] std::size_t column(const std::string& bigram) const;  // npos if absent
  // Raw count times idf, L2-normalised. Documents with no vocabulary bigram
  // map to the zero vector.
  [[nodiscard]] SparseVector transform(const Tokens& doc) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Keeps bigrams with min_df <= df <= max_df_ratio * N.
TfidfModel fit_tfidf(const std::vector<Tokens>& docs, std::size_t min_df = 5, double max_df_ratio = 0.95);

struct ShiftEntry {
  std::string bigram;
  double mean_before{0.0};
  double mean_after{0.0};
  double delta{0.0};  // mean_after - mean_before
};

struct ShiftResult {
  std::vector<ShiftEntry> emerging;   // delta descending
  std::vector<ShiftEntry> declining;  // delta ascending
  std::vector<ShiftEntry> all;        // every vocabulary bigram, vocabulary order
};

// Mean weights per period under one shared model; documents lacking a bigram
// contribute zero. Ties are broken by bigram text.
ShiftResult shift(const TfidfModel& model, const std::vector<Tokens>& before, const std::vector<Tokens>& after,
                  std::size_t top_k = 15);

}  // namespace ris::lexshift
