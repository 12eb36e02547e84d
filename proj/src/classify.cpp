#include "ris/classify.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "ris/text.hpp"

namespace ris::classify {

Label label_from_int(int v) {
  if (v < 0 || v > 2) throw std::invalid_argument("label must be 0, 1 or 2 (got " + std::to_string(v) + ")");
  return static_cast<Label>(v);
}

const char* to_string(Label l) {
  switch (l) {
    case Label::deflation:
      return "deflation";
    case Label::neither:
      return "neither";
    case Label::inflation:
      return "inflation";
  }
  return "?";
}

ScoredPost make_scored(corpus::PostRecord post, Label label, bool failed) {
  return ScoredPost{std::move(post), label, score_of(label), failed};
}

Label majority_vote(std::span<const Label> ratings) {
  if (ratings.size() != 3) {
    throw std::invalid_argument("majority_vote needs exactly 3 ratings (got " + std::to_string(ratings.size()) + ")");
  }
  if (ratings[0] == ratings[1] || ratings[0] == ratings[2]) return ratings[0];
  if (ratings[1] == ratings[2]) return ratings[1];
  return Label::neither;
}

AlphaResult krippendorff_alpha(const std::vector<AnnotationSet>& sets, AlphaMetric metric) {
  if (sets.size() < 2) throw std::invalid_argument("krippendorff_alpha needs at least 2 items");

  double o[kNumLabels][kNumLabels] = {};
  for (const auto& unit : sets) {
    std::array<double, kNumLabels> counts{};
    double m = 0;
    for (const auto& r : unit.ratings) {
      if (!r) continue;
      counts[static_cast<std::size_t>(value(*r))] += 1;
      m += 1;
    }
    if (m < 2) continue;
    for (int c = 0; c < kNumLabels; ++c) {
      for (int k = 0; k < kNumLabels; ++k) {
        const double pairs = c == k ? counts[c] * (counts[c] - 1) : counts[c] * counts[k];
        o[c][k] += pairs / (m - 1);
      }
    }
  }

  std::array<double, kNumLabels> marg{};
  double n = 0;
  for (int c = 0; c < kNumLabels; ++c) {
    for (int k = 0; k < kNumLabels; ++k) marg[c] += o[c][k];
    n += marg[c];
  }
  if (n < 2) throw std::invalid_argument("krippendorff_alpha: no item has two or more ratings");

  auto delta2 = [&](int c, int k) -> double {
    if (c == k) return 0.0;
    if (metric == AlphaMetric::nominal) return 1.0;
    const int lo = std::min(c, k);
    const int hi = std::max(c, k);
    double s = 0;
    for (int g = lo; g <= hi; ++g) s += marg[g];
    s -= (marg[lo] + marg[hi]) / 2.0;
    return s * s;
  };

  double obs = 0;
  double exp = 0;
  for (int c = 0; c < kNumLabels; ++c) {
    for (int k = 0; k < kNumLabels; ++k) {
      const double d = delta2(c, k);
      obs += o[c][k] * d;
      exp += marg[c] * marg[k] * d;
    }
  }

  AlphaResult res;
  res.pairable_values = static_cast<std::size_t>(n + 0.5);
  res.observed_disagreement = obs / n;
  res.expected_disagreement = exp / (n * (n - 1));
  if (exp == 0.0) {
    res.alpha = 1.0;
    res.degenerate = true;
    return res;
  }
  res.alpha = 1.0 - (n - 1) * obs / exp;
  return res;
}

EvalMetrics evaluate(std::span<const Label> predicted, std::span<const Label> gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                                std::to_string(gold.size()) + " gold labels");
  }
  if (gold.empty()) throw std::invalid_argument("evaluate: no items");

  EvalMetrics m;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++m.confusion[static_cast<std::size_t>(value(gold[i]))][static_cast<std::size_t>(value(predicted[i]))];
  }
  std::size_t trace = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    trace += m.confusion[c][c];
    std::size_t col = 0;
    std::size_t row = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      col += m.confusion[k][c];
      row += m.confusion[c][k];
    }
    m.support[c] = row;
    const auto tp = static_cast<double>(m.confusion[c][c]);
    m.precision_undefined[c] = col == 0;
    m.recall_undefined[c] = row == 0;
    m.precision[c] = col == 0 ? 0.0 : tp / static_cast<double>(col);
    m.recall[c] = row == 0 ? 0.0 : tp / static_cast<double>(row);
    const double pr = m.precision[c] + m.recall[c];
    m.f1[c] = pr == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / pr;
  }
  m.accuracy = static_cast<double>(trace) / static_cast<double>(gold.size());
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    m.macro_precision += m.precision[c] / kNumLabels;
    m.macro_recall += m.recall[c] / kNumLabels;
    m.macro_f1 += m.f1[c] / kNumLabels;
  }
  return m;
}

std::unordered_map<std::string, Label> read_label_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label file '" + path.string() + "'");
  std::unordered_map<std::string, Label> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto v = text::trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto fields = text::split(v, ',');
    if (fields.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 'post_id,label'");
    }
    const auto id = std::string(text::trim(fields[0]));
    const auto lab = text::trim(fields[1]);
    if (lineno == 1 && id == "post_id") continue;
    if (lab.size() != 1 || lab[0] < '0' || lab[0] > '2') {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": label must be 0, 1 or 2");
    }
    labels[id] = label_from_int(lab[0] - '0');
  }
  return labels;
}

LabelFileBackend LabelFileBackend::load(const std::filesystem::path& path) {
  return LabelFileBackend(read_label_csv(path));
}

Classification LabelFileBackend::classify(const corpus::PostRecord& post) {
  auto it = labels_.find(post.id);
  if (it == labels_.end()) return {std::nullopt, "no label for post '" + post.id + "'"};
  return {it->second, {}};
}

BatchResult classify_batch(ClassifierBackend& backend, const std::vector<corpus::PostRecord>& posts,
                           std::size_t workers) {
  BatchResult out;
  if (posts.empty()) return out;

  std::vector<Classification> results(posts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < posts.size(); i = next++) results[i] = backend.classify(posts[i]);
  };
  workers = std::clamp<std::size_t>(workers, 1, posts.size());
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  out.scored.reserve(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const auto& r = results[i];
    if (r.label) {
      ++out.stats.classified;
      out.scored.push_back(make_scored(posts[i], *r.label));
    } else {
      if (out.stats.failed == 0) out.stats.first_error = r.error;
      ++out.stats.failed;
      out.scored.push_back(make_scored(posts[i], Label::neither, true));
    }
  }
  if (out.stats.classified == 0) {
    throw std::runtime_error("backend '" + backend.name() + "' failed on all " + std::to_string(posts.size()) +
                             " posts: " + out.stats.first_error);
  }
  return out;
}

}  // namespace ris::classify
