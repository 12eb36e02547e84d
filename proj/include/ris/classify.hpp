#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ris/corpus.hpp"

namespace ris::classify {

enum class Label : int { deflation = 0, neither = 1, inflation = 2 };

inline constexpr int kNumLabels = 3;

constexpr int value(Label l) { return static_cast<int>(l); }
// The {0,1,2} -> {-1,0,+1} remap.
constexpr int score_of(Label l) { return value(l) - 1; }

Label label_from_int(int v);
const char* to_string(Label l);

struct ScoredPost {
  corpus::PostRecord post;
  Label label{Label::neither};
  int score{0};
  bool failed{false};  // classification failed and the label defaulted to neither
};

ScoredPost make_scored(corpus::PostRecord post, Label label, bool failed = false);

// Label held by at least two of exactly three raters; a three-way split is
// resolved to `neither`.
Label majority_vote(std::span<const Label> ratings);

struct AnnotationSet {
  std::string post_id;
  std::vector<std::optional<Label>> ratings;  // one slot per rater, nullopt when missing
};

enum class AlphaMetric { nominal, ordinal };

struct AlphaResult {
  double alpha{1.0};
  double observed_disagreement{0.0};
  double expected_disagreement{0.0};
  std::size_t pairable_values{0};
  // Only one category was ever used: expected disagreement is zero and alpha
  // is reported as 1.
  bool degenerate{false};
};

// Krippendorff's alpha over the coincidence matrix. Units with fewer than two
// ratings are not pairable and are ignored.
AlphaResult krippendorff_alpha(const std::vector<AnnotationSet>& sets, AlphaMetric metric = AlphaMetric::nominal);

struct EvalMetrics {
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};  // [gold][predicted]
  double accuracy{0.0};
  std::array<double, kNumLabels> precision{};
  std::array<double, kNumLabels> recall{};
  std::array<double, kNumLabels> f1{};
  std::array<std::size_t, kNumLabels> support{};
  // Denominator was zero; the metric was reported as 0.
  std::array<bool, kNumLabels> precision_undefined{};
  std::array<bool, kNumLabels> recall_undefined{};
  double macro_precision{0.0};
  double macro_recall{0.0};
  double macro_f1{0.0};
};

EvalMetrics evaluate(std::span<const Label> predicted, std::span<const Label> gold);

// Outcome of a single classification attempt sequence for one post.
struct Classification {
  std::optional<Label> label;  // nullopt on failure
  std::string error;
};

// Backends are shared by parallel workers and must be thread-safe.
class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual Classification classify(const corpus::PostRecord& post) = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

// Labels looked up by post id from a "post_id,label" CSV.
class LabelFileBackend final : public ClassifierBackend {
 public:
  explicit LabelFileBackend(std::unordered_map<std::string, Label> labels) : labels_(std::move(labels)) {}
  static LabelFileBackend load(const std::filesystem::path& path);

  Classification classify(const corpus::PostRecord& post) override;
  [[nodiscard]] std::string name() const override { return "label-file"; }
  [[nodiscard]] std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, Label> labels_;
};

std::unordered_map<std::string, Label> read_label_csv(const std::filesystem::path& path);

struct BatchStats {
  std::size_t classified{0};
  std::size_t failed{0};
  std::string first_error;
};

struct BatchResult {
  std::vector<ScoredPost> scored;  // same order as the input
  BatchStats stats;
};

// Classifies every post. A post whose classification fails is labelled
// `neither` and flagged. Throws std::runtime_error when every post fails.
BatchResult classify_batch(ClassifierBackend& backend, const std::vector<corpus::PostRecord>& posts,
                           std::size_t workers = 1);

}  // namespace ris::classify
