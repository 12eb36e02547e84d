#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ris::classify {

// Rule-based valence scoring in the style of VADER, restricted to negation,
// booster words and ALL-CAPS emphasis. Idioms, "but" clauses and punctuation
// emphasis are not modelled.
class Lexicon {
 public:
  static constexpr double kNormalizationAlpha = 15.0;
  static constexpr double kNegationScalar = -0.74;
  static constexpr double kBoosterIncrement = 0.293;
  static constexpr double kCapsIncrement = 0.733;

  Lexicon() = default;
  explicit Lexicon(std::unordered_map<std::string, double> valences) : valences_(std::move(valences)) {}

  // "term<TAB>valence[<TAB>...]" per line; extra columns are ignored.
  static Lexicon load(const std::filesystem::path& path);

  [[nodiscard]] const double* find(std::string_view lower_term) const;
  [[nodiscard]] std::size_t size() const { return valences_.size(); }

  // Sum of adjusted valences of matched tokens.
  [[nodiscard]] double raw_sum(std::string_view text) const;

 private:
  std::unordered_map<std::string, double> valences_;
};

// s / sqrt(s^2 + alpha) for the summed valence s; 0 when nothing matches.
double normalize_valence(double sum, double alpha = Lexicon::kNormalizationAlpha);

double lexicon_compound(std::string_view text, const Lexicon& lexicon);

}  // namespace ris::classify
