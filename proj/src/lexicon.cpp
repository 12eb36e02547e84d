#include "ris/lexicon.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "ris/text.hpp"

namespace ris::classify {

namespace {

const std::unordered_set<std::string_view> kIncreasers = {
    "absolutely", "amazingly",   "awfully",    "completely",    "considerable", "considerably", "decidedly",
    "deeply",     "enormous",    "enormously", "entirely",      "especially",   "exceptional",  "exceptionally",
    "extreme",    "extremely",   "fabulously", "fully",         "greatly",      "hella",        "highly",
    "hugely",     "incredible",  "incredibly", "intensely",     "major",        "majorly",      "more",
    "most",       "particularly", "purely",    "quite",         "really",       "remarkably",   "so",
    "substantially", "thoroughly", "total",    "totally",       "tremendous",   "tremendously", "uber",
    "unbelievably", "unusually", "utter",      "utterly",       "very"};

const std::unordered_set<std::string_view> kDecreasers = {
    "almost",     "barely",      "hardly",   "kinda",   "kindof", "less",     "little",   "marginal",
    "marginally", "occasional",  "occasionally", "partly", "scarce", "scarcely", "slight", "slightly",
    "somewhat",   "sorta",       "sortof"};

const std::unordered_set<std::string_view> kNegations = {
    "aint",    "arent",   "cannot",  "cant",    "couldnt", "darent",  "didnt",   "doesnt",  "dont",
    "hadnt",   "hasnt",   "havent",  "isnt",    "mightnt", "mustnt",  "neither", "neednt",  "never",
    "none",    "nope",    "nor",     "not",     "nothing", "nowhere", "oughtnt", "shant",   "shouldnt",
    "uhuh",    "wasnt",   "werent",  "without", "wont",    "wouldnt", "rarely",  "seldom",  "despite"};

struct Token {
  std::string raw;    // punctuation stripped, case preserved
  std::string lower;  // for lookups
};

bool is_edge_punct(char c) {
  return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           static_cast<unsigned char>(c) >= 0x80);
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view w = text.substr(i, j - i);
    while (!w.empty() && is_edge_punct(w.front())) w.remove_prefix(1);
    while (!w.empty() && is_edge_punct(w.back())) w.remove_suffix(1);
    if (!w.empty()) out.push_back(Token{std::string(w), text::to_lower(w)});
    i = j;
  }
  return out;
}

bool is_all_caps(const std::string& s) {
  bool letter = false;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') letter = true;
  }
  return letter;
}

bool is_negation(const std::string& lower) {
  if (lower.find("n't") != std::string::npos) return true;
  std::string squashed;
  for (char c : lower) {
    if (c != '\'') squashed.push_back(c);
  }
  return kNegations.count(squashed) != 0;
}

double sign_of(double v) { return v < 0 ? -1.0 : 1.0; }

}  // namespace

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon '" + path.string() + "'");
  std::unordered_map<std::string, double> valences;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() < 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected term<TAB>valence");
    }
    try {
      valences[text::to_lower(text::trim(cols[0]))] = std::stod(cols[1]);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad valence '" + cols[1] + "'");
    }
  }
  return Lexicon(std::move(valences));
}

const double* Lexicon::find(std::string_view lower_term) const {
  auto it = valences_.find(std::string(lower_term));
  return it == valences_.end() ? nullptr : &it->second;
}

double Lexicon::raw_sum(std::string_view text) const {
  const auto tokens = tokenize(text);
  bool any_caps = false;
  bool any_lower = false;
  for (const auto& t : tokens) {
    (is_all_caps(t.raw) ? any_caps : any_lower) = true;
  }
  const bool caps_differ = any_caps && any_lower;

  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double* base = find(tokens[i].lower);
    if (base == nullptr) continue;
    double v = *base;
    if (caps_differ && is_all_caps(tokens[i].raw)) v += sign_of(v) * kCapsIncrement;

    for (std::size_t d = 1; d <= 3 && d <= i; ++d) {
      const auto& prev = tokens[i - d];
      if (find(prev.lower) != nullptr) continue;
      double boost = 0.0;
      if (kIncreasers.count(prev.lower) != 0) boost = kBoosterIncrement;
      if (kDecreasers.count(prev.lower) != 0) boost = -kBoosterIncrement;
      if (boost != 0.0) {
        boost *= sign_of(v);
        if (caps_differ && is_all_caps(prev.raw)) boost += sign_of(v) * kCapsIncrement;
        if (d == 2) boost *= 0.95;
        if (d == 3) boost *= 0.9;
        v += boost;
      }
      if (is_negation(prev.lower)) v *= kNegationScalar;
    }
    sum += v;
  }
  return sum;
}

double normalize_valence(double sum, double alpha) {
  if (sum == 0.0) return 0.0;
  return sum / std::sqrt(sum * sum + alpha);
}

double lexicon_compound(std::string_view text, const Lexicon& lexicon) {
  return normalize_valence(lexicon.raw_sum(text));
}

}  // namespace ris::classify
