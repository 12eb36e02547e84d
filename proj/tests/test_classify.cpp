#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ris/classify.hpp"
#include "ris/lexicon.hpp"
#include "support.hpp"

namespace {

using namespace ris::classify;
using ris::corpus::PostKind;
using ris::corpus::PostRecord;

constexpr Label D = Label::deflation;
constexpr Label N = Label::neither;
constexpr Label I = Label::inflation;

Label vote(Label a, Label b, Label c) {
  const std::array<Label, 3> r{a, b, c};
  return majority_vote(r);
}

TEST(MajorityVote, Examples) {
  EXPECT_EQ(vote(D, D, I), D);
  EXPECT_EQ(vote(D, N, I), N);
  EXPECT_EQ(vote(I, I, I), I);
}

TEST(MajorityVote, PermutationInvariant) {
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        std::array<Label, 3> r{label_from_int(a), label_from_int(b), label_from_int(c)};
        const auto expected = majority_vote(r);
        std::sort(r.begin(), r.end());
        do {
          EXPECT_EQ(majority_vote(r), expected);
        } while (std::next_permutation(r.begin(), r.end()));
      }
    }
  }
}

TEST(MajorityVote, WrongArity) {
  const std::array<Label, 2> two{I, I};
  EXPECT_THROW(majority_vote(two), std::invalid_argument);
}

TEST(Labels, ScoreRemap) {
  EXPECT_EQ(score_of(D), -1);
  EXPECT_EQ(score_of(N), 0);
  EXPECT_EQ(score_of(I), 1);
  EXPECT_THROW(label_from_int(3), std::invalid_argument);
  const auto sp = make_scored(PostRecord{"x", "food", PostKind::comment, 1, "t"}, I);
  EXPECT_EQ(sp.score, 1);
}

AnnotationSet unit(std::string id, std::vector<std::optional<Label>> r) { return {std::move(id), std::move(r)}; }

TEST(Krippendorff, PerfectAgreement) {
  const std::vector<AnnotationSet> sets{unit("a", {I, I, I}), unit("b", {I, I, I}), unit("c", {D, D, D})};
  const auto r = krippendorff_alpha(sets);
  EXPECT_DOUBLE_EQ(r.alpha, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(Krippendorff, SingleCategoryIsDegenerate) {
  const std::vector<AnnotationSet> sets{unit("a", {I, I, I}), unit("b", {I, I})};
  const auto r = krippendorff_alpha(sets);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.alpha, 1.0);
}

TEST(Krippendorff, TwoItemExample) {
  // o(0,0) = 2, o(0,2) = o(2,0) = 1; n = 4, n_0 = 3, n_2 = 1.
  // D_o = 2/4, D_e = 2*3*1/(4*3) = 1/2, alpha = 0.
  const std::vector<AnnotationSet> sets{unit("a", {D, D}), unit("b", {D, I})};
  const auto r = krippendorff_alpha(sets, AlphaMetric::nominal);
  EXPECT_NEAR(r.alpha, 0.0, 1e-15);
  EXPECT_NEAR(r.alpha, ris::testing::brute_force_alpha(sets, false), 1e-12);
  EXPECT_EQ(r.pairable_values, 4u);
}

TEST(Krippendorff, MissingRatingsAndUnpairableUnits) {
  const std::vector<AnnotationSet> sets{unit("a", {I, std::nullopt, I}), unit("b", {D, N, std::nullopt}),
                                        unit("c", {std::nullopt, N, std::nullopt}), unit("d", {N, N, D})};
  const auto r = krippendorff_alpha(sets);
  EXPECT_EQ(r.pairable_values, 7u);
  EXPECT_NEAR(r.alpha, ris::testing::brute_force_alpha(sets, false), 1e-12);
}

TEST(Krippendorff, BinaryClosedForm) {
  ris::testing::Gen g(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<AnnotationSet> sets;
    for (int u = 0; u < 8; ++u) {
      std::vector<std::optional<Label>> r;
      for (int k = 0; k < 3; ++k) r.emplace_back(g.below(2) == 0 ? D : I);
      sets.push_back(unit(std::to_string(u), r));
    }
    double o01 = 0;
    double n0 = 0;
    double n1 = 0;
    for (const auto& s : sets) {
      double c0 = 0;
      double c1 = 0;
      for (const auto& r : s.ratings) (*r == D ? c0 : c1) += 1;
      o01 += c0 * c1 / 2.0;
      n0 += c0;
      n1 += c1;
    }
    if (n0 == 0 || n1 == 0) continue;
    const double n = n0 + n1;
    const double closed = 1.0 - (n - 1) * o01 / (n0 * n1);
    EXPECT_NEAR(krippendorff_alpha(sets).alpha, closed, 1e-12);
  }
}

TEST(Krippendorff, OrderInvariantAndBounded) {
  ris::testing::Gen g(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<AnnotationSet> sets;
    const int units = g.range(2, 9);
    for (int u = 0; u < units; ++u) {
      std::vector<std::optional<Label>> r;
      for (int k = 0; k < 3; ++k) {
        if (g.below(5) == 0) {
          r.emplace_back(std::nullopt);
        } else {
          r.emplace_back(label_from_int(static_cast<int>(g.below(3))));
        }
      }
      sets.push_back(unit(std::to_string(u), r));
    }
    for (auto metric : {AlphaMetric::nominal, AlphaMetric::ordinal}) {
      AlphaResult base;
      try {
        base = krippendorff_alpha(sets, metric);
      } catch (const std::invalid_argument&) {
        continue;  // nothing pairable
      }
      EXPECT_LE(base.alpha, 1.0 + 1e-12);
      auto shuffled = sets;
      std::reverse(shuffled.begin(), shuffled.end());
      for (auto& s : shuffled) std::rotate(s.ratings.begin(), s.ratings.begin() + 1, s.ratings.end());
      EXPECT_NEAR(krippendorff_alpha(shuffled, metric).alpha, base.alpha, 1e-12);
      if (!base.degenerate) {
        EXPECT_NEAR(base.alpha, ris::testing::brute_force_alpha(sets, metric == AlphaMetric::ordinal), 1e-9);
      }
    }
  }
}

TEST(Krippendorff, NeedsTwoItems) {
  EXPECT_THROW(krippendorff_alpha({unit("a", {I, D})}), std::invalid_argument);
}

TEST(Evaluate, PerfectPrediction) {
  const std::vector<Label> gold{D, N, I, I, N};
  const auto m = evaluate(gold, gold);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0);
}

TEST(Evaluate, AllNeitherPrediction) {
  const std::vector<Label> gold{D, N, I};
  const std::vector<Label> pred{N, N, N};
  const auto m = evaluate(pred, gold);
  EXPECT_NEAR(m.accuracy, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.precision[1], 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(m.recall[1], 1.0);
  EXPECT_TRUE(m.precision_undefined[0]);
  EXPECT_TRUE(m.precision_undefined[2]);
  EXPECT_DOUBLE_EQ(m.precision[0], 0.0);
  EXPECT_DOUBLE_EQ(m.precision[2], 0.0);
  EXPECT_FALSE(m.precision_undefined[1]);
  EXPECT_NEAR(m.f1[1], 0.5, 1e-15);
  EXPECT_NEAR(m.macro_f1, 0.5 / 3.0, 1e-15);
  EXPECT_EQ(m.confusion[0][1], 1u);
}

TEST(Evaluate, TotalDisagreement) {
  const std::vector<Label> gold{D, I, D, I};
  const std::vector<Label> pred{I, D, I, D};
  EXPECT_DOUBLE_EQ(evaluate(pred, gold).accuracy, 0.0);
}

TEST(Evaluate, Properties) {
  ris::testing::Gen g(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(g.range(1, 40));
    std::vector<Label> gold;
    std::vector<Label> pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(label_from_int(static_cast<int>(g.below(3))));
      pred.push_back(label_from_int(static_cast<int>(g.below(3))));
    }
    const auto m = evaluate(pred, gold);
    double weighted = 0;
    std::size_t trace = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      weighted += m.recall[c] * static_cast<double>(m.support[c]);
      trace += m.confusion[c][c];
    }
    EXPECT_NEAR(weighted, static_cast<double>(trace), 1e-9);
    EXPECT_GE(m.macro_f1, 0.0);
    EXPECT_LE(m.macro_f1, 1.0);
    // Joint permutation leaves everything unchanged.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = n - 1 - i;
    std::vector<Label> g2;
    std::vector<Label> p2;
    for (auto i : idx) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    const auto m2 = evaluate(p2, g2);
    EXPECT_EQ(m2.confusion, m.confusion);
    EXPECT_EQ(m2.macro_f1, m.macro_f1);
  }
}

TEST(Evaluate, LengthMismatch) {
  const std::vector<Label> a{D, N};
  const std::vector<Label> b{D};
  EXPECT_THROW(evaluate(a, b), std::invalid_argument);
}

std::vector<PostRecord> posts(std::initializer_list<const char*> ids) {
  std::vector<PostRecord> out;
  for (const char* id : ids) out.push_back(PostRecord{id, "food", PostKind::comment, 1600000000, "t"});
  return out;
}

TEST(LabelFile, ScoresFollowRemap) {
  const auto path = std::filesystem::temp_directory_path() / "ris_labels_test.csv";
  {
    std::ofstream out(path);
    out << "post_id,label\na,0\nb,1\nc,2\n";
  }
  auto backend = LabelFileBackend::load(path);
  EXPECT_EQ(backend.size(), 3u);
  const auto res = classify_batch(backend, posts({"a", "b", "c"}));
  ASSERT_EQ(res.scored.size(), 3u);
  EXPECT_EQ(res.scored[0].score, -1);
  EXPECT_EQ(res.scored[1].score, 0);
  EXPECT_EQ(res.scored[2].score, 1);
  std::filesystem::remove(path);
}

TEST(LabelFile, RejectsBadLabel) {
  const auto path = std::filesystem::temp_directory_path() / "ris_labels_bad.csv";
  {
    std::ofstream out(path);
    out << "a,7\n";
  }
  EXPECT_THROW(read_label_csv(path), std::runtime_error);
  std::filesystem::remove(path);
}

class FlakyBackend final : public ClassifierBackend {
 public:
  Classification classify(const PostRecord& post) override {
    ++calls;
    if (post.id == "bad") return {std::nullopt, "timeout"};
    return {Label::inflation, {}};
  }
  [[nodiscard]] std::string name() const override { return "flaky"; }
  std::atomic<int> calls{0};
};

TEST(ClassifyBatch, FailuresDefaultToNeither) {
  FlakyBackend backend;
  const auto res = classify_batch(backend, posts({"a", "bad", "c", "d"}), 3);
  ASSERT_EQ(res.scored.size(), 4u);
  EXPECT_EQ(res.scored[1].label, Label::neither);
  EXPECT_EQ(res.scored[1].score, 0);
  EXPECT_TRUE(res.scored[1].failed);
  EXPECT_FALSE(res.scored[0].failed);
  EXPECT_EQ(res.scored[3].post.id, "d");
  EXPECT_EQ(res.stats.failed, 1u);
  EXPECT_EQ(res.stats.classified, 3u);
  EXPECT_EQ(res.stats.first_error, "timeout");
}

TEST(ClassifyBatch, AllFailedIsFatal) {
  FlakyBackend backend;
  EXPECT_THROW(classify_batch(backend, posts({"bad", "bad"}), 2), std::runtime_error);
}

TEST(ClassifyBatch, ParallelMatchesSerial) {
  std::unordered_map<std::string, Label> labels;
  std::vector<PostRecord> many;
  for (int i = 0; i < 200; ++i) {
    const auto id = "p" + std::to_string(i);
    labels[id] = label_from_int(i % 3);
    many.push_back(PostRecord{id, "food", PostKind::comment, 1600000000, "t"});
  }
  LabelFileBackend backend(labels);
  const auto serial = classify_batch(backend, many, 1);
  const auto parallel = classify_batch(backend, many, 4);
  for (std::size_t i = 0; i < many.size(); ++i) {
    EXPECT_EQ(serial.scored[i].post.id, parallel.scored[i].post.id);
    EXPECT_EQ(serial.scored[i].label, parallel.scored[i].label);
  }
}

TEST(Lexicon, Examples) {
  const Lexicon lex({{"good", 1.9}, {"great", 3.1}, {"bad", -2.5}, {"two", 2.0}});
  EXPECT_DOUBLE_EQ(lexicon_compound("nothing to see here", lex), 0.0);
  EXPECT_NEAR(lexicon_compound("two", lex), 2.0 / std::sqrt(19.0), 1e-15);
  EXPECT_NEAR(lexicon_compound("two", lex), 0.4588, 5e-5);
  const double s = 1.9 * -0.74;
  EXPECT_NEAR(lex.raw_sum("not good"), s, 1e-15);
  EXPECT_NEAR(lexicon_compound("not good", lex), s / std::sqrt(s * s + 15.0), 1e-15);
  EXPECT_NEAR(lexicon_compound("not good", lex), -0.341, 5e-4);
}

TEST(Lexicon, BoostersCapsAndPunctuation) {
  const Lexicon lex({{"good", 1.9}, {"bad", -2.5}});
  EXPECT_NEAR(lex.raw_sum("very good"), 1.9 + 0.293, 1e-12);
  EXPECT_NEAR(lex.raw_sum("very bad"), -2.5 - 0.293, 1e-12);
  EXPECT_NEAR(lex.raw_sum("very much good"), 1.9 + 0.293 * 0.95, 1e-12);
  EXPECT_NEAR(lex.raw_sum("slightly good"), 1.9 - 0.293, 1e-12);
  EXPECT_NEAR(lex.raw_sum("this is GOOD"), 1.9 + 0.733, 1e-12);
  // All-caps text carries no emphasis.
  EXPECT_NEAR(lex.raw_sum("THIS IS GOOD"), 1.9, 1e-12);
  EXPECT_NEAR(lex.raw_sum("good!!! (bad)"), 1.9 - 2.5, 1e-12);
  EXPECT_NEAR(lex.raw_sum("isn't good"), 1.9 * -0.74, 1e-12);
  EXPECT_NEAR(lex.raw_sum("not really very good"), (1.9 + 0.293 + 0.293 * 0.95) * -0.74, 1e-12);
}

TEST(Lexicon, CompoundBoundedAndMonotone) {
  double prev = -1.0;
  for (double s = -50.0; s <= 50.0; s += 0.25) {
    const double c = normalize_valence(s);
    EXPECT_LT(std::fabs(c), 1.0);
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Lexicon, LoadIgnoresExtraColumns) {
  const auto path = std::filesystem::temp_directory_path() / "ris_lexicon_test.tsv";
  {
    std::ofstream out(path);
    out << "good\t1.9\t0.9\t[1, 2]\nBad\t-2.5\n";
  }
  const auto lex = Lexicon::load(path);
  EXPECT_EQ(lex.size(), 2u);
  ASSERT_NE(lex.find("bad"), nullptr);
  EXPECT_DOUBLE_EQ(*lex.find("bad"), -2.5);
  std::filesystem::remove(path);
}

}  // namespace
