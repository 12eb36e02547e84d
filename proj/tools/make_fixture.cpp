// Writes the synthetic fixture: a post corpus for five communities over
// 2012-01..2022-12 with labels, two indicator CSVs, a small valence lexicon
// and a pipeline config. A latent inflation signal rises from mid-2020 and
// drives label mix, keyword share, vocabulary and both indicators.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ris/month.hpp"
#include "ris/rng.hpp"

namespace {

namespace fs = std::filesystem;
using ris::YearMonth;

struct Community {
  std::string name;
  std::vector<std::string> items;
};

const std::vector<Community> kCommunities{
    {"food", {"eggs", "milk", "beef", "bread", "coffee", "groceries"}},
    {"cars", {"used car", "tires", "insurance", "gas", "truck"}},
    {"realestate", {"rent", "mortgage", "house", "condo", "property tax"}},
    {"travel", {"flights", "hotel", "airbnb", "train tickets", "rental car"}},
    {"frugal", {"groceries", "utilities", "phone plan", "clothes", "gas"}},
};

const std::vector<std::string> kPlaces{"new york", "chicago", "denver", "seattle", "miami", "boston", "texas"};

const std::vector<std::string> kInflationBefore{
    "the {item} price went up a bit at my local store",
    "paying more for {item} than last year honestly",
    "{item} cost creeping higher again this spring",
    "noticed the {item} price tag changed quietly",
};
const std::vector<std::string> kInflationAfter{
    "{item} prices are insane right now dont know how people afford it",
    "gas prices and the grocery bill keep climbing every week",
    "my rent increase plus {item} cost is brutal",
    "everything costs more now, {item} prices doubled and wages did not",
    "inflation is crushing my budget, {item} prices up again",
};
const std::vector<std::string> kDeflation{
    "{item} on sale this week, really cheap deal",
    "{item} price dropped finally, good time to buy",
    "found {item} cheaper than last month",
};
const std::vector<std::string> kNeither{
    "anyone have a good tip for {item}",
    "what is the best {item} brand to purchase",
    "question about {item} price comparison sites",
    "how do you track {item} cost in a spreadsheet",
};
const std::vector<std::string> kOffTopic{
    "love this {item} community",
    "just shared my {item} photo today",
    "weekly thread about {item} stories",
};

// Latent signal in [0, 1]: flat with a mild wave, then a 2021-2022 surge.
double latent(YearMonth m) {
  const int t = m.ordinal() - YearMonth{2012, 1}.ordinal();
  double s = 0.12 + 0.04 * std::sin(t / 9.0);
  const int ramp_start = YearMonth{2020, 9}.ordinal();
  const int peak = YearMonth{2022, 6}.ordinal();
  if (m.ordinal() >= ramp_start) {
    const double x = std::min(1.0, static_cast<double>(m.ordinal() - ramp_start) / (peak - ramp_start));
    s += 0.7 * x;
  }
  if (m.ordinal() > peak) s -= 0.02 * (m.ordinal() - peak);
  return std::clamp(s, 0.0, 1.0);
}

template <typename Engine>
const std::string& pick(Engine& gen, const std::vector<std::string>& v) {
  return v[ris::uniform_below(gen, v.size())];
}

std::string fill(std::string tmpl, const std::string& item) {
  const auto pos = tmpl.find("{item}");
  if (pos != std::string::npos) tmpl.replace(pos, 6, item);
  return tmpl;
}

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

const char* kLexicon =
    "love\t3.2\t0.4\n"
    "good\t1.9\t0.9\n"
    "best\t3.2\t0.6\n"
    "deal\t1.2\t0.8\n"
    "cheap\t0.8\t1.1\n"
    "finally\t0.6\t0.9\n"
    "honestly\t0.4\t0.5\n"
    "insane\t-1.4\t1.3\n"
    "brutal\t-3.1\t0.7\n"
    "crushing\t-2.6\t0.8\n"
    "afford\t0.3\t0.6\n"
    "climbing\t-0.3\t0.9\n"
    "dropped\t-0.6\t0.9\n"
    "stories\t0.5\t0.7\n"
    "really\t0.2\t0.4\n"
    "very\t0.2\t0.4\n";

const char* kConfig =
    "# Synthetic fixture for the full pipeline.\n"
    "[paths]\n"
    "corpus = corpus.jsonl\n"
    "labels = labels.csv\n"
    "lexicon = lexicon.tsv\n"
    "stopwords = ../../data/stopwords_en.txt\n"
    "indicator.cpi = cpi.csv\n"
    "indicator.mich = mich.csv\n"
    "\n"
    "[corpus]\n"
    "range = 2012-01..2022-12\n"
    "max_submissions = 4\n"
    "max_comments = 10\n"
    "seed = 7\n"
    "\n"
    "[classify]\n"
    "backend = label-file\n"
    "workers = 2\n"
    "\n"
    "[index]\n"
    "window = 3\n"
    "\n"
    "[validate]\n"
    "window = 2012-03..2022-12\n"
    "lags = 1, 2, 3\n"
    "smoothed = true\n"
    "\n"
    "[changepoint]\n"
    "c = 0.5, 1.0, 2.0\n"
    "m = 2\n"
    "plot_c = 1.0\n"
    "focus = 2021-03\n"
    "\n"
    "[lexshift]\n"
    "min_df = 3\n"
    "max_df_ratio = 0.95\n"
    "top_k = 15\n"
    "before = 2019-01..2020-12\n"
    "after = 2021-06..2022-12\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic pipeline fixture"};
  std::string out_dir = "fixtures/synthetic";
  std::uint64_t seed = 2024;
  app.add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);
    std::mt19937_64 gen(seed);
    const YearMonth first{2012, 1};
    const YearMonth last{2022, 12};

    std::string corpus;
    std::string labels = "post_id,label\n";
    std::size_t seq = 0;
    std::string duplicate_line;
    for (const auto& c : kCommunities) {
      for (auto m = first; m <= last; m = m.plus(1)) {
        const double s = latent(m);
        const bool after = m >= YearMonth{2021, 1};
        const auto count = 10 + ris::uniform_below(gen, 13);
        for (std::uint64_t k = 0; k < count; ++k) {
          const std::string id = c.name.substr(0, 2) + std::to_string(100000 + seq++);
          const auto& item = pick(gen, c.items);
          const bool price_related = ris::uniform_unit(gen) < 0.55 + 0.3 * s;
          const double u = ris::uniform_unit(gen);
          int label = 1;
          std::string body;
          if (!price_related) {
            body = fill(pick(gen, kOffTopic), item);
            label = 1;
          } else if (u < 0.12 + 0.65 * s) {
            body = fill(pick(gen, after ? kInflationAfter : kInflationBefore), item);
            label = 2;
          } else if (u < 0.12 + 0.65 * s + 0.18 * (1.0 - s)) {
            body = fill(pick(gen, kDeflation), item);
            label = 0;
          } else {
            body = fill(pick(gen, kNeither), item);
            label = 1;
          }
          if (c.name == "travel" && ris::uniform_unit(gen) < 0.9) body += " in " + pick(gen, kPlaces);
          // Annotation noise: a few labels disagree with the text.
          if (ris::uniform_unit(gen) < 0.05) label = static_cast<int>(ris::uniform_below(gen, 3));

          const auto span = static_cast<std::uint64_t>(m.last_second() - m.first_second() + 1);
          const auto created = m.first_second() + static_cast<std::int64_t>(ris::uniform_below(gen, span));
          nlohmann::json rec{{"id", id}, {"subreddit", c.name}, {"created_utc", created}};
          if (ris::uniform_unit(gen) < 0.3) {
            rec["kind"] = "submission";
            rec["title"] = body;
            rec["selftext"] = ris::uniform_unit(gen) < 0.5 ? "thoughts?" : "";
          } else {
            rec["kind"] = "comment";
            rec["body"] = body;
          }
          const auto line = rec.dump();
          corpus += line + "\n";
          if (seq == 17) duplicate_line = line;
          labels += id + "," + std::to_string(label) + "\n";
        }
      }
    }
    // Ingestion must tolerate a little junk.
    corpus += "{\"id\": \"broken\", \"subreddit\": \n";
    corpus += "not json at all\n";
    corpus += "\n";
    corpus += duplicate_line + "\n";
    write(fs::path(out_dir) / "corpus.jsonl", corpus);
    write(fs::path(out_dir) / "labels.csv", labels);

    std::string cpi = "DATE,VALUE\n";
    std::string mich = "DATE,VALUE\n";
    double level = 226.0;
    for (auto m = first; m <= last; m = m.plus(1)) {
      const double s = latent(m);
      const double lagged = latent(m.plus(-1));
      const double noise = ris::uniform_unit(gen) - 0.5;
      level += 0.12 + 1.6 * lagged * lagged + 0.15 * noise;
      const std::string date = m.str() + "-01";
      cpi += date + "," + fmt(level, "%.3f") + "\n";
      if (m == YearMonth{2015, 7}) {
        mich += date + ",.\n";
      } else {
        mich += date + "," + fmt(2.6 + 2.4 * s + 0.3 * (ris::uniform_unit(gen) - 0.5), "%.1f") + "\n";
      }
    }
    write(fs::path(out_dir) / "cpi.csv", cpi);
    write(fs::path(out_dir) / "mich.csv", mich);
    write(fs::path(out_dir) / "lexicon.tsv", kLexicon);
    write(fs::path(out_dir) / "config.ini", kConfig);
    std::cout << seq << " posts written to " << out_dir << '\n';
  } catch (const std::exception& e) {
    std::cerr << "make_fixture: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
