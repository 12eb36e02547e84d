#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ris/config.hpp"
#include "ris/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out{"out"};
  std::optional<std::uint64_t> seed;
  bool raw{false};
  bool smoothed{false};
  bool diff{false};
  std::string before;
  std::string after;
  std::string community;
  std::string focus;
  bool quiet{false};
};

void add_flags(CLI::App* cmd, Flags& f, const std::string& name) {
  cmd->add_option("-c,--config", f.config, "Pipeline config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Sampling seed (overrides [corpus] seed)");
  cmd->add_flag("-q,--quiet", f.quiet, "Suppress progress notes");
  if (name == "validate" || name == "run-all") {
    auto* raw = cmd->add_flag("--raw", f.raw, "Test unsmoothed series");
    cmd->add_flag("--smoothed", f.smoothed, "Test moving-average series")->excludes(raw);
    cmd->add_flag("--diff", f.diff, "First-difference both series before testing");
  }
  if (name == "lexshift" || name == "run-all") {
    cmd->add_option("--before", f.before, "Before window YYYY-MM..YYYY-MM");
    cmd->add_option("--after", f.after, "After window YYYY-MM..YYYY-MM");
    cmd->add_option("--community", f.community, "Restrict to one community");
  }
  if (name == "changepoint" || name == "report" || name == "run-all") {
    cmd->add_option("--focus", f.focus, "Flag the changepoint nearest this month (YYYY-MM)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monthly inflation scores from social-media posts"};
  app.require_subcommand(1);
  Flags flags;
  for (const auto& name : ris::pipeline::subcommands()) {
    const std::string help = name == "run-all" ? "Run every stage in order" : "Run the " + name + " stage";
    add_flags(app.add_subcommand(name, help), flags, name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << ris::pipeline::error_line("cli", "usage", e.what()) << '\n';
    return 2;
  }
  const std::string stage = app.get_subcommands().front()->get_name();

  ris::config::PipelineConfig cfg;
  ris::pipeline::RunOptions opts;
  try {
    cfg = ris::config::load(flags.config);
    opts.out = flags.out;
    opts.seed = flags.seed;
    opts.quiet = flags.quiet;
    if (flags.raw) opts.smoothed = false;
    if (flags.smoothed) opts.smoothed = true;
    if (flags.diff) opts.difference = true;
    if (!flags.before.empty()) opts.before = ris::MonthRange::parse(flags.before);
    if (!flags.after.empty()) opts.after = ris::MonthRange::parse(flags.after);
    if (!flags.community.empty()) opts.community = ris::corpus::normalize_community(flags.community);
    if (!flags.focus.empty()) opts.focus = ris::YearMonth::parse(flags.focus);
  } catch (const std::exception& e) {
    std::cerr << ris::pipeline::error_line(stage, "config", e.what()) << '\n';
    return 2;
  }

  try {
    ris::pipeline::run(stage, cfg, opts);
  } catch (const ris::pipeline::PipelineError& e) {
    std::cerr << ris::pipeline::error_line(e.stage(), e.type(), e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << ris::pipeline::error_line(stage, "runtime", e.what()) << '\n';
    return 1;
  }
  return 0;
}
