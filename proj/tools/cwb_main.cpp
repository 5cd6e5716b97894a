#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "cwb/config.hpp"
#include "cwb/driver.hpp"
#include "cwb/errors.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

cwb::RunConfig load(const CommonOpts& opts) {
  cwb::RunConfig cfg = cwb::make_run_config(cwb::parse_config_file(opts.config_path));
  if (opts.seed_set) {
    cfg.seed = opts.seed;
    cfg.seed_set = true;
  }
  if (opts.workers > 0) cfg.workers = opts.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cwb: spectral Newton solver for quasi-periodic NLS tori"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string verify_suite;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "config file path");
    if (needs_config) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "random seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "worker threads (overrides config)");
  };

  CLI::App* run = app.add_subcommand("run", "single solve at the configured lambda");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over sampled lambda");
  add_common(sweep, true);
  CLI::App* filter = app.add_subcommand("filter", "diophantine filter report");
  add_common(filter, true);
  CLI::App* verify = app.add_subcommand("verify", "run a named property suite");
  verify->add_option("suite", verify_suite, "suite name")->required();
  verify->add_option("--seed", opts.seed, "random seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  CLI::App* report = app.add_subcommand("report", "summarize an output directory");
  report->add_option("--out", opts.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cwb::kExitUsage;
  }

  try {
    if (run->parsed()) return cwb::cmd_run(load(opts), opts.out_dir, std::cout);
    if (sweep->parsed()) return cwb::cmd_sweep(load(opts), opts.out_dir, std::cout);
    if (filter->parsed())
      return cwb::cmd_filter(load(opts), opts.out_dir, std::cout);
    if (verify->parsed())
      return cwb::cmd_verify(verify_suite, opts.seed_set ? opts.seed : 1,
                             std::cout);
    if (report->parsed()) return cwb::cmd_report(opts.out_dir, std::cout);
  } catch (const cwb::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cwb::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return cwb::kExitUsage;
}
