#include "cwb/driver.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>
#include <thread>

#include "cwb/driver.hpp"
#include "cwb/errors.hpp"
#include "cwb/io.hpp"
#include "cwb/newton.hpp"
#include "cwb/smalldiv.hpp"
#include "cwb/util.hpp"
#include "cwb/verify.hpp"

namespace cwb {

namespace {

using Json = nlohmann::ordered_json;

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Json claims_json(const TheoremClaims& c) {
  Json j;
  j["amplitudes_exact"] = c.amplitudes_exact;
  j["freq_drift"] = c.freq_drift;
  j["K"] = c.K;
  j["decay_sum_half_width"] = c.decay_sum;
  j["K_prime"] = c.K_prime;
  return j;
}

Json violations_json(const DcReport& report, size_t cap = 32) {
  Json arr = Json::array();
  for (size_t i = 0; i < report.violations.size() && i < cap; ++i) {
    Json v;
    v["site"] = report.violations[i].site.str();
    v["value"] = report.violations[i].value;
    arr.push_back(v);
  }
  return arr;
}

struct SingleRun {
  Verdict verdict = Verdict::rejected;
  RunOutcome outcome;      // valid unless prefilter rejected
  bool prefiltered = false;
  DcReport dc;
};

SingleRun run_once(const RunConfig& cfg) {
  SingleRun out;
  const ResonantSet R(cfg.newton.d, cfg.newton.b, cfg.newton.resonant_modes);
  if (cfg.prefilter) {
    out.dc = dc_check(cfg.newton.lambda, cfg.dio,
                      make_multiplier(R, cfg.newton.lambda), R);
    if (!out.dc.pass) {
      out.prefiltered = true;
      out.verdict = Verdict::rejected;
      return out;
    }
  }
  out.outcome = run(cfg.newton);
  out.verdict = out.outcome.verdict;
  return out;
}

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::converged: return kExitConverged;
    case Verdict::rejected: return kExitRejected;
    case Verdict::max_steps: return kExitMaxSteps;
  }
  return kExitUsage;
}

}  // namespace

int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
  if (cfg.newton.lambda.empty())
    throw ConfigError("config: lambda: required for the run command");
  fs::create_directories(out_dir);

  const SingleRun result = run_once(cfg);

  Json summary;
  summary["command"] = "run";
  summary["d"] = cfg.newton.d;
  summary["b"] = cfg.newton.b;
  summary["epsilon"] = cfg.newton.epsilon;
  summary["alpha"] = cfg.newton.alpha;
  summary["L0"] = cfg.newton.L0;
  summary["lambda"] = cfg.newton.lambda;
  summary["verdict"] = result.prefiltered
                           ? "rejected"
                           : verdict_name(result.outcome.verdict);

  if (result.prefiltered) {
    summary["rejection"] = {{"reason", "diophantine prefilter"},
                            {"violations", violations_json(result.dc)}};
    write_text(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    log << "run: rejected by diophantine prefilter ("
        << result.dc.violations.size() << " violations)\n";
    return kExitRejected;
  }

  const RunOutcome& outcome = result.outcome;
  summary["steps"] = outcome.state.r;
  summary["lambda_prime"] = outcome.state.lambda_prime;
  if (!outcome.trace.steps.empty()) {
    const StepRecord& last = outcome.trace.steps.back();
    summary["final_residual_F"] = last.residual_F;
    summary["final_residual_F_half_width"] = last.residual_F_half;
    summary["max_imag_q"] = last.max_imag_q;
    summary["conj_defect"] = last.conj_defect;
  }
  summary["diverged"] = outcome.trace.diverged;
  summary["claims"] = claims_json(outcome.claims);
  if (outcome.verdict == Verdict::rejected)
    summary["rejection"] = {{"reason", outcome.rejection_reason}};
  long long total_ms = 0;
  for (const auto& s : outcome.trace.steps) total_ms += s.ms;
  summary["total_ms"] = total_ms;

  {
    std::ofstream trace(fs::path(out_dir) / "trace.csv", std::ios::binary);
    write_trace_csv(trace, outcome.trace, cfg.newton.b);
  }
  {
    std::ofstream qf(fs::path(out_dir) / "q_final.txt", std::ios::binary);
    write_field(qf, outcome.state.q);
  }
  if (cfg.dump_operator) {
    const ResonantSet R(cfg.newton.d, cfg.newton.b, cfg.newton.resonant_modes);
    const Box box{cfg.newton.schedule.radius_at(outcome.state.r)};
    const BlockOperator T = assemble_T(
        outcome.state.q, cfg.newton.f, cfg.newton.epsilon, box, R,
        outcome.state.lambda_prime,
        make_multiplier(R, outcome.state.lambda), cfg.newton.budget);
    std::ofstream dump(fs::path(out_dir) / "operator.txt", std::ios::binary);
    write_operator_dump(dump, T);
  }
  write_text(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  log << "run: " << verdict_name(outcome.verdict) << " after "
      << outcome.state.r << " steps";
  if (!outcome.trace.steps.empty())
    log << ", residual_F = "
        << format_double(outcome.trace.steps.back().residual_F);
  log << "\n";
  return exit_code_for(outcome.verdict);
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir,
              std::ostream& log) {
  if (!cfg.seed_set)
    throw ConfigError("config: seed: required for the sweep command");
  fs::create_directories(out_dir);

  struct Row {
    std::vector<double> lambda;
    Verdict verdict = Verdict::rejected;
    double freq_drift = 0.0;
    double residual = 0.0;
    double decay_claim = 0.0;
    int steps = 0;
  };
  std::vector<Row> rows(static_cast<size_t>(cfg.sweep_samples));

  std::atomic<long long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= cfg.sweep_samples) break;
      std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<uint64_t>(i)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      RunConfig local = cfg;
      local.newton.lambda.resize(local.newton.b);
      for (int j = 0; j < local.newton.b; ++j)
        local.newton.lambda[j] = unit(rng);
      Row row;
      row.lambda = local.newton.lambda;
      try {
        const SingleRun r = run_once(local);
        row.verdict = r.verdict;
        if (!r.prefiltered) {
          row.freq_drift = r.outcome.claims.freq_drift;
          row.decay_claim = r.outcome.claims.K_prime;
          row.steps = r.outcome.state.r;
          if (!r.outcome.trace.steps.empty())
            row.residual = r.outcome.trace.steps.back().residual_F;
        }
      } catch (const BudgetError&) {
        row.verdict = Verdict::rejected;
      }
      rows[static_cast<size_t>(i)] = std::move(row);
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max(1, cfg.workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  long long converged = 0, rejected = 0, maxed = 0;
  std::ofstream csv(fs::path(out_dir) / "sweep.csv", std::ios::binary);
  csv << "sample";
  for (int j = 1; j <= cfg.newton.b; ++j) csv << ",lambda_" << j;
  csv << ",verdict,freq_drift,final_residual,decay_claim,steps\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    switch (row.verdict) {
      case Verdict::converged: ++converged; break;
      case Verdict::rejected: ++rejected; break;
      case Verdict::max_steps: ++maxed; break;
    }
    csv << i;
    for (double v : row.lambda) csv << "," << format_double(v);
    csv << "," << verdict_name(row.verdict) << ","
        << format_double(row.freq_drift) << "," << format_double(row.residual)
        << "," << format_double(row.decay_claim) << "," << row.steps << "\n";
  }
  csv.close();

  Json summary;
  summary["command"] = "sweep";
  summary["samples"] = cfg.sweep_samples;
  summary["seed"] = cfg.seed;
  summary["converged"] = converged;
  summary["rejected"] = rejected;
  summary["max_steps"] = maxed;
  summary["success_fraction"] =
      cfg.sweep_samples > 0
          ? static_cast<double>(converged) / static_cast<double>(cfg.sweep_samples)
          : 0.0;
  write_text(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  log << "sweep: " << converged << "/" << cfg.sweep_samples << " converged, "
      << rejected << " rejected, " << maxed << " max_steps\n";
  return 0;
}

int cmd_filter(const RunConfig& cfg, const std::string& out_dir,
               std::ostream& log) {
  if (!cfg.seed_set)
    throw ConfigError("config: seed: required for the filter command");
  fs::create_directories(out_dir);
  const ResonantSet R(cfg.newton.d, cfg.newton.b, cfg.newton.resonant_modes);

  std::ofstream csv(fs::path(out_dir) / "filter.csv", std::ios::binary);
  csv << "sample";
  for (int j = 1; j <= cfg.newton.b; ++j) csv << ",lambda_" << j;
  csv << ",pass,worst_divisor\n";
  long long passes = 0;
  std::vector<double> lambda(cfg.newton.b);
  for (long long i = 0; i < cfg.filter_samples; ++i) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int j = 0; j < cfg.newton.b; ++j) lambda[j] = unit(rng);
    const DcReport rep = dc_check(lambda, cfg.dio, make_multiplier(R, lambda), R);
    if (rep.pass) ++passes;
    csv << i;
    for (double v : lambda) csv << "," << format_double(v);
    csv << "," << (rep.pass ? 1 : 0) << "," << format_double(rep.worst_margin)
        << "\n";
  }
  csv.close();

  Json summary;
  summary["command"] = "filter";
  summary["samples"] = cfg.filter_samples;
  summary["pass_fraction"] =
      static_cast<double>(passes) / static_cast<double>(cfg.filter_samples);

  if (cfg.rm_enable) {
    std::vector<double> lo(cfg.newton.b, 0.0), hi(cfg.newton.b, 1.0);
    const RemoveIntervalsResult rm =
        remove_intervals(lo, hi, cfg.rm_M, cfg.dio.N, cfg.dio.gamma, cfg.rm_tau,
                         cfg.rm_grid_exponent, 16, cfg.seed);
    Json kept = Json::array();
    for (const auto& [clo, chi] : rm.kept.cells)
      kept.push_back({{"lo", clo}, {"hi", chi}});
    Json rmj;
    rmj["cells_total"] = rm.cells_total;
    rmj["cells_removed"] = rm.cells_removed;
    rmj["removed_measure"] = rm.removed_measure;
    rmj["bound_constant"] = rm.bound_constant;
    write_text(fs::path(out_dir) / "kept_intervals.json",
               Json{{"summary", rmj}, {"kept", kept}}.dump(2) + "\n");
    summary["remove_intervals"] = rmj;
  }
  write_text(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
  log << "filter: " << passes << "/" << cfg.filter_samples << " pass\n";
  return 0;
}

int cmd_verify(const std::string& suite, uint64_t seed, std::ostream& log) {
  SuiteResult result;
  try {
    result = run_verify_suite(suite, seed);
  } catch (const std::out_of_range&) {
    log << "unknown verify suite '" << suite << "'; available:";
    for (const auto& n : verify_suite_names()) log << " " << n;
    log << "\n";
    return kExitUsage;
  }
  log << "suite " << result.name << ": " << result.trials << " checks, "
      << result.violations << " violations\n";
  for (const auto& note : result.notes) log << "  " << note << "\n";
  return result.pass() ? 0 : 1;
}

int cmd_report(const std::string& out_dir, std::ostream& log) {
  const fs::path summary_path = fs::path(out_dir) / "summary.json";
  std::ifstream in(summary_path);
  if (!in) {
    log << "no summary.json under " << out_dir << "\n";
    return kExitUsage;
  }
  Json summary = Json::parse(in);
  log << "report for " << out_dir << "\n";
  for (const auto& [key, value] : summary.items())
    log << "  " << key << ": " << value.dump() << "\n";
  return 0;
}

}  // namespace cwb
