// dmdsep command line: experiment suites, CSV unmixing and plotting.
//
// Exit codes: 0 success, 1 validation or usage error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dmdsep/harness.hpp"
#include "dmdsep/plots.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kNumerical = 2;

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dmdsep;

  CLI::App app{"Blind source separation with dynamic mode decomposition"};
  app.require_subcommand(1);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a simulation suite and write per-trial records");
  std::string suite;
  std::string config_path;
  std::vector<Index> n_grid;
  std::vector<double> q_grid;
  std::vector<Index> taus;
  Index trials = 0;
  Index p = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  bool timing = false;
  bool quiet = false;
  exp->add_option("suite", suite, "One of: " + join(harness::kSuites));
  exp->add_option("--config", config_path, "key = value file applied before the flags below");
  exp->add_option("--n-grid", n_grid, "Sample sizes")->delimiter(',');
  exp->add_option("--q-grid", q_grid, "Observation probabilities")->delimiter(',');
  exp->add_option("--tau", taus, "Lags")->delimiter(',');
  exp->add_option("--trials", trials, "Trials per cell");
  exp->add_option("--p", p, "Number of channels");
  exp->add_option("--seed", seed, "Base seed");
  exp->add_option("--out", out_path, "Records CSV (default: stdout)");
  exp->add_flag("--timing", timing, "Record wall-clock time per fit");
  exp->add_flag("--quiet", quiet, "No progress output");

  // unmix
  auto* unmix = app.add_subcommand("unmix", "Factorize a time-major CSV into sources and mixing");
  std::string in_csv;
  Index lag = 1;
  Index rank = 2;
  bool fill_missing = false;
  std::string prefix = "unmixed";
  unmix->add_option("input", in_csv, "CSV, one row per sample, one column per channel")->required();
  unmix->add_option("--lag", lag, "Lag tau")->capture_default_str();
  unmix->add_option("--rank", rank, "Number of sources k")->capture_default_str();
  unmix->add_flag("--fill-missing", fill_missing, "Accept empty cells (zero fill + rank-k truncation)");
  unmix->add_option("--out-prefix", prefix, "Output file prefix")->capture_default_str();

  // plots
  auto* plots_cmd = app.add_subcommand("plots", "Render log-log charts from a records CSV");
  std::string records_path;
  std::string out_dir = "plots";
  plots_cmd->add_option("records", records_path, "Records CSV")->required();
  plots_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*exp) {
      harness::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream probe(config_path);
        if (!probe) throw ValidationError("cannot open config '" + config_path + "'");
        const harness::ExperimentConfig raw = harness::parse_config(probe, {}, config_path);
        const std::string name = suite.empty() ? raw.suite : suite;
        if (name.empty()) throw ValidationError("config field 'suite': no suite given");
        cfg = harness::load_config(config_path, harness::default_config(name));
        cfg.suite = name;
      } else {
        if (suite.empty()) throw ValidationError("config field 'suite': no suite given");
        cfg = harness::default_config(suite);
      }
      if (!n_grid.empty()) cfg.n_grid = n_grid;
      if (!q_grid.empty()) cfg.q_grid = q_grid;
      if (!taus.empty()) cfg.tau_list = taus;
      if (exp->count("--trials")) cfg.trials = trials;
      if (exp->count("--p")) cfg.p = p;
      if (exp->count("--seed")) cfg.seed = seed;
      if (!out_path.empty()) cfg.out_path = out_path;
      if (timing) cfg.timing = true;

      harness::Progress progress;
      if (!quiet) progress = [](const std::string& cell) { std::cerr << "running " << cell << '\n'; };
      const auto records = harness::run_experiment(cfg, progress);
      if (cfg.out_path.empty() || cfg.out_path == "-") {
        harness::write_records(std::cout, records);
        harness::write_summary(std::cerr, harness::summarize(records));
      } else {
        harness::write_records(cfg.out_path, records);
        std::cout << "wrote " << records.size() << " records to " << cfg.out_path << '\n';
        harness::write_summary(std::cout, harness::summarize(records));
      }
    } else if (*unmix) {
      const auto result = harness::unmix_csv(in_csv, prefix, lag, rank, fill_missing);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
    } else if (*plots_cmd) {
      for (const auto& f : plots::emit_plots(records_path, out_dir)) std::cout << "wrote " << f << '\n';
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return 0;
}
