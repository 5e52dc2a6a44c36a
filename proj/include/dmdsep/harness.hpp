#pragma once

// Monte-Carlo experiment suites, their CSV records and rate summaries, and
// the CSV unmixing pipeline.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dmdsep/linalg.hpp"
#include "dmdsep/metrics.hpp"

namespace dmdsep::harness {

inline const std::vector<std::string> kSuites = {
    "cosine", "arma", "missing-q", "missing-n", "amuse-compare", "changepoint", "eigenwalker"};

struct ExperimentConfig {
  std::string suite;
  std::vector<Index> n_grid;
  Index p = 0;
  Index k = 0;
  std::vector<Index> tau_list;
  std::vector<double> q_grid;
  Index trials = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  /// Record wall-clock milliseconds per fit; off by default so that records
  /// are byte-identical across runs.
  bool timing = false;
};

/// Desk-scale defaults for a suite; throws ValidationError for unknown names.
ExperimentConfig default_config(const std::string& suite);

/// Applies `key = value` lines (keys are the ExperimentConfig field names;
/// lists are comma separated; '#' starts a comment) on top of `base`.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base, const std::string& source);

/// Throws ValidationError naming the offending field.
void validate(const ExperimentConfig& cfg);

struct ExperimentRecord {
  std::string suite;
  Index n = 0;
  Index p = 0;
  Index k = 0;
  Index tau = 0;
  double q = 1.0;
  Index trial = 0;
  std::string method;
  double q_sq_error = 0.0;
  double s_sq_error = 0.0;
  double eig_sq_error = 0.0;  // summed over modes
  double wall_ms = 0.0;
};

using Progress = std::function<void(const std::string&)>;

/// Cells run in grid order and trials in index order. Trial t of a cell
/// named c uses derive_seed(cfg.seed, c, t).
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const Progress& progress = {});

inline const std::vector<std::string> kRecordColumns = {
    "suite", "n", "p", "k", "tau", "q", "trial", "method",
    "q_sq_error", "s_sq_error", "eig_sq_error", "wall_ms"};

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_records(const std::string& path, const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> read_records(const std::string& path);

/// Mean errors per (method, tau, axis value) and their log-log fits.
struct RateSummary {
  std::string method;
  Index tau = 0;
  std::string axis;   // "n" or "q"
  std::string error;  // "q_sq_error", "s_sq_error" or "eig_sq_error"
  std::vector<double> xs;
  std::vector<double> means;
  bool fitted = false;
  metrics::RateFit fit;
};

/// The axis is q for the missing-q suite and n otherwise. Fits need at least
/// four grid points with positive mean errors.
std::vector<RateSummary> summarize(const std::vector<ExperimentRecord>& records);

void write_summary(std::ostream& out, const std::vector<RateSummary>& summary);

struct UnmixOutputs {
  Matrix sources;  // n x k, real part of C_hat
  Matrix mixing;   // p x k, real part of Q_hat
  CVector eigvals;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Reads a time-major CSV, runs the factorization (after zero fill and rank-k
/// truncation when fill_missing is set and cells are empty) and writes
/// <prefix>_sources.csv, <prefix>_mixing.csv and <prefix>_eigvals.csv.
UnmixOutputs unmix_csv(const std::string& in_path, const std::string& out_prefix, Index tau, Index k,
                       bool fill_missing);

}  // namespace dmdsep::harness
