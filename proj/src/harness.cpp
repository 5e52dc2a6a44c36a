#include "dmdsep/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "dmdsep/baselines.hpp"
#include "dmdsep/csv.hpp"
#include "dmdsep/dmd.hpp"
#include "dmdsep/lagstats.hpp"
#include "dmdsep/rng.hpp"
#include "dmdsep/signals.hpp"

namespace dmdsep::harness {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void field_error(const std::string& field, const std::string& why) {
  throw ValidationError("config field '" + field + "': " + why);
}

struct SuiteShape {
  Index p;  // 0 means free
  Index k;
};

SuiteShape suite_shape(const std::string& suite) {
  if (suite == "eigenwalker") return {3, 2};
  if (suite == "changepoint") return {4, 4};
  return {0, 2};
}

bool is_missing_suite(const std::string& suite) { return suite == "missing-q" || suite == "missing-n"; }

Matrix eigenwalker_q() {
  Matrix q(3, 2);
  q << 1.0 / 3.0, 2.0 / std::sqrt(5.0),  //
      2.0 / 3.0, 1.0 / std::sqrt(5.0),   //
      2.0 / 3.0, 0.0;
  return q;
}

Matrix changepoint_q() {
  Matrix q(4, 4);
  q << 1, 0, 0, 2,  //
      2, 1, 0, 0,   //
      0, 2, 1, 0,   //
      0, 0, 2, 1;
  return q / std::sqrt(5.0);
}

std::string cell_name(const std::string& suite, const char* key, double value) {
  std::ostringstream os;
  os << suite << "/" << key << "=" << csv::format_double(value);
  return os.str();
}

Vector permuted(const std::vector<double>& values, const std::vector<Index>& order) {
  Vector out(static_cast<Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) out(static_cast<Index>(i)) = values[static_cast<std::size_t>(order[i])];
  return out;
}

Vector lag_diagonal(const Matrix& s, Index tau) { return lagstats::lag_cov(s, tau).L.diagonal(); }

// Errors shared by every method: aligned Q error, S error, summed eigenvalue
// error with eigenvalues following their eigenvectors.
struct Errors {
  double q = 0.0;
  double s = 0.0;
  double eig = 0.0;
};

Errors score(const CMatrix& q_hat, const Matrix& s_hat, const CVector& eigvals,
             const signals::SourceModel& truth, const Vector& eig_truth) {
  Errors e;
  const metrics::Alignment a = metrics::align_columns(q_hat, truth.Q);
  e.q = a.total_sq_error;
  e.s = metrics::s_error(s_hat, truth.S);
  e.eig = metrics::eig_error(eigvals, eig_truth, a.perm).sum();
  return e;
}

Errors score_dmd(const dmd::DmdResult& fit, const Matrix& data, const signals::SourceModel& truth,
                 const Vector& eig_truth) {
  const dmd::RecoveredSignals rec = dmd::recover_signals(data, dmd::left_vectors(fit.modes()));
  return score(fit.modes(), rec.s_hat, fit.eigenvalues(), truth, eig_truth);
}

// PCA and AMUSE estimate real mixing columns; PCA has no eigenvalues of its
// own, so the lag-tau diagonal of its recovered signals stands in.
Errors score_unmix(const baselines::UnmixResult& r, const Vector& eigvals, const signals::SourceModel& truth,
                   const Vector& eig_truth) {
  return score(r.q_hat.cast<Complex>(), r.s_hat, eigvals.cast<Complex>(), truth, eig_truth);
}

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const Progress& progress) : cfg_(cfg), progress_(progress) {}

  std::vector<ExperimentRecord> run() {
    const std::string& s = cfg_.suite;
    if (s == "cosine") cosine();
    else if (s == "arma") arma();
    else if (s == "missing-q") missing_q();
    else if (s == "missing-n") missing_n();
    else if (s == "amuse-compare") amuse_compare();
    else if (s == "changepoint") changepoint();
    else if (s == "eigenwalker") eigenwalker();
    return std::move(records_);
  }

 private:
  template <class Fn>
  void timed(ExperimentRecord rec, Fn&& fn) {
    const auto start = Clock::now();
    const Errors e = fn();
    const auto stop = Clock::now();
    rec.q_sq_error = e.q;
    rec.s_sq_error = e.s;
    rec.eig_sq_error = e.eig;
    rec.wall_ms = cfg_.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    records_.push_back(std::move(rec));
  }

  ExperimentRecord base(Index n, Index p, Index tau, double q, Index trial, std::string method) const {
    ExperimentRecord r;
    r.suite = cfg_.suite;
    r.n = n;
    r.p = p;
    r.k = cfg_.k;
    r.tau = tau;
    r.q = q;
    r.trial = trial;
    r.method = std::move(method);
    return r;
  }

  void note(const std::string& cell) {
    if (progress_) progress_(cell);
  }

  void cosine() {
    const std::vector<std::pair<std::string, double>> pairs = {{"dmd-omega2-0.5", 0.5}, {"dmd-omega2-2", 2.0}};
    const Index tau = cfg_.tau_list.front();
    for (Index n : cfg_.n_grid) {
      const std::string cell = cell_name("cosine", "n", static_cast<double>(n));
      note(cell);
      for (Index t = 0; t < cfg_.trials; ++t) {
        const std::uint64_t seed = derive_seed(cfg_.seed, cell, static_cast<std::uint64_t>(t));
        const Matrix q = signals::random_unit_columns(cfg_.p, 2, seed);
        for (const auto& [label, omega2] : pairs) {
          const std::vector<double> omegas = {0.25, omega2};
          const Matrix c = signals::gen_cosines({omegas, {}}, n);
          const signals::SourceModel m = signals::assemble(q, Vector::Ones(2), c);
          const Vector truth = permuted({std::cos(omegas[0] * tau), std::cos(omegas[1] * tau)}, m.order);
          timed(base(n, cfg_.p, tau, 1.0, t, label), [&] {
            return score_dmd(dmd::dmd_fit(m.X, tau, 2), m.X, m, truth);
          });
        }
      }
    }
  }

  void arma() {
    const std::vector<std::vector<double>> ar = {{0.3, 0.5}, {0.2, 0.7}};
    for (Index n : cfg_.n_grid) {
      const std::string cell = cell_name("arma", "n", static_cast<double>(n));
      note(cell);
      for (Index t = 0; t < cfg_.trials; ++t) {
        const std::uint64_t seed = derive_seed(cfg_.seed, cell, static_cast<std::uint64_t>(t));
        const Matrix q = signals::random_unit_columns(cfg_.p, 2, derive_seed(seed, "mixing", 0));
        Matrix c(n, 2);
        for (Index j = 0; j < 2; ++j) {
          c.col(j) = signals::gen_arma({ar[static_cast<std::size_t>(j)], {}, 1.0}, n,
                                       derive_seed(seed, "source", static_cast<std::uint64_t>(j)));
        }
        const signals::SourceModel m = signals::assemble_natural(q, c);
        for (Index tau : cfg_.tau_list) {
          std::vector<double> rho;
          for (const auto& coeffs : ar) rho.push_back(signals::ar_autocorrelation(coeffs, tau)(tau));
          const Vector truth = permuted(rho, m.order);
          timed(base(n, cfg_.p, tau, 1.0, t, "dmd"), [&] {
            return score_dmd(dmd::dmd_fit(m.X, tau, 2), m.X, m, truth);
          });
        }
      }
    }
  }

  // Two cosines (0.25, 2.0) with d = (2, 1) on random mixing columns.
  signals::SourceModel cosine_pair_model(Index n, std::uint64_t seed) const {
    const Matrix q = signals::random_unit_columns(cfg_.p, 2, derive_seed(seed, "mixing", 0));
    const Matrix c = signals::gen_cosines({{0.25, 2.0}, {}}, n);
    Vector d(2);
    d << 2.0, 1.0;
    return signals::assemble(q, d, c);
  }

  void missing_cell(const std::string& cell, Index n, double qobs) {
    note(cell);
    const Index tau = cfg_.tau_list.front();
    for (Index t = 0; t < cfg_.trials; ++t) {
      const std::uint64_t seed = derive_seed(cfg_.seed, cell, static_cast<std::uint64_t>(t));
      const signals::SourceModel m = cosine_pair_model(n, seed);
      const Vector truth = lag_diagonal(m.S, tau);
      const Matrix masked = signals::apply_mask(m.X, {qobs, derive_seed(seed, "mask", 0)});
      timed(base(n, cfg_.p, tau, qobs, t, "tsvd-dmd"), [&] {
        Matrix low_rank;
        const dmd::DmdResult fit = dmd::tsvd_dmd_fit(masked, qobs, tau, 2, {}, &low_rank);
        return score_dmd(fit, low_rank, m, truth);
      });
      timed(base(n, cfg_.p, tau, qobs, t, "dmd"), [&] {
        return score_dmd(dmd::dmd_fit(masked, tau, 2), masked, m, truth);
      });
    }
  }

  void missing_q() {
    const Index n = cfg_.n_grid.front();
    for (double qobs : cfg_.q_grid) missing_cell(cell_name("missing-q", "q", qobs), n, qobs);
  }

  void missing_n() {
    const double qobs = cfg_.q_grid.front();
    for (Index n : cfg_.n_grid) missing_cell(cell_name("missing-n", "n", static_cast<double>(n)), n, qobs);
  }

  void amuse_compare() {
    const Index tau = cfg_.tau_list.front();
    for (Index n : cfg_.n_grid) {
      const std::string cell = cell_name("amuse-compare", "n", static_cast<double>(n));
      note(cell);
      for (Index t = 0; t < cfg_.trials; ++t) {
        const std::uint64_t seed = derive_seed(cfg_.seed, cell, static_cast<std::uint64_t>(t));
        const signals::SourceModel m = cosine_pair_model(n, seed);
        const Vector truth = permuted({std::cos(0.25 * tau), std::cos(2.0 * tau)}, m.order);
        timed(base(n, cfg_.p, tau, 1.0, t, "dmd"), [&] {
          return score_dmd(dmd::dmd_fit(m.X, tau, 2), m.X, m, truth);
        });
        timed(base(n, cfg_.p, tau, 1.0, t, "amuse"), [&] {
          baselines::AmuseDetails details;
          const baselines::UnmixResult r = baselines::amuse(m.X, tau, 2, &details);
          return score_unmix(r, details.lag_eigenvalues, m, truth);
        });
      }
    }
  }

  void changepoint() {
    const Index tau = cfg_.tau_list.front();
    for (Index n : cfg_.n_grid) {
      const std::string cell = cell_name("changepoint", "n", static_cast<double>(n));
      note(cell);
      for (Index t = 0; t < cfg_.trials; ++t) {
        const std::uint64_t seed = derive_seed(cfg_.seed, cell, static_cast<std::uint64_t>(t));
        const signals::SourceModel m =
            signals::assemble_natural(changepoint_q(), signals::gen_changepoint_suite(n, seed));
        const Vector truth = lag_diagonal(m.S, tau);
        timed(base(n, 4, tau, 1.0, t, "dmf"), [&] {
          const dmd::DmfResult f = dmd::dmf(m.X, tau, 4);
          const dmd::RecoveredSignals rec = dmd::recover_signals(m.X, dmd::left_vectors(f.q_hat));
          return score(f.q_hat, rec.s_hat, f.eigvals, m, truth);
        });
        timed(base(n, 4, tau, 1.0, t, "pca"), [&] {
          const baselines::UnmixResult r = baselines::pca_unmix(m.X, 4);
          return score_unmix(r, lag_diagonal(r.s_hat, tau), m, truth);
        });
      }
    }
  }

  void eigenwalker() {
    const Index tau = cfg_.tau_list.front();
    const std::vector<double> omegas = {2.0, 0.25};
    for (Index n : cfg_.n_grid) {
      note(cell_name("eigenwalker", "n", static_cast<double>(n)));
      const signals::SourceModel m = signals::assemble_natural(eigenwalker_q(), signals::gen_cosines({omegas, {}}, n));
      const Vector truth = permuted({std::cos(omegas[0] * tau), std::cos(omegas[1] * tau)}, m.order);
      for (Index t = 0; t < cfg_.trials; ++t) {
        timed(base(n, 3, tau, 1.0, t, "dmd"), [&] {
          return score_dmd(dmd::dmd_fit(m.X, tau, 2), m.X, m, truth);
        });
        timed(base(n, 3, tau, 1.0, t, "pca"), [&] {
          const baselines::UnmixResult r = baselines::pca_unmix(m.X, 2);
          return score_unmix(r, lag_diagonal(r.s_hat, tau), m, truth);
        });
      }
    }
  }

  const ExperimentConfig& cfg_;
  const Progress& progress_;
  std::vector<ExperimentRecord> records_;
};

Index parse_index(const std::string& field, const std::string& text, const std::string& where) {
  double v = 0.0;
  if (!csv::parse_double(text, v) || v != std::floor(v)) {
    throw ValidationError(where + ": column '" + field + "' has non-integer value '" + text + "'");
  }
  return static_cast<Index>(v);
}

double parse_real(const std::string& field, const std::string& text, const std::string& where) {
  double v = 0.0;
  if (!csv::parse_double(text, v)) {
    throw ValidationError(where + ": column '" + field + "' has non-numeric value '" + text + "'");
  }
  return v;
}

}  // namespace

ExperimentConfig default_config(const std::string& suite) {
  ExperimentConfig c;
  c.suite = suite;
  c.k = 2;
  c.tau_list = {1};
  c.q_grid = {1.0};
  c.trials = 1;
  c.seed = 20240101;
  if (suite == "cosine") {
    c.n_grid = {500, 1000, 2000, 4000, 8000, 16000};
    c.p = 100;
  } else if (suite == "arma") {
    c.n_grid = {1000, 3162, 10000, 31623, 100000};
    c.p = 100;
    c.tau_list = {1, 2};
    c.trials = 50;
  } else if (suite == "missing-q") {
    c.n_grid = {10000};
    c.p = 500;
    c.q_grid = {0.05, 0.1, 0.2, 0.3, 0.5};
    c.trials = 10;
  } else if (suite == "missing-n") {
    c.n_grid = {2000, 4000, 10000, 20000};
    c.p = 500;
    c.q_grid = {0.1};
    c.trials = 10;
  } else if (suite == "amuse-compare") {
    c.n_grid = {1000, 2000, 4000, 8000, 16000};
    c.p = 500;
    c.trials = 5;
  } else if (suite == "changepoint") {
    c.n_grid = {1000};
    c.p = 4;
    c.k = 4;
  } else if (suite == "eigenwalker") {
    c.n_grid = {1000};
    c.p = 3;
  } else {
    field_error("suite", "unknown suite '" + suite + "'");
  }
  return c;
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&] { return source + ":" + std::to_string(line_no) + ": "; };
  auto as_double = [&](const std::string& key, const std::string& text) {
    double v = 0.0;
    if (!csv::parse_double(text, v)) throw ValidationError(where() + "field '" + key + "' expects a number, got '" + text + "'");
    return v;
  };
  auto as_index = [&](const std::string& key, const std::string& text) {
    const double v = as_double(key, text);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
      throw ValidationError(where() + "field '" + key + "' expects an integer, got '" + text + "'");
    }
    return static_cast<Index>(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::vector<std::string> blank = csv::split_line(line);
    if (blank.size() == 1 && blank[0].empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where() + "expected 'key = value'");
    std::string key = csv::split_line(line.substr(0, eq))[0];
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = line.substr(eq + 1);
    std::vector<std::string> items = csv::split_line(value);
    if (items.size() == 1 && items[0].empty()) items.clear();
    const std::string scalar = items.size() == 1 ? items[0] : std::string();
    if (key == "suite") {
      cfg.suite = scalar;
    } else if (key == "n_grid") {
      cfg.n_grid.clear();
      for (const auto& it : items) cfg.n_grid.push_back(as_index(key, it));
    } else if (key == "tau_list" || key == "tau") {
      cfg.tau_list.clear();
      for (const auto& it : items) cfg.tau_list.push_back(as_index(key, it));
    } else if (key == "q_grid") {
      cfg.q_grid.clear();
      for (const auto& it : items) cfg.q_grid.push_back(as_double(key, it));
    } else if (key == "p") {
      cfg.p = as_index(key, scalar);
    } else if (key == "k") {
      cfg.k = as_index(key, scalar);
    } else if (key == "trials") {
      cfg.trials = as_index(key, scalar);
    } else if (key == "seed") {
      std::uint64_t v = 0;
      const auto res = std::from_chars(scalar.data(), scalar.data() + scalar.size(), v);
      if (scalar.empty() || res.ec != std::errc() || res.ptr != scalar.data() + scalar.size()) {
        throw ValidationError(where() + "field 'seed' expects a nonnegative integer, got '" + scalar + "'");
      }
      cfg.seed = v;
    } else if (key == "out_path" || key == "out") {
      cfg.out_path = scalar;
    } else if (key == "timing") {
      if (scalar != "true" && scalar != "false") throw ValidationError(where() + "field 'timing' expects true or false");
      cfg.timing = scalar == "true";
    } else {
      throw ValidationError(where() + "unknown field '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  return parse_config(in, std::move(base), path);
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end()) {
    field_error("suite", "unknown suite '" + cfg.suite + "'");
  }
  if (cfg.trials < 1) field_error("trials", "must be at least 1");
  if (cfg.n_grid.empty()) field_error("n_grid", "must not be empty");
  if (cfg.tau_list.empty()) field_error("tau_list", "must not be empty");
  const SuiteShape shape = suite_shape(cfg.suite);
  if (cfg.k != shape.k) {
    field_error("k", "suite '" + cfg.suite + "' has k = " + std::to_string(shape.k));
  }
  if (shape.p != 0 && cfg.p != shape.p) {
    field_error("p", "suite '" + cfg.suite + "' has p = " + std::to_string(shape.p));
  }
  if (cfg.p < cfg.k) field_error("p", "must be at least k");
  const Index min_n = *std::min_element(cfg.n_grid.begin(), cfg.n_grid.end());
  if (min_n < 4 * cfg.k) field_error("n_grid", "every n must be at least " + std::to_string(4 * cfg.k));
  if (cfg.suite == "changepoint") {
    for (Index n : cfg.n_grid) {
      if (n % 2 != 0) field_error("n_grid", "changepoint lengths must be even");
    }
  }
  for (Index tau : cfg.tau_list) {
    if (tau < 1) field_error("tau_list", "lags must be at least 1");
    if (tau > min_n - cfg.k - 2) field_error("tau_list", "lag too large for the smallest n");
  }
  if (cfg.q_grid.empty()) field_error("q_grid", "must not be empty");
  for (double q : cfg.q_grid) {
    if (!(q > 0.0 && q <= 1.0)) field_error("q_grid", "observation probabilities must lie in (0, 1]");
  }
  if (cfg.suite == "missing-q" && cfg.n_grid.size() != 1) field_error("n_grid", "missing-q uses a single n");
  if (cfg.suite == "missing-n" && cfg.q_grid.size() != 1) field_error("q_grid", "missing-n uses a single q");
  if (!is_missing_suite(cfg.suite) && (cfg.q_grid.size() != 1 || cfg.q_grid.front() != 1.0)) {
    field_error("q_grid", "only the missing-data suites accept observation probabilities");
  }
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, const Progress& progress) {
  validate(cfg);
  return Runner(cfg, progress).run();
}

void write_records(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  for (std::size_t i = 0; i < kRecordColumns.size(); ++i) out << (i ? "," : "") << kRecordColumns[i];
  out << '\n';
  for (const ExperimentRecord& r : records) {
    out << r.suite << ',' << r.n << ',' << r.p << ',' << r.k << ',' << r.tau << ',' << csv::format_double(r.q)
        << ',' << r.trial << ',' << r.method << ',' << csv::format_double(r.q_sq_error) << ','
        << csv::format_double(r.s_sq_error) << ',' << csv::format_double(r.eig_sq_error) << ','
        << csv::format_double(r.wall_ms) << '\n';
  }
}

void write_records(const std::string& path, const std::vector<ExperimentRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  write_records(out, records);
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

std::vector<ExperimentRecord> read_records(const std::string& path) {
  const csv::TextTable table = csv::read_text(path);
  std::vector<std::size_t> col;
  for (const std::string& name : kRecordColumns) {
    try {
      col.push_back(table.column(name));
    } catch (const ValidationError&) {
      throw ValidationError(path + ": records file is missing column '" + name + "'");
    }
  }
  std::vector<ExperimentRecord> out;
  for (const auto& row : table.rows) {
    auto f = [&](std::size_t i) -> const std::string& { return row[col[i]]; };
    ExperimentRecord r;
    r.suite = f(0);
    r.n = parse_index("n", f(1), path);
    r.p = parse_index("p", f(2), path);
    r.k = parse_index("k", f(3), path);
    r.tau = parse_index("tau", f(4), path);
    r.q = parse_real("q", f(5), path);
    r.trial = parse_index("trial", f(6), path);
    r.method = f(7);
    r.q_sq_error = parse_real("q_sq_error", f(8), path);
    r.s_sq_error = parse_real("s_sq_error", f(9), path);
    r.eig_sq_error = parse_real("eig_sq_error", f(10), path);
    r.wall_ms = parse_real("wall_ms", f(11), path);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RateSummary> summarize(const std::vector<ExperimentRecord>& records) {
  // (method, tau) -> axis value -> (sum q, sum s, sum eig, count)
  using Sums = std::tuple<double, double, double, int>;
  std::map<std::pair<std::string, Index>, std::map<double, Sums>> groups;
  std::vector<std::pair<std::string, Index>> first_seen;
  std::string axis = "n";
  for (const ExperimentRecord& r : records) {
    if (r.suite == "missing-q") axis = "q";
    const double x = r.suite == "missing-q" ? r.q : static_cast<double>(r.n);
    const auto key = std::make_pair(r.method, r.tau);
    if (!groups.count(key)) first_seen.push_back(key);
    Sums& s = groups[key][x];
    std::get<0>(s) += r.q_sq_error;
    std::get<1>(s) += r.s_sq_error;
    std::get<2>(s) += r.eig_sq_error;
    std::get<3>(s) += 1;
  }
  std::vector<RateSummary> out;
  const char* names[] = {"q_sq_error", "s_sq_error", "eig_sq_error"};
  for (const auto& key : first_seen) {
    for (int e = 0; e < 3; ++e) {
      RateSummary s;
      s.method = key.first;
      s.tau = key.second;
      s.axis = axis;
      s.error = names[e];
      bool positive = true;
      for (const auto& [x, sums] : groups[key]) {
        const double total = e == 0 ? std::get<0>(sums) : e == 1 ? std::get<1>(sums) : std::get<2>(sums);
        const double mean = total / std::get<3>(sums);
        s.xs.push_back(x);
        s.means.push_back(mean);
        if (!(mean > 0.0) || !std::isfinite(mean)) positive = false;
      }
      if (s.xs.size() >= 4 && positive) {
        s.fit = metrics::rate_fit(s.xs, s.means);
        s.fitted = true;
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<RateSummary>& summary) {
  out << "# rate summary (log-log least squares of mean error)\n";
  for (const RateSummary& s : summary) {
    out << "# method=" << s.method << " tau=" << s.tau << " error=" << s.error << " vs " << s.axis << ": ";
    if (s.fitted) {
      out << "slope=" << csv::format_double(s.fit.slope) << " r2=" << csv::format_double(s.fit.r2);
    } else {
      out << "not fitted (" << s.xs.size() << " grid points)";
    }
    out << '\n';
  }
}

UnmixOutputs unmix_csv(const std::string& in_path, const std::string& out_prefix, Index tau, Index k,
                       bool fill_missing) {
  const csv::NumericTable table = csv::read_numeric(in_path, fill_missing);
  const Matrix x = table.values.transpose();  // channels x samples
  const Index p = x.rows();
  const Index n = x.cols();
  if (k < 1 || k > p) {
    throw ValidationError("rank k = " + std::to_string(k) + " must lie in [1, " + std::to_string(p) +
                          "] for " + std::to_string(p) + " channels");
  }
  if (tau < 1 || tau > n - k - 2) {
    throw ValidationError("lag tau = " + std::to_string(tau) + " is invalid for " + std::to_string(n) +
                          " samples");
  }

  UnmixOutputs out;
  Matrix data = x;
  if (table.missing > 0) {
    const double observed = 1.0 - static_cast<double>(table.missing) / static_cast<double>(x.size());
    if (!(observed > 0.0)) throw ValidationError("input has no observed cells");
    data = linalg::truncated_svd(x, k).reconstruct(k);
    std::ostringstream msg;
    msg << table.missing << " empty cells zero-filled (observed fraction " << observed
        << "); rank-" << k << " truncation applied before factorization";
    out.warnings.push_back(msg.str());
  }

  const dmd::DmfResult f = dmd::dmf(data, tau, k);
  out.warnings.insert(out.warnings.end(), f.warnings.begin(), f.warnings.end());
  const double imag = f.c_hat.imag().norm() + f.q_hat.imag().norm();
  if (imag > 1e-8 * (f.c_hat.norm() + f.q_hat.norm())) {
    out.warnings.push_back("complex modes present; real parts written");
  }
  out.sources = f.c_hat.real();
  out.mixing = f.q_hat.real();
  out.eigvals = f.eigvals;

  Matrix eig(k, 2);
  eig.col(0) = f.eigvals.real();
  eig.col(1) = f.eigvals.imag();
  out.files = {out_prefix + "_sources.csv", out_prefix + "_mixing.csv", out_prefix + "_eigvals.csv"};
  csv::write_matrix(out.files[0], out.sources);
  csv::write_matrix(out.files[1], out.mixing);
  csv::write_matrix(out.files[2], eig);
  return out;
}

}  // namespace dmdsep::harness
