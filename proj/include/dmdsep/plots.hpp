#pragma once

// Log-log SVG charts of experiment records, plus a gnuplot script over the
// same data.

#include <string>
#include <vector>

#include "dmdsep/harness.hpp"

namespace dmdsep::plots {

struct Series {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  double guide_slope = -1.0;
};

/// Reference slope drawn for each suite: -1.5 against q for missing-q,
/// -0.5 for missing-n and -1 otherwise.
double guide_slope(const std::string& suite);

/// Standalone SVG document with log-scaled axes. Nonpositive points are
/// skipped.
std::string render_svg(const Chart& chart);

/// Writes <suite>_<error>.svg and .dat per suite and error kind, and a
/// plots.gp script. Returns the written paths.
std::vector<std::string> emit_plots(const std::string& records_path, const std::string& out_dir);

}  // namespace dmdsep::plots
