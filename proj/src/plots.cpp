#include "dmdsep/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "dmdsep/csv.hpp"

namespace dmdsep::plots {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

}  // namespace

double guide_slope(const std::string& suite) {
  if (suite == "missing-q") return -1.5;
  if (suite == "missing-n") return -0.5;
  return -1.0;
}

std::string render_svg(const Chart& chart) {
  Range rx;
  Range ry;
  double anchor_x = std::numeric_limits<double>::infinity();
  double anchor_y = -std::numeric_limits<double>::infinity();
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      rx.add(std::log10(s.xs[i]));
      ry.add(std::log10(s.ys[i]));
    }
  }
  if (!std::isfinite(rx.lo)) throw ValidationError("render_svg: no positive data points");
  // Guide passes through the largest error at the smallest abscissa.
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      const double lx = std::log10(s.xs[i]);
      const double ly = std::log10(s.ys[i]);
      if (lx < anchor_x || (lx == anchor_x && ly > anchor_y)) {
        anchor_x = lx;
        anchor_y = ly;
      }
    }
  }
  anchor_y += 0.3;
  const double guide_end = anchor_y + chart.guide_slope * (rx.hi - rx.lo);
  ry.add(anchor_y);
  ry.add(guide_end);
  rx.pad();
  ry.pad();

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double lx) { return kLeft + (lx - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto sy = [&](double ly) { return kTop + (ry.hi - ly) / (ry.hi - ry.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << escape(chart.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int d = static_cast<int>(std::ceil(rx.lo)); d <= static_cast<int>(std::floor(rx.hi)); ++d) {
    const double x = sx(d);
    os << "<line class=\"tick\" x1=\"" << num(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(x) << "\" y2=\""
       << kTop + ph + 5 << "\" stroke=\"black\"/><text x=\"" << num(x) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(ry.lo)); d <= static_cast<int>(std::floor(ry.hi)); ++d) {
    const double y = sy(d);
    os << "<line class=\"tick\" x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft << "\" y2=\""
       << num(y) << "\" stroke=\"black\"/><text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
     << escape(chart.x_label) << " (log scale)</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(chart.y_label) << " (log scale)</text>\n";

  std::size_t color = 0;
  double legend_y = kTop + 10;
  for (const Series& s : chart.series) {
    const char* c = kColors[color++ % std::size(kColors)];
    os << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n<polyline fill=\"none\" stroke=\"" << c
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      os << (first ? "" : " ") << num(sx(std::log10(s.xs[i]))) << ',' << num(sy(std::log10(s.ys[i])));
      first = false;
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0)) continue;
      os << "<circle cx=\"" << num(sx(std::log10(s.xs[i]))) << "\" cy=\"" << num(sy(std::log10(s.ys[i])))
         << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    os << "</g>\n";
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << kWidth - kRight + 30
       << "\" y2=\"" << legend_y << "\" stroke=\"" << c << "\" stroke-width=\"2\"/><text x=\""
       << kWidth - kRight + 35 << "\" y=\"" << legend_y + 4 << "\">" << escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  os << "<line class=\"guide\" data-slope=\"" << num(chart.guide_slope) << "\" x1=\"" << num(sx(rx.lo))
     << "\" y1=\"" << num(sy(anchor_y)) << "\" x2=\"" << num(sx(rx.hi)) << "\" y2=\"" << num(sy(guide_end))
     << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << kWidth - kRight + 30
     << "\" y2=\"" << legend_y << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/><text x=\"" << kWidth - kRight + 35
     << "\" y=\"" << legend_y + 4 << "\">slope " << num(chart.guide_slope) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::vector<std::string> emit_plots(const std::string& records_path, const std::string& out_dir) {
  const std::vector<harness::ExperimentRecord> records = harness::read_records(records_path);
  if (records.empty()) throw ValidationError(records_path + ": no records to plot");
  std::filesystem::create_directories(out_dir);

  std::map<std::string, std::vector<harness::ExperimentRecord>> by_suite;
  std::vector<std::string> suites;
  for (const auto& r : records) {
    if (!by_suite.count(r.suite)) suites.push_back(r.suite);
    by_suite[r.suite].push_back(r);
  }

  std::vector<std::string> written;
  std::ostringstream gp;
  gp << "# gnuplot script; run from this directory with: gnuplot plots.gp\n"
     << "set terminal svg size 640,440\nset logscale xy\nset key outside right\n";
  for (const std::string& suite : suites) {
    const std::vector<harness::RateSummary> summary = harness::summarize(by_suite[suite]);
    for (const char* error : {"q_sq_error", "s_sq_error", "eig_sq_error"}) {
      Chart chart;
      chart.title = suite + ": " + error;
      chart.x_label = suite == "missing-q" ? "q" : "n";
      chart.y_label = std::string("mean ") + error;
      chart.guide_slope = guide_slope(suite);
      std::ostringstream dat;
      std::ostringstream plot_cmd;
      int block = 0;
      for (const auto& s : summary) {
        if (s.error != error) continue;
        Series series{s.method + " tau=" + std::to_string(s.tau), s.xs, s.means};
        dat << "# " << series.label << '\n';
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
          dat << csv::format_double(s.xs[i]) << ' ' << csv::format_double(s.means[i]) << '\n';
        }
        dat << "\n\n";
        plot_cmd << (block ? ", " : "") << "'" << suite << '_' << error << ".dat' index " << block
                 << " with linespoints title '" << series.label << "'";
        ++block;
        chart.series.push_back(std::move(series));
      }
      const std::string stem = out_dir + "/" + suite + "_" + error;
      bool any_positive = false;
      for (const auto& s : chart.series)
        for (double y : s.ys) any_positive = any_positive || y > 0.0;
      if (!any_positive) continue;
      std::ofstream svg(stem + ".svg");
      svg << render_svg(chart);
      std::ofstream datf(stem + ".dat");
      datf << dat.str();
      if (!svg || !datf) throw ValidationError("failed writing plots under '" + out_dir + "'");
      written.push_back(stem + ".svg");
      written.push_back(stem + ".dat");
      gp << "set output '" << suite << '_' << error << "_gnuplot.svg'\nset title '" << chart.title
         << "'\nplot " << plot_cmd.str() << "\n";
    }
  }
  std::ofstream gpf(out_dir + "/plots.gp");
  gpf << gp.str();
  if (!gpf) throw ValidationError("failed writing '" + out_dir + "/plots.gp'");
  written.push_back(out_dir + "/plots.gp");
  return written;
}

}  // namespace dmdsep::plots
