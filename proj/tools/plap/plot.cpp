#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "plaplab/errors.hpp"
#include "plaplab/run_record.hpp"

namespace plap {
namespace {

using plaplab::DomainError;
using plaplab::format_double;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;
  double pixel_lo = 0.0;
  double pixel_hi = 1.0;

  double to_pixel(double v) const {
    const double u = log ? std::log10(v) : v;
    return pixel_lo + (u - lo) / (hi - lo) * (pixel_hi - pixel_lo);
  }
};

std::string px(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string tick_label(double v) {
  std::ostringstream out;
  out << std::setprecision(4) << v;
  return out.str();
}

void fit_range(Axis& axis, double lo, double hi) {
  if (axis.log) {
    lo = std::log10(lo);
    hi = std::log10(hi);
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = axis.log ? 0.5 : std::max(0.5 * std::abs(hi), 0.5);
    lo -= pad;
    hi += pad;
  } else if (!axis.log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  if (axis.log) {
    lo = std::floor(lo);
    hi = std::ceil(hi);
  }
  axis.lo = lo;
  axis.hi = hi;
}

std::vector<double> ticks(const Axis& axis) {
  std::vector<double> out;
  if (axis.log) {
    const int first = static_cast<int>(axis.lo);
    const int last = static_cast<int>(axis.hi);
    const int stride = std::max(1, (last - first) / 8);
    for (int e = first; e <= last; e += stride) out.push_back(std::pow(10.0, e));
    return out;
  }
  const double raw = (axis.hi - axis.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

void check(const std::vector<Series>& series, const PlotStyle& style) {
  if (series.empty()) throw DomainError("emit_plot: empty series set");
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw DomainError("emit_plot: series '" + s.name + "' is empty or has mismatched x/y lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        throw DomainError("emit_plot: series '" + s.name + "' has a non-finite value");
      }
      if ((style.log_x && s.x[i] <= 0.0) || (style.log_y && s.y[i] <= 0.0)) {
        throw DomainError("emit_plot: series '" + s.name + "' has a nonpositive value on a log axis");
      }
    }
  }
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const PlotStyle& style) {
  check(series, style);
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  const double left = 80.0, right = 150.0, top = 40.0, bottom = 60.0;
  Axis ax{style.log_x, 0, 1, left, style.width - right};
  Axis ay{style.log_y, 0, 1, style.height - bottom, top};
  fit_range(ax, xlo, xhi);
  fit_range(ay, ylo, yhi);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg << "<text x=\"" << px(0.5 * (ax.pixel_lo + ax.pixel_hi)) << "\" y=\"22\" text-anchor=\"middle\""
        << " font-size=\"14\">" << escape(style.title) << "</text>\n";
  }
  svg << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\"" << px(ax.pixel_hi - left)
      << "\" height=\"" << px(ay.pixel_lo - top) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double v : ticks(ax)) {
    const double x = ax.to_pixel(v);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(ay.pixel_lo) << "\" x2=\"" << px(x) << "\" y2=\""
        << px(ay.pixel_lo + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(ay.pixel_lo + 18)
        << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
  }
  for (double v : ticks(ay)) {
    const double y = ay.to_pixel(v);
    svg << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(left) << "\" y2=\""
        << px(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(left - 8) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
  }
  svg << "<text x=\"" << px(0.5 * (ax.pixel_lo + ax.pixel_hi)) << "\" y=\"" << px(style.height - 15)
      << "\" text-anchor=\"middle\">" << escape(style.x_label) << "</text>\n";
  const double mid_y = 0.5 * (ay.pixel_lo + ay.pixel_hi);
  svg << "<text x=\"18\" y=\"" << px(mid_y) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << px(mid_y) << ")\">" << escape(style.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << ' ';
      svg << px(ax.to_pixel(s.x[i])) << ',' << px(ay.to_pixel(s.y[i]));
    }
    svg << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(k) + 8.0;
    const double lx = ax.pixel_hi + 12.0;
    svg << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 20) << "\" y2=\""
        << px(ly) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << "/>\n<text x=\"" << px(lx + 26) << "\" y=\"" << px(ly + 4) << "\">" << escape(s.name)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_csv(const std::vector<Series>& series) {
  std::ostringstream csv;
  csv << "series,x,y\n";
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      csv << s.name << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
    }
  }
  return csv.str();
}

void emit_plot(const std::vector<Series>& series, const PlotStyle& style,
               const std::filesystem::path& svg_path) {
  const std::string svg = render_svg(series, style);
  if (svg_path.has_parent_path()) std::filesystem::create_directories(svg_path.parent_path());
  std::filesystem::path csv_path = svg_path;
  csv_path.replace_extension(".csv");
  std::ofstream(csv_path, std::ios::binary) << render_csv(series);
  std::ofstream out(svg_path, std::ios::binary);
  out << svg;
  if (!out) throw std::runtime_error("cannot write '" + svg_path.string() + "'");
}

}  // namespace plap
