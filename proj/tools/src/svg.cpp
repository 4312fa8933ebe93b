#include "causalbounds/cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "causalbounds/error.hpp"

namespace causalbounds::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_svg_bounds(std::span<const LabeledResult> results, Interval axis,
                              const SvgLayout& L) {
  if (results.empty()) throw DomainError("nothing to draw");
  if (axis.degenerate()) throw DomainError("axis must have positive width");
  const double x0 = L.plot_left();
  const double x1 = L.plot_right();
  auto sx = [&](double v) {
    const double c = std::clamp(v, axis.lo(), axis.hi());
    return x0 + (c - axis.lo()) / axis.width() * (x1 - x0);
  };
  const double rows_bottom = L.top + L.row_height * static_cast<double>(results.size());
  const double axis_y = rows_bottom + 6.0;
  const double height = axis_y + L.axis_gap;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(L.width) << "\" height=\""
     << coord(height) << "\" viewBox=\"0 0 " << coord(L.width) << ' ' << coord(height) << "\">\n"
     << "  <style>text{font-family:sans-serif;font-size:12px}</style>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"" << coord(L.width) << "\" height=\"" << coord(height)
     << "\" fill=\"white\"/>\n";

  // Axis with ticks at the ends, the midpoint and the quarter points.
  os << "  <g class=\"axis\" data-lo=\"" << fmt(axis.lo()) << "\" data-hi=\"" << fmt(axis.hi()) << "\">\n"
     << "    <line x1=\"" << coord(x0) << "\" y1=\"" << coord(axis_y) << "\" x2=\"" << coord(x1)
     << "\" y2=\"" << coord(axis_y) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = axis.lo() + axis.width() * k / 4.0;
    const double x = sx(v);
    os << "    <line x1=\"" << coord(x) << "\" y1=\"" << coord(axis_y) << "\" x2=\"" << coord(x)
       << "\" y2=\"" << coord(axis_y + 5) << "\" stroke=\"black\"/>\n"
       << "    <text x=\"" << coord(x) << "\" y=\"" << coord(axis_y + 18)
       << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  os << "  </g>\n";

  if (axis.contains(0.0)) {
    const double xn = sx(0.0);
    os << "  <line class=\"null-line\" x1=\"" << coord(xn) << "\" y1=\"" << coord(L.top - 8) << "\" x2=\""
       << coord(xn) << "\" y2=\"" << coord(axis_y) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& lr = results[i];
    const auto& r = lr.result;
    const double cy = L.top + L.row_height * (static_cast<double>(i) + 0.5);
    const double y = cy - L.bar_height / 2;
    const std::string kind = to_string(r.kind);
    os << "  <g class=\"result\" data-label=\"" << escape(lr.label) << "\" data-kind=\"" << kind << "\">\n"
       << "    <text x=\"" << coord(x0 - 8) << "\" y=\"" << coord(cy + 4) << "\" text-anchor=\"end\">"
       << escape(lr.label) << "</text>\n";
    const double a = sx(r.interval.lo());
    const double b = sx(r.interval.hi());
    if (r.interval.degenerate()) {
      os << "    <line class=\"point\" data-lo=\"" << fmt(r.interval.lo()) << "\" data-hi=\""
         << fmt(r.interval.hi()) << "\" x1=\"" << coord(a) << "\" y1=\"" << coord(y - 3) << "\" x2=\""
         << coord(a) << "\" y2=\"" << coord(y + L.bar_height + 3)
         << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
    } else {
      const char* fill = r.kind == IdentificationKind::vacuous_parameter_space ? "#c9c9c9" : "#4a78b5";
      os << "    <rect class=\"bound\" data-lo=\"" << fmt(r.interval.lo()) << "\" data-hi=\""
         << fmt(r.interval.hi()) << "\" x=\"" << coord(a) << "\" y=\"" << coord(y) << "\" width=\""
         << coord(b - a) << "\" height=\"" << coord(L.bar_height) << "\" fill=\"" << fill << "\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg_bounds(std::span<const LabeledResult> results, Interval axis,
                     const std::filesystem::path& path) {
  write_text_file(path, render_svg_bounds(results, axis));
}

}  // namespace causalbounds::cli
