#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "shiftspec/report.hpp"

namespace shiftspec {

struct Panel {
  std::string title;
  SpectralRegion region;
  bool lower_bound = false;
};

inline std::vector<Panel> report_panels(const AnalysisReport& r) {
  const auto& c = r.classification;
  std::vector<Panel> out{{"spectrum", c.spectrum}, {"approximate point spectrum", c.approximate_point}};
  if (c.svep_failure.kind != RegionKind::Empty) out.push_back({"SVEP fails (S)", c.svep_failure});
  if (c.svep_failure_adjoint.kind != RegionKind::Empty) out.push_back({"SVEP fails (S*)", c.svep_failure_adjoint});
  for (const auto& l : r.local) out.push_back({"local spectrum of " + l.vector, l.report.region.region, l.report.region.lower_bound});
  return out;
}

namespace detail {

inline std::string px(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

inline std::string xml_escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    switch (ch) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += ch;
    }
  }
  return o;
}

inline std::string circle_el(double cx, double cy, double r, const std::string& style) {
  return "  <circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) + "\" " + style + "/>\n";
}

// Annulus as two sub-paths filled with the even-odd rule.
inline std::string ring_el(double cx, double cy, double a, double b, const std::string& style) {
  auto arc = [&](double r) {
    return "M " + px(cx - r) + " " + px(cy) + " a " + px(r) + " " + px(r) + " 0 1 0 " + px(2 * r) + " 0 a " +
           px(r) + " " + px(r) + " 0 1 0 " + px(-2 * r) + " 0 ";
  };
  return "  <path d=\"" + arc(b) + arc(a) + "\" fill-rule=\"evenodd\" " + style + "/>\n";
}

}  // namespace detail

// Concentric-region panels side by side; one common scale so radii compare across panels.
inline std::string render_svg(const std::vector<Panel>& panels) {
  const double size = 260.0, pad = 30.0, plot_r = 100.0;
  double rmax = 1.0;
  for (const auto& p : panels) {
    if (std::isfinite(p.region.rho_out)) rmax = std::max(rmax, p.region.rho_out);
    if (std::isfinite(p.region.rho_in)) rmax = std::max(rmax, p.region.rho_in);
  }
  const double scale = plot_r / rmax;
  const double width = size * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  const double height = size + 2 * pad;
  const std::string fill = "fill=\"#4a7bd1\" fill-opacity=\"0.35\" stroke=\"none\"";
  auto edge = [](bool closed) {
    return std::string("fill=\"none\" stroke=\"#1f3f7a\" stroke-width=\"1.5\"") + (closed ? "" : " stroke-dasharray=\"5,3\"");
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::px(width) << "\" height=\"" << detail::px(height)
     << "\" viewBox=\"0 0 " << detail::px(width) << " " << detail::px(height) << "\" font-family=\"sans-serif\">\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& p = panels[i];
    const auto& g = p.region;
    double cx = size * static_cast<double>(i) + size / 2, cy = pad + size / 2;
    os << "  <g class=\"panel\" data-kind=\"" << to_string(g.kind) << "\">\n";
    os << "  <text x=\"" << detail::px(cx) << "\" y=\"" << detail::px(pad - 8) << "\" text-anchor=\"middle\" font-size=\"13\">"
       << detail::xml_escape(p.title) << "</text>\n";
    os << detail::circle_el(cx, cy, scale, "fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"2,2\"");
    double a = g.rho_in * scale, b = std::isfinite(g.rho_out) ? g.rho_out * scale : plot_r;
    switch (g.kind) {
      case RegionKind::Empty: break;
      case RegionKind::Circle: os << detail::circle_el(cx, cy, b, edge(true)); break;
      case RegionKind::Disc:
        os << detail::circle_el(cx, cy, b, fill) << detail::circle_el(cx, cy, b, edge(g.closed_out));
        break;
      case RegionKind::Annulus:
        os << detail::ring_el(cx, cy, a, b, fill) << detail::circle_el(cx, cy, b, edge(g.closed_out))
           << detail::circle_el(cx, cy, a, edge(g.closed_in));
        break;
      case RegionKind::UnionOfTwoCircles:
        os << detail::circle_el(cx, cy, a, edge(true)) << detail::circle_el(cx, cy, b, edge(true));
        break;
      case RegionKind::DiscAndCircle:
        os << detail::circle_el(cx, cy, a, fill) << detail::circle_el(cx, cy, a, edge(true))
           << detail::circle_el(cx, cy, b, edge(true));
        break;
    }
    if (g.kind != RegionKind::Empty) {
      os << "  <text class=\"radius\" x=\"" << detail::px(cx + b + 3) << "\" y=\"" << detail::px(cy - 3)
         << "\" font-size=\"11\">" << detail::fmt(g.rho_out) << "</text>\n";
      if (g.kind != RegionKind::Circle && g.kind != RegionKind::Disc && g.rho_in > 0)
        os << "  <text class=\"radius\" x=\"" << detail::px(cx + a + 3) << "\" y=\"" << detail::px(cy + 12)
           << "\" font-size=\"11\">" << detail::fmt(g.rho_in) << "</text>\n";
    }
    std::string label = (p.lower_bound ? "contains " : "") + g.describe();
    os << "  <text x=\"" << detail::px(cx) << "\" y=\"" << detail::px(pad + size + 4)
       << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::xml_escape(label) << "</text>\n";
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Long format: one row per (trace, n).
inline std::string render_traces_csv(const std::vector<Trace>& traces) {
  std::ostringstream os;
  os.precision(17);
  os << "radius,n,estimate\n";
  for (const auto& t : traces)
    for (const auto& [n, v] : t.points) os << '"' << t.name << "\"," << n << ',' << v << '\n';
  return os.str();
}

}  // namespace shiftspec
