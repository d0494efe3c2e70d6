#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pbigraph/experiments.hpp"

namespace pbg::exp {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series) {
  constexpr double W = 640, H = 440, left = 80, right = 160, top = 40, bottom = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.y[i] > 0.0)) continue;  // log axes
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  xmin = std::floor(xmin * 10) / 10 - 0.05, xmax = std::ceil(xmax * 10) / 10 + 0.05;
  ymin = std::floor(ymin * 10) / 10 - 0.05, ymax = std::ceil(ymax * 10) / 10 + 0.05;
  const double pw = W - left - right, ph = H - top - bottom;
  auto X = [&](double v) { return left + (std::log10(v) - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double v) { return top + ph - (std::log10(v) - ymin) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  // Decade ticks plus the 2 and 5 subdivisions.
  for (int e = static_cast<int>(std::floor(xmin)); e <= static_cast<int>(std::ceil(xmax)); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * std::pow(10.0, e), lv = std::log10(v);
      if (lv < xmin || lv > xmax) continue;
      os << "<line x1=\"" << X(v) << "\" y1=\"" << top + ph << "\" x2=\"" << X(v) << "\" y2=\"" << top + ph + 5
         << "\" stroke=\"black\"/><text x=\"" << X(v) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << v
         << "</text>\n";
    }
  }
  for (int e = static_cast<int>(std::floor(ymin)); e <= static_cast<int>(std::ceil(ymax)); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * std::pow(10.0, e), lv = std::log10(v);
      if (lv < ymin || lv > ymax) continue;
      os << "<line x1=\"" << left - 5 << "\" y1=\"" << Y(v) << "\" x2=\"" << left << "\" y2=\"" << Y(v)
         << "\" stroke=\"black\"/><text x=\"" << left - 8 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\">" << v
         << "</text>\n";
    }
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << escape(xlabel)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << top + ph / 2
     << ")\">" << escape(ylabel) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0) os << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0)
        os << "<circle cx=\"" << X(s.x[i]) << "\" cy=\"" << Y(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 32 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 38 << "\" y=\"" << ly + 4
       << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pbg::exp
