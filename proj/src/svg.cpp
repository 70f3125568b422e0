#include "elegy/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace elegy::svg {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;

  void cover(double v) {
    if (!std::isfinite(v)) return;
    if (empty) {
      lo = hi = v;
      empty = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
  bool empty = true;
};

struct Frame {
  Range x, y;
  double px(double v) const { return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight); }
  double py(double v) const { return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom); }
};

void open(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xl, const std::string& yl) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\""
      << num(x1 - x0) << "\" height=\"" << num(y0 - y1) << "\"/></g>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = f.x.lo + (f.x.hi - f.x.lo) * i / 4.0;
    const double vy = f.y.lo + (f.y.hi - f.y.lo) * i / 4.0;
    out << "<text x=\"" << num(f.px(vx)) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">" << tick(vx)
        << "</text>\n";
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.py(vy) + 4) << "\" text-anchor=\"end\">" << tick(vy)
        << "</text>\n";
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 18) << "\" text-anchor=\"middle\">"
      << escape(xl) << "</text>\n";
  out << "<text transform=\"translate(18 " << num((y0 + y1) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(yl) << "</text>\n";
}

void glyph(std::ostringstream& out, std::size_t kind, double x, double y, const char* colour) {
  const double r = 4.0;
  switch (kind % 4) {
    case 0:
      out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << r << "\" fill=\"" << colour << "\"/>\n";
      break;
    case 1:
      out << "<rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\"" << 2 * r << "\" height=\""
          << 2 * r << "\" fill=\"" << colour << "\"/>\n";
      break;
    case 2:
      out << "<path d=\"M" << num(x) << ' ' << num(y - r - 1) << "L" << num(x + r + 1) << ' ' << num(y + r) << "L"
          << num(x - r - 1) << ' ' << num(y + r) << "Z\" fill=\"" << colour << "\"/>\n";
      break;
    default:
      out << "<path d=\"M" << num(x) << ' ' << num(y - r - 1) << "L" << num(x + r + 1) << ' ' << num(y) << "L"
          << num(x) << ' ' << num(y + r + 1) << "L" << num(x - r - 1) << ' ' << num(y) << "Z\" fill=\"" << colour
          << "\"/>\n";
  }
}

void legend_entry(std::ostringstream& out, std::size_t i, const std::string& name) {
  const double x = kWidth - kRight + 14, y = kTop + 14 + 18.0 * static_cast<double>(i);
  glyph(out, i, x, y - 4, kPalette[i % 10]);
  out << "<text x=\"" << num(x + 10) << "\" y=\"" << num(y) << "\">" << escape(name) << "</text>\n";
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string line_chart(const Axes& ax, const std::vector<Series>& series, const std::vector<Band>& bands) {
  Frame f;
  for (const auto& s : series) {
    for (double v : s.x) f.x.cover(v);
    for (double v : s.y) f.y.cover(v);
  }
  for (const auto& b : bands) {
    for (double v : b.x) f.x.cover(v);
    for (double v : b.lower) f.y.cover(v);
    for (double v : b.upper) f.y.cover(v);
  }
  f.x.pad();
  f.y.pad();
  std::ostringstream out;
  open(out, ax.title);
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (b.x.empty()) continue;
    out << "<path fill=\"" << kPalette[i % 10] << "\" fill-opacity=\"0.15\" stroke=\"none\" d=\"";
    for (std::size_t k = 0; k < b.x.size(); ++k) out << (k ? 'L' : 'M') << num(f.px(b.x[k])) << ' ' << num(f.py(b.upper[k]));
    for (std::size_t k = b.x.size(); k-- > 0;) out << 'L' << num(f.px(b.x[k])) << ' ' << num(f.py(b.lower[k]));
    out << "Z\"/>\n";
  }
  axes(out, f, ax.x_label, ax.y_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* colour = kPalette[i % 10];
    if (s.line && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) out << (k ? " " : "") << num(f.px(s.x[k])) << ',' << num(f.py(s.y[k]));
      out << "\"/>\n";
    }
    if (s.markers) {
      for (std::size_t k = 0; k < s.x.size(); ++k) glyph(out, i, f.px(s.x[k]), f.py(s.y[k]), colour);
    }
    legend_entry(out, i, s.name);
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const std::string& title, const std::vector<std::string>& labels, const Eigen::MatrixXd& values) {
  const auto n = static_cast<double>(std::max<Eigen::Index>(values.rows(), 1));
  const double size = std::min(kWidth - 200, kHeight - 120);
  const double cell = size / n;
  const double x0 = 150, y0 = 40;
  const double hi = values.size() ? std::max(values.maxCoeff(), 1e-12) : 1.0;
  std::ostringstream out;
  open(out, title);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      const double t = std::clamp(values(r, c) / hi, 0.0, 1.0);
      const int shade = static_cast<int>(std::lround(255 * (1.0 - t)));
      char colour[16];
      std::snprintf(colour, sizeof colour, "#%02x%02xff", shade, shade);
      const double x = x0 + cell * static_cast<double>(c), y = y0 + cell * static_cast<double>(r);
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell) << "\" height=\""
          << num(cell) << "\" fill=\"" << colour << "\" stroke=\"white\"/>\n";
      out << "<text x=\"" << num(x + cell / 2) << "\" y=\"" << num(y + cell / 2 + 4) << "\" text-anchor=\"middle\" fill=\""
          << (t > 0.6 ? "white" : "black") << "\">" << num(values(r, c)) << "</text>\n";
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double mid = cell * (static_cast<double>(i) + 0.5);
    out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y0 + mid + 4) << "\" text-anchor=\"end\">"
        << escape(labels[i]) << "</text>\n";
    out << "<text transform=\"translate(" << num(x0 + mid) << ' ' << num(y0 + cell * n + 10)
        << ") rotate(45)\">" << escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string scatter(const std::string& title, const std::vector<Point>& points, const std::vector<Link>& links) {
  Frame f;
  for (const auto& p : points) {
    f.x.cover(p.x);
    f.y.cover(p.y);
  }
  f.x.pad();
  f.y.pad();
  std::map<std::string, std::size_t> groups;
  for (const auto& p : points) groups.emplace(p.group, 0);
  std::size_t g = 0;
  for (auto& [name, idx] : groups) idx = g++;
  std::ostringstream out;
  open(out, title);
  out << "<g stroke=\"#555\" stroke-opacity=\"0.5\">\n";
  for (const auto& l : links) {
    const auto& a = points[l.a];
    const auto& b = points[l.b];
    out << "<line x1=\"" << num(f.px(a.x)) << "\" y1=\"" << num(f.py(a.y)) << "\" x2=\"" << num(f.px(b.x))
        << "\" y2=\"" << num(f.py(b.y)) << "\" stroke-width=\"" << num(0.5 + 4.0 * l.weight) << "\"/>\n";
  }
  out << "</g>\n";
  for (const auto& p : points) {
    const std::size_t i = groups[p.group];
    glyph(out, i, f.px(p.x), f.py(p.y), kPalette[i % 10]);
    if (!p.label.empty()) {
      out << "<text x=\"" << num(f.px(p.x) + 6) << "\" y=\"" << num(f.py(p.y) - 6) << "\" font-size=\"9\">"
          << escape(p.label) << "</text>\n";
    }
  }
  for (const auto& [name, idx] : groups) legend_entry(out, idx, name);
  out << "</svg>\n";
  return out.str();
}

}  // namespace elegy::svg
