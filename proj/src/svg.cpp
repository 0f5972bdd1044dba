#include "facopt/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

namespace facopt {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Chart geometry.
constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 72.0;
constexpr double kRight = kWidth - 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = kHeight - 56.0;

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm < 1.5) return mag;
  if (norm < 3.5) return 2.0 * mag;
  if (norm < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_aggregate_svg(const Aggregate& agg,
                                 const std::string& title) {
  if (agg.rows.empty()) {
    throw std::invalid_argument("render_aggregate_svg: empty aggregate");
  }

  double floor_val = std::numeric_limits<double>::infinity();
  for (const AggregateRow& row : agg.rows) {
    for (double v : {row.q25, row.median, row.q75}) {
      if (v > 0.0) {
        floor_val = std::min(floor_val, v);
      }
    }
  }
  if (!std::isfinite(floor_val)) {
    floor_val = 1e-12;
  }
  floor_val *= 0.5;
  auto logv = [&](double v) {
    return std::log10(std::max(v, floor_val));
  };

  double smin = std::numeric_limits<double>::infinity();
  double smax = -std::numeric_limits<double>::infinity();
  double lmin = std::numeric_limits<double>::infinity();
  double lmax = -std::numeric_limits<double>::infinity();
  for (const AggregateRow& row : agg.rows) {
    smin = std::min(smin, static_cast<double>(row.step));
    smax = std::max(smax, static_cast<double>(row.step));
    for (double v : {row.q25, row.median, row.q75}) {
      lmin = std::min(lmin, logv(v));
      lmax = std::max(lmax, logv(v));
    }
  }
  if (smax == smin) {
    smin -= 0.5;
    smax += 0.5;
  }
  if (lmax - lmin < 1e-9) {
    lmin -= 0.5;
    lmax += 0.5;
  }

  auto px = [&](double step) {
    return kLeft + (step - smin) / (smax - smin) * (kRight - kLeft);
  };
  auto py = [&](double v) {
    return kTop + (lmax - logv(v)) / (lmax - lmin) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
         fmt(kWidth) + " " + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         escape_xml(title) + "</text>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(kHeight - 14) +
         "\" text-anchor=\"middle\">step</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt((kTop + kBottom) / 2) + ")\">gap</text>\n";

  // Gridlines and y tick labels at powers of ten.
  std::vector<double> powers;
  for (double p = std::ceil(lmin); p <= std::floor(lmax) + 1e-9; p += 1.0) {
    powers.push_back(p);
  }
  const std::size_t stride =
      powers.empty() ? 1 : (powers.size() + 7) / 8;
  for (std::size_t i = 0; i < powers.size(); i += stride) {
    const double y = kTop + (lmax - powers[i]) / (lmax - lmin) *
                                (kBottom - kTop);
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" +
           fmt(kRight) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "1e%d",
                  static_cast<int>(std::lround(powers[i])));
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  if (powers.empty()) {
    for (double l : {lmin, lmax}) {
      const double y =
          kTop + (lmax - l) / (lmax - lmin) * (kBottom - kTop);
      char label[32];
      std::snprintf(label, sizeof(label), "%.3g", std::pow(10.0, l));
      svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
             "\" text-anchor=\"end\">" + label + "</text>\n";
    }
  }

  // X ticks.
  const double xstep = nice_step(smax - smin);
  for (double s = std::ceil(smin / xstep) * xstep; s <= smax + 1e-9;
       s += xstep) {
    const double x = px(s);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" +
           fmt(x) + "\" y2=\"" + fmt(kBottom + 5) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    char label[32];
    std::snprintf(label, sizeof(label), "%.6g", s);
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kBottom + 20) +
           "\" text-anchor=\"middle\">" + label + "</text>\n";
  }

  // Interquartile band.
  std::string band = "M";
  for (const AggregateRow& row : agg.rows) {
    band += " " + fmt(px(static_cast<double>(row.step))) + "," +
            fmt(py(row.q75));
  }
  for (auto it = agg.rows.rbegin(); it != agg.rows.rend(); ++it) {
    band += " " + fmt(px(static_cast<double>(it->step))) + "," +
            fmt(py(it->q25));
  }
  band += " Z";
  svg += "<path d=\"" + band +
         "\" fill=\"#4477aa\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";

  // Median line.
  std::string points;
  for (const AggregateRow& row : agg.rows) {
    if (!points.empty()) {
      points += " ";
    }
    points += fmt(px(static_cast<double>(row.step))) + "," +
              fmt(py(row.median));
  }
  svg += "<polyline points=\"" + points +
         "\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\"/>\n";

  // Frame and legend.
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
         fmt(kRight - kLeft) + "\" height=\"" + fmt(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  char legend[64];
  std::snprintf(legend, sizeof(legend), "median and IQR over %lld seeds",
                static_cast<long long>(agg.rows.front().seeds));
  svg += "<text x=\"" + fmt(kRight) + "\" y=\"" + fmt(kTop - 8) +
         "\" text-anchor=\"end\" fill=\"#4477aa\">" + std::string(legend) +
         "</text>\n";
  svg += "</svg>\n";
  return svg;
}

bool svg_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  bool saw_svg = false;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", i + 4);
      if (end == std::string::npos) {
        return false;
      }
      i = end + 3;
      continue;
    }
    // Find the closing '>' outside attribute quotes.
    std::size_t j = i + 1;
    char quote = '\0';
    while (j < text.size()) {
      const char c = text[j];
      if (quote != '\0') {
        if (c == quote) {
          quote = '\0';
        }
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++j;
    }
    if (j >= text.size() || quote != '\0') {
      return false;
    }
    const std::string tag = text.substr(i + 1, j - i - 1);
    if (tag.empty()) {
      return false;
    }
    if (tag.front() == '?') {
      if (tag.back() != '?') {
        return false;
      }
    } else if (tag.front() == '!') {
      // Doctype and similar declarations carry no pairing obligations.
    } else if (tag.front() == '/') {
      std::string name = tag.substr(1);
      while (!name.empty() && std::isspace(static_cast<unsigned char>(
                                  name.back()))) {
        name.pop_back();
      }
      if (stack.empty() || stack.back() != name) {
        return false;
      }
      stack.pop_back();
    } else {
      const bool self_closing = tag.back() == '/';
      const std::string body =
          self_closing ? tag.substr(0, tag.size() - 1) : tag;
      std::size_t name_end = 0;
      while (name_end < body.size() &&
             !std::isspace(static_cast<unsigned char>(body[name_end]))) {
        ++name_end;
      }
      const std::string name = body.substr(0, name_end);
      if (name.empty()) {
        return false;
      }
      if (name == "svg") {
        saw_svg = true;
      }
      if (!self_closing) {
        stack.push_back(name);
      }
    }
    i = j + 1;
  }
  return stack.empty() && saw_svg;
}

}  // namespace facopt
