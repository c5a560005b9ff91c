#pragma once

// Hand-written SVG for the HLM heatmap and training learning curves.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hlmkit/experiment.hpp"
#include "hlmkit/hlm.hpp"

namespace hlmkit::svg {

inline std::string num(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
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

/// Diverging red (-1) / white (0) / blue (+1) fill.
inline std::string diverging_color(double v) {
  const double t = std::clamp(v, -1.0, 1.0);
  auto channel = [](double x) { return static_cast<int>(std::lround(255.0 * x)); };
  int r = 255, g = 255, b = 255;
  if (t >= 0) {
    r = channel(1.0 - 0.8 * t);
    g = channel(1.0 - 0.55 * t);
  } else {
    g = channel(1.0 + 0.7 * t);
    b = channel(1.0 + 0.7 * t);
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

namespace detail {

struct Canvas {
  std::ostringstream body;
  double width = 0;
  double height = 0;

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body << "<rect x=\"" << num(x, 1) << "\" y=\"" << num(y, 1) << "\" width=\"" << num(w, 1)
         << "\" height=\"" << num(h, 1) << "\" fill=\"" << fill << "\" stroke=\"#ffffff\"/>\n";
  }
  void text(double x, double y, std::string_view s, const char* anchor = "middle", int size = 11) {
    body << "<text x=\"" << num(x, 1) << "\" y=\"" << num(y, 1) << "\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << "\" font-family=\"sans-serif\">" << escape(s)
         << "</text>\n";
  }
  std::string finish() const {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 0) << "\" height=\""
        << num(height, 0) << "\" viewBox=\"0 0 " << num(width, 0) << ' ' << num(height, 0)
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << body.str() << "</svg>\n";
    return out.str();
  }
};

}  // namespace detail

/// Panel (a) cell values per (model, criterion) x task, then single-row
/// panels for I_task, I_criteria and I_model.
inline std::string hlm_heatmap(const HlmReport& r) {
  constexpr double cell_w = 64, cell_h = 26, label_w = 130, top = 40, gap = 46;
  detail::Canvas c;
  const double grid_w = label_w + cell_w * static_cast<double>(std::max<std::size_t>(r.tasks.size(), 1));

  c.text(10, 20, "(a) cell values by model/criterion and task", "start", 13);
  for (std::size_t j = 0; j < r.tasks.size(); ++j) {
    c.text(label_w + cell_w * (static_cast<double>(j) + 0.5), top - 6, r.tasks[j].key);
  }
  double y = top;
  for (const auto& m : r.models) {
    for (const auto& cr : r.criteria) {
      c.text(label_w - 8, y + cell_h * 0.65, m.key + " / " + cr.key, "end");
      for (std::size_t j = 0; j < r.tasks.size(); ++j) {
        const double x = label_w + cell_w * static_cast<double>(j);
        const auto it = std::find_if(r.cells.begin(), r.cells.end(), [&](const CellBreakdown& cell) {
          return cell.model == m.key && cell.criterion == cr.key && cell.task == r.tasks[j].key;
        });
        if (it == r.cells.end()) {
          c.rect(x, y, cell_w, cell_h, "#dddddd");
          continue;
        }
        c.rect(x, y, cell_w, cell_h, diverging_color(it->value));
        c.text(x + cell_w / 2, y + cell_h * 0.65, num(it->value));
      }
      y += cell_h;
    }
  }

  auto strip = [&](const char* title, const std::vector<IndexValue>& values) {
    y += gap;
    c.text(10, y - 24, title, "start", 13);
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double x = label_w + cell_w * static_cast<double>(j);
      c.text(x + cell_w / 2, y - 6, values[j].key);
      c.rect(x, y, cell_w, cell_h, diverging_color(values[j].value));
      c.text(x + cell_w / 2, y + cell_h * 0.65, num(values[j].value));
    }
    y += cell_h;
  };
  strip("(b) I_task", r.tasks);
  strip("(c) I_criteria", r.criteria);
  strip("(d) I_model", r.models);

  c.width = std::max(grid_w, label_w + cell_w * 4) + 20;
  c.height = y + 20;
  return c.finish();
}

struct CurveSeries {
  std::string name;
  TrainingLog log;
  std::vector<std::int64_t> transitions;
};

/// Overlaid learning curves; transition steps are marked with arrows.
inline std::string learning_curves(const std::vector<CurveSeries>& series, const std::string& title) {
  constexpr double width = 640, height = 400, left = 60, right = 150, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  detail::Canvas c;
  c.width = width;
  c.height = height;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& e : s.log.steps) {
      const double xv = static_cast<double>(e.step);
      if (first) {
        x_min = x_max = xv;
        y_min = y_max = e.value;
        first = false;
      }
      x_min = std::min(x_min, xv);
      x_max = std::max(x_max, xv);
      y_min = std::min(y_min, e.value);
      y_max = std::max(y_max, e.value);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return top + (1.0 - (v - y_min) / (y_max - y_min)) * plot_h; };

  c.text(width / 2, 22, title, "middle", 14);
  c.body << "<line x1=\"" << num(left, 1) << "\" y1=\"" << num(top + plot_h, 1) << "\" x2=\""
         << num(left + plot_w, 1) << "\" y2=\"" << num(top + plot_h, 1) << "\" stroke=\"#000000\"/>\n";
  c.body << "<line x1=\"" << num(left, 1) << "\" y1=\"" << num(top, 1) << "\" x2=\"" << num(left, 1)
         << "\" y2=\"" << num(top + plot_h, 1) << "\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    c.text(px(x_min + f * (x_max - x_min)), top + plot_h + 16, num(x_min + f * (x_max - x_min), 0));
    c.text(left - 6, py(y_min + f * (y_max - y_min)) + 4, num(y_min + f * (y_max - y_min)), "end", 10);
  }
  c.text(left + plot_w / 2, height - 12, "step");

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = palette[i % std::size(palette)];
    c.body << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.log.steps.size(); ++k) {
      const auto& e = s.log.steps[k];
      c.body << (k ? " " : "") << num(px(static_cast<double>(e.step)), 1) << ',' << num(py(e.value), 1);
    }
    c.body << "\"/>\n";
    for (const auto step : s.transitions) {
      const auto it = std::find_if(s.log.steps.begin(), s.log.steps.end(),
                                   [&](const LogEntry& e) { return e.step >= step; });
      if (it == s.log.steps.end()) continue;
      const double x = px(static_cast<double>(it->step));
      const double yv = py(it->value);
      c.body << "<path d=\"M" << num(x, 1) << ',' << num(yv - 4, 1) << " l-4,-10 l8,0 z\" fill=\""
             << color << "\"/>\n";
    }
    const double ly = top + 16.0 * static_cast<double>(i);
    c.body << "<line x1=\"" << num(width - right + 10, 1) << "\" y1=\"" << num(ly, 1) << "\" x2=\""
           << num(width - right + 30, 1) << "\" y2=\"" << num(ly, 1) << "\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
    c.text(width - right + 36, ly + 4, s.name, "start", 11);
  }
  return c.finish();
}

}  // namespace hlmkit::svg
