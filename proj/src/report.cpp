#include "metaeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "metaeval/error.hpp"

namespace metaeval {

namespace {

constexpr double kWidth = 960.0;
constexpr double kRowHeight = 60.0;
constexpr double kHeaderBand = 60.0;

constexpr double kNameX = 16.0;
constexpr double kMetricX = 235.0;   // column centre
constexpr double kJudgedX = 330.0;   // column centre
constexpr double kPlotLeft = 390.0;
constexpr double kPlotRight = 700.0;
constexpr double kEffectX = 710.0;
constexpr double kWeightX = 944.0;  // end-anchored

constexpr double kMaxDiamond = 13.0;  // diagonal of the heaviest task marker

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string num(double v) { return fmt("%.6f", v); }

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
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
      case '\'':
        out += "&apos;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

void add_line(std::string& svg, const char* cls, double x1, double y1,
              double x2, double y2) {
  svg += "  <line class=\"";
  svg += cls;
  svg += "\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\"/>\n";
}

void add_text(std::string& svg, const char* cls, double x, double y,
              const char* anchor, const std::string& content) {
  svg += "  <text class=\"";
  svg += cls;
  svg += "\" x=\"" + num(x) + "\" y=\"" + num(y) + "\"";
  if (anchor != nullptr) {
    svg += " text-anchor=\"";
    svg += anchor;
    svg += "\"";
  }
  svg += ">" + xml_escape(content) + "</text>\n";
}

void check_finite(const ForestRow& row) {
  if (!std::isfinite(row.value) || !std::isfinite(row.ci.lo) ||
      !std::isfinite(row.ci.hi) || !std::isfinite(row.weight_share)) {
    throw RenderError("row '" + row.display_name +
                      "' has a non-finite value and cannot be drawn");
  }
}

// Tick spacing: the usual 1/2/5 progression, aiming for about five steps
// across the span.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  const double normalized = raw / magnitude;
  double step;
  if (normalized <= 1.0) {
    step = 1.0;
  } else if (normalized <= 2.0) {
    step = 2.0;
  } else if (normalized <= 5.0) {
    step = 5.0;
  } else {
    step = 10.0;
  }
  return step * magnitude;
}

const char* kStyle =
    "    text { font-family: 'DejaVu Sans', Helvetica, Arial, sans-serif; "
    "font-size: 12px; fill: #1a202c; }\n"
    "    .title { font-size: 16px; font-weight: bold; }\n"
    "    .col-header, .summary-label { font-weight: bold; }\n"
    "    .tick-label { font-size: 11px; fill: #4a5568; }\n"
    "    .axis, .tick { stroke: #4a5568; stroke-width: 1; }\n"
    "    .whisker, .whisker-cap { stroke: #2d3748; stroke-width: 1.2; }\n"
    "    .diamond { fill: #2b6cb0; }\n"
    "    .summary-diamond { fill: #c05621; }\n"
    "    .zero-line { stroke: #a0aec0; stroke-width: 1; stroke-dasharray: 4 "
    "3; }\n"
    "    .separator { stroke: #e2e8f0; stroke-width: 1; }\n";

}  // namespace

std::string render_forest_svg(const ForestPlotSpec& spec) {
  if (spec.rows.empty()) {
    throw RenderError("forest plot needs at least one task row");
  }
  for (const ForestRow& row : spec.rows) {
    check_finite(row);
  }
  check_finite(spec.summary);

  const std::size_t bands = spec.rows.size() + 1;  // tasks plus summary
  const double height = kRowHeight * static_cast<double>(bands) + 120.0;

  // The x range always brackets zero so the no-effect line is visible.
  double lo = 0.0;
  double hi = 0.0;
  for (const ForestRow& row : spec.rows) {
    lo = std::min(lo, row.ci.lo);
    hi = std::max(hi, row.ci.hi);
  }
  lo = std::min(lo, spec.summary.ci.lo);
  hi = std::max(hi, spec.summary.ci.hi);
  if (hi - lo <= 0.0) {
    lo = -1.0;
    hi = 1.0;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  const auto map_x = [lo, hi](double v) {
    return kPlotLeft + (v - lo) / (hi - lo) * (kPlotRight - kPlotLeft);
  };

  double max_share = 0.0;
  for (const ForestRow& row : spec.rows) {
    max_share = std::max(max_share, row.weight_share);
  }

  std::string svg;
  svg.reserve(8192);
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"" +
         fmt("%.0f", height) + "\" viewBox=\"0 0 960 " + fmt("%.0f", height) +
         "\" role=\"img\">\n";
  svg += "  <style>\n";
  svg += kStyle;
  svg += "  </style>\n";
  svg += "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"960\" height=\"" +
         fmt("%.0f", height) + "\" fill=\"#ffffff\"/>\n";

  add_text(svg, "title", kWidth / 2.0, 30.0, "middle", spec.title);
  add_text(svg, "col-header", kNameX, 52.0, nullptr, "Task");
  if (!spec.metric_header.empty()) {
    add_text(svg, "col-header", kMetricX, 52.0, "middle", spec.metric_header);
  }
  if (!spec.judged_header.empty()) {
    add_text(svg, "col-header", kJudgedX, 52.0, "middle", spec.judged_header);
  }
  add_text(svg, "col-header", kEffectX, 52.0, nullptr, spec.effect_header);
  add_text(svg, "col-header", kWeightX, 52.0, "end", "Weight");

  const double rows_bottom =
      kHeaderBand + kRowHeight * static_cast<double>(bands);
  add_line(svg, "zero-line", map_x(0.0), kHeaderBand, map_x(0.0), rows_bottom);

  for (std::size_t i = 0; i < spec.rows.size(); ++i) {
    const ForestRow& row = spec.rows[i];
    const double cy = kHeaderBand + kRowHeight * static_cast<double>(i) + 30.0;

    add_text(svg, "row-label", kNameX, cy + 4.0, nullptr, row.display_name);
    if (!spec.metric_header.empty() && !row.metric_note.empty()) {
      add_text(svg, "metric-note", kMetricX, cy + 4.0, "middle",
               row.metric_note);
    }
    if (!spec.judged_header.empty() && !row.judged_note.empty()) {
      add_text(svg, "judged-note", kJudgedX, cy + 4.0, "middle",
               row.judged_note);
    }

    const double x_lo = map_x(row.ci.lo);
    const double x_hi = map_x(row.ci.hi);
    add_line(svg, "whisker", x_lo, cy, x_hi, cy);
    add_line(svg, "whisker-cap", x_lo, cy - 4.0, x_lo, cy + 4.0);
    add_line(svg, "whisker-cap", x_hi, cy - 4.0, x_hi, cy + 4.0);

    // Diamond area tracks the pooling weight: diagonals scale with the
    // square root of the share relative to the heaviest task.
    const double share_ratio = max_share > 0.0 ? row.weight_share / max_share : 1.0;
    const double half = kMaxDiamond * std::sqrt(share_ratio) / 2.0;
    const double cx = map_x(row.value);
    svg += "  <polygon class=\"diamond\" points=\"" + num(cx - half) + "," +
           num(cy) + " " + num(cx) + "," + num(cy - half) + " " +
           num(cx + half) + "," + num(cy) + " " + num(cx) + "," +
           num(cy + half) + "\"/>\n";

    add_text(svg, "effect-label", kEffectX, cy + 4.0, nullptr,
             fmt("%.4f", row.value) + " [" + fmt("%.4f", row.ci.lo) + ", " +
                 fmt("%.4f", row.ci.hi) + "]");
    add_text(svg, "weight-label", kWeightX, cy + 4.0, "end",
             fmt("%.1f", row.weight_share * 100.0) + "%");
  }

  const double sep_y = kHeaderBand + kRowHeight * static_cast<double>(spec.rows.size());
  add_line(svg, "separator", kNameX, sep_y, kWeightX, sep_y);

  {
    const ForestRow& row = spec.summary;
    const double cy = sep_y + 30.0;
    add_text(svg, "summary-label", kNameX, cy + 4.0, nullptr, row.display_name);
    // The summary marker spans its confidence interval edge to edge.
    svg += "  <polygon class=\"summary-diamond\" points=\"" +
           num(map_x(row.ci.lo)) + "," + num(cy) + " " + num(map_x(row.value)) +
           "," + num(cy - 10.0) + " " + num(map_x(row.ci.hi)) + "," + num(cy) +
           " " + num(map_x(row.value)) + "," + num(cy + 10.0) + "\"/>\n";
    add_text(svg, "effect-label summary-label", kEffectX, cy + 4.0, nullptr,
             fmt("%.4f", row.value) + " [" + fmt("%.4f", row.ci.lo) + ", " +
                 fmt("%.4f", row.ci.hi) + "]");
    add_text(svg, "weight-label", kWeightX, cy + 4.0, "end", "100.0%");
  }

  const double axis_y = height - 50.0;
  add_line(svg, "axis", kPlotLeft, axis_y, kPlotRight, axis_y);
  const double step = nice_step(hi - lo);
  const long long first = static_cast<long long>(std::ceil(lo / step - 1e-9));
  const long long last = static_cast<long long>(std::floor(hi / step + 1e-9));
  for (long long i = first; i <= last; ++i) {
    double value = static_cast<double>(i) * step;
    if (i == 0) {
      value = 0.0;
    }
    const double x = map_x(value);
    add_line(svg, "tick", x, axis_y, x, axis_y + 6.0);
    add_text(svg, "tick-label", x, height - 30.0, "middle",
             fmt("%.6g", value));
  }
  add_text(svg, "axis-label", (kPlotLeft + kPlotRight) / 2.0, height - 12.0,
           "middle", spec.x_axis_label);

  svg += "</svg>\n";
  return svg;
}

namespace {

std::string escape_cell(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    if (ch == '|') {
      out += "\\|";
    } else {
      out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_markdown_table(
    const PooledResult& pooled, const std::vector<std::string>& display_names) {
  std::string out;
  out += "| Task | Effect | " + fmt("%.6g", (1.0 - pooled.alpha) * 100.0) +
         "% CI | Weight |\n";
  out += "| --- | ---: | :---: | ---: |\n";
  for (std::size_t i = 0; i < pooled.per_task.size(); ++i) {
    const TaskResult& task = pooled.per_task[i];
    const std::string& name = i < display_names.size() && !display_names[i].empty()
                                  ? display_names[i]
                                  : task.task_id;
    out += "| " + escape_cell(name) + " | " +
           fmt("%.4f", task.effect.display_value) + " | [" +
           fmt("%.4f", task.ci.lo) + ", " + fmt("%.4f", task.ci.hi) + "] | " +
           fmt("%.1f", task.weight_share * 100.0) + "% |\n";
  }
  out += "| Summary | " + fmt("%.4f", pooled.summary.display_value) + " | [" +
         fmt("%.4f", pooled.summary.ci.lo) + ", " +
         fmt("%.4f", pooled.summary.ci.hi) + "] | 100.0% |\n";
  return out;
}

}  // namespace metaeval
