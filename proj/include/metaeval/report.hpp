#pragma once

#include <string>
#include <vector>

#include "metaeval/meta.hpp"

namespace metaeval {

// One row of the forest plot, already in display space. The note columns
// are preformatted strings ("0.812 -> 0.797" style); empty notes render as
// blank cells, and a column whose header is empty is omitted entirely.
struct ForestRow {
  std::string display_name;
  double value;
  Interval ci;
  double weight_share;
  std::string metric_note;
  std::string judged_note;
};

struct ForestPlotSpec {
  std::string title;
  std::string x_axis_label;
  std::string effect_header;  // e.g. "Effect [95% CI]"
  std::string metric_header;  // empty: column omitted
  std::string judged_header;  // empty: column omitted
  std::vector<ForestRow> rows;
  ForestRow summary;
};

// Renders the forest plot as a standalone SVG document. The output is a
// pure function of the spec: fixed 960-wide canvas, one 60px band per row
// plus one for the summary, coordinates printed with six decimals.
std::string render_forest_svg(const ForestPlotSpec& spec);

// Renders the per-task effects table in Markdown. display_names labels the
// rows in order; task ids are used where it is empty or short.
std::string render_markdown_table(const PooledResult& pooled,
                                  const std::vector<std::string>& display_names);

}  // namespace metaeval
