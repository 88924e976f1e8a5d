#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "metaeval/meta.hpp"
#include "metaeval/report.hpp"

namespace metaeval {

// Per-task bookkeeping gathered while the effect sizes are computed.
// Judged coverage is only meaningful for ranked-retrieval tasks and the
// metric means only when per-sample scores exist; unavailable entries stay
// NaN and render as "-".
struct TaskDiagnostics {
  std::string task_id;
  int n_pairs = 0;
  std::vector<std::string> dropped_treatment;  // ids with no control value
  std::vector<std::string> dropped_control;    // ids with no treatment value
  double mean_treatment = std::numeric_limits<double>::quiet_NaN();
  double mean_control = std::numeric_limits<double>::quiet_NaN();
  double judged_treatment = std::numeric_limits<double>::quiet_NaN();
  double judged_control = std::numeric_limits<double>::quiet_NaN();
};

struct RunReport {
  Manifest manifest;
  std::vector<TaskDiagnostics> diagnostics;  // manifest order
  PooledResult pooled;                       // manifest order
};

// Runs the full analysis for a validated manifest. Relative data paths are
// resolved against base_dir (normally the manifest's directory). Throws:
// IoError for unreadable files, ParseError for malformed ones, DataError
// for alignment problems, StatError/DomainError for degenerate statistics.
RunReport analyze(const Manifest& manifest,
                  const std::filesystem::path& base_dir);

// Derives the forest-plot description (titles, notes, display-space rows)
// from an analysis result.
ForestPlotSpec build_plot_spec(const RunReport& report);

// Full Markdown report: headline numbers, the per-task effects table, and
// a diagnostics table. Contains no filesystem paths, so the bytes depend
// only on the analysis result.
std::string render_report_markdown(const RunReport& report);

}  // namespace metaeval
