#include "metaeval/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "metaeval/effects.hpp"
#include "metaeval/error.hpp"
#include "metaeval/metrics.hpp"

namespace metaeval {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) {
    return p;
  }
  return base_dir / p;
}

std::ifstream open_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return in;
}

// Re-throws parse failures with the offending file attached.
template <typename Fn>
auto parsing(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Re-throws data/statistics failures with the task attached.
template <typename Fn>
auto within_task(const std::string& task_id, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError("task '" + task_id + "': " + e.what());
  } catch (const StatError& e) {
    throw StatError("task '" + task_id + "': " + e.what());
  }
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double total = 0.0;
  for (double v : values) {
    total += v;
  }
  return total / static_cast<double>(values.size());
}

double mean_of(const std::map<std::string, double>& values) {
  if (values.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double total = 0.0;
  for (const auto& [id, v] : values) {
    total += v;
  }
  return total / static_cast<double>(values.size());
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

EffectSize effect_from_pairs(const Experiment& exp, EffectFamily family,
                             const PairedSamples& samples) {
  return within_task(exp.task_id, [&] {
    const PairedStats stats = paired_stats(samples);
    return family == EffectFamily::MeanDifference ? effect_md(stats)
                                                  : effect_smd(stats);
  });
}

}  // namespace

RunReport analyze(const Manifest& manifest, const fs::path& base_dir) {
  validate_manifest(manifest);
  const MetricSpec metric = MetricSpec::parse(manifest.metric);

  std::vector<LabeledEffect> effects;
  std::vector<TaskDiagnostics> diagnostics;
  effects.reserve(manifest.experiments.size());
  diagnostics.reserve(manifest.experiments.size());

  for (const Experiment& exp : manifest.experiments) {
    TaskDiagnostics diag;
    diag.task_id = exp.task_id;

    if (manifest.effect_type == EffectFamily::Correlation) {
      const fs::path path = resolve(base_dir, exp.treatment_path);
      const CorrelationRecord record = parsing(path, [&] {
        auto in = open_file(path);
        return parse_correlation_record(in);
      });
      const EffectSize effect = within_task(
          exp.task_id, [&] { return effect_corr(record.r, record.n); });
      diag.n_pairs = record.n;
      effects.push_back({exp.task_id, effect});
      diagnostics.push_back(std::move(diag));
      continue;
    }

    std::map<std::string, double> treatment_scores;
    std::map<std::string, double> control_scores;

    if (exp.mode == ExperimentMode::Retrieval) {
      const fs::path qrels_path = resolve(base_dir, exp.qrels_path);
      const fs::path t_path = resolve(base_dir, exp.treatment_path);
      const fs::path c_path = resolve(base_dir, exp.control_path);
      const Qrels qrels = parsing(qrels_path, [&] {
        auto in = open_file(qrels_path);
        return parse_qrels(in);
      });
      const RankedRun t_run = parsing(t_path, [&] {
        auto in = open_file(t_path);
        return parse_run(in);
      });
      const RankedRun c_run = parsing(c_path, [&] {
        auto in = open_file(c_path);
        return parse_run(in);
      });
      treatment_scores = ndcg_at_k(t_run, qrels, metric.k);
      control_scores = ndcg_at_k(c_run, qrels, metric.k);
      diag.judged_treatment = mean_of(judged_at_k(t_run, qrels, metric.k));
      diag.judged_control = mean_of(judged_at_k(c_run, qrels, metric.k));
    } else {
      const fs::path t_path = resolve(base_dir, exp.treatment_path);
      const fs::path c_path = resolve(base_dir, exp.control_path);
      const SampleMetricFile t_file = parsing(t_path, [&] {
        auto in = open_file(t_path);
        return parse_sample_metrics(in);
      });
      const SampleMetricFile c_file = parsing(c_path, [&] {
        auto in = open_file(c_path);
        return parse_sample_metrics(in);
      });
      if (metric.kind == MetricSpec::Kind::Accuracy) {
        const fs::path g_path = resolve(base_dir, exp.gold_path);
        const SampleMetricFile gold = parsing(g_path, [&] {
          auto in = open_file(g_path);
          return parse_sample_metrics(in);
        });
        treatment_scores = within_task(
            exp.task_id, [&] { return accuracy_per_sample(t_file, gold); });
        control_scores = within_task(
            exp.task_id, [&] { return accuracy_per_sample(c_file, gold); });
      } else {
        treatment_scores = t_file.values;
        control_scores = c_file.values;
      }
    }

    PairResult paired = within_task(
        exp.task_id, [&] { return pair(treatment_scores, control_scores); });
    diag.n_pairs = static_cast<int>(paired.samples.size());
    diag.dropped_treatment = std::move(paired.dropped_treatment);
    diag.dropped_control = std::move(paired.dropped_control);
    diag.mean_treatment = mean_of(paired.samples.treatment);
    diag.mean_control = mean_of(paired.samples.control);

    effects.push_back(
        {exp.task_id, effect_from_pairs(exp, manifest.effect_type, paired.samples)});
    diagnostics.push_back(std::move(diag));
  }

  RunReport report;
  report.manifest = manifest;
  report.diagnostics = std::move(diagnostics);
  report.pooled = pool(effects, manifest.alpha);
  return report;
}

namespace {

std::string family_phrase(EffectFamily family) {
  switch (family) {
    case EffectFamily::MeanDifference:
      return "Mean difference";
    case EffectFamily::StandardizedMeanDifference:
      return "Standardized mean difference";
    case EffectFamily::Correlation:
      return "Pooled correlation";
  }
  return {};
}

std::string count_phrase(std::size_t n) {
  return std::to_string(n) + (n == 1 ? " task" : " tasks");
}

}  // namespace

ForestPlotSpec build_plot_spec(const RunReport& report) {
  const Manifest& m = report.manifest;
  const PooledResult& pooled = report.pooled;
  const MetricSpec metric = MetricSpec::parse(m.metric);
  const bool retrieval = metric.kind == MetricSpec::Kind::NdcgAtK;
  const bool correlation = pooled.family == EffectFamily::Correlation;

  ForestPlotSpec spec;
  if (correlation) {
    spec.title = "Pooled correlation across " + count_phrase(m.experiments.size());
    spec.x_axis_label = "Correlation (r)";
  } else if (pooled.family == EffectFamily::MeanDifference) {
    spec.title = "Mean difference in " + m.metric + " across " +
                 count_phrase(m.experiments.size());
    spec.x_axis_label = "Mean difference (" + m.metric + ")";
  } else {
    spec.title = "Standardized mean difference in " + m.metric + " across " +
                 count_phrase(m.experiments.size());
    spec.x_axis_label = "Standardized mean difference (Hedges g)";
  }
  spec.effect_header =
      "Effect [" + fmt("%.6g", (1.0 - pooled.alpha) * 100.0) + "% CI]";
  spec.metric_header = correlation ? "" : m.metric + " (C → T)";
  spec.judged_header =
      retrieval ? "judged@" + std::to_string(metric.k) + " (T/C)" : "";

  for (std::size_t i = 0; i < pooled.per_task.size(); ++i) {
    const TaskResult& task = pooled.per_task[i];
    const TaskDiagnostics& diag = report.diagnostics[i];
    ForestRow row;
    row.display_name = m.experiments[i].display_name;
    row.value = task.effect.display_value;
    row.ci = task.ci;
    row.weight_share = task.weight_share;
    if (!correlation) {
      row.metric_note = fmt("%.3f", diag.mean_control) + " → " +
                        fmt("%.3f", diag.mean_treatment);
    }
    if (retrieval) {
      row.judged_note = fmt("%.2f", diag.judged_treatment) + " / " +
                        fmt("%.2f", diag.judged_control);
    }
    spec.rows.push_back(std::move(row));
  }

  spec.summary.display_name = "Summary";
  spec.summary.value = pooled.summary.display_value;
  spec.summary.ci = pooled.summary.ci;
  spec.summary.weight_share = 1.0;
  return spec;
}

namespace {

std::string dropped_cell(const TaskDiagnostics& diag) {
  if (diag.dropped_treatment.empty() && diag.dropped_control.empty()) {
    return "-";
  }
  const auto join_capped = [](const std::vector<std::string>& ids) {
    constexpr std::size_t kCap = 5;
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < kCap; ++i) {
      if (i > 0) {
        out += ", ";
      }
      out += ids[i];
    }
    if (ids.size() > kCap) {
      out += " (+" + std::to_string(ids.size() - kCap) + " more)";
    }
    return out;
  };
  std::string cell;
  if (!diag.dropped_treatment.empty()) {
    cell += "T-only: " + join_capped(diag.dropped_treatment);
  }
  if (!diag.dropped_control.empty()) {
    if (!cell.empty()) {
      cell += "; ";
    }
    cell += "C-only: " + join_capped(diag.dropped_control);
  }
  return cell;
}

std::string family_bullet(EffectFamily family) {
  switch (family) {
    case EffectFamily::MeanDifference:
      return "mean difference (MD)";
    case EffectFamily::StandardizedMeanDifference:
      return "standardized mean difference (Hedges g, SMD)";
    case EffectFamily::Correlation:
      return "correlation, pooled on the Fisher z scale (CORR)";
  }
  return {};
}

}  // namespace

std::string render_report_markdown(const RunReport& report) {
  const Manifest& m = report.manifest;
  const PooledResult& pooled = report.pooled;
  const ForestPlotSpec spec = build_plot_spec(report);
  const std::size_t k = pooled.per_task.size();

  std::string md;
  md += "# " + spec.title + "\n\n";
  md += "- Effect type: " + family_bullet(pooled.family) + "\n";
  md += "- Metric: " + m.metric + "\n";
  md += "- Tasks: " + std::to_string(k) + "\n";
  md += "- Confidence level: " + fmt("%.6g", (1.0 - pooled.alpha) * 100.0) +
        "% (alpha = " + fmt("%.6g", pooled.alpha) + ")\n";
  md += "- Heterogeneity: Q = " + fmt("%.6g", pooled.q) +
        " (df = " + std::to_string(k - 1) + "), tau^2 = " +
        fmt("%.6g", pooled.tau_squared) + "\n";
  md += "- Summary effect: " + fmt("%.4f", pooled.summary.display_value) +
        " [" + fmt("%.4f", pooled.summary.ci.lo) + ", " +
        fmt("%.4f", pooled.summary.ci.hi) + "]\n\n";

  md += "## Per-task effects\n\n";
  std::vector<std::string> names;
  names.reserve(m.experiments.size());
  for (const Experiment& exp : m.experiments) {
    names.push_back(exp.display_name);
  }
  md += render_markdown_table(pooled, names);

  md += "\n## Diagnostics\n\n";
  const bool retrieval =
      MetricSpec::parse(m.metric).kind == MetricSpec::Kind::NdcgAtK;
  md += "| Task | Pairs | " + m.metric + " (C → T) | Judged (T/C) | "
        "Dropped |\n";
  md += "| --- | ---: | :---: | :---: | --- |\n";
  for (std::size_t i = 0; i < report.diagnostics.size(); ++i) {
    const TaskDiagnostics& diag = report.diagnostics[i];
    std::string metric_cell = "-";
    if (std::isfinite(diag.mean_control) && std::isfinite(diag.mean_treatment)) {
      metric_cell = fmt("%.3f", diag.mean_control) + " → " +
                    fmt("%.3f", diag.mean_treatment);
    }
    std::string judged_cell = "-";
    if (retrieval && std::isfinite(diag.judged_treatment)) {
      judged_cell = fmt("%.2f", diag.judged_treatment) + " / " +
                    fmt("%.2f", diag.judged_control);
    }
    md += "| " + m.experiments[i].display_name + " | " +
          std::to_string(diag.n_pairs) + " | " + metric_cell + " | " +
          judged_cell + " | " + dropped_cell(diag) + " |\n";
  }
  return md;
}

}  // namespace metaeval
