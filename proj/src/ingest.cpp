#include "metaeval/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "metaeval/metrics.hpp"

namespace metaeval {

namespace {

// Grades feed an exponential gain (2^grade - 1); this keeps it finite.
constexpr int kMaxGrade = 62;

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

long parse_int(std::string_view text, std::size_t line, const char* what) {
  long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(std::string(what) + " is not an integer: '" +
                         std::string(text) + "'",
                     line);
  return value;
}

double parse_real(std::string_view text, std::size_t line, const char* what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ParseError(std::string(what) + " is not a number: '" +
                         std::string(text) + "'",
                     line);
  if (!std::isfinite(value))
    throw ParseError(std::string(what) + " is not finite: '" +
                         std::string(text) + "'",
                     line);
  return value;
}

// Calls fn(line_view, line_number) for every non-blank line; line numbers
// count physical lines starting at 1.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (is_blank(view)) continue;
    fn(view, lineno);
  }
}

}  // namespace

std::string_view family_code(EffectFamily f) {
  switch (f) {
    case EffectFamily::MeanDifference:
      return "MD";
    case EffectFamily::StandardizedMeanDifference:
      return "SMD";
    case EffectFamily::Correlation:
      return "CORR";
  }
  return "?";
}

std::optional<EffectFamily> family_from_code(std::string_view code) {
  if (code == "MD") return EffectFamily::MeanDifference;
  if (code == "SMD") return EffectFamily::StandardizedMeanDifference;
  if (code == "CORR") return EffectFamily::Correlation;
  return std::nullopt;
}

Qrels parse_qrels(std::istream& in) {
  Qrels qrels;
  for_each_record(in, [&](std::string_view line, std::size_t lineno) {
    auto fields = split_ws(line);
    if (fields.size() != 4)
      throw ParseError("expected 4 fields (qid iter docid grade), got " +
                           std::to_string(fields.size()),
                       lineno);
    long grade = parse_int(fields[3], lineno, "grade");
    if (grade < 0)
      throw ParseError("negative grade " + std::to_string(grade), lineno);
    if (grade > kMaxGrade)
      throw ParseError("grade " + std::to_string(grade) +
                           " exceeds supported maximum " +
                           std::to_string(kMaxGrade),
                       lineno);
    auto [it, inserted] = qrels.entries[std::string(fields[0])].emplace(
        std::string(fields[2]), static_cast<int>(grade));
    if (!inserted)
      throw ParseError("duplicate entry (" + std::string(fields[0]) + ", " +
                           std::string(fields[2]) + ")",
                       lineno);
  });
  return qrels;
}

RankedRun parse_run(std::istream& in) {
  RankedRun run;
  std::map<std::string, std::set<std::string>> seen;
  for_each_record(in, [&](std::string_view line, std::size_t lineno) {
    auto fields = split_ws(line);
    if (fields.size() != 6)
      throw ParseError("expected 6 fields (qid Q0 docid rank score tag), got " +
                           std::to_string(fields.size()),
                       lineno);
    parse_int(fields[3], lineno, "rank");  // validated, then ignored
    double score = parse_real(fields[4], lineno, "score");
    std::string qid(fields[0]);
    std::string doc(fields[2]);
    if (!seen[qid].insert(doc).second)
      throw ParseError("duplicate document '" + doc + "' for query '" + qid +
                           "'",
                       lineno);
    run.queries[qid].push_back(RunEntry{std::move(doc), score});
    if (run.system_tag.empty()) run.system_tag = std::string(fields[5]);
  });
  for (auto& [qid, list] : run.queries) {
    std::sort(list.begin(), list.end(), [](const RunEntry& a, const RunEntry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id > b.doc_id;
    });
  }
  return run;
}

std::string serialize_run(const RankedRun& run) {
  std::string out;
  const std::string& tag = run.system_tag.empty() ? "run" : run.system_tag;
  char score_buf[40];
  for (const auto& [qid, list] : run.queries) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::snprintf(score_buf, sizeof(score_buf), "%.17g", list[i].score);
      out += qid;
      out += " Q0 ";
      out += list[i].doc_id;
      out += ' ';
      out += std::to_string(i + 1);
      out += ' ';
      out += score_buf;
      out += ' ';
      out += tag;
      out += '\n';
    }
  }
  return out;
}

SampleMetricFile parse_sample_metrics(std::istream& in) {
  SampleMetricFile file;
  for_each_record(in, [&](std::string_view line, std::size_t lineno) {
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError("expected 2 tab-separated fields", lineno);
    std::string_view id = line.substr(0, tab);
    std::string_view rest = line.substr(tab + 1);
    if (id.empty()) throw ParseError("empty sample id", lineno);
    if (rest.find('\t') != std::string_view::npos)
      throw ParseError("expected 2 tab-separated fields, got more", lineno);
    double value = parse_real(rest, lineno, "value");
    auto [it, inserted] = file.values.emplace(std::string(id), value);
    if (!inserted)
      throw ParseError("duplicate sample id '" + std::string(id) + "'", lineno);
  });
  return file;
}

CorrelationRecord parse_correlation_record(std::istream& in) {
  std::optional<CorrelationRecord> record;
  for_each_record(in, [&](std::string_view line, std::size_t lineno) {
    if (record)
      throw ParseError("expected a single record, found a second one", lineno);
    auto fields = split_ws(line);
    if (fields.size() != 2)
      throw ParseError("expected 2 fields (r n), got " +
                           std::to_string(fields.size()),
                       lineno);
    double r = parse_real(fields[0], lineno, "correlation");
    long n = parse_int(fields[1], lineno, "sample count");
    if (n < 0 || n > std::numeric_limits<int>::max())
      throw ParseError("sample count out of range", lineno);
    record = CorrelationRecord{r, static_cast<int>(n)};
  });
  if (!record) throw ParseError("empty correlation record file");
  return *record;
}

namespace {

using nlohmann::json;

const json& require_key(const json& obj, const char* key,
                        const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError(ctx + ": missing required key '" + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& ctx) {
  const json& v = require_key(obj, key, ctx);
  if (!v.is_string())
    throw ConfigError(ctx + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string optional_string(const json& obj, const char* key,
                            const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) return {};
  if (!it->is_string())
    throw ConfigError(ctx + ": key '" + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Manifest load_manifest(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("manifest: top level must be an object");

  Manifest m;
  m.metric = require_string(doc, "metric", "manifest");

  std::string family = require_string(doc, "effect_type", "manifest");
  auto parsed = family_from_code(family);
  if (!parsed)
    throw ConfigError("manifest: unknown effect_type '" + family +
                      "' (valid values: MD, SMD, CORR)");
  m.effect_type = *parsed;

  const json& alpha = require_key(doc, "alpha", "manifest");
  if (!alpha.is_number())
    throw ConfigError("manifest: key 'alpha' must be a number");
  m.alpha = alpha.get<double>();

  const json& experiments = require_key(doc, "experiments", "manifest");
  if (!experiments.is_array())
    throw ConfigError("manifest: key 'experiments' must be an array");
  for (const json& entry : experiments) {
    if (!entry.is_object())
      throw ConfigError("manifest: each experiment must be an object");
    Experiment exp;
    exp.task_id = require_string(entry, "task_id", "manifest experiment");
    std::string ctx = "experiment '" + exp.task_id + "'";
    exp.display_name = require_string(entry, "display_name", ctx);
    std::string mode = require_string(entry, "mode", ctx);
    if (mode == "retrieval") {
      exp.mode = ExperimentMode::Retrieval;
    } else if (mode == "classification") {
      exp.mode = ExperimentMode::Classification;
    } else {
      throw ConfigError(ctx + ": unknown mode '" + mode +
                        "' (valid values: retrieval, classification)");
    }
    exp.treatment_path = require_string(entry, "treatment_path", ctx);
    exp.control_path = optional_string(entry, "control_path", ctx);
    exp.qrels_path = optional_string(entry, "qrels_path", ctx);
    exp.gold_path = optional_string(entry, "gold_path", ctx);
    m.experiments.push_back(std::move(exp));
  }

  validate_manifest(m);
  return m;
}

void validate_manifest(const Manifest& m) {
  if (m.experiments.empty())
    throw ConfigError("manifest: at least one experiment is required");
  if (!(m.alpha > 0.0 && m.alpha < 1.0))
    throw ConfigError("manifest: alpha must lie strictly between 0 and 1");

  MetricSpec spec = MetricSpec::parse(m.metric);

  std::set<std::string> ids;
  for (const Experiment& exp : m.experiments) {
    std::string ctx = "experiment '" + exp.task_id + "'";
    if (!ids.insert(exp.task_id).second)
      throw ConfigError("manifest: duplicate task_id '" + exp.task_id + "'");

    if (exp.mode == ExperimentMode::Retrieval) {
      if (exp.qrels_path.empty())
        throw ConfigError(ctx + ": retrieval mode requires qrels_path");
      if (spec.kind != MetricSpec::Kind::NdcgAtK)
        throw ConfigError(ctx + ": retrieval mode requires an ndcg@k metric, got '" +
                          m.metric + "'");
    } else {
      if (!exp.qrels_path.empty())
        throw ConfigError(ctx + ": classification mode must not set qrels_path");
      if (spec.kind == MetricSpec::Kind::NdcgAtK)
        throw ConfigError(ctx + ": metric '" + m.metric +
                          "' requires retrieval mode");
    }

    if (spec.kind == MetricSpec::Kind::Accuracy) {
      if (exp.gold_path.empty())
        throw ConfigError(ctx + ": accuracy metric requires gold_path");
    } else if (!exp.gold_path.empty()) {
      throw ConfigError(ctx + ": gold_path is only used with the accuracy metric");
    }

    if (exp.treatment_path.empty())
      throw ConfigError(ctx + ": treatment_path must not be empty");

    if (m.effect_type == EffectFamily::Correlation) {
      if (exp.mode != ExperimentMode::Classification)
        throw ConfigError(ctx +
                          ": CORR experiments use classification mode with a "
                          "precomputed correlation record");
      if (spec.kind != MetricSpec::Kind::Identity)
        throw ConfigError(ctx +
                          ": CORR experiments take a precomputed correlation "
                          "record; set metric to 'identity'");
      // control_path unused: the record already relates the two systems.
    } else if (exp.control_path.empty()) {
      throw ConfigError(ctx + ": control_path must not be empty");
    }
  }
}

}  // namespace metaeval
