#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaeval/error.hpp"

namespace metaeval {

// Relevance judgments: query -> document -> integer grade >= 0.
struct Qrels {
  std::map<std::string, std::map<std::string, int>> entries;

  const std::map<std::string, int>* find_query(const std::string& qid) const {
    auto it = entries.find(qid);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct RunEntry {
  std::string doc_id;
  double score;

  bool operator==(const RunEntry&) const = default;
};

// Per-query ranked document lists, re-sorted by (score desc, doc_id desc).
struct RankedRun {
  std::map<std::string, std::vector<RunEntry>> queries;
  std::string system_tag;

  bool operator==(const RankedRun&) const = default;
};

// sample_id -> metric value, all finite.
struct SampleMetricFile {
  std::map<std::string, double> values;
};

// One-record file holding a precomputed correlation coefficient and the
// sample size it was estimated from.
struct CorrelationRecord {
  double r;
  int n;
};

enum class EffectFamily { MeanDifference, StandardizedMeanDifference, Correlation };

std::string_view family_code(EffectFamily f);  // "MD", "SMD", "CORR"
std::optional<EffectFamily> family_from_code(std::string_view code);

enum class ExperimentMode { Retrieval, Classification };

struct Experiment {
  std::string task_id;
  std::string display_name;
  ExperimentMode mode = ExperimentMode::Classification;
  std::string treatment_path;
  std::string control_path;  // may be empty for CORR experiments
  std::string qrels_path;    // retrieval mode only
  std::string gold_path;     // accuracy metric only
};

struct Manifest {
  std::vector<Experiment> experiments;  // order preserved as written
  std::string metric;                   // "ndcg@10", "accuracy", "identity"
  EffectFamily effect_type = EffectFamily::MeanDifference;
  double alpha = 0.05;
};

// TREC qrels: `<qid> <iter> <docid> <grade>`, whitespace-separated.
Qrels parse_qrels(std::istream& in);

// TREC run: `<qid> Q0 <docid> <rank> <score> <tag>`. The rank field is
// validated as an integer and then ignored; lists are re-sorted.
RankedRun parse_run(std::istream& in);

// Writes a RankedRun back out in TREC run format; ranks are re-derived
// from list positions and scores keep full round-trip precision.
std::string serialize_run(const RankedRun& run);

// TSV, two columns `sample_id<TAB>value`, no header.
SampleMetricFile parse_sample_metrics(std::istream& in);

// Single line `r<TAB>n` with -1 < r < 1 and integer n.
CorrelationRecord parse_correlation_record(std::istream& in);

// JSON manifest; validates structure and cross-field rules.
Manifest load_manifest(std::istream& in);

// Re-checks cross-field rules. Called by load_manifest and again by the CLI
// after applying --effect-type / --alpha overrides.
void validate_manifest(const Manifest& m);

}  // namespace metaeval
