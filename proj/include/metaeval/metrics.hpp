#pragma once

#include <map>
#include <string>
#include <vector>

#include "metaeval/ingest.hpp"

namespace metaeval {

// Aligned per-item metric vectors for one task. Entry i of both vectors
// refers to item_ids[i]; n >= 2 and all values finite.
struct PairedSamples {
  std::vector<std::string> item_ids;
  std::vector<double> treatment;
  std::vector<double> control;

  std::size_t size() const { return item_ids.size(); }
};

struct MetricSpec {
  enum class Kind { NdcgAtK, Accuracy, Identity };

  Kind kind = Kind::Identity;
  int k = 0;  // ndcg only

  // Accepts "ndcg@<k>" (k >= 1), "accuracy", "identity".
  static MetricSpec parse(const std::string& text);

  std::string name() const;
};

// Per-query nDCG over the top k of each ranked list. Queries in the qrels
// but missing from the run score 0; queries in the run but not judged are
// skipped; a query whose ideal DCG is 0 scores 0.
std::map<std::string, double> ndcg_at_k(const RankedRun& run, const Qrels& qrels,
                                        int k);

// Per-query fraction of the top-min(k, retrieved) documents that carry any
// judgment. Empty result lists score 0.
std::map<std::string, double> judged_at_k(const RankedRun& run,
                                          const Qrels& qrels, int k);

// 1.0 where prediction equals gold, else 0.0. The id sets must match.
std::map<std::string, double> accuracy_per_sample(const SampleMetricFile& pred,
                                                  const SampleMetricFile& gold);

struct PairResult {
  PairedSamples samples;
  std::vector<std::string> dropped_treatment;  // ids only in the treatment map
  std::vector<std::string> dropped_control;    // ids only in the control map
};

// Aligns two id->value maps over their id intersection, ordered by id
// ascending. Fewer than 2 common ids is an error.
PairResult pair(const std::map<std::string, double>& treatment,
                const std::map<std::string, double>& control);

}  // namespace metaeval
