#include "metaeval/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace metaeval {

namespace {

void check_k(int k) {
  if (k < 1) throw DomainError("k must be >= 1, got " + std::to_string(k));
}

// Exponential gain, exact for the integer grades the parser admits.
inline double gain(int grade) { return std::ldexp(1.0, grade) - 1.0; }

inline double discount(std::size_t position) {  // 1-based rank
  return 1.0 / std::log2(static_cast<double>(position) + 1.0);
}

std::string join_ids(const std::vector<std::string>& ids, std::size_t cap = 8) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < cap; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > cap)
    out += ", ... (" + std::to_string(ids.size() - cap) + " more)";
  return out;
}

}  // namespace

MetricSpec MetricSpec::parse(const std::string& text) {
  if (text == "accuracy") return MetricSpec{Kind::Accuracy, 0};
  if (text == "identity") return MetricSpec{Kind::Identity, 0};
  if (text.rfind("ndcg@", 0) == 0) {
    const char* first = text.data() + 5;
    const char* last = text.data() + text.size();
    int k = 0;
    auto [ptr, ec] = std::from_chars(first, last, k);
    if (ec == std::errc{} && ptr == last && k >= 1)
      return MetricSpec{Kind::NdcgAtK, k};
  }
  throw ConfigError("unknown metric '" + text +
                    "' (valid: ndcg@<k>, accuracy, identity)");
}

std::string MetricSpec::name() const {
  switch (kind) {
    case Kind::NdcgAtK:
      return "ndcg@" + std::to_string(k);
    case Kind::Accuracy:
      return "accuracy";
    case Kind::Identity:
      return "identity";
  }
  return "?";
}

std::map<std::string, double> ndcg_at_k(const RankedRun& run, const Qrels& qrels,
                                        int k) {
  check_k(k);
  std::map<std::string, double> out;
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<int> grades;
  for (const auto& [qid, judged] : qrels.entries) {
    grades.clear();
    grades.reserve(judged.size());
    for (const auto& [doc, grade] : judged) grades.push_back(grade);
    std::sort(grades.begin(), grades.end(), std::greater<int>());

    double ideal = 0.0;
    for (std::size_t i = 0; i < grades.size() && i < kk; ++i)
      ideal += gain(grades[i]) * discount(i + 1);
    if (ideal <= 0.0) {
      out[qid] = 0.0;  // nothing positively judged
      continue;
    }

    double dcg = 0.0;
    auto it = run.queries.find(qid);
    if (it != run.queries.end()) {
      const auto& list = it->second;
      for (std::size_t i = 0; i < list.size() && i < kk; ++i) {
        auto jt = judged.find(list[i].doc_id);
        if (jt != judged.end()) dcg += gain(jt->second) * discount(i + 1);
      }
    }
    out[qid] = dcg / ideal;
  }
  return out;
}

std::map<std::string, double> judged_at_k(const RankedRun& run,
                                          const Qrels& qrels, int k) {
  check_k(k);
  std::map<std::string, double> out;
  const std::size_t kk = static_cast<std::size_t>(k);
  for (const auto& [qid, judged] : qrels.entries) {
    auto it = run.queries.find(qid);
    if (it == run.queries.end() || it->second.empty()) {
      out[qid] = 0.0;
      continue;
    }
    const auto& list = it->second;
    const std::size_t depth = std::min(kk, list.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < depth; ++i)
      if (judged.count(list[i].doc_id) > 0) ++hits;
    out[qid] = static_cast<double>(hits) / static_cast<double>(depth);
  }
  return out;
}

std::map<std::string, double> accuracy_per_sample(const SampleMetricFile& pred,
                                                  const SampleMetricFile& gold) {
  std::vector<std::string> missing_in_pred;
  std::vector<std::string> missing_in_gold;
  for (const auto& [id, value] : gold.values)
    if (pred.values.find(id) == pred.values.end()) missing_in_pred.push_back(id);
  for (const auto& [id, value] : pred.values)
    if (gold.values.find(id) == gold.values.end()) missing_in_gold.push_back(id);
  if (!missing_in_pred.empty() || !missing_in_gold.empty()) {
    std::string msg = "prediction/gold id sets differ";
    if (!missing_in_pred.empty())
      msg += "; missing from predictions: " + join_ids(missing_in_pred);
    if (!missing_in_gold.empty())
      msg += "; missing from gold: " + join_ids(missing_in_gold);
    throw DataError(msg);
  }

  std::map<std::string, double> out;
  for (const auto& [id, truth] : gold.values)
    out[id] = pred.values.at(id) == truth ? 1.0 : 0.0;
  return out;
}

PairResult pair(const std::map<std::string, double>& treatment,
                const std::map<std::string, double>& control) {
  PairResult result;
  for (const auto& [id, value] : treatment) {
    auto it = control.find(id);
    if (it == control.end()) {
      result.dropped_treatment.push_back(id);
      continue;
    }
    result.samples.item_ids.push_back(id);
    result.samples.treatment.push_back(value);
    result.samples.control.push_back(it->second);
  }
  for (const auto& [id, value] : control)
    if (treatment.find(id) == treatment.end())
      result.dropped_control.push_back(id);

  if (result.samples.size() < 2)
    throw DataError("fewer than 2 common ids between treatment and control (" +
                    std::to_string(result.samples.size()) + " found)");
  return result;
}

}  // namespace metaeval
