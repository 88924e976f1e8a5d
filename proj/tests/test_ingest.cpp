#include "metaeval/ingest.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "metaeval/error.hpp"

using namespace metaeval;

namespace {

Qrels qrels_of(const std::string& text) {
  std::istringstream in(text);
  return parse_qrels(in);
}

RankedRun run_of(const std::string& text) {
  std::istringstream in(text);
  return parse_run(in);
}

SampleMetricFile metrics_of(const std::string& text) {
  std::istringstream in(text);
  return parse_sample_metrics(in);
}

Manifest manifest_of(const std::string& text) {
  std::istringstream in(text);
  return load_manifest(in);
}

const std::string kValidManifest = R"({
  "metric": "ndcg@10",
  "effect_type": "MD",
  "alpha": 0.05,
  "experiments": [
    {
      "task_id": "t1",
      "display_name": "Task One",
      "mode": "retrieval",
      "qrels_path": "t1/qrels.txt",
      "treatment_path": "t1/treatment.run",
      "control_path": "t1/control.run"
    }
  ]
})";

// Returns a tweaked copy of the valid manifest for negative tests.
std::string patched(const std::string& from, const std::string& to) {
  std::string text = kValidManifest;
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("qrels parsing maps lines to graded judgments") {
  const Qrels q = qrels_of("q1 0 d1 2\nq1 0 d2 1\n");
  REQUIRE(q.entries.size() == 1);
  const auto* docs = q.find_query("q1");
  REQUIRE(docs != nullptr);
  CHECK(docs->at("d1") == 2);
  CHECK(docs->at("d2") == 1);
  CHECK(q.find_query("nope") == nullptr);
}

TEST_CASE("qrels parsing accepts empty input, blank lines, and CRLF") {
  CHECK(qrels_of("").entries.empty());
  CHECK(qrels_of("\n  \n\t\n").entries.empty());
  const Qrels q = qrels_of("q1 0 d1 2\r\nq1 0 d2 0\r\n");
  CHECK(q.find_query("q1")->size() == 2);
}

TEST_CASE("qrels parsing is independent of line order") {
  std::vector<std::string> lines = {"q2 0 d1 1", "q1 0 d9 0", "q1 0 d2 3",
                                    "q3 0 d7 2", "q1 0 d1 1"};
  const Qrels in_order = qrels_of("q2 0 d1 1\nq1 0 d9 0\nq1 0 d2 3\n"
                                  "q3 0 d7 2\nq1 0 d1 1\n");
  std::mt19937 rng(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text;
    for (const auto& l : lines) {
      text += l + "\n";
    }
    CHECK(qrels_of(text).entries == in_order.entries);
  }
}

TEST_CASE("qrels parse errors carry the line number") {
  try {
    qrels_of("q1 0 d1 two\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    qrels_of("q1 0 d1 1\nq1 0 d1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(qrels_of("q1 0 d1 -1\n"), ParseError);
  CHECK_THROWS_AS(qrels_of("q1 0 d1 1 extra\n"), ParseError);
  CHECK_THROWS_AS(qrels_of("q1 0 d1 1\nq1 0 d1 2\n"), ParseError);  // dup
  CHECK_THROWS_AS(qrels_of("q1 0 d1 99\n"), ParseError);  // grade too large
}

TEST_CASE("run parsing keeps scores and re-sorts by score then doc id") {
  const RankedRun r = run_of("q1 Q0 d2 1 9.5 sys\nq1 Q0 d7 2 8.0 sys\n");
  REQUIRE(r.queries.size() == 1);
  const auto& list = r.queries.at("q1");
  REQUIRE(list.size() == 2);
  CHECK(list[0] == RunEntry{"d2", 9.5});
  CHECK(list[1] == RunEntry{"d7", 8.0});
  CHECK(r.system_tag == "sys");
}

TEST_CASE("run ties break by doc id descending") {
  const RankedRun r = run_of("q1 Q0 d1 1 3.0 a\nq1 Q0 d2 2 3.0 a\n");
  const auto& list = r.queries.at("q1");
  CHECK(list[0].doc_id == "d2");
  CHECK(list[1].doc_id == "d1");
}

TEST_CASE("run parsing ignores the stated rank but validates it") {
  // ranks deliberately scrambled: order must come from scores alone
  const RankedRun r =
      run_of("q1 Q0 low 1 1.0 s\nq1 Q0 mid 9 2.0 s\nq1 Q0 top 4 3.0 s\n");
  const auto& list = r.queries.at("q1");
  CHECK(list[0].doc_id == "top");
  CHECK(list[2].doc_id == "low");
  CHECK_THROWS_AS(run_of("q1 Q0 d1 first 1.0 s\n"), ParseError);
}

TEST_CASE("run parsing rejects malformed lines") {
  CHECK_THROWS_AS(run_of("q1 Q0 d1 1 9.5\n"), ParseError);       // 5 fields
  CHECK_THROWS_AS(run_of("q1 Q0 d1 1 high sys\n"), ParseError);  // bad score
  CHECK_THROWS_AS(run_of("q1 Q0 d1 1 nan sys\n"), ParseError);
  CHECK_THROWS_AS(run_of("q1 Q0 d1 1 inf sys\n"), ParseError);
  CHECK_THROWS_AS(run_of("q1 Q0 d1 1 1.0 s\nq1 Q0 d1 2 0.5 s\n"),
                  ParseError);  // duplicate doc within query
}

TEST_CASE("run serialization round-trips through the parser") {
  const std::string text =
      "q1 Q0 d3 1 0.125 tag\nq1 Q0 d1 2 0.1 tag\nq2 Q0 d9 1 7 tag\n";
  const RankedRun first = run_of(text);
  const RankedRun second = run_of(serialize_run(first));
  CHECK(first == second);
  // serializing twice is stable
  CHECK(serialize_run(first) == serialize_run(second));
}

TEST_CASE("run serialization writes positional ranks") {
  const RankedRun r = run_of("q1 Q0 a 5 1.0 s\nq1 Q0 b 9 2.0 s\n");
  const std::string text = serialize_run(r);
  CHECK(text.find("q1 Q0 b 1 2 s") != std::string::npos);
  CHECK(text.find("q1 Q0 a 2 1 s") != std::string::npos);
}

TEST_CASE("sample metric parsing handles the documented cases") {
  const SampleMetricFile f = metrics_of("s1\t1.0\ns2\t0.0\n");
  CHECK(f.values.at("s1") == 1.0);
  CHECK(f.values.at("s2") == 0.0);
  CHECK(metrics_of("").values.empty());
  CHECK_THROWS_AS(metrics_of("s1\t1.0\ns1\t0.0\n"), ParseError);  // dup id
  CHECK_THROWS_AS(metrics_of("s1\tNaN\n"), ParseError);
  CHECK_THROWS_AS(metrics_of("s1\tinf\n"), ParseError);
  CHECK_THROWS_AS(metrics_of("s1 1.0\n"), ParseError);   // no tab
  CHECK_THROWS_AS(metrics_of("s1\t1.0\textra\n"), ParseError);
  CHECK_THROWS_AS(metrics_of("\t1.0\n"), ParseError);    // empty id
}

TEST_CASE("correlation record parsing") {
  std::istringstream one("0.62\t120\n");
  const CorrelationRecord rec = parse_correlation_record(one);
  CHECK(rec.r == 0.62);
  CHECK(rec.n == 120);

  std::istringstream spaces("0.5 40\n");
  CHECK(parse_correlation_record(spaces).n == 40);

  std::istringstream empty("");
  CHECK_THROWS_AS(parse_correlation_record(empty), ParseError);
  std::istringstream two("0.5\t40\n0.6\t50\n");
  CHECK_THROWS_AS(parse_correlation_record(two), ParseError);
  std::istringstream bad("high\t40\n");
  CHECK_THROWS_AS(parse_correlation_record(bad), ParseError);
}

TEST_CASE("effect family codes round-trip") {
  for (auto f : {EffectFamily::MeanDifference,
                 EffectFamily::StandardizedMeanDifference,
                 EffectFamily::Correlation}) {
    CHECK(family_from_code(family_code(f)) == f);
  }
  CHECK_FALSE(family_from_code("md").has_value());
  CHECK_FALSE(family_from_code("").has_value());
}

TEST_CASE("manifest loading accepts a complete retrieval manifest") {
  const Manifest m = manifest_of(kValidManifest);
  CHECK(m.metric == "ndcg@10");
  CHECK(m.effect_type == EffectFamily::MeanDifference);
  CHECK(m.alpha == 0.05);
  REQUIRE(m.experiments.size() == 1);
  CHECK(m.experiments[0].task_id == "t1");
  CHECK(m.experiments[0].mode == ExperimentMode::Retrieval);
}

TEST_CASE("manifest loading rejects structural problems") {
  CHECK_THROWS_AS(manifest_of("not json"), ConfigError);
  CHECK_THROWS_AS(manifest_of("[]"), ConfigError);
  CHECK_THROWS_AS(manifest_of("{}"), ConfigError);
  CHECK_THROWS_AS(manifest_of(patched("\"MD\"", "\"WILD\"")), ConfigError);
  CHECK_THROWS_AS(manifest_of(patched("0.05", "1.5")), ConfigError);
  CHECK_THROWS_AS(manifest_of(patched("0.05", "0")), ConfigError);
  CHECK_THROWS_AS(manifest_of(patched("\"ndcg@10\"", "\"ndcg@0\"")),
                  ConfigError);
  // unknown effect types name the accepted set
  try {
    manifest_of(patched("\"MD\"", "\"WILD\""));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("MD, SMD, CORR") != std::string::npos);
  }
}

TEST_CASE("manifest cross-field rules") {
  // retrieval task without qrels
  CHECK_THROWS_AS(
      manifest_of(patched("\"qrels_path\": \"t1/qrels.txt\",", "")),
      ConfigError);
  // classification mode cannot use an ndcg metric
  CHECK_THROWS_AS(manifest_of(patched("\"retrieval\"", "\"classification\"")),
                  ConfigError);
  // accuracy requires a gold file
  {
    std::string text = patched("\"ndcg@10\"", "\"accuracy\"");
    text = [&] {
      const auto pos = text.find("\"mode\": \"retrieval\"");
      std::string t = text;
      t.replace(pos, std::string("\"mode\": \"retrieval\"").size(),
                "\"mode\": \"classification\"");
      const auto q = t.find("      \"qrels_path\": \"t1/qrels.txt\",\n");
      t.erase(q, std::string("      \"qrels_path\": \"t1/qrels.txt\",\n").size());
      return t;
    }();
    CHECK_THROWS_AS(manifest_of(text), ConfigError);
  }
  // duplicate task ids
  {
    const std::string dup = R"({
      "metric": "identity", "effect_type": "MD", "alpha": 0.05,
      "experiments": [
        {"task_id": "a", "display_name": "A", "mode": "classification",
         "treatment_path": "a/t.tsv", "control_path": "a/c.tsv"},
        {"task_id": "a", "display_name": "A again", "mode": "classification",
         "treatment_path": "b/t.tsv", "control_path": "b/c.tsv"}
      ]
    })";
    CHECK_THROWS_AS(manifest_of(dup), ConfigError);
  }
  // empty experiment list
  {
    const std::string none = R"({
      "metric": "identity", "effect_type": "MD", "alpha": 0.05,
      "experiments": []
    })";
    CHECK_THROWS_AS(manifest_of(none), ConfigError);
  }
}

TEST_CASE("correlation manifests omit control files but need identity metric") {
  const std::string corr = R"({
    "metric": "identity", "effect_type": "CORR", "alpha": 0.05,
    "experiments": [
      {"task_id": "a", "display_name": "A", "mode": "classification",
       "treatment_path": "a/record.tsv"}
    ]
  })";
  CHECK(manifest_of(corr).effect_type == EffectFamily::Correlation);

  std::string bad_metric = corr;
  bad_metric.replace(bad_metric.find("identity"), 8, "accuracy");
  CHECK_THROWS_AS(manifest_of(bad_metric), ConfigError);

  // the same shape cannot be pooled as MD: there is no control side
  Manifest m = manifest_of(corr);
  m.effect_type = EffectFamily::MeanDifference;
  CHECK_THROWS_AS(validate_manifest(m), ConfigError);
}

TEST_CASE("manifest loader never crashes on arbitrary input") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    std::string junk;
    const std::size_t len = rng() % 200;
    for (std::size_t j = 0; j < len; ++j) {
      junk += static_cast<char>(rng() % 128);
    }
    CHECK_THROWS_AS(manifest_of(junk), ConfigError);
  }
}
