#pragma once

#include <string>
#include <vector>

#include "metaeval/effects.hpp"

namespace metaeval {

struct Interval {
  double lo;
  double hi;
};

// One pooled task. Weights are inverse-variance (fixed) and inverse of
// variance plus tau^2 (adjusted); weight_share is the adjusted weight as a
// fraction of the adjusted total. The interval is in display space: for
// correlations it is the back-transformed z interval, otherwise the plain
// normal interval around the effect.
struct TaskResult {
  std::string task_id;
  EffectSize effect;
  double fixed_weight;
  double adjusted_weight;
  double weight_share;
  Interval ci;
};

struct SummaryEffect {
  double value;     // in analysis space (Fisher z for correlations)
  double variance;  // of the analysis-space summary
  double display_value;
  Interval ci;  // display space
};

struct PooledResult {
  EffectFamily family;
  double alpha;
  std::vector<TaskResult> per_task;
  double q;            // Cochran heterogeneity statistic
  double tau_squared;  // DerSimonian-Laird between-task variance
  SummaryEffect summary;
};

struct LabeledEffect {
  std::string task_id;
  EffectSize effect;
};

// Quantile of the standard normal distribution for p in (0, 1).
double normal_ppf(double p);

// Central (1 - alpha) normal interval around value with the given variance.
Interval confidence_interval(double value, double variance, double alpha);

// DerSimonian-Laird random-effects pooling. All effects must come from the
// same family; with a single task the summary is that task's effect and
// tau^2 is zero. Zero-variance tasks cannot be pooled with others.
PooledResult pool(const std::vector<LabeledEffect>& effects, double alpha);

}  // namespace metaeval
