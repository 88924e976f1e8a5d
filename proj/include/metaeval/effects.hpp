#pragma once

#include "metaeval/metrics.hpp"

namespace metaeval {

// One task's effect: value is D, Hedges' g, or Fisher z depending on the
// family; display_value is the value shown to readers (the back-transformed
// correlation for the CORR family, the value itself otherwise).
struct EffectSize {
  EffectFamily family;
  double value;
  double variance;
  int n;
  double display_value;
};

// Moments of an aligned treatment/control pair: the mean pairwise
// difference, the sample standard deviation of the differences (n-1
// denominator), and the Pearson correlation of the two vectors.
struct PairedStats {
  int n;
  double mean_diff;
  double s_diff;
  double r_pair;
  bool r_defined;  // false when either vector is constant
};

PairedStats paired_stats(const PairedSamples& samples);

// Raw mean difference: value D, variance S_diff^2 / n.
EffectSize effect_md(const PairedStats& stats);

// Standardized mean difference with the small-sample correction always
// applied: d = D / S_within with S_within = S_diff / sqrt(2(1-r)), then
// g = J*d, V_g = J^2 * V_d with J = 1 - 3/(4(n-1) - 1).
EffectSize effect_smd(const PairedStats& stats);

// Correlation effect on the Fisher z scale: value z(r), variance 1/(n-3),
// display_value r. Requires -1 < r < 1 and n >= 4.
EffectSize effect_corr(double r, int n);

double fisher_z(double r);
double fisher_backtransform(double z);

// Variance of r itself, (1-r^2)^2/(n-1); reporting only, pooling always
// happens on the z scale.
double corr_reporting_variance(double r, int n);

}  // namespace metaeval
