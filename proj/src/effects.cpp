#include "metaeval/effects.hpp"

#include <algorithm>
#include <cmath>

#include "metaeval/error.hpp"
#include "metaeval/kernels.hpp"

namespace metaeval {

PairedStats paired_stats(const PairedSamples& samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw DataError("paired statistics require at least 2 aligned samples");
  }
  const std::span<const double> t(samples.treatment);
  const std::span<const double> c(samples.control);
  const double dn = static_cast<double>(n);

  const double mean_diff = kernels::sum_diff(t, c) / dn;
  const double ss_diff = kernels::sum_sq_dev_diff(t, c, mean_diff);
  const double s_diff = std::sqrt(ss_diff / (dn - 1.0));

  const double mean_t = kernels::sum(t) / dn;
  const double mean_c = kernels::sum(c) / dn;
  const kernels::CenteredMoments m =
      kernels::centered_moments(t, mean_t, c, mean_c);

  PairedStats stats;
  stats.n = static_cast<int>(n);
  stats.mean_diff = mean_diff;
  stats.s_diff = s_diff;
  stats.r_defined = m.xx > 0.0 && m.yy > 0.0;
  stats.r_pair = 0.0;
  if (stats.r_defined) {
    const double r = m.xy / std::sqrt(m.xx * m.yy);
    stats.r_pair = std::clamp(r, -1.0, 1.0);
  }
  return stats;
}

EffectSize effect_md(const PairedStats& stats) {
  EffectSize e;
  e.family = EffectFamily::MeanDifference;
  e.value = stats.mean_diff;
  e.variance = stats.s_diff * stats.s_diff / static_cast<double>(stats.n);
  e.n = stats.n;
  e.display_value = e.value;
  return e;
}

EffectSize effect_smd(const PairedStats& stats) {
  if (stats.s_diff == 0.0) {
    throw StatError(
        "treatment and control differ by a constant; "
        "standardized mean difference is undefined");
  }
  if (!stats.r_defined || stats.r_pair >= 1.0) {
    // 2(1-r) collapses to zero (or r itself is undefined), so the within
    // standard deviation cannot be recovered from the difference scores.
    throw StatError(
        "treatment/control correlation is degenerate; "
        "standardized mean difference is undefined");
  }
  const double n = static_cast<double>(stats.n);
  const double s_within = stats.s_diff / std::sqrt(2.0 * (1.0 - stats.r_pair));
  const double d = stats.mean_diff / s_within;
  const double v_d = (1.0 / n + d * d / (2.0 * n)) * 2.0 * (1.0 - stats.r_pair);
  const double df = n - 1.0;
  const double j = 1.0 - 3.0 / (4.0 * df - 1.0);

  EffectSize e;
  e.family = EffectFamily::StandardizedMeanDifference;
  e.value = j * d;
  e.variance = j * j * v_d;
  e.n = stats.n;
  e.display_value = e.value;
  return e;
}

EffectSize effect_corr(double r, int n) {
  if (!(r > -1.0 && r < 1.0)) {
    throw StatError("correlation must lie strictly between -1 and 1");
  }
  if (n <= 3) {
    throw StatError("correlation effects require at least 4 samples");
  }
  EffectSize e;
  e.family = EffectFamily::Correlation;
  e.value = fisher_z(r);
  e.variance = 1.0 / (static_cast<double>(n) - 3.0);
  e.n = n;
  e.display_value = r;
  return e;
}

double fisher_z(double r) { return 0.5 * std::log((1.0 + r) / (1.0 - r)); }

double fisher_backtransform(double z) { return std::tanh(z); }

double corr_reporting_variance(double r, int n) {
  const double one_minus_r2 = 1.0 - r * r;
  return one_minus_r2 * one_minus_r2 / (static_cast<double>(n) - 1.0);
}

}  // namespace metaeval
