#include "metaeval/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metaeval/error.hpp"

namespace metaeval {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

constexpr double kSqrtTwoPi = 2.506628274631000502415765284811;

// Rational approximation for the standard normal quantile (Acklam's
// coefficients), good to ~1.15e-9 over the whole open interval.
double ppf_estimate(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_ppf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal quantile requires a probability in (0, 1)");
  }
  if (p == 0.5) {
    return 0.0;
  }
  double x = ppf_estimate(p);
  // One Halley step against the exact CDF pushes the estimate to full
  // double precision.
  const double e = normal_cdf(x) - p;
  const double u = e * kSqrtTwoPi * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

Interval confidence_interval(double value, double variance, double alpha) {
  if (!(variance >= 0.0)) {
    throw DomainError("effect variance must be non-negative");
  }
  const double half = normal_ppf(1.0 - alpha / 2.0) * std::sqrt(variance);
  return Interval{value - half, value + half};
}

namespace {

Interval display_interval(EffectFamily family, const Interval& analysis) {
  if (family == EffectFamily::Correlation) {
    return Interval{fisher_backtransform(analysis.lo),
                    fisher_backtransform(analysis.hi)};
  }
  return analysis;
}

double display_value(EffectFamily family, double value) {
  if (family == EffectFamily::Correlation) {
    return fisher_backtransform(value);
  }
  return value;
}

}  // namespace

PooledResult pool(const std::vector<LabeledEffect>& effects, double alpha) {
  if (effects.empty()) {
    throw StatError("nothing to pool: no effect sizes given");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie strictly between 0 and 1");
  }
  const EffectFamily family = effects.front().effect.family;
  for (const LabeledEffect& le : effects) {
    if (le.effect.family != family) {
      throw StatError("cannot pool effect sizes from different families");
    }
  }
  const std::size_t k = effects.size();

  PooledResult result;
  result.family = family;
  result.alpha = alpha;
  result.per_task.reserve(k);

  if (k == 1) {
    const LabeledEffect& le = effects.front();
    const EffectSize& e = le.effect;
    result.q = 0.0;
    result.tau_squared = 0.0;

    TaskResult task;
    task.task_id = le.task_id;
    task.effect = e;
    task.fixed_weight = e.variance > 0.0
                            ? 1.0 / e.variance
                            : std::numeric_limits<double>::infinity();
    task.adjusted_weight = task.fixed_weight;
    task.weight_share = 1.0;
    task.ci =
        display_interval(family, confidence_interval(e.value, e.variance, alpha));
    result.per_task.push_back(task);

    result.summary.value = e.value;
    result.summary.variance = e.variance;
    result.summary.display_value = display_value(family, e.value);
    result.summary.ci = task.ci;
    return result;
  }

  for (const LabeledEffect& le : effects) {
    if (le.effect.variance <= 0.0) {
      throw StatError("task '" + le.task_id +
                      "' has zero effect-size variance; it cannot be "
                      "combined with other tasks by inverse-variance "
                      "weighting");
    }
  }

  double sum_w = 0.0;
  double sum_wy = 0.0;
  double sum_wyy = 0.0;
  double sum_ww = 0.0;
  for (const LabeledEffect& le : effects) {
    const double w = 1.0 / le.effect.variance;
    const double y = le.effect.value;
    sum_w += w;
    sum_wy += w * y;
    sum_wyy += w * y * y;
    sum_ww += w * w;
  }

  const double q = std::max(0.0, sum_wyy - sum_wy * sum_wy / sum_w);
  const double df = static_cast<double>(k) - 1.0;
  const double c = sum_w - sum_ww / sum_w;
  const double tau_squared = std::max(0.0, (q - df) / c);

  double sum_w_adj = 0.0;
  double sum_wy_adj = 0.0;
  std::vector<double> adjusted(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / (effects[i].effect.variance + tau_squared);
    adjusted[i] = w;
    sum_w_adj += w;
    sum_wy_adj += w * effects[i].effect.value;
  }

  result.q = q;
  result.tau_squared = tau_squared;
  for (std::size_t i = 0; i < k; ++i) {
    const EffectSize& e = effects[i].effect;
    TaskResult task;
    task.task_id = effects[i].task_id;
    task.effect = e;
    task.fixed_weight = 1.0 / e.variance;
    task.adjusted_weight = adjusted[i];
    task.weight_share = adjusted[i] / sum_w_adj;
    task.ci =
        display_interval(family, confidence_interval(e.value, e.variance, alpha));
    result.per_task.push_back(task);
  }

  result.summary.value = sum_wy_adj / sum_w_adj;
  result.summary.variance = 1.0 / sum_w_adj;
  result.summary.display_value = display_value(family, result.summary.value);
  result.summary.ci = display_interval(
      family,
      confidence_interval(result.summary.value, result.summary.variance, alpha));
  return result;
}

}  // namespace metaeval
