// NEON backend. float64x2 registers are two lanes wide, so a pair of
// registers carries the four accumulators: lo = lanes 0,1 and hi = lanes
// 2,3. Tail and combine follow the scalar reference exactly.

#include "metaeval/kernels.hpp"

#if defined(METAEVAL_HAVE_NEON)

#include <arm_neon.h>

namespace metaeval::kernels::neon {

namespace {

inline double drain4(float64x2_t lo, float64x2_t hi, std::size_t main,
                     std::size_t n, const double* tail_of) {
  double l[4];
  vst1q_f64(l, lo);
  vst1q_f64(l + 2, hi);
  for (std::size_t i = main; i < n; ++i) l[i - main] += tail_of[i];
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const std::size_t main = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < main; i += 4) {
    lo = vaddq_f64(lo, vld1q_f64(p + i));
    hi = vaddq_f64(hi, vld1q_f64(p + i + 2));
  }
  return drain4(lo, hi, main, n, p);
}

double sum_diff(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < main; i += 4) {
    lo = vaddq_f64(lo, vsubq_f64(vld1q_f64(pa + i), vld1q_f64(pb + i)));
    hi = vaddq_f64(hi, vsubq_f64(vld1q_f64(pa + i + 2), vld1q_f64(pb + i + 2)));
  }
  double l[4];
  vst1q_f64(l, lo);
  vst1q_f64(l + 2, hi);
  for (std::size_t i = main; i < n; ++i) l[i - main] += pa[i] - pb[i];
  return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < main; i += 4) {
    const float64x2_t d0 =
        vsubq_f64(vsubq_f64(vld1q_f64(pa + i), vld1q_f64(pb + i)), c);
    const float64x2_t d1 =
        vsubq_f64(vsubq_f64(vld1q_f64(pa + i + 2), vld1q_f64(pb + i + 2)), c);
    lo = vaddq_f64(lo, vmulq_f64(d0, d0));
    hi = vaddq_f64(hi, vmulq_f64(d1, d1));
  }
  double l[4];
  vst1q_f64(l, lo);
  vst1q_f64(l + 2, hi);
  for (std::size_t i = main; i < n; ++i) {
    const double d = (pa[i] - pb[i]) - center;
    l[i - main] += d * d;
  }
  return (l[0] + l[1]) + (l[2] + l[3]);
}

CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  const float64x2_t ma = vdupq_n_f64(mean_a);
  const float64x2_t mb = vdupq_n_f64(mean_b);
  float64x2_t xx_lo = vdupq_n_f64(0.0), xx_hi = vdupq_n_f64(0.0);
  float64x2_t yy_lo = vdupq_n_f64(0.0), yy_hi = vdupq_n_f64(0.0);
  float64x2_t xy_lo = vdupq_n_f64(0.0), xy_hi = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < main; i += 4) {
    const float64x2_t dx0 = vsubq_f64(vld1q_f64(pa + i), ma);
    const float64x2_t dx1 = vsubq_f64(vld1q_f64(pa + i + 2), ma);
    const float64x2_t dy0 = vsubq_f64(vld1q_f64(pb + i), mb);
    const float64x2_t dy1 = vsubq_f64(vld1q_f64(pb + i + 2), mb);
    xx_lo = vaddq_f64(xx_lo, vmulq_f64(dx0, dx0));
    xx_hi = vaddq_f64(xx_hi, vmulq_f64(dx1, dx1));
    yy_lo = vaddq_f64(yy_lo, vmulq_f64(dy0, dy0));
    yy_hi = vaddq_f64(yy_hi, vmulq_f64(dy1, dy1));
    xy_lo = vaddq_f64(xy_lo, vmulq_f64(dx0, dy0));
    xy_hi = vaddq_f64(xy_hi, vmulq_f64(dx1, dy1));
  }
  double lxx[4], lyy[4], lxy[4];
  vst1q_f64(lxx, xx_lo);
  vst1q_f64(lxx + 2, xx_hi);
  vst1q_f64(lyy, yy_lo);
  vst1q_f64(lyy + 2, yy_hi);
  vst1q_f64(lxy, xy_lo);
  vst1q_f64(lxy + 2, xy_hi);
  for (std::size_t i = main; i < n; ++i) {
    const double dx = pa[i] - mean_a;
    const double dy = pb[i] - mean_b;
    lxx[i - main] += dx * dx;
    lyy[i - main] += dy * dy;
    lxy[i - main] += dx * dy;
  }
  return CenteredMoments{(lxx[0] + lxx[1]) + (lxx[2] + lxx[3]),
                         (lyy[0] + lyy[1]) + (lyy[2] + lyy[3]),
                         (lxy[0] + lxy[1]) + (lxy[2] + lxy[3])};
}

}  // namespace metaeval::kernels::neon

#endif  // METAEVAL_HAVE_NEON
