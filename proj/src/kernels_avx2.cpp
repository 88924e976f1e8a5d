// AVX2 backend. Mirrors the scalar reference lane-for-lane: one __m256d
// register holds the four accumulators, the tail continues the lane pattern
// on the spilled lanes, and the final combine is (l0+l1)+(l2+l3). No FMA,
// so results stay bit-identical to the scalar backend.

#include "metaeval/kernels.hpp"

#if defined(METAEVAL_HAVE_AVX2)

#include <immintrin.h>

namespace metaeval::kernels::avx2 {

namespace {

inline double drain(__m256d acc, std::size_t main, std::size_t n,
                    const double* tail_of) {
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  for (std::size_t i = main; i < n; ++i) l[i - main] += tail_of[i];
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace

bool supported() { return __builtin_cpu_supports("avx2") != 0; }

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const std::size_t main = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  return drain(acc, main, n, p);
}

double sum_diff(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    acc = _mm256_add_pd(acc, d);
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  for (std::size_t i = main; i < n; ++i) l[i - main] += pa[i] - pb[i];
  return (l[0] + l[1]) + (l[2] + l[3]);
}

double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d d = _mm256_sub_pd(
        _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i)), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
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
  const __m256d ma = _mm256_set1_pd(mean_a);
  const __m256d mb = _mm256_set1_pd(mean_b);
  __m256d xx = _mm256_setzero_pd();
  __m256d yy = _mm256_setzero_pd();
  __m256d xy = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pa + i), ma);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pb + i), mb);
    xx = _mm256_add_pd(xx, _mm256_mul_pd(dx, dx));
    yy = _mm256_add_pd(yy, _mm256_mul_pd(dy, dy));
    xy = _mm256_add_pd(xy, _mm256_mul_pd(dx, dy));
  }
  alignas(32) double lxx[4], lyy[4], lxy[4];
  _mm256_store_pd(lxx, xx);
  _mm256_store_pd(lyy, yy);
  _mm256_store_pd(lxy, xy);
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

}  // namespace metaeval::kernels::avx2

#endif  // METAEVAL_HAVE_AVX2
