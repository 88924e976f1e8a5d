// Reference backend. The four-accumulator blocked order below is the
// contract every SIMD backend must reproduce bit-for-bit: lane j of a
// vector register corresponds to acc[j], tail elements continue the lane
// pattern, and the lanes collapse as (acc0+acc1)+(acc2+acc3).

#include "metaeval/kernels.hpp"

namespace metaeval::kernels::scalar {

namespace {

inline double combine(const double acc[4]) {
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

}  // namespace

double sum(std::span<const double> x) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = x.size();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t i = main; i < n; ++i) acc[i - main] += x[i];
  return combine(acc);
}

double sum_diff(std::span<const double> a, std::span<const double> b) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    acc[0] += a[i] - b[i];
    acc[1] += a[i + 1] - b[i + 1];
    acc[2] += a[i + 2] - b[i + 2];
    acc[3] += a[i + 3] - b[i + 3];
  }
  for (std::size_t i = main; i < n; ++i) acc[i - main] += a[i] - b[i];
  return combine(acc);
}

double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    const double d0 = (a[i] - b[i]) - center;
    const double d1 = (a[i + 1] - b[i + 1]) - center;
    const double d2 = (a[i + 2] - b[i + 2]) - center;
    const double d3 = (a[i + 3] - b[i + 3]) - center;
    acc[0] += d0 * d0;
    acc[1] += d1 * d1;
    acc[2] += d2 * d2;
    acc[3] += d3 * d3;
  }
  for (std::size_t i = main; i < n; ++i) {
    const double d = (a[i] - b[i]) - center;
    acc[i - main] += d * d;
  }
  return combine(acc);
}

CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b) {
  double xx[4] = {0.0, 0.0, 0.0, 0.0};
  double yy[4] = {0.0, 0.0, 0.0, 0.0};
  double xy[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = a.size();
  const std::size_t main = n - n % 4;
  for (std::size_t i = 0; i < main; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double dx = a[i + j] - mean_a;
      const double dy = b[i + j] - mean_b;
      xx[j] += dx * dx;
      yy[j] += dy * dy;
      xy[j] += dx * dy;
    }
  }
  for (std::size_t i = main; i < n; ++i) {
    const double dx = a[i] - mean_a;
    const double dy = b[i] - mean_b;
    xx[i - main] += dx * dx;
    yy[i - main] += dy * dy;
    xy[i - main] += dx * dy;
  }
  return CenteredMoments{combine(xx), combine(yy), combine(xy)};
}

}  // namespace metaeval::kernels::scalar
