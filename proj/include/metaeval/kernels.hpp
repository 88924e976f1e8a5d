#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace metaeval::kernels {

// Sums of centered products over a pair of equal-length vectors.
struct CenteredMoments {
  double xx;  // sum of (a[i]-mean_a)^2
  double yy;  // sum of (b[i]-mean_b)^2
  double xy;  // sum of (a[i]-mean_a)*(b[i]-mean_b)
};

// Reductions behind the paired-statistics hot path. Every backend evaluates
// the same fixed four-accumulator blocked order, so scalar, AVX2 and NEON
// produce bit-identical results and outputs never depend on the host CPU.
double sum(std::span<const double> x);
double sum_diff(std::span<const double> a, std::span<const double> b);
double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center);
CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b);

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
std::string_view backend_name(Backend b);

// Overrides dispatch; for equivalence tests and benchmarks. Returns false
// (and changes nothing) when the backend cannot run on this host.
bool set_backend(Backend b);

namespace scalar {
double sum(std::span<const double> x);
double sum_diff(std::span<const double> a, std::span<const double> b);
double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center);
CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b);
}  // namespace scalar

#if defined(METAEVAL_HAVE_AVX2)
namespace avx2 {
bool supported();  // runtime CPUID check
double sum(std::span<const double> x);
double sum_diff(std::span<const double> a, std::span<const double> b);
double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center);
CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b);
}  // namespace avx2
#endif

#if defined(METAEVAL_HAVE_NEON)
namespace neon {
double sum(std::span<const double> x);
double sum_diff(std::span<const double> a, std::span<const double> b);
double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center);
CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b);
}  // namespace neon
#endif

}  // namespace metaeval::kernels
