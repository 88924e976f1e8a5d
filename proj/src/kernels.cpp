#include "metaeval/kernels.hpp"

#include <atomic>

namespace metaeval::kernels {

namespace {

struct Table {
  Backend id;
  double (*sum)(std::span<const double>);
  double (*sum_diff)(std::span<const double>, std::span<const double>);
  double (*sum_sq_dev_diff)(std::span<const double>, std::span<const double>,
                            double);
  CenteredMoments (*centered_moments)(std::span<const double>, double,
                                      std::span<const double>, double);
};

constexpr Table kScalarTable{Backend::Scalar, &scalar::sum, &scalar::sum_diff,
                             &scalar::sum_sq_dev_diff,
                             &scalar::centered_moments};

#if defined(METAEVAL_HAVE_AVX2)
constexpr Table kAvx2Table{Backend::Avx2, &avx2::sum, &avx2::sum_diff,
                           &avx2::sum_sq_dev_diff, &avx2::centered_moments};
#endif

#if defined(METAEVAL_HAVE_NEON)
constexpr Table kNeonTable{Backend::Neon, &neon::sum, &neon::sum_diff,
                           &neon::sum_sq_dev_diff, &neon::centered_moments};
#endif

const Table* detect() {
#if defined(METAEVAL_HAVE_AVX2)
  if (avx2::supported()) return &kAvx2Table;
#endif
#if defined(METAEVAL_HAVE_NEON)
  return &kNeonTable;  // baseline on aarch64
#endif
  return &kScalarTable;
}

std::atomic<const Table*> g_table{nullptr};

const Table* table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = detect();
    g_table.store(t, std::memory_order_release);
  }
  return t;
}

}  // namespace

double sum(std::span<const double> x) { return table()->sum(x); }

double sum_diff(std::span<const double> a, std::span<const double> b) {
  return table()->sum_diff(a, b);
}

double sum_sq_dev_diff(std::span<const double> a, std::span<const double> b,
                       double center) {
  return table()->sum_sq_dev_diff(a, b, center);
}

CenteredMoments centered_moments(std::span<const double> a, double mean_a,
                                 std::span<const double> b, double mean_b) {
  return table()->centered_moments(a, mean_a, b, mean_b);
}

Backend active_backend() { return table()->id; }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool set_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      g_table.store(&kScalarTable);
      return true;
    case Backend::Avx2:
#if defined(METAEVAL_HAVE_AVX2)
      if (avx2::supported()) {
        g_table.store(&kAvx2Table);
        return true;
      }
#endif
      return false;
    case Backend::Neon:
#if defined(METAEVAL_HAVE_NEON)
      g_table.store(&kNeonTable);
      return true;
#else
      return false;
#endif
  }
  return false;
}

}  // namespace metaeval::kernels
