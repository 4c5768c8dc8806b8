#include <immintrin.h>

#include <cmath>

#include "nwmix/kernels.hpp"

namespace nwmix::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void scale(std::span<const double> x, std::span<const double> w, std::span<double> out) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(w.data() + i)));
  for (; i < n; ++i) out[i] = x[i] * w[i];
}

// Rows of a sparse small-world graph are short (2k plus a few shortcuts), so
// each row gathers four neighbours per instruction and folds the tail.
void lazy_gather(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> targets,
                 std::span<const double> mu, std::span<const double> flow, std::span<double> out) {
  const std::size_t n = mu.size();
  const auto* idx = reinterpret_cast<const int*>(targets.data());
  const double* base = flow.data();
  for (std::size_t y = 0; y < n; ++y) {
    std::uint32_t e = offsets[y];
    const std::uint32_t end = offsets[y + 1];
    double acc = 0.0;
    if (end - e >= 4) {
      __m256d vacc = _mm256_setzero_pd();
      for (; e + 4 <= end; e += 4) {
        const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + e));
        vacc = _mm256_add_pd(vacc, _mm256_i32gather_pd(base, vi, 8));
      }
      acc = hsum(vacc);
    }
    for (; e < end; ++e) acc += flow[targets[e]];
    out[y] = 0.5 * mu[y] + acc;
  }
}

double half_l1(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(sign, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(sign, d1));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return 0.5 * acc;
}

double sum(std::span<const double> x) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + 4));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const KernelTable& avx2_table_impl() noexcept {
  static const KernelTable table{Isa::avx2, &scale, &lazy_gather, &half_l1, &sum};
  return table;
}

}  // namespace nwmix::kernels
