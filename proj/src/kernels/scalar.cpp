#include <cmath>

#include "nwmix/kernels.hpp"

namespace nwmix::kernels {

namespace {

void scale(std::span<const double> x, std::span<const double> w, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * w[i];
}

void lazy_gather(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> targets,
                 std::span<const double> mu, std::span<const double> flow, std::span<double> out) {
  const std::size_t n = mu.size();
  for (std::size_t y = 0; y < n; ++y) {
    double acc = 0.0;
    for (std::uint32_t e = offsets[y]; e < offsets[y + 1]; ++e) acc += flow[targets[e]];
    out[y] = 0.5 * mu[y] + acc;
  }
}

double half_l1(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
  return 0.5 * acc;
}

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::scalar, &scale, &lazy_gather, &half_l1, &sum};
  return table;
}

}  // namespace nwmix::kernels
