#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Inner loops of the lazy-walk iteration. Every routine has a scalar
// reference and, where the target supports it, an AVX2 variant selected at
// runtime. The variants agree to rounding (see tests/test_kernels.cpp).
namespace nwmix::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // out[i] = x[i] * w[i]
  void (*scale)(std::span<const double> x, std::span<const double> w, std::span<double> out);

  // out[y] = 0.5 * mu[y] + sum over offsets[y] <= e < offsets[y+1] of flow[targets[e]]
  void (*lazy_gather)(std::span<const std::uint32_t> offsets, std::span<const std::uint32_t> targets,
                      std::span<const double> mu, std::span<const double> flow, std::span<double> out);

  // 0.5 * sum |a[i] - b[i]|
  double (*half_l1)(std::span<const double> a, std::span<const double> b);

  double (*sum)(std::span<const double> x);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Best supported table, unless NWMIX_KERNELS=scalar is set in the
/// environment or force_isa() was called.
const KernelTable& active() noexcept;

/// Pins the active table (tests and the --kernels CLI flag). Returns false if
/// the requested variant is unavailable; the previous choice then stays.
bool force_isa(Isa isa) noexcept;

}  // namespace nwmix::kernels
