#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace nwmix {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "7", "-3/4", "2.5" or "1e-3" into an exact rational. Decimal input
/// is read digit-for-digit, so "0.1" is exactly 1/10.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when q = 1.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

/// num/den in canonical form (gmpxx leaves two-argument construction unreduced).
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// (m)_j = m (m-1) ... (m-j+1); zero when j > m.
BigInt falling_factorial(std::uint64_t m, std::uint64_t j);

Rational pow(const Rational& base, std::uint64_t exponent);

/// "%.17g", or "inf".
std::string format_double(double v);

}  // namespace nwmix
