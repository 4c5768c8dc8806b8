#include "nwmix/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "nwmix/error.hpp"

namespace nwmix {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ValidationError("empty rational literal");

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational result;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ValidationError("bad rational literal '" + original + "'");
    const BigInt d{std::string(den)};
    if (d == 0) throw ValidationError("zero denominator in '" + original + "'");
    result = Rational(BigInt{std::string(num)}, d);
    result.canonicalize();
  } else {
    long exponent = 0;
    std::string_view mantissa = text;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = text.substr(0, e);
      std::string exp_text(text.substr(e + 1));
      char* end = nullptr;
      exponent = std::strtol(exp_text.c_str(), &end, 10);
      if (exp_text.empty() || *end != '\0') throw ValidationError("bad exponent in '" + original + "'");
    }
    std::string digits;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      const auto whole = mantissa.substr(0, dot);
      const auto frac = mantissa.substr(dot + 1);
      if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
          (whole.empty() && frac.empty()))
        throw ValidationError("bad rational literal '" + original + "'");
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(mantissa)) throw ValidationError("bad rational literal '" + original + "'");
      digits = std::string(mantissa);
    }
    BigInt value(digits);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    result = exponent < 0 ? Rational(value, scale) : Rational(value * scale);
    result.canonicalize();
  }
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt falling_factorial(std::uint64_t m, std::uint64_t j) {
  if (j > m) return 0;
  BigInt out = 1;
  for (std::uint64_t i = 0; i < j; ++i) out *= static_cast<unsigned long>(m - i);
  return out;
}

Rational pow(const Rational& base, std::uint64_t exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace nwmix
