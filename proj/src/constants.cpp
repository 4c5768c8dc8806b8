#include "nwmix/constants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>
#include <stdexcept>

#include "nwmix/error.hpp"

namespace nwmix {

double chernoff_phi(double x) {
  if (!(x > -1.0)) throw ValidationError("chernoff_phi is defined for x > -1");
  return (1.0 + x) * std::log1p(x) - x;
}

double chernoff_upper_tail(double mean, double x) { return std::exp(-mean * chernoff_phi(x)); }
double chernoff_lower_tail(double mean, double x) { return std::exp(-mean * chernoff_phi(-x)); }
double chernoff_upper_tail_coarse(double mean, double x) { return std::exp(-mean * x * x / (2.0 * (1.0 + x))); }
double chernoff_lower_tail_coarse(double mean, double x) { return std::exp(-mean * x * x / 2.0); }

double xk_residual(double x, std::uint32_t k) { return x / 720.0 - std::log(4.0 * (x + 2.0 * k)) - 5.0; }

double solve_xk(std::uint32_t k) {
  if (k < 1) throw ValidationError("solve_xk needs k >= 1");
  // The log term is positive, so the root lies beyond 720 * 5.
  double lo = 3600.0, hi = 1e6;
  if (!(xk_residual(lo, k) < 0)) throw std::logic_error("x_k bracket: residual at 3600 is not negative");
  while (!(xk_residual(hi, k) > 0)) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (xk_residual(mid, k) < 0 ? lo : hi) = mid;
  }
  const double root = std::fabs(xk_residual(lo, k)) <= std::fabs(xk_residual(hi, k)) ? lo : hi;
  if (std::fabs(xk_residual(root, k)) > 1e-9) throw std::logic_error("x_k bisection did not reach 1e-9");
  if (root < 40) throw std::logic_error("x_k below 40");
  return root;
}

BetaConditions check_beta(double beta, double c, std::uint32_t k) {
  const double third = 1.0 / (3.0 * beta);
  return {
      1.0 / (2.0 * beta) - 8.0 * k / c > 1.0 + third,
      chernoff_phi(third) > std::log(third) / (6.0 * beta),
      beta < c / 36.0,
      beta < 1.0 / (3.0 * std::numbers::e),
  };
}

double solve_beta(double c, std::uint32_t k) {
  if (!(c > 0)) throw ValidationError("solve_beta needs c > 0");
  const double top = 1.0 / (3.0 * std::numbers::e);
  for (int t = 1; t < 1000; ++t) {
    const double beta = std::ldexp(top, -t);
    if (check_beta(beta, c, k).all()) return beta;
  }
  throw std::logic_error("no grid value of beta satisfies the conditions");
}

double LogScaled::value() const { return std::exp(log_value); }

std::string LogScaled::decimal() const {
  const double l10 = log_value / std::numbers::ln10;
  double exponent = std::floor(l10);
  double mantissa = std::pow(10.0, l10 - exponent);
  if (mantissa >= 9.9999999995) {
    mantissa /= 10;
    exponent += 1;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9fe%+.0f", mantissa, exponent);
  return buf;
}

std::string to_string(Regime regime) { return regime == Regime::large_c ? "large-c" : "small-c"; }

bool ConstantSet::all_hold() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.holds(); });
}

namespace {

double gamma_rate(double gamma) { return 2.0 * gamma * (1.0 + std::log(1.0 + 1.0 / (2.0 * gamma))); }

void add_common(ConstantSet& out) {
  out.residuals.push_back({"x_k equation |residual| <= 1e-9", 1e-9 - std::fabs(xk_residual(out.x_k, out.k)), false});
  out.residuals.push_back({"x_k >= 40", out.x_k - 40.0, false});
  out.residuals.push_back(
      {"M = k + 1 + 10 max(x_k, c)",
       -std::fabs(out.M - (out.k + 1 + 10.0 * std::max(out.x_k, out.c.get_d()))), false});
}

}  // namespace

Rational small_c_epsilon(const Rational& c, std::uint64_t R) {
  if (R < 1) throw ValidationError("group size R must be >= 1");
  const Rational r(static_cast<unsigned long>(R));
  return c / (12 * r * (2 * r * c + 1));
}

ConstantSet solve_small_c_constants(const Rational& c, std::uint32_t k) {
  if (c <= 0) throw ValidationError("small-c constants need c > 0");
  ConstantSet out;
  out.c = c;
  out.k = k;
  out.x_k = solve_xk(k);
  out.x_1 = k == 1 ? out.x_k : solve_xk(1);
  const double cd = c.get_d();
  if (cd > out.x_k)
    throw ValidationError("c = " + to_string(c) + " exceeds x_k = " + std::to_string(out.x_k) +
                          "; use the large-c regime");
  out.regime = Regime::small_c;
  out.M = k + 1 + 10.0 * std::max(out.x_k, cd);
  add_common(out);
  out.residuals.push_back({"regime: c <= x_k", out.x_k - cd, false});

  out.beta = solve_beta(cd, k);
  const double third = 1.0 / (3.0 * out.beta);
  out.residuals.push_back({"beta: 1/(2b) - 8k/c > 1 + 1/(3b)", (1.0 / (2.0 * out.beta) - 8.0 * k / cd) - (1.0 + third), true});
  out.residuals.push_back({"beta: phi(1/(3b)) > log(1/(3b))/(6b)", chernoff_phi(third) - std::log(third) / (6.0 * out.beta), true});
  out.residuals.push_back({"beta < c/36", cd / 36.0 - out.beta, true});
  out.residuals.push_back({"beta < 1/(3e)", 1.0 / (3.0 * std::numbers::e) - out.beta, true});

  const double r_real = std::max<double>(k, 2.0 * out.x_1 / cd);
  out.R = static_cast<std::uint64_t>(std::ceil(r_real));
  out.residuals.push_back({"R >= max(k, 2 x_1 / c)", static_cast<double>(out.R) - r_real, false});
  out.residuals.push_back({"R - 1 < max(k, 2 x_1 / c)", r_real - static_cast<double>(out.R - 1), true});

  const Rational R(static_cast<unsigned long>(out.R));
  out.epsilon = small_c_epsilon(c, out.R);
  out.residuals.push_back({"epsilon * 12R(2Rc+1) = c", out.epsilon * 12 * R * (2 * R * c + 1) == c ? 0.0 : -1.0, false});

  // delta = epsilon * 2^-t. Condition (a) is exact: c 2^t >= 2k.
  const double target = 5.0 + std::log(4.0 * (cd + 2.0 * k));
  const double rate = Rational(out.epsilon * R * c).get_d();
  auto delta_ok = [&](std::uint64_t t) {
    BigInt two_t;
    mpz_ui_pow_ui(two_t.get_mpz_t(), 2, t);
    const bool small_vs_epsilon = c * two_t >= 2 * k;
    const bool rate_ok = rate * (static_cast<double>(t) * std::numbers::ln2 - 1.0) >= target;
    return small_vs_epsilon && rate_ok;
  };
  std::uint64_t t = static_cast<std::uint64_t>(std::max(0.0, std::ceil((target / rate + 1.0) / std::numbers::ln2)));
  while (!delta_ok(t)) ++t;
  while (t > 0 && delta_ok(t - 1)) --t;
  out.delta_halvings = t;
  const double log_epsilon = std::log(out.epsilon.get_d());
  out.delta.log_value = log_epsilon - static_cast<double>(t) * std::numbers::ln2;
  out.residuals.push_back({"delta: log(epsilon c) - log(2k delta) >= 0",
                           std::log(cd) + log_epsilon - std::log(2.0 * k) - out.delta.log_value, false});
  out.residuals.push_back({"delta: epsilon R c (log(epsilon/delta) - 1) >= 5 + log(4(c+2k))",
                           rate * (static_cast<double>(t) * std::numbers::ln2 - 1.0) - target, false});

  const double gamma_cap = 9.0 * out.beta * cd / (20.0 * static_cast<double>(out.R));
  const double gamma_rate_cap = 9.0 * out.beta * cd / (320.0 * static_cast<double>(out.R));
  std::uint64_t g = 1;
  while (gamma_rate(std::ldexp(gamma_cap, -static_cast<int>(g))) > gamma_rate_cap) {
    if (++g > 4000) throw std::logic_error("gamma search did not terminate");
  }
  out.gamma_halvings = g;
  out.gamma = std::ldexp(gamma_cap, -static_cast<int>(g));
  out.residuals.push_back({"gamma < 9 beta c / (20R)", gamma_cap - out.gamma, true});
  out.residuals.push_back({"gamma: 2g(1 + log(1 + 1/(2g))) <= 9 beta c / (320R)",
                           gamma_rate_cap - gamma_rate(out.gamma), false});

  const double log_gamma = std::log(out.gamma);
  out.alpha.log_value = std::min({log_gamma, log_epsilon, out.delta.log_value});
  out.alpha_source = out.alpha.log_value == out.delta.log_value ? "delta"
                     : out.alpha.log_value == log_epsilon       ? "epsilon"
                                                                : "gamma";
  out.residuals.push_back(
      {"alpha = min(gamma, epsilon, delta)",
       -std::fabs(out.alpha.log_value - std::min({log_gamma, log_epsilon, out.delta.log_value})), false});
  return out;
}

ConstantSet solve_constants(const Rational& c, std::uint32_t k) {
  if (c <= 0) throw ValidationError("constants need c > 0");
  const double x_k = solve_xk(k);
  if (c.get_d() <= x_k) return solve_small_c_constants(c, k);
  ConstantSet out;
  out.c = c;
  out.k = k;
  out.x_k = x_k;
  out.x_1 = k == 1 ? x_k : solve_xk(1);
  out.regime = Regime::large_c;
  out.M = k + 1 + 10.0 * std::max(x_k, c.get_d());
  add_common(out);
  out.residuals.push_back({"regime: c > x_k", c.get_d() - x_k, true});
  return out;
}

namespace {

nlohmann::ordered_json number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return nlohmann::ordered_json{{"decimal", buf}};
}

}  // namespace

std::string ConstantSet::to_json() const {
  nlohmann::ordered_json j;
  j["c"] = {{"decimal", number(c.get_d())["decimal"]}, {"exact", nwmix::to_string(c)}};
  j["k"] = k;
  j["regime"] = nwmix::to_string(regime);
  j["x_k"] = number(x_k);
  j["x_1"] = number(x_1);
  j["M"] = number(M);
  if (regime == Regime::small_c) {
    j["beta"] = number(beta);
    j["R"] = R;
    j["epsilon"] = {{"decimal", number(epsilon.get_d())["decimal"]}, {"exact", nwmix::to_string(epsilon)}};
    j["delta"] = {{"decimal", delta.decimal()},
                  {"log", number(delta.log_value)["decimal"]},
                  {"exact", "epsilon*2^-" + std::to_string(delta_halvings)}};
    j["gamma"] = {{"decimal", number(gamma)["decimal"]}, {"halvings", gamma_halvings}};
    j["alpha"] = {{"decimal", alpha.decimal()}, {"log", number(alpha.log_value)["decimal"]}, {"source", alpha_source}};
  }
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : residuals)
    rows.push_back({{"name", r.name}, {"slack", number(r.slack)["decimal"]}, {"strict", r.strict}, {"holds", r.holds()}});
  j["residuals"] = std::move(rows);
  j["all_hold"] = all_hold();
  return j.dump(2);
}

BigInt cycle_subset_count(std::uint32_t n, std::uint32_t m) {
  if (n < 3 || m < 1) throw ValidationError("cycle_subset_count needs n >= 3 and m >= 1");
  return 2 * BigInt(n) * binomial(n + 2ull * m - 1, 2ull * m - 1);
}

std::vector<std::uint64_t> cycle_component_histogram(std::uint32_t n) {
  if (n < 3) throw ValidationError("cycle enumeration needs n >= 3");
  if (n > 20) throw ValidationError("exhaustive cycle enumeration refused for n > 20");
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint64_t> histogram(n / 2 + 2, 0);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    // A run starts at i when i is in the set and i-1 (cyclically) is not.
    const std::uint32_t prev = ((mask << 1) | (mask >> (n - 1))) & full;
    std::uint32_t runs = static_cast<std::uint32_t>(std::popcount(mask & ~prev));
    if (mask == full) runs = 1;
    ++histogram[runs];
  }
  return histogram;
}

std::uint64_t cycle_subset_tally(std::uint32_t n, std::uint32_t m) {
  const auto histogram = cycle_component_histogram(n);
  std::uint64_t total = 0;
  for (std::uint32_t r = 0; r < histogram.size() && r <= m; ++r) total += histogram[r];
  return total;
}

Rational expected_Bj_bound(std::uint32_t n, const Rational& c, std::uint32_t k, std::uint32_t j) {
  if (j < 1) throw ValidationError("expected_Bj_bound needs j >= 1");
  return Rational(n) * pow(Rational(4 * (c + 2 * k)), j);
}

}  // namespace nwmix
