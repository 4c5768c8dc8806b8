#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nwmix/rational.hpp"

namespace nwmix {

/// phi(x) = (1+x) log(1+x) - x, for x > -1.
double chernoff_phi(double x);

// Binomial(m, q) tail bounds, mean mq.
double chernoff_upper_tail(double mean, double x);         // exp(-mq phi(x)),   P(X >= (1+x)mq)
double chernoff_lower_tail(double mean, double x);         // exp(-mq phi(-x)),  P(X <= (1-x)mq)
double chernoff_upper_tail_coarse(double mean, double x);  // exp(-mq x^2 / (2(1+x)))
double chernoff_lower_tail_coarse(double mean, double x);  // exp(-mq x^2 / 2)

/// x/720 - log(4(x + 2k)) - 5
double xk_residual(double x, std::uint32_t k);

/// Positive root of xk_residual by bisection, bracket [3600, 1e6] (doubled
/// while the sign change is missing). Residual <= 1e-9.
double solve_xk(std::uint32_t k);

/// The three conditions on beta, evaluated as written.
struct BetaConditions {
  bool expansion_margin;  // 1/(2 beta) - 8k/c > 1 + 1/(3 beta)
  bool chernoff_rate;     // phi(1/(3 beta)) > log(1/(3 beta)) / (6 beta)
  bool below_c_over_36;   // beta < c/36
  bool below_one_over_3e; // beta < 1/(3e)
  bool all() const { return expansion_margin && chernoff_rate && below_c_over_36 && below_one_over_3e; }
};

BetaConditions check_beta(double beta, double c, std::uint32_t k);

/// Largest beta = 2^-t / (3e), t >= 1, meeting every condition.
double solve_beta(double c, std::uint32_t k);

/// A positive number carried as its natural log, for constants (delta) that
/// underflow double precision.
struct LogScaled {
  double log_value = 0.0;
  double value() const;             // 0 when it underflows
  std::string decimal() const;      // "m.mmmmmmmmme-XXXX"
};

enum class Regime { large_c, small_c };
std::string to_string(Regime regime);

/// Proof constants for a (c, k) pair. The small-c fields are only filled
/// when regime == small_c.
struct ConstantSet {
  Rational c;
  std::uint32_t k = 1;
  double x_k = 0.0;
  double x_1 = 0.0;
  double M = 0.0;  // k + 1 + 10 max(x_k, c)
  Regime regime = Regime::small_c;

  double beta = 0.0;
  std::uint64_t R = 0;            // ceil(max(k, 2 x_1 / c))
  Rational epsilon;               // c / (12 R (2Rc + 1))
  std::uint64_t delta_halvings = 0;  // delta = epsilon * 2^-delta_halvings
  LogScaled delta;
  std::uint64_t gamma_halvings = 0;  // gamma = 9 beta c / (20 R) * 2^-gamma_halvings
  double gamma = 0.0;
  LogScaled alpha;
  std::string alpha_source;       // "gamma", "epsilon" or "delta"

  struct Residual {
    std::string name;
    double slack;  // lhs - rhs, oriented so that >= 0 (or > 0 for strict) holds
    bool strict;
    bool holds() const { return strict ? slack > 0 : slack >= 0; }
  };
  std::vector<Residual> residuals;

  bool all_hold() const;
  std::string to_json() const;
};

/// c / (12 R (2Rc + 1))
Rational small_c_epsilon(const Rational& c, std::uint64_t R);

/// Small-c constants; throws ValidationError when c > x_k.
ConstantSet solve_small_c_constants(const Rational& c, std::uint32_t k);

/// Regime-aware: small-c constants when c <= x_k, otherwise x_k and M only.
ConstantSet solve_constants(const Rational& c, std::uint32_t k);

/// 2n C(n+2m-1, 2m-1)
BigInt cycle_subset_count(std::uint32_t n, std::uint32_t m);

/// histogram[r] = number of subsets of the n-cycle with r cyclic runs
/// (the full cycle counts as one run). Exhaustive; refuses n > 20.
std::vector<std::uint64_t> cycle_component_histogram(std::uint32_t n);

/// Subsets of the n-cycle with at most m runs.
std::uint64_t cycle_subset_tally(std::uint32_t n, std::uint32_t m);

/// n (4(c + 2k))^j
Rational expected_Bj_bound(std::uint32_t n, const Rational& c, std::uint32_t k, std::uint32_t j);

}  // namespace nwmix
