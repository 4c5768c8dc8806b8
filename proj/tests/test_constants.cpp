#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nwmix/constants.hpp"
#include "nwmix/error.hpp"
#include "oracles.hpp"

using namespace nwmix;

TEST_SUITE("constants") {
  TEST_CASE("chernoff rate") {
    CHECK(chernoff_phi(0) == 0.0);
    for (double x : {0.1, 1.0, 10.0}) CHECK(chernoff_phi(x) >= x * x / (2 * (1 + x)));
    for (double x : {0.1, 0.5, 0.9}) CHECK(chernoff_phi(-x) >= x * x / 2);
    CHECK_THROWS(chernoff_phi(-1.0));
    CHECK(chernoff_upper_tail(10, 1) <= chernoff_upper_tail_coarse(10, 1));
    CHECK(chernoff_lower_tail(10, 0.5) <= chernoff_lower_tail_coarse(10, 0.5));
  }

  TEST_CASE("x_k") {
    double previous = 0;
    for (std::uint32_t k = 1; k <= 10; ++k) {
      const double x = solve_xk(k);
      CHECK(std::fabs(x / 720 - std::log(4 * (x + 2.0 * k)) - 5) <= 1e-9);
      CHECK(x >= 40);
      CHECK(x > previous);
      previous = x;
    }
    CHECK(solve_xk(1) == doctest::Approx(11318.9044370019).epsilon(1e-12));
  }

  TEST_CASE("beta") {
    for (auto [c, k] : {std::pair{1.0, 1u}, {5.0, 2u}, {40.0, 1u}}) {
      const double b = solve_beta(c, k);
      const double t = 1 / (3 * b);
      CHECK(1 / (2 * b) - 8 * k / c > 1 + t);
      CHECK((1 + t) * std::log(1 + t) - t > std::log(t) / (6 * b));
      CHECK(b < c / 36);
      CHECK(b < 1 / (3 * std::numbers::e));
      CHECK(check_beta(b / 2, c, k).all());
      CHECK_FALSE(check_beta(2 * b, c, k).all());
    }
  }

  TEST_CASE("small-c constant set") {
    CHECK(small_c_epsilon(3, 1) == Rational(1, 28));
    for (auto [c, k] : {std::pair{Rational(1), 1u}, {Rational(5), 2u}, {Rational(50), 1u}}) {
      const auto s = solve_small_c_constants(c, k);
      CHECK(s.regime == Regime::small_c);
      CHECK(s.all_hold());
      CHECK(s.epsilon == c / (12 * Rational(s.R) * (2 * Rational(s.R) * c + 1)));
      const double eps = s.epsilon.get_d(), cd = c.get_d();
      const double log_delta = s.delta.log_value;
      CHECK(std::log(eps * cd) >= std::log(2.0 * k) + log_delta);
      CHECK(eps * s.R * cd * (std::log(eps) - log_delta - 1) >= 5 + std::log(4 * (cd + 2 * k)));
      const double cap = 9 * s.beta * cd / (20.0 * s.R);
      CHECK(s.gamma < cap);
      CHECK(2 * s.gamma * (1 + std::log(1 + 1 / (2 * s.gamma))) <= 9 * s.beta * cd / (320.0 * s.R));
      const double min_log = std::min({std::log(s.gamma), std::log(eps), log_delta});
      CHECK(s.alpha.log_value == doctest::Approx(min_log));
    }
    CHECK_THROWS_AS(solve_small_c_constants(20000, 1), ValidationError);
  }

  TEST_CASE("regimes") {
    CHECK(solve_constants(50, 1).regime == Regime::small_c);
    CHECK(solve_constants(20000, 1).regime == Regime::large_c);
    CHECK(solve_constants(20000, 1).all_hold());
    CHECK(solve_constants(50, 1).to_json() == solve_constants(50, 1).to_json());
  }

  TEST_CASE("cycle subset counts") {
    CHECK(cycle_subset_count(3, 1) == 24);
    CHECK(cycle_subset_tally(3, 1) == 8);
    for (std::uint32_t n = 3; n <= 12; ++n) {
      const auto hist = cycle_component_histogram(n);
      std::vector<std::uint64_t> check(hist.size(), 0);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) ++check[oracle::cyclic_runs(n, mask)];
      CHECK(hist == check);
      CHECK(cycle_subset_tally(n, (n + 1) / 2) == (1ull << n));
      // A proper nonempty subset of the cycle has at least as many cut edges as runs.
      const auto ring = build_ring(n, 1);
      for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask)
        CHECK(oracle::mask_cut(ring, mask).cut >= oracle::cyclic_runs(n, mask));
      for (std::uint32_t m = 1; m <= n; ++m) CHECK(cycle_subset_count(n, m) >= BigInt(cycle_subset_tally(n, m)));
    }
    CHECK_THROWS(cycle_component_histogram(21));
  }

  TEST_CASE("expected B_j bound") {
    CHECK(expected_Bj_bound(14, 1, 1, 1) == 14 * 4 * 3);
    CHECK(expected_Bj_bound(14, 1, 1, 3) < expected_Bj_bound(14, 1, 1, 4));
    CHECK(expected_Bj_bound(14, 1, 1, 3) < expected_Bj_bound(14, 2, 1, 3));
    CHECK(expected_Bj_bound(14, 1, 1, 3) < expected_Bj_bound(14, 1, 2, 3));
  }
}
