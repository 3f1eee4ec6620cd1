#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lerrw/error.hpp"
#include "lerrw/resistance.hpp"
#include "oracles.hpp"

using namespace lerrw;

namespace {

WeightSequence random_sequence(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> lw(-3.0, 3.0);
  std::vector<double> w(n);
  for (auto& v : w) v = std::exp(lw(gen));
  return WeightSequence::from_weights(w);
}

}  // namespace

TEST_SUITE("resistance") {

TEST_CASE("constant weights give T(x) = x^2") {
  const std::vector<double> ones(1000, 1.0);
  const auto p = build_resistance_profile(WeightSequence::from_weights(ones));
  for (std::uint64_t x = 0; x <= 1000; ++x) {
    REQUIRE(p.t[x] == doctest::Approx(static_cast<double>(x * x)).epsilon(1e-12));
    REQUIRE(p.h[x] == doctest::Approx(static_cast<double>(x)).epsilon(1e-12));
  }
  CHECK(p.log_gamma[0] == 0.0);
  CHECK(p.pi[0] == 1.0);
  CHECK(p.pi[5] == 2.0);
  CHECK(expected_hitting_time(WeightSequence::from_weights(ones), 5) == doctest::Approx(25.0));
  CHECK(expected_hitting_time(WeightSequence::from_weights(ones), 1) == doctest::Approx(1.0));
}

TEST_CASE("two-site example") {
  const std::vector<double> w{1.0, 2.0};
  const auto p = build_resistance_profile(WeightSequence::from_weights(w));
  CHECK(p.gamma(1) == doctest::Approx(0.5));
  CHECK(p.h[2] == doctest::Approx(1.5));
  CHECK(p.t[2] == doctest::Approx(3.0));
  CHECK(p.z_partial == doctest::Approx(4.0));
}

TEST_CASE("telescoped gamma equals the product of ratios") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_sequence(gen, 51);
    const auto p = build_resistance_profile(w);
    long double prod = 1.0L;
    for (std::uint64_t x = 1; x <= 50; ++x) {
      const long double px = w.right_probability(x);
      prod *= (1.0L - px) / px;
      REQUIRE(p.gamma(x) == doctest::Approx(static_cast<double>(prod)).epsilon(1e-12));
    }
  }
}

TEST_CASE("all forms of T agree") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_sequence(gen, 101);
    const auto p = build_resistance_profile(w);
    std::vector<double> lin(101), right(101);
    for (std::uint64_t x = 0; x <= 100; ++x) {
      lin[x] = w.weight(x);
      right[x] = w.right_probability(x);
    }
    for (std::uint64_t x = 1; x <= 100; ++x) {
      const auto ds = static_cast<double>(oracle::hitting_time_double_sum(lin, x));
      const auto rec = static_cast<double>(oracle::hitting_time_by_recursion(right, x));
      REQUIRE(p.t[x] == doctest::Approx(ds).epsilon(1e-10));
      REQUIRE(p.t[x] == doctest::Approx(rec).epsilon(1e-10));
    }
  }
}

TEST_CASE("T increments and monotonicity") {
  std::mt19937_64 gen(3);
  const auto w = random_sequence(gen, 200);
  const auto p = build_resistance_profile(w);
  double mass = 0.0;
  for (std::uint64_t x = 0; x < 200; ++x) {
    mass += p.pi[x];
    CHECK(p.t[x + 1] - p.t[x] == doctest::Approx(p.gamma(x) * mass).epsilon(1e-9));
    CHECK(p.t[x + 1] > p.t[x]);
    CHECK(p.h[x + 1] > p.h[x]);
  }
}

TEST_CASE("bounds hold on constructed profiles") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = build_resistance_profile(random_sequence(gen, 300));
    const auto report = check_bounds(p);
    CHECK(report.all_hold());
    CHECK_FALSE(report.checks[2].evaluated);
  }
  for (const auto& prof : {WeightProfile::log_poly(-2.0, 1.0, 0.0),
                           WeightProfile::log_poly(0.5, -1.0, 0.0),
                           WeightProfile::log_poly(1.0, 1.0, 0.0)}) {
    CHECK(check_bounds(build_resistance_profile(WeightSequence::from_profile(prof, 5000)))
              .all_hold());
  }
}

TEST_CASE("bound slack at a constant-weight point") {
  const std::vector<double> ones(10, 1.0);
  const auto p = build_resistance_profile(WeightSequence::from_weights(ones));
  CHECK(bound_slack(p, 4, BoundId::QuadraticUpper) == doctest::Approx(16.0));
  CHECK(std::isnan(bound_slack(p, 4, BoundId::MassUpper)));
  CHECK(bound_slack(p, 4, BoundId::LowerChain) == doctest::Approx(0.0));
  CHECK_THROWS_AS(bound_slack(p, 0, BoundId::LowerChain), std::out_of_range);
}

TEST_CASE("mass bound with an analytic tail") {
  // alpha = -2, beta = 1: pi_x ~ 2 ln x / x^2, so the tail beyond N is at
  // most 2 * integral_{N-1}^inf 2 ln t / t^2 dt = 4 (ln(N-1) + 1) / (N-1).
  const auto prof = WeightProfile::log_poly(-2.0, 1.0, 0.0);
  const std::uint64_t n = 1'000'000;
  const auto full = build_resistance_profile(WeightSequence::from_profile(prof, n));
  const double nd = static_cast<double>(n);
  const double z_upper = full.z_partial + 4.0 * (std::log(nd - 1.0) + 1.0) / (nd - 1.0);
  const auto p = build_resistance_profile(WeightSequence::from_profile(prof, 1000));
  const auto report = check_bounds(p, z_upper);
  REQUIRE(report.checks[2].evaluated);
  CHECK(report.checks[2].holds);
  CHECK(report.all_hold());
}

TEST_CASE("overflow is reported with its site") {
  // gamma_x = e^x: T passes the double range near x = 709 and the
  // overflow is reported with its site.
  std::vector<double> lw(2000);
  for (std::size_t x = 0; x < lw.size(); ++x) lw[x] = -static_cast<double>(x);
  try {
    build_resistance_profile(WeightSequence::from_log_weights(lw));
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.site() > 600);
    CHECK(e.site() < 800);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(WeightSequence::from_weights(std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(WeightSequence::from_weights(std::vector<double>{1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(WeightSequence::from_weights(std::vector<double>{1.0, -1.0}), ConfigError);
  CHECK_THROWS_AS(WeightSequence::from_log_weights({0.0, NAN}), ConfigError);
  const auto w = WeightSequence::from_weights(std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(expected_hitting_time(w, 4), std::out_of_range);
  CHECK_NOTHROW(expected_hitting_time(w, 2));
}

TEST_CASE("csv round trip") {
  std::mt19937_64 gen(23);
  const auto w = random_sequence(gen, 20);
  std::stringstream ss;
  write_weights_csv(ss, w);
  const auto back = read_weights_csv(ss);
  REQUIRE(back.size() == w.size());
  for (std::uint64_t x = 0; x < w.size(); ++x) {
    CHECK(back.weight(x) == doctest::Approx(w.weight(x)).epsilon(1e-15));
  }

  std::istringstream logs("x,log_w\n1,0.5\n0,0\n");
  const auto lw = read_weights_csv(logs);
  CHECK(lw.log_weight(1) == 0.5);

  std::istringstream bad("x,w\n0,1\n0,2\n");
  CHECK_THROWS_AS(read_weights_csv(bad), ConfigError);

  std::ostringstream prof;
  write_profile_csv(prof, build_resistance_profile(WeightSequence::from_weights(std::vector<double>{1.0, 2.0})));
  CHECK(prof.str() == "x,log_gamma,h,pi,T\n0,0,0,1,0\n1,-0.69314718055994529,1,3,1\n2,,1.5,,3\n");
}

}
