#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lerrw/environment.hpp"
#include "lerrw/error.hpp"
#include "lerrw/special_functions.hpp"
#include "lerrw/walk.hpp"

using namespace lerrw;

using Path = std::vector<std::int64_t>;

TEST_SUITE("environment") {

TEST_CASE("sampling shapes and the first-site mean") {
  const auto p = WeightProfile::log_poly(0.0, 1.0, 1.0);
  const auto shapes = environment_shapes(p, 1);
  CHECK(shapes.a == doctest::Approx(0.5));
  CHECK(shapes.b == doctest::Approx(1.0));

  const int n = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int e = 0; e < n; ++e) {
    const auto env = sample_environment(p, 1, derive_seed(77, e));
    sum += env.p[1];
    sum2 += env.p[1] * env.p[1];
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0 / 3.0) < 4.0 * se);
}

TEST_CASE("environment layout") {
  const auto env = sample_environment(WeightProfile::log_poly(0.5, -1.0, 0.8), 300, 5);
  REQUIRE(env.x_max() == 300);
  CHECK(env.p[0] == 1.0);
  CHECK(env.log_s[0] == 0.0);
  for (std::uint64_t i = 1; i <= 300; ++i) {
    REQUIRE(env.p[i] > 0.0);
    REQUIRE(env.p[i] < 1.0);
    REQUIRE(std::isfinite(env.log_p[i]));
    REQUIRE(std::isfinite(env.log_q[i]));
    REQUIRE(env.log_odds[i] == doctest::Approx(env.log_q[i] - env.log_p[i]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sample_environment(WeightProfile::log_poly(0.5, -1.0, 0.0), 10, 1),
                  ConfigError);
  CHECK_THROWS_AS(sample_environment(WeightProfile::log_poly(0.5, -1.0, 1.0), 0, 1),
                  ConfigError);
}

TEST_CASE("quenched weights reproduce the environment") {
  const auto env = sample_environment(WeightProfile::log_poly(-0.5, 2.0, 1.5), 200, 9);
  const auto w = quenched_step_weights(env);
  CHECK(w.log_weight(0) == 0.0);
  for (std::uint64_t x = 1; x < 200; ++x) {
    REQUIRE(w.right_probability(x) == doctest::Approx(env.p[x]).epsilon(1e-10));
  }
  // Prefix identity: S_x is the running sum of the log-odds.
  double s = 0.0;
  for (std::uint64_t x = 1; x <= 200; ++x) {
    s += std::log((1.0 - env.p[x]) / env.p[x]);
    REQUIRE(env.log_s[x] == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("annealed probabilities") {
  const auto p = WeightProfile::log_poly(0.0, 1.0, 1.0);
  CHECK(annealed_path_probability(p, Path{0, 1, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(annealed_path_probability(p, Path{0, 1, 2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(annealed_path_probability(p, Path{0}) == 1.0);
  CHECK(annealed_path_probability(p, Path{0, 1, 0, -1}) == 0.0);
  CHECK_THROWS_AS(annealed_path_probability(p, Path{0, 2, 1, 0, -1}), InvalidPathError);
  CHECK(annealed_path_probability(p, Path{0, 1, 0, -1, -2}) == 0.0);
  CHECK_THROWS_AS(annealed_path_probability(p, Path{0, 1, 0, -1, 1}), InvalidPathError);
  CHECK_THROWS_AS(annealed_path_probability(p.with_delta(0.0), Path{0, 1}), ConfigError);

  // Equal to the reinforcement rule on every path.
  for (const auto& prof : {WeightProfile::log_poly(0.5, -1.0, 0.3),
                           WeightProfile::takei(-0.5, 2.0)}) {
    for_each_path(12, [&](std::span<const std::int64_t> path) {
      REQUIRE(annealed_path_probability(prof, path) ==
              doctest::Approx(path_probability(prof, path)).epsilon(1e-11));
    });
  }
}

TEST_CASE("crossing counts are sufficient") {
  const Path a{0, 1, 0, 1, 2, 1, 0};
  const Path b{0, 1, 2, 1, 0, 1, 0};
  CHECK(crossing_counts(a) == crossing_counts(b));
  const auto counts = crossing_counts(a);
  CHECK(counts.right == std::vector<std::uint64_t>{2, 1, 0});
  CHECK(counts.left == std::vector<std::uint64_t>{0, 2, 1});
  const auto p = WeightProfile::log_poly(1.0, -2.0, 0.7);
  CHECK(path_probability(p, a) == doctest::Approx(path_probability(p, b)).epsilon(1e-14));
  CHECK(annealed_path_probability(p, a) ==
        doctest::Approx(annealed_path_probability(p, b)).epsilon(1e-14));
}

TEST_CASE("quenched average converges to the annealed probability") {
  const auto p = WeightProfile::log_poly(0.5, 1.0, 1.0);
  const Path path{0, 1, 2, 1, 0, 1, 2, 3, 2};
  const double target = annealed_path_probability(p, path);
  const int n = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int e = 0; e < n; ++e) {
    const auto env = sample_environment(p, 3, derive_seed(31, e));
    const double q = quenched_path_probability(env, path);
    sum += q;
    sum2 += q * q;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - target) < 4.0 * se);

  const auto small = sample_environment(p, 2, 1);
  CHECK_THROWS_AS(quenched_path_probability(small, path), std::out_of_range);
}

TEST_CASE("extension and streaming agree with a fresh sample") {
  const auto p = WeightProfile::log_poly(0.0, -1.0, 1.0);
  const auto fresh = sample_environment(p, 500, 4242);
  const auto grown = sample_environment(p, 120, 4242).extended(500);
  CHECK(grown.p == fresh.p);
  CHECK(grown.log_s == fresh.log_s);
  CHECK(grown.stream == fresh.stream);

  const std::vector<std::uint64_t> xs{1, 7, 120, 500};
  const auto levels = sample_s_levels(p, xs, 4242);
  for (std::size_t k = 0; k < xs.size(); ++k) CHECK(levels[k] == fresh.log_s[xs[k]]);
  const std::vector<std::uint64_t> unsorted{5, 2};
  CHECK_THROWS_AS(sample_s_levels(p, unsorted, 1), ConfigError);
}

TEST_CASE("S statistics are thread independent") {
  const auto p = WeightProfile::log_poly(0.5, 1.0, 1.0);
  const auto one = s_statistics(p, 50, 300, 8, 1);
  const auto four = s_statistics(p, 50, 300, 8, 4);
  CHECK(one.samples == four.samples);
  CHECK(one.sample_mean == four.sample_mean);
  CHECK(one.sample_var == four.sample_var);
  CHECK(one.mean_S == doctest::Approx(mean_S(p, 50)));
  CHECK(one.slln_ratio.size() == 300);
  CHECK(one.slln_ratio[3] == doctest::Approx(one.samples[3] / one.mean_S));
  CHECK(std::abs(one.sample_mean - one.mean_S) < 5.0 * one.mean_se);
}

TEST_CASE("environment csv round trip") {
  const auto p = WeightProfile::log_poly(1.0, 1.0, 0.5);
  const auto env = sample_environment(p, 40, 12);
  std::stringstream ss;
  write_environment_csv(ss, env);
  const auto back = read_environment_csv(ss, p);
  REQUIRE(back.x_max() == 40);
  CHECK(back.p == env.p);
  CHECK(back.log_p == env.log_p);
  CHECK(back.log_q == env.log_q);
  CHECK_FALSE(back.stream.has_value());
  CHECK_THROWS_AS(back.extended(50), ConfigError);
  for (std::uint64_t x = 1; x <= 40; ++x) {
    REQUIRE(back.log_s[x] == doctest::Approx(env.log_s[x]).epsilon(1e-12));
  }

  std::istringstream plain("i,p_i\n2,0.25\n1,0.5\n");
  const auto imported = read_environment_csv(plain, p);
  CHECK(imported.log_s[1] == doctest::Approx(0.0));
  CHECK(imported.log_s[2] == doctest::Approx(std::log(3.0)));

  std::istringstream gap("i,p_i\n1,0.5\n3,0.5\n");
  CHECK_THROWS_AS(read_environment_csv(gap, p), ConfigError);
  std::istringstream bad("i,p_i\n1,1.5\n");
  CHECK_THROWS_AS(read_environment_csv(bad, p), ConfigError);
}

}
