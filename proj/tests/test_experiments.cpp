#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lerrw/csv.hpp"
#include "lerrw/error.hpp"
#include "lerrw/experiments.hpp"

using namespace lerrw;

TEST_SUITE("experiments") {

TEST_CASE("mode names") {
  for (auto m : {ExperimentMode::ReinforcedScaling, ExperimentMode::UnreinforcedScaling,
                 ExperimentMode::Alpha1Scaling, ExperimentMode::SllnCheck,
                 ExperimentMode::HittingTime, ExperimentMode::OracleSuite}) {
    CHECK(parse_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_mode("scaling"), ConfigError);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.profile = WeightProfile::log_poly(0.5, 1.0, 1.0);
  CHECK_NOTHROW(c.validate());
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.epsilon = 0.3;

  c.mode = ExperimentMode::Alpha1Scaling;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("profile.alpha"), ConfigError);
  c.profile = WeightProfile::log_poly(1.0, 0.5, 1.0);
  CHECK_NOTHROW(c.validate());
  c.profile = WeightProfile::log_poly(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c.mode = ExperimentMode::ReinforcedScaling;
  c.profile = WeightProfile::log_poly(0.0, 0.0, 1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c.mode = ExperimentMode::UnreinforcedScaling;
  c.profile = WeightProfile::log_poly(0.0, 1.0, 1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.profile = WeightProfile::log_poly(2.0, 1.0, 0.0);
  CHECK_THROWS_AS(c.validate(), NoRegimeError);

  c.mode = ExperimentMode::HittingTime;
  c.profile = WeightProfile::log_poly(0.0, 1.0, 0.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.hit_levels = {5};
  CHECK_NOTHROW(c.validate());
  c.profile = WeightProfile::log_poly(0.0, 1.0, 1.0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.environment_seed = 3;
  CHECK_NOTHROW(c.validate());

  c.mode = ExperimentMode::OracleSuite;
  c.max_len = 23;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config json round trip") {
  ExperimentConfig c;
  c.profile = WeightProfile::takei(0.25, 2.0);
  c.mode = ExperimentMode::SllnCheck;
  c.n_steps = 12345;
  c.checkpoints = CheckpointSchedule::explicit_points({10, 100});
  c.band_low = 0.5;
  c.band_high = 2.0;
  c.xs = {10, 20};
  c.environment_seed = 99;
  nlohmann::json j = c;
  const auto back = config_from_json(j);
  CHECK(back.profile == c.profile);
  CHECK(back.mode == c.mode);
  CHECK(back.n_steps == 12345);
  CHECK_FALSE(back.checkpoints.is_geometric());
  CHECK(back.checkpoints.explicit_list() == std::vector<std::uint64_t>{10, 100});
  CHECK(back.band_low == 0.5);
  CHECK(back.band_high == 2.0);
  CHECK(back.xs == c.xs);
  CHECK(back.environment_seed == 99);
  nlohmann::json again = back;
  CHECK(again == j);

  const auto minimal = config_from_json(
      {{"profile", {{"family", "logpoly"}, {"alpha", 0.0}, {"beta", 1.0}, {"delta", 0.0}}},
       {"mode", "hitting-time"}});
  CHECK(minimal.n_replicas == 100000);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::object()), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"profile", j["profile"]}, {"n_steps", "many"}}),
                  ConfigError);
}

TEST_CASE("quantile") {
  CHECK(quantile({3.0, 1.0, 2.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.1) == doctest::Approx(1.4));
  CHECK(quantile({7.0}, 0.9) == 7.0);
  CHECK(std::isnan(quantile({}, 0.5)));
}

TEST_CASE("unreinforced envelope instantiation") {
  const double n = 1e6;
  const double eps = 0.5;
  const double up = n * std::pow(std::log(n), 1.0 + eps);

  auto e = unreinforced_envelope(WeightProfile::log_poly(-2.0, 1.0, 0.0), n, eps);
  CHECK(e.case_label == "i");
  CHECK(e.lower == doctest::Approx(std::pow(n, 1.0 / 3.5)));
  CHECK(e.upper == doctest::Approx(std::pow(up, 1.0 / 2.5)));

  e = unreinforced_envelope(WeightProfile::log_poly(-1.0, -2.0, 0.0), n, eps);
  CHECK(e.case_label == "ii.1");
  CHECK(e.lower == doctest::Approx(std::pow(n, 1.0 / 3.0)));
  CHECK(e.upper == doctest::Approx(up));

  e = unreinforced_envelope(WeightProfile::log_poly(-1.0, 0.5, 0.0), n, eps);
  CHECK(e.case_label == "ii.2");
  CHECK(e.lower == doctest::Approx(std::pow(n, 0.25)));

  e = unreinforced_envelope(WeightProfile::log_poly(-0.5, 3.0, 0.0), n, eps);
  CHECK(e.case_label == "iii");
  CHECK(e.lower == doctest::Approx(1000.0));

  e = unreinforced_envelope(WeightProfile::log_poly(0.5, 1.0, 0.0), n, eps);
  CHECK(e.case_label == "iv");
  CHECK(e.lower == doctest::Approx(std::pow(n, 1.0 / 3.0)));
  CHECK(e.upper == doctest::Approx(up));

  e = unreinforced_envelope(WeightProfile::takei(-3.0, 0.0), n, eps);
  CHECK(e.lower == doctest::Approx(std::pow(n, 0.25)));
  CHECK_THROWS_AS(unreinforced_envelope(WeightProfile::takei(1.5, 0.0), n, eps),
                  NoRegimeError);
  CHECK_THROWS_AS(unreinforced_envelope(WeightProfile::log_poly(0.5, 3.0, 0.0), n, eps),
                  ConfigError);
}

TEST_CASE("zero-step scaling run") {
  ExperimentConfig c;
  c.profile = WeightProfile::log_poly(0.5, 1.0, 1.0);
  c.n_steps = 0;
  c.n_replicas = 3;
  const auto r = run_reinforced_scaling(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].n == 1);
  CHECK(r.rows[0].max_quantiles[2] == 1.0);
  CHECK(std::isnan(r.trajectory_spread));
  const auto j = scaling_summary(r);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("checkpoints").size() == 1);
}

TEST_CASE("scaling runs are deterministic and thread independent") {
  ExperimentConfig c;
  c.profile = WeightProfile::log_poly(0.5, -1.0, 1.0);
  c.n_steps = 20000;
  c.n_replicas = 6;
  c.master_seed = 17;
  c.threads = 1;
  const auto a = run_reinforced_scaling(c);
  c.threads = 8;
  const auto b = run_reinforced_scaling(c);
  CHECK(a.maxima == b.maxima);
  std::ostringstream sa, sb;
  write_scaling_csv(sa, a);
  write_scaling_csv(sb, b);
  const std::string text = sa.str();
  CHECK(text == sb.str());
  CHECK(text.rfind("n,quantile,max_position,predictor,ratio,", 0) == 0);
  // 1, 2, 4, ..., 16384 and 20000; five quantile lines each, plus the header.
  CHECK(std::count(text.begin(), text.end(), '\n') == 16 * 5 + 1);

  ExperimentConfig wrong = c;
  wrong.mode = ExperimentMode::Alpha1Scaling;
  CHECK_THROWS_AS(run_reinforced_scaling(wrong), ConfigError);
}

TEST_CASE("unreinforced scaling report") {
  ExperimentConfig c;
  c.mode = ExperimentMode::UnreinforcedScaling;
  c.profile = WeightProfile::log_poly(0.0, 1.0, 0.0);
  c.n_steps = 100000;
  c.n_replicas = 20;
  const auto r = run_unreinforced_scaling(c);
  CHECK(r.case_label == "iii");
  const auto& last = r.rows.back();
  CHECK(last.predictor == doctest::Approx(std::sqrt(100000.0)));
  CHECK(r.verdict == r.median_in_band);
}

TEST_CASE("hitting-time suite") {
  ExperimentConfig c;
  c.mode = ExperimentMode::HittingTime;
  c.profile = WeightProfile::log_poly(-1.0, -2.0, 0.0);
  c.hit_levels = {8, 2, 0, 8};
  c.n_replicas = 20000;
  c.threads = 2;
  const auto r = run_hitting_time_suite(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].x == 0);
  CHECK(r.rows[0].expected == 0.0);
  CHECK(r.rows[1].x == 2);
  for (const auto& row : r.rows) CHECK(row.censored == 0);
  CHECK(r.verdict);

  // A tiny horizon censors the far level and reports z as missing.
  c.horizon = 3;
  c.hit_levels = {8};
  c.n_replicas = 10;
  const auto cut = run_hitting_time_suite(c);
  CHECK(cut.rows[0].censored == 10);
  CHECK(std::isnan(cut.rows[0].z_score));
  std::ostringstream os;
  write_hitting_csv(os, cut);
  CHECK(os.str() == "x,T,mc_mean,mc_se,z_score,hits,censored\n8," +
                        csv::format_double(cut.rows[0].expected) + ",nan,nan,nan,0,10\n");
  CHECK(hitting_summary(cut)["rows"][0]["z_score"].is_null());

  // Quenched weights from a frozen environment.
  c.profile = WeightProfile::log_poly(0.5, 1.0, 1.0);
  c.environment_seed = 5;
  c.horizon = 10'000'000;
  c.hit_levels = {4};
  c.n_replicas = 20000;
  const auto q = run_hitting_time_suite(c);
  CHECK(q.rows[0].censored == 0);
  CHECK(std::abs(q.rows[0].z_score) < 4.0);
}

TEST_CASE("slln regimes") {
  CHECK(slln_regime(WeightProfile::log_poly(-1.0, 0.0, 2.0)).limit == doctest::Approx(2.0));
  CHECK_FALSE(slln_regime(WeightProfile::log_poly(-1.0, 0.0, 2.0)).exact);
  CHECK(slln_regime(WeightProfile::log_poly(1.0, -1.0, 1.0)).limit == doctest::Approx(0.5));
  CHECK(slln_regime(WeightProfile::log_poly(1.0, 0.5, 1.0)).limit == -1.0);
  CHECK_THROWS_AS(slln_regime(WeightProfile::log_poly(1.0, 2.0, 1.0)), NoRegimeError);
  CHECK_THROWS_AS(slln_regime(WeightProfile::log_poly(0.0, 0.0, 1.0)), NoRegimeError);
  CHECK(slln_scale(WeightProfile::log_poly(1.0, -1.0, 1.0), std::exp(2.0)) ==
        doctest::Approx(4.0));

  ExperimentConfig c;
  c.mode = ExperimentMode::SllnCheck;
  c.profile = WeightProfile::log_poly(0.5, 1.0, 1.0);
  c.xs = {1000, 100};
  c.n_envs = 5;
  const auto r = run_slln_check(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].x == 100);
  CHECK(r.samples.size() == 5);
  std::ostringstream os;
  write_slln_csv(os, r);
  CHECK(os.str().rfind("x,mean_S,median_slln_ratio,", 0) == 0);
}

TEST_CASE("oracle suite") {
  const auto r = run_oracle_suite(8, default_oracle_grid(), 2);
  CHECK(r.pass);
  REQUIRE(r.rows.size() == 7);
  // Paths of lengths 0..8: 1+1+2+3+6+10+20+35+70.
  CHECK(r.rows[0].paths == 148);
  CHECK_THROWS_AS(run_oracle_suite(23, default_oracle_grid()), SizeError);
  std::ostringstream os;
  write_oracle_csv(os, r);
  const std::string text = os.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  CHECK(oracle_summary(r).at("pass") == true);
}

TEST_CASE("json numbers") {
  CHECK(json_number(1.5) == 1.5);
  CHECK(json_number(NAN).is_null());
  CHECK(json_number(INFINITY).is_null());
}

}
