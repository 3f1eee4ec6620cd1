#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lerrw/environment.hpp"
#include "lerrw/error.hpp"
#include "lerrw/experiments.hpp"
#include "lerrw/parallel.hpp"
#include "lerrw/resistance.hpp"
#include "lerrw/special_functions.hpp"
#include "lerrw/walk.hpp"
#include "lerrw/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lerrw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string prefix;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
};

struct ProfileOptions {
  std::optional<std::string> family;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> delta;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
  cmd->add_option("--out", o.out_dir, "Output directory (default $LERRW_OUT_DIR or .)");
  cmd->add_option("--prefix", o.prefix, "Output file prefix (default: subcommand name)");
  cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores");
  cmd->add_option("--seed", o.seed, "Master seed");
}

void add_profile(CLI::App* cmd, ProfileOptions& p) {
  cmd->add_option("--family", p.family, "logpoly or takei (default logpoly)");
  cmd->add_option("--alpha", p.alpha, "Exponent alpha");
  cmd->add_option("--beta", p.beta, "Log exponent beta (logpoly only)");
  cmd->add_option("--delta", p.delta, "Reinforcement increment delta (default 1)");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  return j;
}

// Profile JSON from the config file with flag overrides applied.
json profile_json(const json& config, const ProfileOptions& p) {
  json j = config.contains("profile") ? config.at("profile") : json::object();
  if (!j.is_object()) throw ConfigError("profile: expected a JSON object");
  if (p.family) j["family"] = *p.family;
  if (p.alpha) j["alpha"] = *p.alpha;
  if (p.beta) j["beta"] = *p.beta;
  if (p.delta) j["delta"] = *p.delta;
  if (!j.contains("family")) j["family"] = "logpoly";
  if (!j.contains("delta")) j["delta"] = 1.0;
  return j;
}

std::uint64_t resolve_seed(const CommonOptions& o, const json& config) {
  if (o.seed) return *o.seed;
  if (config.contains("master_seed")) return config.at("master_seed").get<std::uint64_t>();
  return 1;
}

class Artifacts {
 public:
  Artifacts(std::string command, const CommonOptions& o, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)) {
    std::string dir = o.out_dir;
    if (dir.empty()) {
      const char* env = std::getenv("LERRW_OUT_DIR");
      dir = env && *env ? env : ".";
    }
    dir_ = dir;
    prefix_ = o.prefix.empty() ? command_ : o.prefix;
    fs::create_directories(dir_);
  }

  void write(const std::string& suffix, const std::string& content) {
    const fs::path path = dir_ / (prefix_ + suffix);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
    paths_.push_back(path.string());
  }

  void write_json(const std::string& suffix, const json& j) { write(suffix, j.dump(2) + "\n"); }

  void finish(const json& config, std::uint64_t seed, unsigned threads) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"command", command_},
              {"argv", argv_},
              {"config", config},
              {"master_seed", seed},
              {"threads", threads},
              {"output_paths", paths_},
              {"tool_version", LERRW_VERSION},
              {"wall_time", wall}};
    const fs::path path = dir_ / (prefix_ + ".manifest.json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << m.dump(2) << "\n";
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path dir_;
  std::string prefix_;
  std::vector<std::string> paths_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename Writer, typename Value>
std::string to_csv(Writer writer, const Value& value) {
  std::ostringstream os;
  writer(os, value);
  return os.str();
}

std::vector<std::uint64_t> default_levels() {
  return {10, 100, 1'000, 10'000, 100'000, 1'000'000};
}

// ---------------------------------------------------------------------------

int cmd_classify(const CommonOptions& o, const ProfileOptions& p, std::uint64_t truncation) {
  const json config = load_config(o.config_path);
  const auto profile = profile_from_json(profile_json(config, p));
  const auto v = classify_recurrence(profile, truncation);
  std::cout << to_string(v.verdict) << "\n";
  return kExitOk;
}

int cmd_weights(const CommonOptions& o, const ProfileOptions& p, std::uint64_t x_max,
                const std::vector<std::string>& argv) {
  const json config = load_config(o.config_path);
  const json pj = profile_json(config, p);
  const auto profile = profile_from_json(pj);
  const auto w = WeightSequence::from_profile(profile, x_max);
  Artifacts out("weights", o, argv);
  out.write(".csv", to_csv(write_weights_csv, w));
  const auto v = classify_recurrence(profile);
  out.write_json(".summary.json", {{"schema_version", kReportSchemaVersion},
                                   {"profile", profile},
                                   {"x_max", x_max},
                                   {"recurrence", std::string(to_string(v.verdict))}});
  out.finish({{"profile", pj}, {"x_max", x_max}}, 0, 1);
  return kExitOk;
}

int cmd_resistance(const CommonOptions& o, const ProfileOptions& p, std::uint64_t x_max,
                   const std::string& weights_path, std::optional<double> z_upper,
                   const std::vector<std::string>& argv) {
  const json config = load_config(o.config_path);
  json echo = {{"x_max", x_max}};
  WeightSequence w;
  if (!weights_path.empty()) {
    std::ifstream in(weights_path);
    if (!in) throw ConfigError("weights: cannot open " + weights_path);
    w = read_weights_csv(in);
    echo["weights"] = weights_path;
  } else {
    const json pj = profile_json(config, p);
    w = WeightSequence::from_profile(profile_from_json(pj), x_max);
    echo["profile"] = pj;
  }
  if (z_upper) echo["z_upper"] = *z_upper;
  const auto rp = build_resistance_profile(w);
  const auto bounds = check_bounds(rp, z_upper);

  Artifacts out("resistance", o, argv);
  out.write(".csv", to_csv(write_profile_csv, rp));
  json checks = json::array();
  for (const auto& c : bounds.checks) {
    checks.push_back({{"bound", std::string(to_string(c.bound))},
                      {"evaluated", c.evaluated},
                      {"holds", c.holds},
                      {"worst_x", c.worst_x},
                      {"min_slack", json_number(c.min_slack)},
                      {"min_relative_slack", json_number(c.min_relative_slack)}});
  }
  out.write_json(".summary.json", {{"schema_version", kReportSchemaVersion},
                                   {"x_max", rp.x_max()},
                                   {"T_final", json_number(rp.t.back())},
                                   {"log_T_final", json_number(rp.log_t.back())},
                                   {"z_partial", json_number(rp.z_partial)},
                                   {"bounds", checks},
                                   {"all_hold", bounds.all_hold()}});
  out.finish(echo, 0, 1);
  if (!bounds.all_hold()) {
    std::cerr << "resistance: a bound check failed, see the summary\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_moments(const CommonOptions& o, const ProfileOptions& p, std::vector<std::uint64_t> xs,
                double epsilon, const std::vector<std::string>& argv) {
  const json config = load_config(o.config_path);
  const json pj = profile_json(config, p);
  const auto profile = profile_from_json(pj);
  if (xs.empty()) xs = config.contains("xs") ? config.at("xs").get<std::vector<std::uint64_t>>()
                                             : default_levels();
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const auto table = build_moment_table(profile, xs, epsilon);

  Artifacts out("moments", o, argv);
  out.write(".csv", to_csv(write_moment_table_csv, table));
  json rows = json::array();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    rows.push_back({{"x", xs[k]},
                    {"mean_s", json_number(table.mean_s[k])},
                    {"var_s", json_number(table.var_s[k])},
                    {"predictor_mean", json_number(table.predictor_mean[k])},
                    {"predictor_var", json_number(table.predictor_var[k])}});
  }
  out.write_json(".summary.json",
                 {{"schema_version", kReportSchemaVersion}, {"profile", profile}, {"rows", rows}});
  out.finish({{"profile", pj}, {"xs", xs}, {"epsilon", epsilon}}, 0, 1);
  return kExitOk;
}

int cmd_oracle(const CommonOptions& o, std::uint64_t max_len, const std::string& grid,
               const std::vector<std::string>& argv) {
  if (grid != "default") throw ConfigError("grid: only 'default' is available");
  const auto report = run_oracle_suite(max_len, default_oracle_grid(), o.threads);
  Artifacts out("oracle", o, argv);
  out.write(".csv", to_csv(write_oracle_csv, report));
  out.write_json(".summary.json", oracle_summary(report));
  out.finish({{"max_len", max_len}, {"grid", grid}}, 0, o.threads);
  double worst = 0.0;
  for (const auto& r : report.rows) worst = std::max(worst, r.max_rel_error);
  std::cout << "oracle: " << (report.pass ? "pass" : "FAIL") << ", max relative error "
            << worst << "\n";
  return report.pass ? kExitOk : kExitCheckFailed;
}

int cmd_simulate(const CommonOptions& o, const ProfileOptions& p, std::uint64_t steps,
                 std::uint64_t replicas, std::uint64_t base,
                 const std::vector<std::uint64_t>& hit_levels,
                 const std::vector<std::string>& argv) {
  const json config = load_config(o.config_path);
  const json pj = profile_json(config, p);
  const auto profile = profile_from_json(pj);
  const std::uint64_t seed = resolve_seed(o, config);
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  const auto schedule = CheckpointSchedule::geometric(base);

  std::vector<WalkStats> stats(replicas);
  parallel_for(replicas, o.threads, [&](std::size_t r) {
    auto rng = RandomStream::substream(seed, r);
    stats[r] = simulate(profile, steps, schedule, hit_levels, rng);
  });

  Artifacts out("simulate", o, argv);
  out.write(".csv", to_csv(write_trajectory_csv, std::span<const WalkStats>(stats)));
  json reps = json::array();
  for (const auto& s : stats) {
    json hits = json::object();
    for (const auto& [x, tau] : s.first_hit) {
      hits[std::to_string(x)] = tau ? json(*tau) : json(nullptr);
    }
    reps.push_back({{"final_position", s.final_position},
                    {"final_max", s.final_max},
                    {"returns_to_origin", s.returns_to_origin},
                    {"first_hit", hits}});
  }
  out.write_json(".summary.json", {{"schema_version", kReportSchemaVersion},
                                   {"profile", profile},
                                   {"n_steps", steps},
                                   {"replicas", reps}});
  out.finish({{"profile", pj},
              {"n_steps", steps},
              {"n_replicas", replicas},
              {"checkpoints", {{"base", base}}},
              {"hit_levels", hit_levels}},
             seed, o.threads);
  return kExitOk;
}

int cmd_environment(const CommonOptions& o, const ProfileOptions& p, std::uint64_t x_max,
                    const std::vector<std::string>& argv) {
  const json config = load_config(o.config_path);
  const json pj = profile_json(config, p);
  const auto profile = profile_from_json(pj);
  const std::uint64_t seed = resolve_seed(o, config);
  const auto env = sample_environment(profile, x_max, seed);

  Artifacts out("environment", o, argv);
  out.write(".csv", to_csv(write_environment_csv, env));
  out.write_json(".summary.json", {{"schema_version", kReportSchemaVersion},
                                   {"profile", profile},
                                   {"x_max", x_max},
                                   {"S_final", json_number(env.log_s.back())},
                                   {"mean_S_final", json_number(mean_S(profile, x_max))},
                                   {"var_S_final", json_number(var_S(profile, x_max))}});
  out.finish({{"profile", pj}, {"x_max", x_max}}, seed, 1);
  return kExitOk;
}

struct ExperimentFlags {
  std::optional<std::string> mode;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> replicas;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> checkpoint_base;
  std::vector<std::uint64_t> hit_levels;
  std::optional<std::uint64_t> horizon;
  std::optional<std::uint64_t> env_seed;
  std::vector<std::uint64_t> xs;
  std::optional<std::uint64_t> n_envs;
  std::optional<std::uint64_t> max_len;
};

int cmd_experiment(const CommonOptions& o, const ProfileOptions& p, const ExperimentFlags& f,
                   const std::vector<std::string>& argv) {
  json j = load_config(o.config_path);
  j["profile"] = profile_json(j, p);
  if (f.mode) j["mode"] = *f.mode;
  if (o.seed) j["master_seed"] = *o.seed;
  if (f.steps) j["n_steps"] = *f.steps;
  if (f.replicas) j["n_replicas"] = *f.replicas;
  if (f.epsilon) j["epsilon"] = *f.epsilon;
  if (f.checkpoint_base) j["checkpoints"] = {{"base", *f.checkpoint_base}};
  if (!f.hit_levels.empty()) j["hit_levels"] = f.hit_levels;
  if (f.horizon) j["horizon"] = *f.horizon;
  if (f.env_seed) j["environment_seed"] = *f.env_seed;
  if (!f.xs.empty()) j["xs"] = f.xs;
  if (f.n_envs) j["n_envs"] = *f.n_envs;
  if (f.max_len) j["max_len"] = *f.max_len;

  auto config = config_from_json(j);
  config.threads = o.threads;
  config.validate();

  Artifacts out("experiment", o, argv);
  bool verdict = false;
  switch (config.mode) {
    case ExperimentMode::ReinforcedScaling:
    case ExperimentMode::Alpha1Scaling:
    case ExperimentMode::UnreinforcedScaling: {
      const auto report = config.mode == ExperimentMode::ReinforcedScaling
                              ? run_reinforced_scaling(config)
                          : config.mode == ExperimentMode::Alpha1Scaling
                              ? run_alpha1_scaling(config)
                              : run_unreinforced_scaling(config);
      out.write(".csv", to_csv(write_scaling_csv, report));
      out.write_json(".summary.json", scaling_summary(report));
      verdict = report.verdict;
      break;
    }
    case ExperimentMode::HittingTime: {
      const auto report = run_hitting_time_suite(config);
      out.write(".csv", to_csv(write_hitting_csv, report));
      out.write_json(".summary.json", hitting_summary(report));
      verdict = report.verdict;
      break;
    }
    case ExperimentMode::SllnCheck: {
      const auto report = run_slln_check(config);
      out.write(".csv", to_csv(write_slln_csv, report));
      out.write_json(".summary.json", slln_summary(report));
      verdict = report.verdict;
      break;
    }
    case ExperimentMode::OracleSuite: {
      const auto report = run_oracle_suite(config.max_len, default_oracle_grid(), config.threads);
      out.write(".csv", to_csv(write_oracle_csv, report));
      out.write_json(".summary.json", oracle_summary(report));
      verdict = report.pass;
      break;
    }
  }
  out.finish(json(config), config.master_seed, config.threads);
  std::cout << to_string(config.mode) << ": verdict " << (verdict ? "pass" : "fail") << "\n";
  return verdict ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearly edge-reinforced random walks on the half-line"};
  app.set_version_flag("--version", std::string(LERRW_VERSION));
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  CommonOptions common;
  ProfileOptions profile;

  auto* classify = app.add_subcommand("classify", "Print recurrent or transient for a profile");
  std::uint64_t truncation = 1000;
  add_profile(classify, profile);
  classify->add_option("--config", common.config_path, "JSON config file");
  classify->add_option("--truncation", truncation, "Terms in the diagnostic phi0 sum");

  auto* weights = app.add_subcommand("weights", "Tabulate initial weights w0(x)");
  std::uint64_t x_max = 1000;
  add_common(weights, common);
  add_profile(weights, profile);
  weights->add_option("--x-max", x_max, "Largest site");

  auto* resistance =
      app.add_subcommand("resistance", "Resistance profile, T(x) and bound checks");
  std::string weights_path;
  std::optional<double> z_upper;
  add_common(resistance, common);
  add_profile(resistance, profile);
  resistance->add_option("--x-max", x_max, "Largest site");
  resistance->add_option("--weights", weights_path, "CSV of weights (x,w or x,log_w)");
  resistance->add_option("--z-upper", z_upper, "Upper bound on the total mass");

  auto* moments = app.add_subcommand("moments", "E[S_x], V[S_x] and regime predictors");
  std::vector<std::uint64_t> xs;
  double epsilon = 0.3;
  add_common(moments, common);
  add_profile(moments, profile);
  moments->add_option("--xs", xs, "Levels x")->delimiter(',');
  moments->add_option("--epsilon", epsilon, "Band epsilon for band predictors");

  auto* oracle = app.add_subcommand("oracle", "Exact path-law equivalence check");
  std::uint64_t max_len = 12;
  std::string grid = "default";
  add_common(oracle, common);
  oracle->add_option("--max-len", max_len, "Longest path length");
  oracle->add_option("--grid", grid, "Profile grid (default)");

  auto* sim = app.add_subcommand("simulate", "Simulate trajectories of the reinforced walk");
  std::uint64_t steps = 100'000;
  std::uint64_t replicas = 1;
  std::uint64_t base = 2;
  std::vector<std::uint64_t> levels;
  add_common(sim, common);
  add_profile(sim, profile);
  sim->add_option("--steps", steps, "Steps per replica");
  sim->add_option("--replicas", replicas, "Number of replicas");
  sim->add_option("--checkpoint-base", base, "Geometric checkpoint base");
  sim->add_option("--hit-levels", levels, "Levels whose first hitting times are recorded")
      ->delimiter(',');

  auto* environment = app.add_subcommand("environment", "Sample a Beta environment");
  std::uint64_t env_x_max = 1000;
  add_common(environment, common);
  add_profile(environment, profile);
  environment->add_option("--x-max", env_x_max, "Largest site");

  auto* experiment = app.add_subcommand("experiment", "Run an experiment mode from a config");
  ExperimentFlags ef;
  add_common(experiment, common);
  add_profile(experiment, profile);
  experiment->add_option("--mode", ef.mode, "Experiment mode");
  experiment->add_option("--steps", ef.steps, "Steps per replica");
  experiment->add_option("--replicas", ef.replicas, "Number of replicas");
  experiment->add_option("--epsilon", ef.epsilon, "Envelope epsilon");
  experiment->add_option("--checkpoint-base", ef.checkpoint_base, "Geometric checkpoint base");
  experiment->add_option("--hit-levels", ef.hit_levels, "Hitting-time levels")->delimiter(',');
  experiment->add_option("--horizon", ef.horizon, "Step budget per hitting-time replica");
  experiment->add_option("--env-seed", ef.env_seed, "Frozen environment seed");
  experiment->add_option("--xs", ef.xs, "Levels for slln-check")->delimiter(',');
  experiment->add_option("--n-envs", ef.n_envs, "Environments for slln-check");
  experiment->add_option("--max-len", ef.max_len, "Path length for oracle-suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*classify) return cmd_classify(common, profile, truncation);
    if (*weights) return cmd_weights(common, profile, x_max, args);
    if (*resistance) return cmd_resistance(common, profile, x_max, weights_path, z_upper, args);
    if (*moments) return cmd_moments(common, profile, xs, epsilon, args);
    if (*oracle) return cmd_oracle(common, max_len, grid, args);
    if (*sim) return cmd_simulate(common, profile, steps, replicas, base, levels, args);
    if (*environment) return cmd_environment(common, profile, env_x_max, args);
    if (*experiment) return cmd_experiment(common, profile, ef, args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoRegimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidPathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
