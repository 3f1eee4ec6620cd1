#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lerrw/walk.hpp"
#include "lerrw/weights.hpp"

namespace lerrw {

enum class ExperimentMode {
  ReinforcedScaling,
  UnreinforcedScaling,
  Alpha1Scaling,
  SllnCheck,
  HittingTime,
  OracleSuite,
};

std::string_view to_string(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view name);

struct ExperimentConfig {
  WeightProfile profile = WeightProfile::log_poly(0.0, -1.0, 1.0);
  ExperimentMode mode = ExperimentMode::ReinforcedScaling;
  std::uint64_t n_steps = 1'000'000;
  std::uint64_t n_replicas = 20;
  std::uint64_t master_seed = 1;
  CheckpointSchedule checkpoints = CheckpointSchedule::geometric(2);
  double epsilon = 0.3;

  // Verdict band for the final median ratio (limsup-scale modes).
  double band_low = 1.0 / 3.0;
  double band_high = 3.0;
  // Fraction of replicas that must sit inside the epsilon envelopes.
  double min_fraction_within = 0.8;
  // The median-ratio trajectory over checkpoints n >= spread_min_n must vary
  // by less than max_spread end to end.
  std::uint64_t spread_min_n = 10'000;
  double max_spread = 2.0;

  // HittingTime: levels, per-replica step budget, optional frozen
  // environment seed (quenched weights instead of w0).
  std::vector<std::uint64_t> hit_levels;
  std::uint64_t horizon = 10'000'000;
  std::optional<std::uint64_t> environment_seed;

  // SllnCheck: levels and number of environments.
  std::vector<std::uint64_t> xs;
  std::uint64_t n_envs = 21;
  double slln_tolerance = 0.25;

  // OracleSuite: path length bound.
  std::uint64_t max_len = 12;

  unsigned threads = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& config);
/// Missing keys take the defaults above, except that n_replicas defaults to
/// 10^5 for HittingTime; `profile` is required.
ExperimentConfig config_from_json(const nlohmann::json& j);

std::uint64_t default_replicas(ExperimentMode mode);

// ---------------------------------------------------------------------------
// Running-maximum scaling

inline constexpr std::array<double, 5> kReportQuantiles{0.1, 0.25, 0.5, 0.75, 0.9};

/// Type-7 (linear interpolation) sample quantile of unsorted data.
double quantile(std::vector<double> values, double q);

/// Envelope pair for the un-reinforced walk, matched to the (alpha, beta)
/// case: the walk's maximum should eventually exceed `lower` infinitely often
/// and stay below `upper`.
struct UnreinforcedEnvelope {
  std::string case_label;  // "i", "ii.1", "ii.2", "iii", "iv"
  double lower;
  double upper;
};

UnreinforcedEnvelope unreinforced_envelope(const WeightProfile& profile, double n,
                                           double epsilon);

struct ScalingRow {
  std::uint64_t n = 0;
  double predictor = 0.0;  // normalising curve at n
  double lower = 0.0;      // lower envelope (equals predictor for sharp modes)
  double upper = 0.0;
  std::array<double, kReportQuantiles.size()> max_quantiles{};
  double median_ratio = 0.0;  // median(M_n) / predictor
  double fraction_within = 0.0;
};

struct ScalingReport {
  ExperimentConfig config;
  std::string predictor_name;
  std::string case_label;
  std::vector<ScalingRow> rows;
  /// M_n per replica (outer) and checkpoint (inner).
  std::vector<std::vector<std::uint64_t>> maxima;
  bool median_in_band = false;
  bool envelope_ok = false;
  std::uint64_t replicas_within_final = 0;
  /// Largest over smallest median ratio among rows with n >= spread_min_n;
  /// NaN when fewer than two rows qualify.
  double trajectory_spread = 0.0;
  bool verdict = false;
};

ScalingReport run_reinforced_scaling(const ExperimentConfig& config);
ScalingReport run_alpha1_scaling(const ExperimentConfig& config);
ScalingReport run_unreinforced_scaling(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Hitting times

struct HittingRow {
  std::uint64_t x = 0;
  double expected = 0.0;  // T(x)
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double z_score = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t censored = 0;  // replicas that ran out of horizon
};

struct HittingReport {
  ExperimentConfig config;
  std::vector<HittingRow> rows;
  bool verdict = false;  // |z| <= 3 on every uncensored row
};

HittingReport run_hitting_time_suite(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Strong-law checks on S_x

/// Normalising scale and limit of the almost-sure S_x asymptotics, so that
/// S_x / (limit * scale(x)) -> 1.
struct SllnRegime {
  std::string label;
  double limit = 0.0;
  bool exact = true;  // false for the alpha < 0 row, stated as bounds only
};

SllnRegime slln_regime(const WeightProfile& profile);
double slln_scale(const WeightProfile& profile, double x);

struct SllnRow {
  std::uint64_t x = 0;
  double mean_S = 0.0;
  double median_slln_ratio = 0.0;     // median over environments of S_x / E[S_x]
  double median_regime_ratio = 0.0;   // median of S_x / (limit * scale)
  double expected_regime_ratio = 0.0; // E[S_x] / (limit * scale)
};

struct SllnReport {
  ExperimentConfig config;
  SllnRegime regime;
  std::vector<SllnRow> rows;
  /// Per-environment S_x at every level, outer index = environment.
  std::vector<std::vector<double>> samples;
  bool verdict = false;  // final median regime ratio within slln_tolerance of 1
};

SllnReport run_slln_check(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Path-law equivalence oracle

struct OracleRow {
  WeightProfile profile = WeightProfile::log_poly(0.0, -1.0, 1.0);
  std::uint64_t max_len = 0;
  std::uint64_t paths = 0;
  double max_rel_error = 0.0;
  double max_normalization_error = 0.0;
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double rel_tolerance = 1e-10;
  double normalization_tolerance = 1e-12;
  bool pass = false;
};

/// Seven reference profiles used by the oracle and the acceptance suite.
std::vector<WeightProfile> default_oracle_grid();

OracleReport run_oracle_suite(std::uint64_t max_len,
                              const std::vector<WeightProfile>& grid,
                              unsigned threads = 1);

// ---------------------------------------------------------------------------
// Output

inline constexpr int kReportSchemaVersion = 1;

void write_scaling_csv(std::ostream& os, const ScalingReport& report);
nlohmann::json scaling_summary(const ScalingReport& report);

void write_hitting_csv(std::ostream& os, const HittingReport& report);
nlohmann::json hitting_summary(const HittingReport& report);

void write_slln_csv(std::ostream& os, const SllnReport& report);
nlohmann::json slln_summary(const SllnReport& report);

void write_oracle_csv(std::ostream& os, const OracleReport& report);
nlohmann::json oracle_summary(const OracleReport& report);

/// Finite doubles as numbers, non-finite ones as null.
nlohmann::json json_number(double value);

}  // namespace lerrw
