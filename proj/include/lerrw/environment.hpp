#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lerrw/resistance.hpp"
#include "lerrw/rng.hpp"
#include "lerrw/weights.hpp"

namespace lerrw {

/// A frozen Beta environment on sites 0..x_max.
///
/// Arrays are indexed by site. Site 0 is the reflecting origin (p_0 = 1,
/// S_0 = 0) and is stored only so that indices line up. `log_s[x]` is the
/// prefix sum of ln((1 - p_i) / p_i) over i = 1..x, accumulated with
/// compensation from the log-odds of each draw.
struct Environment {
  WeightProfile profile = WeightProfile::log_poly(0.0, -1.0, 1.0);
  std::uint64_t seed = 0;
  std::vector<double> p;
  std::vector<double> log_p;
  std::vector<double> log_q;
  std::vector<double> log_odds;
  std::vector<double> log_s;

  std::uint64_t x_max() const noexcept { return p.empty() ? 0 : p.size() - 1; }

  /// The same environment on 0..new_x_max. Sites beyond the current range
  /// are drawn from the continuation of the sampling stream, so the result
  /// equals sample_environment(profile, new_x_max, seed).
  Environment extended(std::uint64_t new_x_max) const;

  /// Sampling stream positioned after site x_max; empty for imported
  /// environments, which cannot be extended.
  std::optional<RandomStream> stream;
};

/// Draws p_1..p_{x_max} independently, p_i ~ Beta(w0(i)/2delta,
/// (w0(i-1)+delta)/2delta), from a single stream seeded with `seed`.
/// Throws ConfigError when delta = 0 or x_max = 0.
Environment sample_environment(const WeightProfile& profile, std::uint64_t x_max,
                               std::uint64_t seed);

/// ln w(x, omega) = -S_x, so w(0) = 1 and the fixed-weight walk on these
/// weights steps right from x with probability p_x.
WeightSequence quenched_step_weights(const Environment& env);

/// Right/left departure counts per site along a path (index = site).
struct CrossingCounts {
  std::vector<std::uint64_t> right;
  std::vector<std::uint64_t> left;

  friend bool operator==(const CrossingCounts&, const CrossingCounts&) = default;
};

CrossingCounts crossing_counts(std::span<const std::int64_t> path);

/// Quenched probability of a path in a frozen environment. Throws
/// std::out_of_range if the path leaves sites 1..x_max.
double quenched_path_probability(const Environment& env,
                                 std::span<const std::int64_t> path);

/// Environment average of the quenched path probability, computed exactly
/// from Beta moments: the product over sites of B(A+a, B+b) / B(A, B).
/// Returns 0 for a path stepping left from 0 (after validating it as
/// nearest-neighbour from 0). Throws ConfigError when delta = 0.
double log_annealed_path_probability(const WeightProfile& profile,
                                     std::span<const std::int64_t> path);
double annealed_path_probability(const WeightProfile& profile,
                                 std::span<const std::int64_t> path);

/// S_x at each of the sorted levels `xs`, for the environment with the given
/// seed, streamed without storing the environment. Values are identical to
/// sample_environment(profile, xs.back(), seed).log_s at those levels.
std::vector<double> sample_s_levels(const WeightProfile& profile,
                                    std::span<const std::uint64_t> xs,
                                    std::uint64_t seed);

struct SStatistics {
  std::uint64_t x = 0;
  std::uint64_t n_envs = 0;
  std::uint64_t master_seed = 0;
  double sample_mean = 0.0;
  double sample_var = 0.0;
  double mean_se = 0.0;  // standard error of the sample mean
  double var_se = 0.0;   // standard error of the sample variance
  double mean_S = 0.0;
  double var_S = 0.0;
  /// S_x / E[S_x] for each environment, in environment-index order.
  std::vector<double> slln_ratio;
  /// Raw S_x per environment, same order.
  std::vector<double> samples;
};

/// Samples n_envs environments; environment e uses seed
/// derive_seed(master_seed, e). The result does not depend on `threads`.
SStatistics s_statistics(const WeightProfile& profile, std::uint64_t x,
                         std::uint64_t n_envs, std::uint64_t master_seed,
                         unsigned threads = 1);

/// Columns i,p_i,S_i,log_p_i,log_q_i for sites 1..x_max.
void write_environment_csv(std::ostream& os, const Environment& env);

/// Replays an exported environment. The log columns are used when present;
/// S is rebuilt from them so the prefix identity holds exactly.
Environment read_environment_csv(std::istream& is, const WeightProfile& profile);

}  // namespace lerrw
