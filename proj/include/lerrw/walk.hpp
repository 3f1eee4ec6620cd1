#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lerrw/rng.hpp"
#include "lerrw/weights.hpp"

namespace lerrw {

/// Live state of the reinforced walk: X_n, the traversal counts phi_n(x) of
/// every edge {x, x+1}, and n. The walk only ever traverses edges left of its
/// running maximum, so the counts are kept densely over that range.
struct ReinforcedState {
  std::uint64_t position = 0;
  std::vector<std::uint64_t> edge_counts;
  std::uint64_t step = 0;

  std::uint64_t count(std::uint64_t edge) const {
    return edge < edge_counts.size() ? edge_counts[edge] : 0;
  }
};

/// Current weight w_n(x) = w0(x) + delta * phi_n(x); 0 for x < 0.
double current_weight(const ReinforcedState& state, const WeightProfile& profile,
                      std::int64_t edge);

/// Probability that the next step goes right.
double right_probability(const ReinforcedState& state, const WeightProfile& profile);

/// One transition; the origin reflects (moves right with probability 1).
ReinforcedState step(ReinforcedState state, const WeightProfile& profile,
                     RandomStream& rng);

/// Stateful walker with a cached w0 table; the hot loop behind `simulate`.
class ReinforcedWalk {
 public:
  explicit ReinforcedWalk(const WeightProfile& profile);

  const ReinforcedState& state() const noexcept { return state_; }
  const WeightProfile& profile() const noexcept { return profile_; }

  /// Advances one step and returns the new position.
  std::uint64_t advance(RandomStream& rng);

 private:
  void ensure_edge(std::uint64_t edge);

  WeightProfile profile_;
  std::vector<double> w0_;
  ReinforcedState state_;
};

/// Checkpoint times. Geometric schedules are the powers of an integer base
/// (1, b, b^2, ...); the horizon itself is always appended.
class CheckpointSchedule {
 public:
  static CheckpointSchedule geometric(std::uint64_t base = 2);
  static CheckpointSchedule explicit_points(std::vector<std::uint64_t> points);

  /// Sorted, de-duplicated checkpoints within [1, horizon], ending at the
  /// horizon; empty when horizon = 0.
  std::vector<std::uint64_t> points(std::uint64_t horizon) const;

  bool is_geometric() const noexcept { return base_ != 0; }
  std::uint64_t base() const noexcept { return base_; }
  const std::vector<std::uint64_t>& explicit_list() const noexcept { return list_; }

 private:
  std::uint64_t base_ = 2;
  std::vector<std::uint64_t> list_;
};

struct WalkCheckpoint {
  std::uint64_t n;
  std::uint64_t max_position;  // M_n = max_{m<=n} X_m
  std::uint64_t position;      // X_n

  friend bool operator==(const WalkCheckpoint&, const WalkCheckpoint&) = default;
};

struct WalkStats {
  std::uint64_t n_steps = 0;
  std::vector<WalkCheckpoint> checkpoints;
  /// tau_x per requested level; nullopt when not hit within the horizon.
  std::map<std::uint64_t, std::optional<std::uint64_t>> first_hit;
  std::uint64_t returns_to_origin = 0;
  std::uint64_t final_position = 0;
  std::uint64_t final_max = 0;

  friend bool operator==(const WalkStats&, const WalkStats&) = default;
};

/// Runs n_steps transitions from X_0 = 0. Deterministic in (profile,
/// n_steps, schedule, hit_levels, rng state).
WalkStats simulate(const WeightProfile& profile, std::uint64_t n_steps,
                   const CheckpointSchedule& checkpoints,
                   std::span<const std::uint64_t> hit_levels, RandomStream& rng);

/// Validates a path: non-empty, starts at 0, nearest-neighbour, never
/// negative. Throws InvalidPathError.
void validate_path(std::span<const std::int64_t> path);

/// Exact probability of the path under the reinforcement rule, accumulated
/// as a sum of logs.
double log_path_probability(const WeightProfile& profile,
                            std::span<const std::int64_t> path);
double path_probability(const WeightProfile& profile, std::span<const std::int64_t> path);

/// Calls `visit` with every admissible path of `length` steps from 0
/// (length + 1 positions), in lexicographic order (left before right).
void for_each_path(std::uint64_t length,
                   const std::function<void(std::span<const std::int64_t>)>& visit);

constexpr std::uint64_t kEnumerationCap = 22;

/// Law of X_n by exhaustive enumeration; n <= kEnumerationCap (SizeError
/// otherwise). Index = position. The result does not depend on `threads`.
std::vector<double> distribution_of_position(const WeightProfile& profile,
                                             std::uint64_t n, unsigned threads = 1);

/// Trajectory checkpoint dump, header "replica,n,max_position,position".
void write_trajectory_csv(std::ostream& os, std::span<const WalkStats> replicas);

}  // namespace lerrw
