#include "lerrw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "lerrw/csv.hpp"
#include "lerrw/error.hpp"
#include "lerrw/parallel.hpp"
#include "lerrw/summation.hpp"

namespace lerrw {

double current_weight(const ReinforcedState& state, const WeightProfile& profile,
                      std::int64_t edge) {
  if (edge < 0) return 0.0;
  const auto e = static_cast<std::uint64_t>(edge);
  return profile.initial_weight(e) +
         profile.delta() * static_cast<double>(state.count(e));
}

double right_probability(const ReinforcedState& state, const WeightProfile& profile) {
  if (state.position == 0) return 1.0;
  const auto x = static_cast<std::int64_t>(state.position);
  const double right = current_weight(state, profile, x);
  const double left = current_weight(state, profile, x - 1);
  return right / (left + right);
}

ReinforcedState step(ReinforcedState state, const WeightProfile& profile,
                     RandomStream& rng) {
  const bool go_right =
      state.position == 0 || rng.uniform() < right_probability(state, profile);
  const std::uint64_t edge = go_right ? state.position : state.position - 1;
  if (edge >= state.edge_counts.size()) state.edge_counts.resize(edge + 1, 0);
  ++state.edge_counts[edge];
  state.position = go_right ? state.position + 1 : state.position - 1;
  ++state.step;
  return state;
}

ReinforcedWalk::ReinforcedWalk(const WeightProfile& profile) : profile_(profile) {
  ensure_edge(16);
}

void ReinforcedWalk::ensure_edge(std::uint64_t edge) {
  if (edge < w0_.size()) return;
  const std::size_t old = w0_.size();
  const std::size_t grown = std::max<std::size_t>(edge + 1, 2 * old);
  w0_.resize(grown);
  for (std::size_t x = old; x < grown; ++x) w0_[x] = profile_.initial_weight(x);
  state_.edge_counts.resize(grown, 0);
}

std::uint64_t ReinforcedWalk::advance(RandomStream& rng) {
  auto& s = state_;
  const std::uint64_t x = s.position;
  ++s.step;
  if (x == 0) {
    ++s.edge_counts[0];
    s.position = 1;
    ensure_edge(1);
    return 1;
  }
  const double delta = profile_.delta();
  const double right = w0_[x] + delta * static_cast<double>(s.edge_counts[x]);
  const double left = w0_[x - 1] + delta * static_cast<double>(s.edge_counts[x - 1]);
  if (rng.uniform() * (left + right) < right) {
    ++s.edge_counts[x];
    s.position = x + 1;
    ensure_edge(x + 1);
  } else {
    ++s.edge_counts[x - 1];
    s.position = x - 1;
  }
  return s.position;
}

CheckpointSchedule CheckpointSchedule::geometric(std::uint64_t base) {
  if (base < 2) throw ConfigError("checkpoint base must be >= 2");
  CheckpointSchedule s;
  s.base_ = base;
  return s;
}

CheckpointSchedule CheckpointSchedule::explicit_points(std::vector<std::uint64_t> points) {
  CheckpointSchedule s;
  s.base_ = 0;
  s.list_ = std::move(points);
  return s;
}

std::vector<std::uint64_t> CheckpointSchedule::points(std::uint64_t horizon) const {
  std::vector<std::uint64_t> out;
  if (horizon == 0) return out;
  if (base_ != 0) {
    for (std::uint64_t n = 1; n <= horizon;) {
      out.push_back(n);
      if (n > horizon / base_) break;
      n *= base_;
    }
  } else {
    for (const auto n : list_) {
      if (n >= 1 && n <= horizon) out.push_back(n);
    }
  }
  out.push_back(horizon);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WalkStats simulate(const WeightProfile& profile, std::uint64_t n_steps,
                   const CheckpointSchedule& checkpoints,
                   std::span<const std::uint64_t> hit_levels, RandomStream& rng) {
  WalkStats stats;
  stats.n_steps = n_steps;
  std::vector<std::uint64_t> levels(hit_levels.begin(), hit_levels.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (const auto level : levels) stats.first_hit[level] = std::nullopt;

  // Levels are hit in increasing order, so only the next one needs checking.
  std::size_t next_level = 0;
  if (!levels.empty() && levels.front() == 0) {
    stats.first_hit[0] = 0;
    next_level = 1;
  }

  const auto points = checkpoints.points(n_steps);
  std::size_t next_point = 0;
  ReinforcedWalk walk(profile);
  std::uint64_t running_max = 0;
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const std::uint64_t x = walk.advance(rng);
    if (x > running_max) {
      running_max = x;
      if (next_level < levels.size() && x == levels[next_level]) {
        stats.first_hit[x] = n;
        ++next_level;
      }
    }
    if (x == 0) ++stats.returns_to_origin;
    if (next_point < points.size() && points[next_point] == n) {
      stats.checkpoints.push_back({n, running_max, x});
      ++next_point;
    }
  }
  stats.final_position = walk.state().position;
  stats.final_max = running_max;
  return stats;
}

void validate_path(std::span<const std::int64_t> path) {
  if (path.empty()) throw InvalidPathError("path must contain at least X_0");
  if (path.front() != 0) throw InvalidPathError("path must start at 0");
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (path[k] < 0) {
      throw InvalidPathError("path position " + std::to_string(k) + " is negative");
    }
    if (k > 0 && std::abs(path[k] - path[k - 1]) != 1) {
      throw InvalidPathError("path step " + std::to_string(k) +
                             " is not nearest-neighbour");
    }
  }
}

double log_path_probability(const WeightProfile& profile,
                            std::span<const std::int64_t> path) {
  validate_path(path);
  ReinforcedState state;
  CompensatedSum log_prob;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const bool go_right = path[k] > path[k - 1];
    const double p_right = right_probability(state, profile);
    log_prob.add(go_right ? std::log(p_right) : std::log1p(-p_right));
    const std::uint64_t edge = go_right ? state.position : state.position - 1;
    if (edge >= state.edge_counts.size()) state.edge_counts.resize(edge + 1, 0);
    ++state.edge_counts[edge];
    state.position = static_cast<std::uint64_t>(path[k]);
    ++state.step;
  }
  return log_prob.value();
}

double path_probability(const WeightProfile& profile,
                        std::span<const std::int64_t> path) {
  return std::exp(log_path_probability(profile, path));
}

namespace {

void extend_paths(std::vector<std::int64_t>& path, std::uint64_t length,
                  const std::function<void(std::span<const std::int64_t>)>& visit) {
  if (path.size() == length + 1) {
    visit(path);
    return;
  }
  const std::int64_t x = path.back();
  if (x > 0) {
    path.push_back(x - 1);
    extend_paths(path, length, visit);
    path.pop_back();
  }
  path.push_back(x + 1);
  extend_paths(path, length, visit);
  path.pop_back();
}

// Depth-first expansion of one enumeration prefix, accumulating the endpoint
// law into `mass`.
void enumerate_from(const WeightProfile& profile, const std::vector<double>& w0,
                    std::vector<std::uint64_t>& counts, std::uint64_t position,
                    double prob, std::uint64_t remaining, std::vector<double>& mass) {
  if (remaining == 0) {
    mass[position] += prob;
    return;
  }
  const double delta = profile.delta();
  if (position == 0) {
    ++counts[0];
    enumerate_from(profile, w0, counts, 1, prob, remaining - 1, mass);
    --counts[0];
    return;
  }
  const double right = w0[position] + delta * static_cast<double>(counts[position]);
  const double left =
      w0[position - 1] + delta * static_cast<double>(counts[position - 1]);
  const double p_right = right / (left + right);

  ++counts[position - 1];
  enumerate_from(profile, w0, counts, position - 1, prob * (1.0 - p_right),
                 remaining - 1, mass);
  --counts[position - 1];

  ++counts[position];
  enumerate_from(profile, w0, counts, position + 1, prob * p_right, remaining - 1, mass);
  --counts[position];
}

}  // namespace

void for_each_path(std::uint64_t length,
                   const std::function<void(std::span<const std::int64_t>)>& visit) {
  std::vector<std::int64_t> path{0};
  path.reserve(length + 1);
  extend_paths(path, length, visit);
}

std::vector<double> distribution_of_position(const WeightProfile& profile,
                                             std::uint64_t n, unsigned threads) {
  if (n > kEnumerationCap) {
    throw SizeError("exhaustive enumeration is capped at n = " +
                    std::to_string(kEnumerationCap));
  }
  std::vector<double> w0(n + 2);
  for (std::uint64_t x = 0; x < w0.size(); ++x) w0[x] = profile.initial_weight(x);

  // Split the tree at a fixed depth; each prefix is an independent work item
  // and the per-prefix laws are combined in prefix order.
  const std::uint64_t depth = std::min<std::uint64_t>(n, 8);
  struct Prefix {
    std::vector<std::uint64_t> counts;
    std::uint64_t position;
    double prob;
  };
  std::vector<Prefix> prefixes;
  for_each_path(depth, [&](std::span<const std::int64_t> path) {
    Prefix p{std::vector<std::uint64_t>(n + 2, 0), 0, 1.0};
    for (std::size_t k = 1; k < path.size(); ++k) {
      const bool go_right = path[k] > path[k - 1];
      double p_right = 1.0;
      if (p.position > 0) {
        const double right =
            w0[p.position] + profile.delta() * static_cast<double>(p.counts[p.position]);
        const double left = w0[p.position - 1] +
                            profile.delta() * static_cast<double>(p.counts[p.position - 1]);
        p_right = right / (left + right);
      }
      p.prob *= go_right ? p_right : 1.0 - p_right;
      ++p.counts[go_right ? p.position : p.position - 1];
      p.position = static_cast<std::uint64_t>(path[k]);
    }
    prefixes.push_back(std::move(p));
  });

  std::vector<std::vector<double>> partial(prefixes.size(), std::vector<double>(n + 1, 0.0));
  parallel_for(prefixes.size(), threads, [&](std::size_t i) {
    auto counts = prefixes[i].counts;
    enumerate_from(profile, w0, counts, prefixes[i].position, prefixes[i].prob,
                   n - depth, partial[i]);
  });

  std::vector<CompensatedSum> sums(n + 1);
  for (const auto& part : partial) {
    for (std::size_t x = 0; x <= n; ++x) sums[x].add(part[x]);
  }
  std::vector<double> law(n + 1);
  for (std::size_t x = 0; x <= n; ++x) law[x] = sums[x].value();
  return law;
}

void write_trajectory_csv(std::ostream& os, std::span<const WalkStats> replicas) {
  os << "replica,n,max_position,position\n";
  for (std::size_t r = 0; r < replicas.size(); ++r) {
    for (const auto& c : replicas[r].checkpoints) {
      os << r << ',' << c.n << ',' << c.max_position << ',' << c.position << '\n';
    }
  }
}

}  // namespace lerrw
