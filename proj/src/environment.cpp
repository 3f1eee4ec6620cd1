#include "lerrw/environment.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lerrw/csv.hpp"
#include "lerrw/distributions.hpp"
#include "lerrw/error.hpp"
#include "lerrw/parallel.hpp"
#include "lerrw/special_functions.hpp"
#include "lerrw/summation.hpp"
#include "lerrw/walk.hpp"

namespace lerrw {

namespace {

void require_reinforced(const WeightProfile& profile) {
  if (!(profile.delta() > 0.0)) {
    throw ConfigError("profile.delta must be > 0 for a Beta environment");
  }
}

// Draws sites first..last into env, continuing `rng`.
void draw_sites(Environment& env, std::uint64_t first, std::uint64_t last,
                RandomStream& rng) {
  const double two_delta = 2.0 * env.profile.delta();
  double w_prev = env.profile.initial_weight(first - 1);
  for (std::uint64_t i = first; i <= last; ++i) {
    const double w = env.profile.initial_weight(i);
    const auto draw = sample_beta(w / two_delta, (w_prev + env.profile.delta()) / two_delta, rng);
    env.p.push_back(draw.p);
    env.log_p.push_back(draw.log_p);
    env.log_q.push_back(draw.log_q);
    env.log_odds.push_back(draw.log_odds_left);
    w_prev = w;
  }
}

void rebuild_prefix(Environment& env) {
  env.log_s.assign(env.log_odds.size(), 0.0);
  CompensatedSum s;
  for (std::size_t i = 1; i < env.log_odds.size(); ++i) {
    s.add(env.log_odds[i]);
    env.log_s[i] = s.value();
  }
}

Environment empty_environment(const WeightProfile& profile, std::uint64_t seed) {
  Environment env;
  env.profile = profile;
  env.seed = seed;
  env.p = {1.0};
  env.log_p = {0.0};
  env.log_q = {-std::numeric_limits<double>::infinity()};
  env.log_odds = {0.0};
  return env;
}

}  // namespace

Environment sample_environment(const WeightProfile& profile, std::uint64_t x_max,
                               std::uint64_t seed) {
  require_reinforced(profile);
  if (x_max < 1) throw ConfigError("environment x_max must be >= 1");
  Environment env = empty_environment(profile, seed);
  RandomStream rng(seed);
  draw_sites(env, 1, x_max, rng);
  rebuild_prefix(env);
  env.stream = rng;
  return env;
}

Environment Environment::extended(std::uint64_t new_x_max) const {
  if (new_x_max <= x_max()) return *this;
  if (!stream) {
    throw ConfigError("an imported environment cannot be extended");
  }
  Environment env = *this;
  RandomStream rng = *stream;
  draw_sites(env, x_max() + 1, new_x_max, rng);
  rebuild_prefix(env);
  env.stream = rng;
  return env;
}

WeightSequence quenched_step_weights(const Environment& env) {
  std::vector<double> log_w(env.log_s.size());
  for (std::size_t x = 0; x < log_w.size(); ++x) log_w[x] = -env.log_s[x];
  return WeightSequence::from_log_weights(std::move(log_w));
}

CrossingCounts crossing_counts(std::span<const std::int64_t> path) {
  validate_path(path);
  CrossingCounts counts;
  const auto top = static_cast<std::size_t>(*std::max_element(path.begin(), path.end()));
  counts.right.assign(top + 1, 0);
  counts.left.assign(top + 1, 0);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto from = static_cast<std::size_t>(path[k - 1]);
    if (path[k] > path[k - 1]) {
      ++counts.right[from];
    } else {
      ++counts.left[from];
    }
  }
  return counts;
}

double quenched_path_probability(const Environment& env,
                                 std::span<const std::int64_t> path) {
  const auto counts = crossing_counts(path);
  CompensatedSum log_prob;
  for (std::size_t i = 1; i < counts.right.size(); ++i) {
    if (counts.right[i] == 0 && counts.left[i] == 0) continue;
    if (i > env.x_max()) {
      throw std::out_of_range("path visits site " + std::to_string(i) +
                              " beyond the environment (x_max = " +
                              std::to_string(env.x_max()) + ")");
    }
    log_prob.add(static_cast<double>(counts.right[i]) * env.log_p[i]);
    log_prob.add(static_cast<double>(counts.left[i]) * env.log_q[i]);
  }
  return std::exp(log_prob.value());
}

double log_annealed_path_probability(const WeightProfile& profile,
                                     std::span<const std::int64_t> path) {
  require_reinforced(profile);
  // A step 0 -> -1 has probability zero under p_0 = 1. The prefix before it
  // must be a valid path and the rest must still move by +-1.
  const auto neg = std::find_if(path.begin(), path.end(),
                                [](std::int64_t v) { return v < 0; });
  if (neg != path.end() && neg != path.begin() && *(neg - 1) == 0) {
    const auto k = static_cast<std::size_t>(neg - path.begin());
    validate_path(path.first(k));
    for (std::size_t i = k; i < path.size(); ++i) {
      if (std::abs(path[i] - path[i - 1]) != 1) {
        throw InvalidPathError("path must move by +-1 at every step (index " +
                               std::to_string(i) + ")");
      }
    }
    return -std::numeric_limits<double>::infinity();
  }
  const auto counts = crossing_counts(path);
  CompensatedSum log_prob;
  for (std::size_t i = 1; i < counts.right.size(); ++i) {
    const auto a = static_cast<double>(counts.right[i]);
    const auto b = static_cast<double>(counts.left[i]);
    if (a == 0.0 && b == 0.0) continue;
    const auto shapes = environment_shapes(profile, i);
    log_prob.add(log_beta(shapes.a + a, shapes.b + b) - log_beta(shapes.a, shapes.b));
  }
  return log_prob.value();
}

double annealed_path_probability(const WeightProfile& profile,
                                 std::span<const std::int64_t> path) {
  return std::exp(log_annealed_path_probability(profile, path));
}

std::vector<double> sample_s_levels(const WeightProfile& profile,
                                    std::span<const std::uint64_t> xs,
                                    std::uint64_t seed) {
  require_reinforced(profile);
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw ConfigError("S levels must be sorted");
  }
  std::vector<double> out;
  out.reserve(xs.size());
  RandomStream rng(seed);
  const double delta = profile.delta();
  const double two_delta = 2.0 * delta;
  double w_prev = profile.initial_weight(0);
  CompensatedSum s;
  std::uint64_t i = 0;
  for (const auto x : xs) {
    while (i < x) {
      ++i;
      const double w = profile.initial_weight(i);
      s.add(sample_beta(w / two_delta, (w_prev + delta) / two_delta, rng).log_odds_left);
      w_prev = w;
    }
    out.push_back(s.value());
  }
  return out;
}

SStatistics s_statistics(const WeightProfile& profile, std::uint64_t x,
                         std::uint64_t n_envs, std::uint64_t master_seed,
                         unsigned threads) {
  require_reinforced(profile);
  if (x < 1) throw ConfigError("x must be >= 1");
  if (n_envs < 1) throw ConfigError("n_envs must be >= 1");

  SStatistics st;
  st.x = x;
  st.n_envs = n_envs;
  st.master_seed = master_seed;
  st.samples.resize(n_envs);
  const std::uint64_t level[] = {x};
  parallel_for(n_envs, threads, [&](std::size_t e) {
    st.samples[e] = sample_s_levels(profile, level, derive_seed(master_seed, e))[0];
  });

  st.mean_S = mean_S(profile, x);
  st.var_S = var_S(profile, x);

  const double n = static_cast<double>(n_envs);
  CompensatedSum sum;
  for (const double s : st.samples) sum.add(s);
  st.sample_mean = sum.value() / n;

  CompensatedSum m2;
  CompensatedSum m4;
  for (const double s : st.samples) {
    const double d = s - st.sample_mean;
    m2.add(d * d);
    m4.add(d * d * d * d);
  }
  if (n_envs > 1) {
    st.sample_var = m2.value() / (n - 1.0);
    st.mean_se = std::sqrt(st.sample_var / n);
    // Large-sample standard error of the sample variance.
    const double mu4 = m4.value() / n;
    const double s2 = m2.value() / n;
    st.var_se = std::sqrt(std::max(0.0, mu4 - s2 * s2) / n);
  } else {
    st.sample_var = std::numeric_limits<double>::quiet_NaN();
    st.mean_se = std::numeric_limits<double>::quiet_NaN();
    st.var_se = std::numeric_limits<double>::quiet_NaN();
  }

  st.slln_ratio.reserve(n_envs);
  for (const double s : st.samples) st.slln_ratio.push_back(s / st.mean_S);
  return st;
}

void write_environment_csv(std::ostream& os, const Environment& env) {
  os << "i,p_i,S_i,log_p_i,log_q_i\n";
  for (std::uint64_t i = 1; i <= env.x_max(); ++i) {
    os << i << ',' << csv::format_double(env.p[i]) << ','
       << csv::format_double(env.log_s[i]) << ',' << csv::format_double(env.log_p[i])
       << ',' << csv::format_double(env.log_q[i]) << '\n';
  }
}

Environment read_environment_csv(std::istream& is, const WeightProfile& profile) {
  const auto table = csv::read(is);
  const auto i_col = table.column("i");
  const auto p_col = table.column("p_i");
  const bool has_logs = table.has_column("log_p_i") && table.has_column("log_q_i");
  Environment env = empty_environment(profile, 0);
  const std::size_t n = table.rows.size();
  if (n == 0) throw ConfigError("environment CSV has no sites");
  env.p.resize(n + 1);
  env.log_p.resize(n + 1);
  env.log_q.resize(n + 1);
  env.log_odds.resize(n + 1);
  std::vector<bool> seen(n + 1, false);
  for (const auto& row : table.rows) {
    const auto i = csv::parse_int(row[i_col]);
    if (i < 1 || static_cast<std::size_t>(i) > n || seen[i]) {
      throw ConfigError("environment CSV: i must run over 1..n, each exactly once");
    }
    seen[i] = true;
    const double p = csv::parse_double(row[p_col]);
    double log_p;
    double log_q;
    if (has_logs) {
      log_p = csv::parse_double(row[table.column("log_p_i")]);
      log_q = csv::parse_double(row[table.column("log_q_i")]);
    } else {
      log_p = std::log(p);
      log_q = std::log1p(-p);
    }
    if (!(p > 0.0 && p < 1.0) && !(std::isfinite(log_p) && std::isfinite(log_q))) {
      throw ConfigError("environment CSV: p_i must lie in (0, 1) at i = " +
                        std::to_string(i));
    }
    env.p[i] = p;
    env.log_p[i] = log_p;
    env.log_q[i] = log_q;
    env.log_odds[i] = log_q - log_p;
  }
  rebuild_prefix(env);
  return env;
}

}  // namespace lerrw
