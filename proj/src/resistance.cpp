#include "lerrw/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "lerrw/csv.hpp"
#include "lerrw/error.hpp"
#include "lerrw/summation.hpp"

namespace lerrw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

WeightSequence WeightSequence::from_log_weights(std::vector<double> log_w) {
  if (log_w.empty()) throw ConfigError("weight sequence must not be empty");
  for (std::size_t x = 0; x < log_w.size(); ++x) {
    if (!std::isfinite(log_w[x])) {
      throw ConfigError("weight at x = " + std::to_string(x) +
                        " must be finite and strictly positive");
    }
  }
  return WeightSequence(std::move(log_w));
}

WeightSequence WeightSequence::from_weights(std::span<const double> w) {
  std::vector<double> log_w;
  log_w.reserve(w.size());
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (!(w[x] > 0.0) || !std::isfinite(w[x])) {
      throw ConfigError("weight at x = " + std::to_string(x) +
                        " must be finite and strictly positive");
    }
    log_w.push_back(std::log(w[x]));
  }
  return from_log_weights(std::move(log_w));
}

WeightSequence WeightSequence::from_profile(const WeightProfile& profile,
                                            std::uint64_t x_max) {
  std::vector<double> log_w(x_max + 1);
  for (std::uint64_t x = 0; x <= x_max; ++x) log_w[x] = profile.log_initial_weight(x);
  return from_log_weights(std::move(log_w));
}

double WeightSequence::weight(std::uint64_t x) const { return std::exp(log_w_.at(x)); }

double WeightSequence::right_probability(std::uint64_t x) const {
  if (x == 0) return 1.0;
  return 1.0 / (1.0 + std::exp(log_w_.at(x - 1) - log_w_.at(x)));
}

double ResistanceProfile::gamma(std::uint64_t x) const {
  return std::exp(log_gamma.at(x));
}

ResistanceProfile build_resistance_profile(const WeightSequence& w) {
  const auto lw = w.log_weights();
  const std::size_t n = lw.size();
  ResistanceProfile p;
  p.log_gamma.resize(n);
  p.log_pi.resize(n);
  p.pi.resize(n);
  p.log_h.assign(n + 1, kNegInf);
  p.log_t.assign(n + 1, kNegInf);
  p.h.assign(n + 1, 0.0);
  p.t.assign(n + 1, 0.0);

  LogAccumulator mass;      // sum_{j<=x} pi_j
  LogAccumulator harmonic;  // h(x+1)
  LogAccumulator hitting;   // T(x+1)
  for (std::size_t x = 0; x < n; ++x) {
    p.log_gamma[x] = lw[0] - lw[x];
    // pi is normalised with gamma, so pi_0 = 1 whatever w_0 is.
    if (x == 0) {
      p.log_pi[x] = 0.0;
      p.pi[x] = 1.0;
    } else {
      const double linear = std::exp(lw[x - 1] - lw[0]) + std::exp(lw[x] - lw[0]);
      if (std::isfinite(linear) && linear > std::numeric_limits<double>::min()) {
        p.pi[x] = linear;
        p.log_pi[x] = std::log(linear);
      } else {
        p.log_pi[x] = log_add_exp(lw[x - 1], lw[x]) - lw[0];
        p.pi[x] = std::exp(p.log_pi[x]);
      }
    }
    if (std::isinf(p.pi[x])) throw OverflowError("pi_x overflows", x);

    mass.add_log(p.log_pi[x]);
    harmonic.add_log(p.log_gamma[x]);
    hitting.add_log(p.log_gamma[x] + mass.log_value());

    p.log_h[x + 1] = harmonic.log_value();
    p.log_t[x + 1] = hitting.log_value();
    p.h[x + 1] = harmonic.value();
    p.t[x + 1] = hitting.value();
    if (std::isinf(p.h[x + 1])) throw OverflowError("h(x) overflows", x + 1);
    if (std::isinf(p.t[x + 1])) throw OverflowError("T(x) overflows", x + 1);
  }
  p.log_z_partial = mass.log_value();
  p.z_partial = mass.value();
  if (std::isinf(p.z_partial)) throw OverflowError("partial mass overflows", n - 1);
  return p;
}

double expected_hitting_time(const ResistanceProfile& profile, std::uint64_t x) {
  if (x >= profile.t.size()) {
    throw std::out_of_range("hitting level " + std::to_string(x) +
                            " is beyond x_max + 1 = " +
                            std::to_string(profile.t.size() - 1));
  }
  return profile.t[x];
}

double expected_hitting_time(const WeightSequence& w, std::uint64_t x) {
  if (x > w.x_max() + 1) {
    throw std::out_of_range("hitting level " + std::to_string(x) +
                            " is beyond x_max + 1 = " + std::to_string(w.x_max() + 1));
  }
  return expected_hitting_time(build_resistance_profile(w), x);
}

std::string_view to_string(BoundId id) {
  switch (id) {
    case BoundId::LowerChain:
      return "lower_chain";
    case BoundId::QuadraticUpper:
      return "quadratic_upper";
    case BoundId::MassUpper:
      return "mass_upper";
  }
  return "unknown";
}

bool BoundsReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return !c.evaluated || c.holds; });
}

namespace {

struct GammaExtremes {
  double max_log_gamma;      // max_{i<x} ln gamma_i
  double max_log_inv_gamma;  // max_{j<x} -ln gamma_j
};

double slack_with(const ResistanceProfile& p, std::uint64_t x, BoundId bound,
                  const GammaExtremes& ext, std::optional<double> z_upper) {
  const double t = p.t[x];
  const double h = p.h[x];
  const double max_gamma = std::exp(ext.max_log_gamma);
  switch (bound) {
    case BoundId::LowerChain: {
      const double last = p.gamma(x - 1);
      return std::min({t - h, h - max_gamma, max_gamma - last});
    }
    case BoundId::QuadraticUpper: {
      const double xd = static_cast<double>(x);
      const double rhs =
          2.0 * xd * xd * std::exp(ext.max_log_gamma + ext.max_log_inv_gamma);
      return rhs - t;
    }
    case BoundId::MassUpper: {
      if (!z_upper) return std::numeric_limits<double>::quiet_NaN();
      const double z = *z_upper;
      const double xd = static_cast<double>(x);
      return std::min(z * h - t, z * xd * max_gamma - z * h);
    }
  }
  return 0.0;
}

}  // namespace

double bound_slack(const ResistanceProfile& profile, std::uint64_t x, BoundId bound,
                   std::optional<double> z_upper) {
  if (x < 1 || x >= profile.t.size()) {
    throw std::out_of_range("bound_slack: x must lie in [1, x_max + 1]");
  }
  GammaExtremes ext{kNegInf, kNegInf};
  for (std::uint64_t i = 0; i < x; ++i) {
    ext.max_log_gamma = std::max(ext.max_log_gamma, profile.log_gamma[i]);
    ext.max_log_inv_gamma = std::max(ext.max_log_inv_gamma, -profile.log_gamma[i]);
  }
  return slack_with(profile, x, bound, ext, z_upper);
}

BoundsReport check_bounds(const ResistanceProfile& profile,
                          std::optional<double> z_upper, double tol_rel) {
  BoundsReport report;
  report.tol_rel = tol_rel;
  const BoundId ids[] = {BoundId::LowerChain, BoundId::QuadraticUpper,
                         BoundId::MassUpper};
  for (const auto id : ids) {
    BoundCheck check{id};
    check.evaluated = id != BoundId::MassUpper || z_upper.has_value();
    check.min_relative_slack = std::numeric_limits<double>::infinity();
    report.checks.push_back(check);
  }

  GammaExtremes ext{kNegInf, kNegInf};
  for (std::uint64_t x = 1; x < profile.t.size(); ++x) {
    ext.max_log_gamma = std::max(ext.max_log_gamma, profile.log_gamma[x - 1]);
    ext.max_log_inv_gamma = std::max(ext.max_log_inv_gamma, -profile.log_gamma[x - 1]);
    for (auto& check : report.checks) {
      if (!check.evaluated) continue;
      const double slack = slack_with(profile, x, check.bound, ext, z_upper);
      const double rel = slack / std::abs(profile.t[x]);
      if (rel < check.min_relative_slack) {
        check.min_relative_slack = rel;
        check.min_slack = slack;
        check.worst_x = x;
      }
    }
  }
  for (auto& check : report.checks) {
    if (check.evaluated) check.holds = check.min_relative_slack >= -tol_rel;
  }
  return report;
}

void write_weights_csv(std::ostream& os, const WeightSequence& w) {
  os << "x,w\n";
  for (std::uint64_t x = 0; x <= w.x_max(); ++x) {
    os << x << ',' << csv::format_double(w.weight(x)) << '\n';
  }
}

WeightSequence read_weights_csv(std::istream& is) {
  const auto table = csv::read(is);
  const auto x_col = table.column("x");
  const bool log_form = table.has_column("log_w");
  const auto w_col = table.column(log_form ? "log_w" : "w");
  std::vector<double> values(table.rows.size());
  std::vector<bool> seen(table.rows.size(), false);
  for (const auto& row : table.rows) {
    const auto x = csv::parse_int(row[x_col]);
    if (x < 0 || static_cast<std::size_t>(x) >= values.size() || seen[x]) {
      throw ConfigError("weights CSV: x values must be 0..n-1, each exactly once");
    }
    seen[x] = true;
    values[x] = csv::parse_double(row[w_col]);
  }
  if (log_form) return WeightSequence::from_log_weights(std::move(values));
  return WeightSequence::from_weights(values);
}

void write_profile_csv(std::ostream& os, const ResistanceProfile& profile) {
  os << "x,log_gamma,h,pi,T\n";
  const std::size_t n = profile.log_gamma.size();
  for (std::size_t x = 0; x <= n; ++x) {
    os << x << ',';
    if (x < n) os << csv::format_double(profile.log_gamma[x]);
    os << ',' << csv::format_double(profile.h[x]) << ',';
    if (x < n) os << csv::format_double(profile.pi[x]);
    os << ',' << csv::format_double(profile.t[x]) << '\n';
  }
}

}  // namespace lerrw
