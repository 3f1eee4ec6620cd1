#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lerrw/weights.hpp"

namespace lerrw {

/// Positive conductances w_0..w_{x_max}, stored as natural logs. w_{-1} = 0
/// is implicit (reflection at the origin).
class WeightSequence {
 public:
  WeightSequence() = default;

  /// Throws ConfigError on empty input or non-finite entries.
  static WeightSequence from_log_weights(std::vector<double> log_w);
  /// Throws ConfigError unless every weight is finite and > 0.
  static WeightSequence from_weights(std::span<const double> w);
  /// w0(0..x_max) of a profile (delta is ignored).
  static WeightSequence from_profile(const WeightProfile& profile, std::uint64_t x_max);

  std::uint64_t x_max() const noexcept { return log_w_.size() - 1; }
  std::size_t size() const noexcept { return log_w_.size(); }
  double log_weight(std::uint64_t x) const { return log_w_.at(x); }
  double weight(std::uint64_t x) const;
  std::span<const double> log_weights() const noexcept { return log_w_; }

  /// Probability of stepping right from x: w_x / (w_{x-1} + w_x); 1 at x = 0.
  double right_probability(std::uint64_t x) const;

 private:
  explicit WeightSequence(std::vector<double> log_w) : log_w_(std::move(log_w)) {}
  std::vector<double> log_w_;
};

/// Electrical-network quantities of the weighted walk on {0..x_max+1}.
///
/// log_gamma[x] = ln(w_0 / w_x) (the product of q_i/p_i telescopes);
/// h(x) = sum_{i<x} gamma_i; pi_x = (w_{x-1} + w_x) / w_0; and
/// T(x) = sum_{i<x} gamma_i sum_{j<=i} pi_j, the expected hitting time of x
/// from 0. The sums are accumulated in log-rescaled compensated form; the log
/// arrays never overflow, the linear arrays are checked on construction.
struct ResistanceProfile {
  std::vector<double> log_gamma;  // x = 0..x_max
  std::vector<double> log_h;      // x = 0..x_max+1, log_h[0] = -inf
  std::vector<double> log_pi;     // x = 0..x_max
  std::vector<double> log_t;      // x = 0..x_max+1, log_t[0] = -inf
  std::vector<double> h;
  std::vector<double> pi;
  std::vector<double> t;
  double log_z_partial = 0.0;
  double z_partial = 0.0;  // sum_{x<=x_max} pi_x

  std::uint64_t x_max() const noexcept { return log_gamma.size() - 1; }
  double gamma(std::uint64_t x) const;
};

/// Throws OverflowError naming the first x whose h, T or the partial mass
/// leaves the double range.
ResistanceProfile build_resistance_profile(const WeightSequence& w);

/// T(x) = E_0[tau_x]; x in [0, x_max + 1], otherwise std::out_of_range.
double expected_hitting_time(const WeightSequence& w, std::uint64_t x);
double expected_hitting_time(const ResistanceProfile& profile, std::uint64_t x);

enum class BoundId {
  /// T(x) >= h(x) >= max_{i<x} gamma_i >= gamma_{x-1}
  LowerChain,
  /// T(x) <= 2 x^2 (max_{i<x} gamma_i)(max_{j<x} 1/gamma_j)
  QuadraticUpper,
  /// T(x) <= Z h(x) <= Z x max_{i<x} gamma_i, given Z >= total mass
  MassUpper,
};

std::string_view to_string(BoundId id);

struct BoundCheck {
  BoundId bound;
  bool evaluated = false;
  /// x attaining the smallest relative slack, and that slack in absolute and
  /// T-relative terms.
  std::uint64_t worst_x = 0;
  double min_slack = 0.0;
  double min_relative_slack = 0.0;
  bool holds = true;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  double tol_rel = 1e-10;
  bool all_hold() const;
};

/// Slack of one bound at one x >= 1 (non-negative when it holds).
double bound_slack(const ResistanceProfile& profile, std::uint64_t x, BoundId bound,
                   std::optional<double> z_upper = std::nullopt);

/// Evaluates every bound at x = 1..x_max+1. The mass bound is only evaluated
/// when the caller supplies z_upper, an analytic upper bound on the total
/// mass sum_x pi_x; violations are reported, not thrown.
BoundsReport check_bounds(const ResistanceProfile& profile,
                          std::optional<double> z_upper = std::nullopt,
                          double tol_rel = 1e-10);

// CSV with header "x,w" (or "x,log_w" on input).
void write_weights_csv(std::ostream& os, const WeightSequence& w);
WeightSequence read_weights_csv(std::istream& is);
// CSV with header "x,log_gamma,h,pi,T".
void write_profile_csv(std::ostream& os, const ResistanceProfile& profile);

}  // namespace lerrw
