#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace lerrw {

/// Initial-weight families supported by the laboratory.
///
///  - LogPoly:   w0(0) = w0(1) = 1, w0(x) = x^alpha (ln x)^beta for x >= 2.
///  - TakeiPoly: w0(0) = 1,         w0(x) = x^alpha            for x >= 1.
enum class Family { LogPoly, TakeiPoly };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

/// Initial edge weights w0(x) of the edge {x, x+1} together with the
/// reinforcement increment delta. Immutable once constructed.
class WeightProfile {
 public:
  /// Throws ConfigError for non-finite parameters or delta < 0.
  WeightProfile(Family family, double alpha, double beta, double delta);

  static WeightProfile log_poly(double alpha, double beta, double delta) {
    return {Family::LogPoly, alpha, beta, delta};
  }
  static WeightProfile takei(double alpha, double delta) {
    return {Family::TakeiPoly, alpha, 0.0, delta};
  }

  Family family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  /// Always 0 for TakeiPoly.
  double beta() const noexcept { return beta_; }
  double delta() const noexcept { return delta_; }
  bool reinforced() const noexcept { return delta_ > 0.0; }

  /// w0(x); strictly positive for every x.
  double initial_weight(std::uint64_t x) const;
  /// ln w0(x), finite for every x.
  double log_initial_weight(std::uint64_t x) const;

  /// Same profile with a different reinforcement increment.
  WeightProfile with_delta(double delta) const {
    return {family_, alpha_, beta_, delta};
  }

  std::string describe() const;

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;

 private:
  Family family_;
  double alpha_;
  double beta_;
  double delta_;
};

enum class Recurrence { Recurrent, Transient };

std::string_view to_string(Recurrence verdict);

struct RecurrenceVerdict {
  Recurrence verdict;
  /// Sum of 1/w0(x) for x = 0..truncation. Diagnostic only.
  double phi0_partial;
  std::uint64_t truncation;
};

/// Recurrence/transience of the walk, decided from (family, alpha, beta)
/// alone: LogPoly is recurrent iff alpha < 1, or alpha = 1 and beta <= 1;
/// TakeiPoly iff alpha <= 1. delta plays no role.
RecurrenceVerdict classify_recurrence(const WeightProfile& profile,
                                      std::uint64_t truncation = 1000);

/// Sum_{x=0}^{n} 1/w0(x), accumulated with compensation. Requires n >= 1.
double phi0_partial_sum(const WeightProfile& profile, std::uint64_t n);

inline double initial_weight(const WeightProfile& profile, std::uint64_t x) {
  return profile.initial_weight(x);
}

// {"family": "logpoly"|"takei", "alpha": f, "beta": f, "delta": f}
void to_json(nlohmann::json& j, const WeightProfile& profile);
WeightProfile profile_from_json(const nlohmann::json& j);

}  // namespace lerrw
