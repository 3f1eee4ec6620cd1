#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "lerrw/weights.hpp"

namespace lerrw {

/// Psi(z) = Gamma'(z)/Gamma(z) for z > 0. Upward recurrence to z >= 8, then
/// the asymptotic series through the B14 term.
double digamma(double z);

/// Psi'(z) for z > 0, same scheme as digamma.
double trigamma(double z);

/// ln B(a, b) for a, b > 0. Stirling-corrected when either argument is
/// large so that the three log-gamma terms do not cancel.
double log_beta(double a, double b);

/// Psi(z + 1/2) - Psi(z).
double digamma_half_step(double z);

struct DigammaSandwich {
  double lower;  // ln y - ln z - 1/y
  double value;  // Psi(y) - Psi(z)
  double upper;  // ln y - ln z + 1/z
};

DigammaSandwich digamma_difference_bounds(double y, double z);

/// Beta shapes of the environment variable at site i >= 1:
/// (w0(i) / 2 delta, (w0(i-1) + delta) / 2 delta).
struct BetaShapes {
  double a;
  double b;
};

BetaShapes environment_shapes(const WeightProfile& profile, std::uint64_t site);

/// E[S_x] as the site-by-site sum of Psi(b_i) - Psi(a_i), i = 1..x.
/// Throws ConfigError when delta = 0 or x = 0.
double mean_S(const WeightProfile& profile, std::uint64_t x);

/// The same expectation regrouped as a boundary term plus a sum of
/// half-step digamma differences (an independent evaluation route).
double mean_S_regrouped(const WeightProfile& profile, std::uint64_t x);

/// V[S_x] = sum_{i=1}^{x} Psi'(b_i) + Psi'(a_i).
double var_S(const WeightProfile& profile, std::uint64_t x);

/// Limsup constant K: piecewise in (alpha, beta, delta) for LogPoly and in
/// (alpha, delta) for TakeiPoly. Requires alpha < 1 and delta > 0; rejects
/// LogPoly with alpha = 0, beta = 0.
double k_constant(const WeightProfile& profile);

enum class PredictorTarget { MeanS, VarS, LimsupScale };

std::string_view to_string(PredictorTarget target);

/// Case rows of the asymptotic statements. The first six rows are shared by
/// the mean and variance asymptotics; the alpha = 1 limsup statements split
/// on the sign of beta instead, and TakeiPoly has its own two rows.
enum class Regime {
  AlphaNegative,
  AlphaZeroBetaNegative,
  AlphaZeroBetaPositive,
  AlphaBetweenZeroAndOne,
  AlphaOneBetaBelowOne,
  AlphaOneBetaOne,
  AlphaOneBetaNegative,
  AlphaOneBetaPositive,
  TakeiAlphaBelowOne,
  TakeiAlphaOne,
};

std::string_view to_string(Regime regime);

struct PredictorBand {
  double lower;
  double central;
  double upper;
};

/// Closed-form asymptotic predictor selected from (family, alpha, beta).
///
/// Most rows are asymptotic equivalences, evaluated as a single curve
/// (lower == central == upper). Rows stated only through epsilon bounds
/// (alpha < 0 for the moments, alpha = 1 for the limsup scale) are bands; for
/// those `central` is the epsilon -> 0 curve.
class RegimePredictor {
 public:
  RegimePredictor(const WeightProfile& profile, PredictorTarget target,
                  double epsilon = 0.3);

  const WeightProfile& profile() const noexcept { return profile_; }
  PredictorTarget target() const noexcept { return target_; }
  Regime regime() const noexcept { return regime_; }
  double epsilon() const noexcept { return epsilon_; }
  bool is_band() const noexcept { return band_; }

  PredictorBand band(double x) const;
  double operator()(double x) const { return band(x).central; }

 private:
  WeightProfile profile_;
  PredictorTarget target_;
  Regime regime_;
  double epsilon_;
  bool band_ = false;
  double k_ = 0.0;
};

inline RegimePredictor regime_predictor(const WeightProfile& profile,
                                        PredictorTarget target,
                                        double epsilon = 0.3) {
  return {profile, target, epsilon};
}

struct MomentTable {
  WeightProfile profile;
  std::vector<std::uint64_t> xs;
  std::vector<double> mean_s;
  std::vector<double> var_s;
  /// Central predictor curves; NaN where no regime row applies.
  std::vector<double> predictor_mean;
  std::vector<double> predictor_var;
};

/// E[S_x] and V[S_x] at every requested x in one streaming pass.
MomentTable build_moment_table(const WeightProfile& profile,
                               std::span<const std::uint64_t> xs,
                               double epsilon = 0.3);

/// CSV with header "x,mean_s,var_s,predictor_mean,predictor_var".
void write_moment_table_csv(std::ostream& os, const MomentTable& table);

}  // namespace lerrw
