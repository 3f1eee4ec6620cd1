#include "lerrw/special_functions.hpp"

#include <math.h>  // lgamma_r

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <optional>
#include <string>

#include "lerrw/csv.hpp"
#include "lerrw/error.hpp"
#include "lerrw/summation.hpp"

namespace lerrw {

namespace {

constexpr double kShiftThreshold = 8.0;

void require_positive(double z, const char* fn) {
  if (!(z > 0.0) || std::isinf(z)) {
    throw DomainError(std::string(fn) + ": argument must be positive and finite");
  }
}

// ln Gamma for positive arguments, without touching the global signgam.
double lgamma_positive(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)], x >= 10.
double stirling_remainder(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12.0 -
              r2 * (1.0 / 360.0 -
                    r2 * (1.0 / 1260.0 -
                          r2 * (1.0 / 1680.0 -
                                r2 * (1.0 / 1188.0 -
                                      r2 * (691.0 / 360360.0 - r2 / 156.0))))));
}

}  // namespace

double digamma(double z) {
  require_positive(z, "digamma");
  CompensatedSum shift;
  while (z < kShiftThreshold) {
    shift.add(1.0 / z);
    z += 1.0;
  }
  const double r2 = 1.0 / (z * z);
  // sum_{k=1}^{7} B_{2k} / (2k z^{2k})
  const double tail =
      r2 * (1.0 / 12.0 -
            r2 * (1.0 / 120.0 -
                  r2 * (1.0 / 252.0 -
                        r2 * (1.0 / 240.0 -
                              r2 * (1.0 / 132.0 -
                                    r2 * (691.0 / 32760.0 - r2 / 12.0))))));
  const double asymptotic = std::log(z) - 0.5 / z - tail;
  return asymptotic - shift.value();
}

double trigamma(double z) {
  require_positive(z, "trigamma");
  CompensatedSum shift;
  while (z < kShiftThreshold) {
    shift.add(1.0 / (z * z));
    z += 1.0;
  }
  const double r = 1.0 / z;
  const double r2 = r * r;
  // 1/z + 1/(2 z^2) + sum_{k=1}^{7} B_{2k} / z^{2k+1}
  const double tail =
      r * r2 *
      (1.0 / 6.0 -
       r2 * (1.0 / 30.0 -
             r2 * (1.0 / 42.0 -
                   r2 * (1.0 / 30.0 -
                         r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
  const double asymptotic = r + 0.5 * r2 + tail;
  shift.add(asymptotic);
  return shift.value();
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
    throw DomainError("log_beta: arguments must be positive and finite");
  }
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  constexpr double ln_sqrt_2pi = 0.918938533204672741780329736406;
  if (p >= 10.0) {
    const double corr =
        stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(p + q);
    return -0.5 * std::log(q) + ln_sqrt_2pi + corr +
           (p - 0.5) * std::log(p / (p + q)) + q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr = stirling_remainder(q) - stirling_remainder(p + q);
    return lgamma_positive(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return lgamma_positive(p) + lgamma_positive(q) - lgamma_positive(p + q);
}

double digamma_half_step(double z) {
  require_positive(z, "digamma_half_step");
  return digamma(z + 0.5) - digamma(z);
}

DigammaSandwich digamma_difference_bounds(double y, double z) {
  require_positive(y, "digamma_difference_bounds");
  require_positive(z, "digamma_difference_bounds");
  const double log_ratio = std::log(y) - std::log(z);
  return {log_ratio - 1.0 / y, digamma(y) - digamma(z), log_ratio + 1.0 / z};
}

BetaShapes environment_shapes(const WeightProfile& profile, std::uint64_t site) {
  if (site == 0) throw ConfigError("environment site must be >= 1");
  const double delta = profile.delta();
  if (!(delta > 0.0)) {
    throw ConfigError("delta must be > 0 for the Beta environment");
  }
  const double two_delta = 2.0 * delta;
  return {profile.initial_weight(site) / two_delta,
          (profile.initial_weight(site - 1) + delta) / two_delta};
}

namespace {

void require_moment_args(const WeightProfile& profile, std::uint64_t x) {
  if (!(profile.delta() > 0.0)) {
    throw ConfigError("delta must be > 0 for environment moments");
  }
  if (x < 1) throw ConfigError("x must be >= 1");
}

}  // namespace

double mean_S(const WeightProfile& profile, std::uint64_t x) {
  require_moment_args(profile, x);
  const double delta = profile.delta();
  const double two_delta = 2.0 * delta;
  CompensatedSum sum;
  double w_prev = profile.initial_weight(0);
  for (std::uint64_t i = 1; i <= x; ++i) {
    const double w = profile.initial_weight(i);
    sum.add(digamma((w_prev + delta) / two_delta) - digamma(w / two_delta));
    w_prev = w;
  }
  return sum.value();
}

double mean_S_regrouped(const WeightProfile& profile, std::uint64_t x) {
  require_moment_args(profile, x);
  const double two_delta = 2.0 * profile.delta();
  CompensatedSum sum;
  sum.add(digamma(profile.initial_weight(0) / two_delta));
  sum.add(-digamma(profile.initial_weight(x) / two_delta));
  for (std::uint64_t i = 0; i < x; ++i) {
    sum.add(digamma_half_step(profile.initial_weight(i) / two_delta));
  }
  return sum.value();
}

double var_S(const WeightProfile& profile, std::uint64_t x) {
  require_moment_args(profile, x);
  const double delta = profile.delta();
  const double two_delta = 2.0 * delta;
  CompensatedSum sum;
  double w_prev = profile.initial_weight(0);
  for (std::uint64_t i = 1; i <= x; ++i) {
    const double w = profile.initial_weight(i);
    sum.add(trigamma((w_prev + delta) / two_delta) + trigamma(w / two_delta));
    w_prev = w;
  }
  return sum.value();
}

double k_constant(const WeightProfile& profile) {
  const double a = profile.alpha();
  const double d = profile.delta();
  if (!(d > 0.0)) throw ConfigError("k_constant: delta must be > 0");
  if (a >= 1.0) throw ConfigError("k_constant: alpha must be < 1");
  if (a < 0.0) return (1.0 - a) / (2.0 * d);
  if (a > 0.0) return (1.0 - a) / d;
  if (profile.family() == Family::TakeiPoly) {
    return 1.0 / digamma_half_step(1.0 / (2.0 * d));
  }
  const double b = profile.beta();
  if (b == 0.0) throw ConfigError("k_constant: beta must be nonzero when alpha = 0");
  return b < 0.0 ? 1.0 / (2.0 * d) : 1.0 / d;
}

std::string_view to_string(PredictorTarget target) {
  switch (target) {
    case PredictorTarget::MeanS:
      return "mean_s";
    case PredictorTarget::VarS:
      return "var_s";
    case PredictorTarget::LimsupScale:
      return "limsup_scale";
  }
  return "unknown";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::AlphaNegative:
      return "alpha<0";
    case Regime::AlphaZeroBetaNegative:
      return "alpha=0,beta<0";
    case Regime::AlphaZeroBetaPositive:
      return "alpha=0,beta>0";
    case Regime::AlphaBetweenZeroAndOne:
      return "0<alpha<1";
    case Regime::AlphaOneBetaBelowOne:
      return "alpha=1,beta<1";
    case Regime::AlphaOneBetaOne:
      return "alpha=1,beta=1";
    case Regime::AlphaOneBetaNegative:
      return "alpha=1,beta<0";
    case Regime::AlphaOneBetaPositive:
      return "alpha=1,0<beta<=1";
    case Regime::TakeiAlphaBelowOne:
      return "takei,alpha<1";
    case Regime::TakeiAlphaOne:
      return "takei,alpha=1";
  }
  return "unknown";
}

namespace {

[[noreturn]] void no_regime(const WeightProfile& profile, PredictorTarget target) {
  throw NoRegimeError("no " + std::string(to_string(target)) +
                      " predictor row covers " + profile.describe());
}

// Shared case split of the mean/variance asymptotics (LogPoly only).
Regime moment_regime(const WeightProfile& profile, PredictorTarget target) {
  if (profile.family() != Family::LogPoly) no_regime(profile, target);
  const double a = profile.alpha();
  const double b = profile.beta();
  if (a < 0.0) return Regime::AlphaNegative;
  if (a == 0.0) {
    if (b < 0.0) return Regime::AlphaZeroBetaNegative;
    if (b > 0.0) return Regime::AlphaZeroBetaPositive;
    no_regime(profile, target);
  }
  if (a < 1.0) return Regime::AlphaBetweenZeroAndOne;
  if (a == 1.0) {
    if (b < 1.0) return Regime::AlphaOneBetaBelowOne;
    if (b == 1.0) return Regime::AlphaOneBetaOne;
  }
  no_regime(profile, target);
}

Regime limsup_regime(const WeightProfile& profile) {
  const auto target = PredictorTarget::LimsupScale;
  if (!(profile.delta() > 0.0)) no_regime(profile, target);
  const double a = profile.alpha();
  const double b = profile.beta();
  if (profile.family() == Family::TakeiPoly) {
    if (a < 1.0) return Regime::TakeiAlphaBelowOne;
    if (a == 1.0) return Regime::TakeiAlphaOne;
    no_regime(profile, target);
  }
  if (a < 1.0) return moment_regime(profile, target);
  if (a == 1.0) {
    if (b < 0.0) return Regime::AlphaOneBetaNegative;
    if (b > 0.0 && b <= 1.0) return Regime::AlphaOneBetaPositive;
  }
  no_regime(profile, target);
}

}  // namespace

RegimePredictor::RegimePredictor(const WeightProfile& profile,
                                 PredictorTarget target, double epsilon)
    : profile_(profile), target_(target), regime_(Regime::AlphaNegative), epsilon_(epsilon) {
  if (target != PredictorTarget::LimsupScale && !(profile.delta() > 0.0)) {
    no_regime(profile, target);
  }
  regime_ = target == PredictorTarget::LimsupScale ? limsup_regime(profile)
                                                   : moment_regime(profile, target);
  switch (target) {
    case PredictorTarget::MeanS:
    case PredictorTarget::VarS:
      band_ = regime_ == Regime::AlphaNegative;
      break;
    case PredictorTarget::LimsupScale:
      band_ = regime_ == Regime::AlphaOneBetaNegative ||
              regime_ == Regime::AlphaOneBetaPositive ||
              regime_ == Regime::TakeiAlphaOne;
      if (!band_) k_ = k_constant(profile);
      break;
  }
  if (band_) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
      throw ConfigError("epsilon must lie in (0, 1)");
    }
    if (regime_ == Regime::AlphaNegative &&
        !(epsilon * std::abs(profile.beta()) < 1.0)) {
      throw ConfigError("epsilon must be < 1/|beta| for the alpha < 0 band");
    }
  }
}

PredictorBand RegimePredictor::band(double x) const {
  const double a = profile_.alpha();
  const double b = profile_.beta();
  const double d = profile_.delta();
  const double eps = epsilon_;
  const double lx = std::log(x);
  auto exact = [](double v) { return PredictorBand{v, v, v}; };

  if (target_ == PredictorTarget::LimsupScale) {
    switch (regime_) {
      case Regime::AlphaOneBetaNegative: {
        const double p = 1.0 / (1.0 - b);
        return {std::exp(std::pow(lx, (1.0 - eps) * p)), std::exp(std::pow(lx, p)),
                std::exp(std::pow(lx, (1.0 + eps) * p))};
      }
      case Regime::AlphaOneBetaPositive:
        return {std::pow(x, (1.0 - eps) / 2.0), std::sqrt(x),
                std::pow(x, (1.0 + eps) / 2.0)};
      case Regime::TakeiAlphaOne: {
        const double scale = d > 2.0 ? d : 2.0;
        return {std::pow(x, (1.0 - eps) / scale), std::pow(x, 1.0 / scale),
                std::pow(x, (1.0 + eps) / scale)};
      }
      default:
        return exact(std::pow(k_ * lx, 1.0 / (1.0 - a)));
    }
  }

  const double llx = std::log(lx);
  const double ab = std::abs(b);
  if (target_ == PredictorTarget::MeanS) {
    switch (regime_) {
      case Regime::AlphaNegative: {
        const double lo = 1.0 - a - eps * ab;
        const double hi = 1.0 - a + eps * ab;
        return {(2.0 * d - eps / 2.0) / lo * std::pow(x, lo),
                2.0 * d / (1.0 - a) * std::pow(x, 1.0 - a),
                (2.0 * d + eps / 2.0) / hi * std::pow(x, hi)};
      }
      case Regime::AlphaZeroBetaPositive:
        return exact(d * x * std::pow(lx, -b));
      case Regime::AlphaZeroBetaNegative:
        return exact(2.0 * d * x * std::pow(lx, -b));
      case Regime::AlphaBetweenZeroAndOne:
        return exact(d / (1.0 - a) * std::pow(x, 1.0 - a) * std::pow(lx, -b));
      case Regime::AlphaOneBetaBelowOne:
        return exact(-lx + d / (1.0 - b) * std::pow(lx, 1.0 - b));
      case Regime::AlphaOneBetaOne:
        return exact(-lx + (d - 1.0) * llx);
      default:
        break;
    }
  } else {
    switch (regime_) {
      case Regime::AlphaNegative: {
        const double lo = 1.0 - 2.0 * a - 2.0 * eps * ab;
        const double hi = 1.0 - 2.0 * a + 2.0 * eps * ab;
        return {(4.0 * d * d - eps) / lo * std::pow(x, lo),
                4.0 * d * d / (1.0 - 2.0 * a) * std::pow(x, 1.0 - 2.0 * a),
                (4.0 * d * d + eps) / hi * std::pow(x, hi)};
      }
      case Regime::AlphaZeroBetaPositive:
        return exact(4.0 * d * x * std::pow(lx, -b));
      case Regime::AlphaZeroBetaNegative:
        return exact(4.0 * d * d * x * std::pow(lx, -2.0 * b));
      case Regime::AlphaBetweenZeroAndOne:
        return exact(4.0 * d / (1.0 - a) * std::pow(x, 1.0 - a) * std::pow(lx, -b));
      case Regime::AlphaOneBetaBelowOne:
        return exact(4.0 * d / (1.0 - b) * std::pow(lx, 1.0 - b));
      case Regime::AlphaOneBetaOne:
        return exact(4.0 * d * llx);
      default:
        break;
    }
  }
  return exact(std::numeric_limits<double>::quiet_NaN());
}

MomentTable build_moment_table(const WeightProfile& profile,
                               std::span<const std::uint64_t> xs, double epsilon) {
  if (!(profile.delta() > 0.0)) {
    throw ConfigError("delta must be > 0 for environment moments");
  }
  MomentTable table{profile, {xs.begin(), xs.end()}, {}, {}, {}, {}};
  std::sort(table.xs.begin(), table.xs.end());
  table.xs.erase(std::unique(table.xs.begin(), table.xs.end()), table.xs.end());
  if (!table.xs.empty() && table.xs.front() == 0) {
    throw ConfigError("moment table x values must be >= 1");
  }

  std::optional<RegimePredictor> mean_pred;
  std::optional<RegimePredictor> var_pred;
  try {
    mean_pred.emplace(profile, PredictorTarget::MeanS, epsilon);
    var_pred.emplace(profile, PredictorTarget::VarS, epsilon);
  } catch (const NoRegimeError&) {
    mean_pred.reset();
    var_pred.reset();
  }

  const double delta = profile.delta();
  const double two_delta = 2.0 * delta;
  CompensatedSum mean;
  CompensatedSum var;
  double w_prev = profile.initial_weight(0);
  std::uint64_t i = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto x : table.xs) {
    while (i < x) {
      ++i;
      const double w = profile.initial_weight(i);
      const double zb = (w_prev + delta) / two_delta;
      const double za = w / two_delta;
      mean.add(digamma(zb) - digamma(za));
      var.add(trigamma(zb) + trigamma(za));
      w_prev = w;
    }
    table.mean_s.push_back(mean.value());
    table.var_s.push_back(var.value());
    const auto xd = static_cast<double>(x);
    table.predictor_mean.push_back(mean_pred ? (*mean_pred)(xd) : nan);
    table.predictor_var.push_back(var_pred ? (*var_pred)(xd) : nan);
  }
  return table;
}

void write_moment_table_csv(std::ostream& os, const MomentTable& table) {
  os << "x,mean_s,var_s,predictor_mean,predictor_var\n";
  for (std::size_t k = 0; k < table.xs.size(); ++k) {
    os << table.xs[k] << ',' << csv::format_double(table.mean_s[k]) << ','
       << csv::format_double(table.var_s[k]) << ','
       << csv::format_double(table.predictor_mean[k]) << ','
       << csv::format_double(table.predictor_var[k]) << '\n';
  }
}

}  // namespace lerrw
