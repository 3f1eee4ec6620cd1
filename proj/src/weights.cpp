#include "lerrw/weights.hpp"

#include <cmath>
#include <sstream>

#include "lerrw/error.hpp"
#include "lerrw/summation.hpp"

namespace lerrw {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::LogPoly:
      return "logpoly";
    case Family::TakeiPoly:
      return "takei";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "logpoly") return Family::LogPoly;
  if (name == "takei") return Family::TakeiPoly;
  throw ConfigError("family: expected \"logpoly\" or \"takei\", got \"" +
                    std::string(name) + "\"");
}

std::string_view to_string(Recurrence verdict) {
  return verdict == Recurrence::Recurrent ? "recurrent" : "transient";
}

WeightProfile::WeightProfile(Family family, double alpha, double beta,
                             double delta)
    : family_(family),
      alpha_(alpha),
      beta_(family == Family::TakeiPoly ? 0.0 : beta),
      delta_(delta) {
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
  if (!std::isfinite(beta)) throw ConfigError("beta must be finite");
  if (!std::isfinite(delta) || delta < 0.0) {
    throw ConfigError("delta must be finite and >= 0");
  }
}

double WeightProfile::log_initial_weight(std::uint64_t x) const {
  const auto xd = static_cast<double>(x);
  switch (family_) {
    case Family::LogPoly: {
      if (x <= 1) return 0.0;
      const double lx = std::log(xd);
      return alpha_ * lx + (beta_ == 0.0 ? 0.0 : beta_ * std::log(lx));
    }
    case Family::TakeiPoly:
      if (x == 0) return 0.0;
      return alpha_ * std::log(xd);
  }
  return 0.0;
}

double WeightProfile::initial_weight(std::uint64_t x) const {
  const auto xd = static_cast<double>(x);
  switch (family_) {
    case Family::LogPoly: {
      if (x <= 1) return 1.0;
      const double lx = std::log(xd);
      return std::pow(xd, alpha_) * std::pow(lx, beta_);
    }
    case Family::TakeiPoly:
      if (x == 0) return 1.0;
      return std::pow(xd, alpha_);
  }
  return 1.0;
}

std::string WeightProfile::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(alpha=" << alpha_;
  if (family_ == Family::LogPoly) os << ", beta=" << beta_;
  os << ", delta=" << delta_ << ")";
  return os.str();
}

RecurrenceVerdict classify_recurrence(const WeightProfile& profile,
                                      std::uint64_t truncation) {
  const double a = profile.alpha();
  bool recurrent = false;
  switch (profile.family()) {
    case Family::LogPoly:
      recurrent = a < 1.0 || (a == 1.0 && profile.beta() <= 1.0);
      break;
    case Family::TakeiPoly:
      recurrent = a <= 1.0;
      break;
  }
  if (truncation < 1) truncation = 1;
  return {recurrent ? Recurrence::Recurrent : Recurrence::Transient,
          phi0_partial_sum(profile, truncation), truncation};
}

double phi0_partial_sum(const WeightProfile& profile, std::uint64_t n) {
  if (n < 1) throw ConfigError("phi0 truncation N must be >= 1");
  CompensatedSum sum;
  for (std::uint64_t x = 0; x <= n; ++x) {
    sum.add(std::exp(-profile.log_initial_weight(x)));
  }
  return sum.value();
}

void to_json(nlohmann::json& j, const WeightProfile& profile) {
  j = nlohmann::json{{"family", std::string(to_string(profile.family()))},
                     {"alpha", profile.alpha()},
                     {"beta", profile.beta()},
                     {"delta", profile.delta()}};
}

WeightProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("profile: expected a JSON object");
  const auto family = parse_family(j.value("family", std::string("logpoly")));
  auto number = [&](const char* key, bool required) -> double {
    if (!j.contains(key)) {
      if (required) throw ConfigError(std::string("profile.") + key + " is required");
      return 0.0;
    }
    if (!j.at(key).is_number()) {
      throw ConfigError(std::string("profile.") + key + " must be a number");
    }
    return j.at(key).get<double>();
  };
  const double alpha = number("alpha", true);
  const double beta = number("beta", family == Family::LogPoly);
  const double delta = number("delta", true);
  return {family, alpha, beta, delta};
}

}  // namespace lerrw
