#include "lerrw/distributions.hpp"

#include <cmath>

#include "lerrw/error.hpp"
#include "lerrw/summation.hpp"

namespace lerrw {

double standard_normal(RandomStream& rng) {
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

namespace {

// Marsaglia & Tsang (2000), shape >= 1. Returns ln of the variate.
double log_gamma_mt(double shape, RandomStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d) + std::log(v);
    const double log_v = std::log(v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + log_v)) {
      return std::log(d) + log_v;
    }
  }
}

}  // namespace

double log_gamma_variate(double shape, RandomStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be positive and finite");
  }
  if (shape >= 1.0) return log_gamma_mt(shape, rng);
  const double boosted = log_gamma_mt(shape + 1.0, rng);
  return boosted + std::log(rng.uniform_open()) / shape;
}

BetaDraw sample_beta(double a, double b, RandomStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("Beta shape parameters must be positive");
  }
  const double lx = log_gamma_variate(a, rng);
  const double ly = log_gamma_variate(b, rng);
  const double log_total = log_add_exp(lx, ly);
  BetaDraw draw{};
  draw.log_p = lx - log_total;
  draw.log_q = ly - log_total;
  draw.p = std::exp(draw.log_p);
  draw.log_odds_left = ly - lx;
  return draw;
}

}  // namespace lerrw
