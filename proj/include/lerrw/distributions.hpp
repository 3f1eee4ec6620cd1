#pragma once

#include "lerrw/rng.hpp"

namespace lerrw {

/// Standard normal variate (Marsaglia polar method, one value per call).
double standard_normal(RandomStream& rng);

/// ln G with G ~ Gamma(shape, 1), for any shape > 0.
///
/// Marsaglia-Tsang for shape >= 1; for shape < 1 the boost
/// G(shape) = G(shape + 1) * U^(1/shape) is applied in log space, so tiny
/// shapes do not underflow to G = 0.
double log_gamma_variate(double shape, RandomStream& rng);

/// One Beta(a, b) draw kept in log form.
struct BetaDraw {
  double p;
  double log_p;
  double log_q;  // ln(1 - p)
  /// ln((1 - p) / p), computed directly from the two gamma variates.
  double log_odds_left;
};

/// Beta(a, b) via the gamma-ratio construction; exact for all positive
/// shapes. Throws DomainError unless a > 0 and b > 0.
BetaDraw sample_beta(double a, double b, RandomStream& rng);

}  // namespace lerrw
