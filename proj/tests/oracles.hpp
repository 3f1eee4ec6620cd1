#pragma once

// Independent reference computations used only by the tests. Nothing here
// shares code with the library: different algorithms, long double
// arithmetic, plain loops.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Psi by upward recurrence to z >= 60 and a short asymptotic tail.
inline long double digamma(long double z) {
  long double acc = 0.0L;
  while (z < 60.0L) {
    acc -= 1.0L / z;
    z += 1.0L;
  }
  const long double r = 1.0L / (z * z);
  return acc + std::log(z) - 0.5L / z -
         r * (1.0L / 12 - r * (1.0L / 120 - r * (1.0L / 252 - r * (1.0L / 240))));
}

inline long double trigamma(long double z) {
  long double acc = 0.0L;
  while (z < 60.0L) {
    acc += 1.0L / (z * z);
    z += 1.0L;
  }
  const long double r = 1.0L / (z * z);
  return acc + 1.0L / z + r / 2.0L +
         (1.0L / z) * r * (1.0L / 6 - r * (1.0L / 30 - r * (1.0L / 42 - r / 30)));
}

// E0[tau_x] for a birth-death chain reflecting at 0, through the
// one-step recursion e_k = (1 + q_k e_{k-1}) / p_k for the expected time to
// go from k to k+1.
inline long double hitting_time_by_recursion(const std::vector<double>& right_prob,
                                             std::uint64_t x) {
  long double total = 0.0L;
  long double e_prev = 0.0L;
  for (std::uint64_t k = 0; k < x; ++k) {
    const long double p = right_prob[k];
    const long double e = k == 0 ? 1.0L : (1.0L + (1.0L - p) * e_prev) / p;
    total += e;
    e_prev = e;
  }
  return total;
}

// Double sum T(x) = sum_j pi_j (h(x) - h(j)) from linear-scale weights.
inline long double hitting_time_double_sum(const std::vector<double>& w, std::uint64_t x) {
  std::vector<long double> gamma(x), h(x + 1, 0.0L);
  for (std::uint64_t i = 0; i < x; ++i) {
    gamma[i] = static_cast<long double>(w[0]) / w[i];
    h[i + 1] = h[i] + gamma[i];
  }
  long double t = 0.0L;
  for (std::uint64_t j = 0; j < x; ++j) {
    const long double pi =
        ((j == 0 ? 0.0L : w[j - 1]) + static_cast<long double>(w[j])) / w[0];
    t += pi * (h[x] - h[j]);
  }
  return t;
}

// Regularised upper incomplete gamma Q(a, x), for chi-square p-values.
inline double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return 1.0 - sum * std::exp(log_prefix);
  }
  // Lentz continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefix) * f;
}

inline double chi_square_p_value(double statistic, double dof) {
  return gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace oracle
