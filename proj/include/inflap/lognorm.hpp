// Log-domain sums of p-th powers. Everything that raises a field to the
// power p (p up to 256) goes through these so that intermediate values never
// overflow: sums are evaluated as max-shifted log-sum-exp, and only the final
// quotient/root returns to linear scale.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "inflap/core.hpp"

namespace inflap {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Exponentiation by squaring for the small integer exponents that dominate
// the solver's inner loops (the default sweep uses integer p).
inline double ipow(double b, long e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// pow with an exact-integer fast path; falls back to std::pow otherwise.
inline double pow_fast(double b, double e) {
  long le = (long)e;
  if ((double)le == e && le >= 0 && le <= 512) return ipow(b, le);
  return std::pow(b, e);
}

// log(sum_i exp(t_i)); -inf entries contribute nothing. Returns -inf on an
// empty or all-(-inf) input.
inline double log_sum_exp(std::span<const double> terms) {
  double m = neg_inf;
  for (double t : terms) m = std::max(m, t);
  if (m == neg_inf) return neg_inf;
  double s = 0.0;
  for (double t : terms) {
    if (t != neg_inf) s += std::exp(t - m);
  }
  return m + std::log(s);
}

// log(sum_i |v_i|^p), max-shifted so |v| of any magnitude is safe.
inline double log_abs_pow_sum(std::span<const double> values, double p) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return neg_inf;
  double s = 0.0;
  for (double v : values) {
    double t = std::abs(v) / m;
    if (t > 0.0) s += std::pow(t, p);
  }
  return p * std::log(m) + std::log(s);
}

// log ||v||_p with an optional log-measure weight per entry (uniform weight
// w: pass log_weight = log w). I.e. (1/p) * log(sum |v_i|^p * w).
inline double log_pnorm(std::span<const double> values, double p,
                        double log_weight = 0.0) {
  double ls = log_abs_pow_sum(values, p);
  if (ls == neg_inf) return neg_inf;
  return (ls + log_weight) / p;
}

}  // namespace inflap
