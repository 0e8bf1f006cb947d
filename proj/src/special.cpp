#include "otgsa/dist/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace otgsa::dist {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("normal_quantile: u outside [0,1]");
  if (u == 0.0) return -std::numeric_limits<double>::infinity();
  if (u == 1.0) return std::numeric_limits<double>::infinity();

  // Crude logistic-flavored start, then safeguarded Newton on the CDF.
  double lo = -40.0, hi = 40.0;
  double x = u < 0.5 ? -std::sqrt(-2.0 * std::log(u))
                     : (u > 0.5 ? std::sqrt(-2.0 * std::log1p(-u)) : 0.0);
  for (int it = 0; it < 200; ++it) {
    const double err = normal_cdf(x) - u;
    if (err > 0)
      hi = x;
    else
      lo = x;
    const double pdf = normal_pdf(x);
    double next = pdf > 0 ? x - err / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma_p: shape must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_p: negative argument");
  if (x == 0.0) return 0.0;

  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series.
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int it = 0; it < 500; ++it) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
  }
  // Upper continued fraction (modified Lentz).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - log_gamma_a) * h;
  return 1.0 - q;
}

double gamma_quantile(double shape, double rate, double u) {
  if (shape <= 0.0 || rate <= 0.0)
    throw std::invalid_argument("gamma_quantile: shape and rate must be positive");
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("gamma_quantile: u outside [0,1]");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return std::numeric_limits<double>::infinity();

  // Bracket in the standard (rate 1) scale, then bisect with Newton polish.
  double lo = 0.0, hi = shape + 1.0;
  while (gamma_p(shape, hi) < u) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  double x = shape;  // mean of the standard gamma
  for (int it = 0; it < 200; ++it) {
    const double err = gamma_p(shape, x) - u;
    if (err > 0)
      hi = x;
    else
      lo = x;
    const double pdf = std::exp((shape - 1.0) * std::log(x) - x -
                                std::lgamma(shape));
    double next = pdf > 0 ? x - err / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x / rate;
}

}  // namespace otgsa::dist
