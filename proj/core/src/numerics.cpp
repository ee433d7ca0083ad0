#include "emrsense/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace emrsense {

namespace {

double rational(const double* num, const double* den, int order, double x) noexcept {
  double u = num[order - 1];
  for (int i = order - 1; i > 0; --i) u = u * x + num[i - 1];
  double v = den[order - 1];
  for (int i = order - 1; i > 0; --i) v = v * x + den[i - 1];
  return u / v;
}

// AS 241 (Wichura 1988), the double precision coefficient set. Absolute
// error is a few ulps, far inside the 1e-10 contract.
double ppnd16(double p) {
  static const double a_central[8] = {
      3.3871328727963666080,     1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4,  4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4,  2.5090809287301226727e+3};
  static const double b_central[8] = {
      1.0,                       4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3,  2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4,  5.2264952788528545610e+3};
  static const double a_middle[8] = {
      1.42343711074968357734,    4.63033784615654529590,   5.76949722146069140550,
      3.64784832476320460504,    1.27045825245236838258,   2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double b_middle[8] = {
      1.0,                       2.05319162663775882187,   1.67638483018380384940,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double a_tail[8] = {
      6.65790464350110377720,    5.46378491116411436990,   1.78482653991729133580,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double b_tail[8] = {
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double dp = p - 0.5;
  if (std::fabs(dp) <= 0.425) {
    const double r = 0.180625 - dp * dp;
    return dp * rational(a_central, b_central, 8, r);
  }
  const double pp = (p < 0.5) ? p : 1.0 - p;
  const double r = std::sqrt(-std::log(pp));
  const double x = (r <= 5.0) ? rational(a_middle, b_middle, 8, r - 1.6)
                              : rational(a_tail, b_tail, 8, r - 5.0);
  return (p < 0.5) ? -x : x;
}

// Lower incomplete gamma by power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(log_prefactor);
}

// Upper incomplete gamma Q(a, x) by Lentz's continued fraction; x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_prefactor) * h;
}

}  // namespace

double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  return ppnd16(p);
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw std::domain_error("regularized_gamma_p: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double chi_square_cdf(double x, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_cdf: dof must be >= 1");
  if (x < 0.0) throw std::domain_error("chi_square_cdf: x must be non-negative");
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_pdf(double x, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_pdf: dof must be >= 1");
  if (x < 0.0) return 0.0;
  const double a = 0.5 * dof;
  if (x == 0.0) return (dof == 2) ? 0.5 : (dof < 2 ? std::numeric_limits<double>::infinity() : 0.0);
  const double log_pdf = (a - 1.0) * std::log(x) - 0.5 * x - std::lgamma(a) - a * M_LN2;
  return std::exp(log_pdf);
}

double chi_square_quantile(double p, int dof) {
  if (dof < 1) throw std::domain_error("chi_square_quantile: dof must be >= 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("chi_square_quantile: p must lie in (0, 1)");

  // Wilson-Hilferty starting point.
  const double q = static_cast<double>(dof);
  const double z = ppnd16(p);
  const double h = 2.0 / (9.0 * q);
  double x = q * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
  if (!(x > 0.0) || !std::isfinite(x)) x = q;

  // Maintain a bracket [lo, hi] with cdf(lo) < p <= cdf(hi).
  double lo = 0.0;
  double hi = std::max(x * 2.0, q + 1.0);
  while (chi_square_cdf(hi, dof) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double err = chi_square_cdf(x, dof) - p;
    if (err > 0.0)
      hi = x;
    else
      lo = x;
    const double pdf = chi_square_pdf(x, dof);
    double next = (pdf > 0.0) ? x - err / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - x);
    x = next;
    if (step <= 1e-14 * std::max(1.0, x)) break;
  }
  return x;
}

}  // namespace emrsense
