#pragma once

namespace emrsense {

// Standard normal CDF.
double std_normal_cdf(double x) noexcept;

// Inverse standard normal CDF (Wichura's AS 241, PPND16 variant).
// Throws std::domain_error unless 0 < p < 1.
double std_normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x); series/continued-fraction split.
// Throws std::domain_error for a <= 0 or x < 0.
double regularized_gamma_p(double a, double x);

// Chi-square CDF with `dof` degrees of freedom: P(dof/2, x/2).
// Throws std::domain_error for x < 0 or dof < 1.
double chi_square_cdf(double x, int dof);

// Chi-square density, used for quantile refinement.
double chi_square_pdf(double x, int dof);

// Inverse chi-square CDF. Wilson-Hilferty start, Newton refinement with a
// bisection safeguard. Throws std::domain_error unless 0 < p < 1 and dof >= 1.
double chi_square_quantile(double p, int dof);

}  // namespace emrsense
