#pragma once

namespace elsa {

/// Standard normal cdf Phi(x), absolute error a few ulp (erfc based).
double norm_cdf(double x);

/// log(Phi(x)), finite for all finite x. Uses the asymptotic tail
/// expansion below x = -37 where erfc underflows.
double log_norm_cdf(double x);

/// log of the normal density N(x; mean, variance).
double log_norm_pdf(double x, double mean, double variance);

}  // namespace elsa
