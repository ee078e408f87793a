#pragma once

namespace glaa {

// Standard normal quantile function (inverse CDF), accurate to ~1e-15
// (Wichura's AS 241 / PPND16 rational approximations).
// Throws ValueError unless 0 < p < 1.
double normal_quantile(double p);

// Standard normal CDF via erfc.
double normal_cdf(double x);

}  // namespace glaa
