// Scalar special functions: log-gamma and the regularized incomplete beta.
// These are the only transcendental building blocks the rest of the library
// relies on beyond <cmath>.
#pragma once

namespace ie1d::specfun {

// Value plus the absolute error bound the implementation claims for it.
struct Result {
    double value;
    double est_abs_err;
};

// ln|Gamma(x)| for non-pole x (poles: x = 0, -1, -2, ...). Lanczos
// approximation for x >= 0.5, reflection otherwise. Relative error is below
// 1e-13 over [0.05, 50]. Throws std::domain_error at poles.
double ln_gamma(double x);

// Sign of Gamma(x): +1 or -1 (alternates between negative integers).
int gamma_sign(double x);

Result ln_gamma_checked(double x);

// Regularized incomplete beta I_x(a, b), a > 0, b > 0, x in [0, 1].
// Continued fraction (modified Lentz), switching to the symmetric expansion
// when x > (a + 1) / (a + b + 2). Absolute error below 1e-12.
double reg_inc_beta(double a, double b, double x);

Result reg_inc_beta_checked(double a, double b, double x);

}  // namespace ie1d::specfun
