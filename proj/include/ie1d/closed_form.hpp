// The explicit minimizer: support radius, energy, density/CDF/moments, and
// the piecewise potential with its nonnegative excess above eta outside the
// support (remainder_f in regime A, remainder_g in regime B).
#pragma once

#include "ie1d/kernel.hpp"

namespace ie1d::cf {

// Normalization constants shared by the closed form and the identity suite.
// All are finite on alpha in (-1,3) except c and c1, which diverge at
// alpha = 1 and are stored as NaN there (their products (alpha-1)*c and
// (alpha-1)*c1 stay analytic and are exposed separately).
struct Constants {
    double alpha = 0.0;
    double C = 0.0;        // sqrt(pi) Gamma((3-a)/2) / Gamma((4-a)/2)
    double C_prime = 0.0;  // t / sin t with t = (a-1) pi / 2; 1 at a = 1
    double C_tilde = 0.0;  // second-moment constant; C_tilde / C = 1/(4-a)
    double c = 0.0;        // Gamma((a-1)/2) Gamma((3-a)/2); NaN at a = 1
    double c1 = 0.0;       // -C Gamma((a-1)/2) Gamma((4-a)/2) / sqrt(pi); NaN at a = 1
    double D = 0.0;        // C Gamma((a+1)/2) Gamma((4-a)/2) / sqrt(pi)
};

// Valid for alpha in (-1, 3).
Constants compute_constants(double alpha);

// Excess of the scaled potential profile above its flat value, regime A
// (alpha in (2,3)): zero on [-1,1], positive and increasing in |t| outside.
double remainder_f(double alpha, double t);

// Regime B analogue (alpha in (-1,2)): zero on [-1,1], positive outside,
// growing like D * t^2.
double remainder_g(double alpha, double t);

// The single-integral form shared by remainder_f and the |x|>1 branch of the
// interval power-moment identity; defined for alpha in (1,3). Negative for
// alpha < 2 (the sign flip is absorbed by the regime-B kernel sign).
double compint_remainder(double alpha, double t);

// Building blocks of the remainder/identity right sides, all for x > 1.
// Written with w = cosh u where the (w^2-1) endpoint factor requires it.
double tail_integral(double alpha, double x);    // int_x^inf (w^2-1)^{(a-3)/2} dw, a < 2
double one_sided_integral(double alpha, double x);  // int_1^x (w^2-1)^{(a-3)/2} dw, a > 1
double ramp_integral(double alpha, double x);    // int_1^x (w^2-1)^{(a-3)/2} (x-w) dw, a > 1
double wedge_integral(double alpha, double x);   // int_1^x (w^2-1)^{(a-3)/2} (w-1) dw, a > -1
double triple_tail(double alpha, double x);      // int_1^x int_1^y int_z^inf (w^2-1)^{(a-3)/2} dw dz dy

class ClosedFormSolution {
  public:
    ClosedFormSolution(const Kernel& kernel, double center = 0.0);

    double alpha() const { return kernel_.alpha(); }
    Regime regime() const { return kernel_.regime(); }
    const Kernel& kernel() const { return kernel_; }
    double center() const { return center_; }
    const Constants& constants() const { return constants_; }

    double radius() const { return radius_; }
    // Minimal energy and the flat potential value eta = 2E. Not available in
    // closed form at alpha = 0: both return NaN there (see eta_empirical).
    double energy() const { return energy_; }
    double eta() const { return 2.0 * energy_; }
    bool energy_available() const { return kernel_.alpha() != 0.0; }
    double second_moment() const { return radius_ * radius_ / (4.0 - kernel_.alpha()); }

    double density(double x) const;
    double cdf(double x) const;

    // eta + R^2 rem((x-a)/R) / (2 C'), rem = remainder_f or remainder_g.
    // Throws std::domain_error at alpha = 0 where eta has no closed form.
    double potential_exact(double x) const;

    // Direct quadrature of the kernel against the density; shares no code
    // with potential_exact beyond the constants.
    double potential_by_quadrature(double x, double tol = 1e-9) const;

    // Outer density-weighted rule over potential_by_quadrature values.
    double energy_by_quadrature(double tol = 1e-10) const;

    // Potential at the center by quadrature; defines eta at alpha = 0.
    double eta_empirical(double tol = 1e-10) const;

    // eta when available, else eta_empirical.
    double eta_ref(double tol = 1e-10) const;

  private:
    Kernel kernel_;
    double center_;
    Constants constants_;
    double radius_;
    double energy_;
};

}  // namespace ie1d::cf
