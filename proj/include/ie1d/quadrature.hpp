// Quadrature: Gauss-Jacobi rules (Golub-Welsch on the symmetric tridiagonal
// recurrence matrix) and adaptive integration of integrands with algebraic
// endpoint singularities.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ie1d::quad {

// Raised when an integrator exhausts its budget before reaching the requested
// tolerance. Carries the best estimate and the bound attached to it.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string& msg, double best, double bound)
        : std::runtime_error(msg), best_estimate(best), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

// Nodes and weights for the weight (1-y)^a (1+y)^b on (-1, 1).
struct JacobiRule {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // positive

    // Sum of w_i * f(y_i); approximates the weighted integral of f.
    template <class F>
    double apply(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

// Symmetric rule: both Jacobi parameters equal to p (p > -1). n in [1, 512].
// Nodes come in exact +/- pairs with matching weights.
JacobiRule gauss_jacobi(int n, double p);

// Asymmetric variant, used internally to absorb a one-sided kink |x-y|^a
// against the density weight on the other end.
JacobiRule gauss_jacobi_general(int n, double a, double b);

// Declares that the integrand behaves like (distance to endpoint)^exponent
// near an endpoint, with exponent > -1. An exponent of 0 marks a bounded but
// non-smooth endpoint (e.g. a logarithm times a positive power).
struct Hints {
    std::optional<double> left_exponent;
    std::optional<double> right_exponent;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) bisection to absolute tolerance tol.
// Hinted endpoints are first regularized by the power substitution
// y = a + u^gamma with gamma = 3 / (1 + exponent). Throws AccuracyError if
// the interval budget is exhausted first.
double integrate_adaptive(const Integrand& f, double a, double b, double tol, Hints hints = {});

// Composite Gauss-Legendre on a mesh graded toward the left endpoint where
// the integrand behaves like (x-a)^kappa, kappa > -1. Panel counts double
// until two successive estimates agree within tol. When |a| is large the
// attainable accuracy is capped by the resolution of x - a in double
// precision; place the singular endpoint at 0 for full accuracy.
double integrate_graded_left(const Integrand& f, double a, double b, double kappa, double tol);

// integral_0^length v^sigma g(v) dv with the power absorbed into a
// Gauss-Jacobi weight, so sigma may sit arbitrarily close to -1 without the
// underflow the power substitution suffers there. The node count escalates
// geometrically (16 .. 512) until two consecutive orders agree within
// max(tol, 14 ulp); throws AccuracyError otherwise. g must be smooth on
// (0, length].
double integrate_power_left(const Integrand& g, double length, double sigma, double tol);

// integral_{-1}^{1} (1-s^2)^p g(s) ds by symmetric Gauss-Jacobi rules under
// the same escalation contract as integrate_power_left. g must be smooth on
// the open interval.
double integrate_jacobi_symmetric(const Integrand& g, double p, double tol);

}  // namespace ie1d::quad
