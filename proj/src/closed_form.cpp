#include "ie1d/closed_form.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ie1d/quadrature.hpp"
#include "ie1d/specfun.hpp"

namespace ie1d::cf {

namespace {

constexpr double kLnSqrtPi = 0.57236494292470008707;  // ln sqrt(pi)
constexpr double kPieceTol = 1e-12;

// (sinh u)^kappa for u > 0, evaluated in log space so large u cannot overflow
// the intermediate sinh.
// 1 - exp(-2u) via expm1 so u down to the denormal range stays accurate
double ln_sinh(double u) {
    return u + std::log(-std::expm1(-2.0 * u)) - std::numbers::ln2_v<double>;
}

double sinh_pow(double u, double kappa) { return std::exp(kappa * ln_sinh(u)); }

// int_1^x (w^2-1)^{(alpha-3)/2} P(w) dw via w = cosh u. kappa is the power of
// u carried by the transformed integrand at u = 0 (alpha-2 when P(1) != 0,
// alpha when P vanishes linearly at w = 1).
double cosh_graded(double alpha, double x, double kappa,
                   const std::function<double(double)>& P) {
    if (x <= 1.0) return 0.0;
    const double upper = std::acosh(x);
    auto f = [alpha, &P](double u) { return sinh_pow(u, alpha - 2.0) * P(std::cosh(u)); };
    return quad::integrate_graded_left(f, 0.0, upper, kappa, kPieceTol);
}

// Variant for integrands carrying a (w - 1) factor. In w = cosh u arithmetic
// that factor cancels catastrophically near u = 0 and the cancellation noise
// is amplified by sinh^{alpha-2}; computing it as 2 sinh^2(u/2) keeps full
// relative accuracy. Q receives w and the stable w - 1.
double cosh_graded_wedge(double alpha, double x,
                         const std::function<double(double, double)>& Q) {
    if (x <= 1.0) return 0.0;
    const double upper = std::acosh(x);
    auto f = [alpha, &Q](double u) {
        // ln(w - 1) = ln 2 + 2 ln sinh(u/2); folded into one exp with the
        // sinh^{alpha-2} factor, whose separate value can overflow while the
        // product stays representable
        const double lw = std::numbers::ln2_v<double> + 2.0 * ln_sinh(0.5 * u);
        const double wm1 = std::exp(lw);
        return std::exp((alpha - 2.0) * ln_sinh(u) + lw) * Q(wm1 + 1.0, wm1);
    };
    return quad::integrate_graded_left(f, 0.0, upper, alpha, kPieceTol);
}

}  // namespace

Constants compute_constants(double alpha) {
    if (!(alpha > -1.0) || !(alpha < 3.0))
        throw std::domain_error("compute_constants: alpha must lie in (-1, 3)");

    Constants k;
    k.alpha = alpha;

    const double lg_3ma = specfun::ln_gamma((3.0 - alpha) / 2.0);
    const double lg_4ma = specfun::ln_gamma((4.0 - alpha) / 2.0);
    const double lg_6ma = specfun::ln_gamma((6.0 - alpha) / 2.0);
    const double lg_1pa = specfun::ln_gamma((alpha + 1.0) / 2.0);

    k.C = std::exp(kLnSqrtPi + lg_3ma - lg_4ma);
    const double t = (alpha - 1.0) * std::numbers::pi_v<double> / 2.0;
    k.C_prime = (t == 0.0) ? 1.0 : t / std::sin(t);
    k.C_tilde = 0.5 * std::exp(kLnSqrtPi + lg_3ma - lg_6ma);
    k.D = std::exp(std::log(k.C) + lg_1pa + lg_4ma - kLnSqrtPi);

    if (alpha == 1.0) {
        k.c = std::numeric_limits<double>::quiet_NaN();
        k.c1 = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double lg_am1 = specfun::ln_gamma((alpha - 1.0) / 2.0);
        const int sgn = specfun::gamma_sign((alpha - 1.0) / 2.0);
        k.c = sgn * std::exp(lg_am1 + lg_3ma);
        k.c1 = -sgn * std::exp(std::log(k.C) + lg_am1 + lg_4ma - kLnSqrtPi);
    }
    return k;
}

double one_sided_integral(double alpha, double x) {
    if (!(alpha > 1.0)) throw std::domain_error("one_sided_integral: needs alpha > 1");
    return cosh_graded(alpha, x, alpha - 2.0, [](double) { return 1.0; });
}

double ramp_integral(double alpha, double x) {
    if (!(alpha > 1.0)) throw std::domain_error("ramp_integral: needs alpha > 1");
    return cosh_graded(alpha, x, alpha - 2.0, [x](double w) { return x - w; });
}

double wedge_integral(double alpha, double x) {
    return cosh_graded_wedge(alpha, x, [](double, double) { return 1.0; });
}

double tail_integral(double alpha, double x) {
    if (!(alpha < 2.0)) throw std::domain_error("tail_integral: needs alpha < 2");
    if (!(x > 1.0)) throw std::domain_error("tail_integral: needs x > 1");
    // w = 1/s maps the infinite tail onto (0, 1/x] with an s^{1-alpha} left
    // endpoint; the steep (1-s^2) factor near s = 1/x for x close to 1 is
    // left to adaptive bisection.
    auto f = [alpha](double s) {
        return std::pow(s, 1.0 - alpha) * std::pow(1.0 - s * s, (alpha - 3.0) / 2.0);
    };
    quad::Hints hints;
    hints.left_exponent = 1.0 - alpha;
    return quad::integrate_adaptive(f, 0.0, 1.0 / x, kPieceTol, hints);
}

double triple_tail(double alpha, double x) {
    if (x <= 1.0) return 0.0;
    // Fubini over {1 <= y <= x, 1 <= z <= y, w >= z} leaves one cosh-type
    // integral plus a tail term.
    // 2x - w - 1 written as 2(x-1) - (w-1) so both terms stay accurate
    const double wedge = cosh_graded_wedge(alpha, x, [x](double, double wm1) {
        return 0.5 * (2.0 * (x - 1.0) - wm1);
    });
    return wedge + 0.5 * (x - 1.0) * (x - 1.0) * tail_integral(alpha, x);
}

double compint_remainder(double alpha, double t) {
    if (!(alpha > 1.0) || !(alpha < 3.0))
        throw std::domain_error("compint_remainder: alpha must lie in (1, 3)");
    const double at = std::fabs(t);
    if (at <= 1.0) return 0.0;
    const Constants k = compute_constants(alpha);
    const double raw = cosh_graded(alpha, at, alpha - 2.0,
                                   [at](double w) { return (at - w) * (at - w); });
    return 0.5 * (alpha - 1.0) * (alpha - 2.0) * k.C * raw;
}

double remainder_f(double alpha, double t) {
    if (!(alpha > 2.0) || !(alpha < 3.0))
        throw std::domain_error("remainder_f: alpha must lie in (2, 3)");
    return compint_remainder(alpha, t);
}

double remainder_g(double alpha, double t) {
    if (!(alpha > -1.0) || !(alpha < 2.0))
        throw std::domain_error("remainder_g: alpha must lie in (-1, 2)");
    const double at = std::fabs(t);
    if (at <= 1.0) return 0.0;
    const Constants k = compute_constants(alpha);
    const double excess = at - 1.0;
    double value = k.D * excess * excess;
    const double coeff = (alpha - 1.0) * (alpha - 2.0) * k.C;
    if (coeff != 0.0) value += coeff * triple_tail(alpha, at);
    return value;
}

ClosedFormSolution::ClosedFormSolution(const Kernel& kernel, double center)
    : kernel_(kernel), center_(center), constants_(compute_constants(kernel.alpha())) {
    const double alpha = kernel_.alpha();
    // R^{alpha-2} = C / (2 C'), solved in log space
    radius_ = std::exp((std::log(constants_.C) - std::log(2.0 * constants_.C_prime)) /
                       (alpha - 2.0));
    if (alpha == 0.0) {
        energy_ = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double base = (alpha - 2.0) * radius_ * radius_ /
                            (2.0 * alpha * (4.0 - alpha));
        energy_ = (kernel_.regime() == Regime::A) ? -base : base;
    }
}

double ClosedFormSolution::density(double x) const {
    const double dx = x - center_;
    if (!(std::fabs(dx) < radius_)) return 0.0;
    const double alpha = kernel_.alpha();
    const double norm = std::pow(radius_, alpha - 2.0) / constants_.C;
    return norm * std::pow(radius_ * radius_ - dx * dx, -(alpha - 1.0) / 2.0);
}

double ClosedFormSolution::cdf(double x) const {
    const double u = (x - center_ + radius_) / (2.0 * radius_);
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double p = (3.0 - kernel_.alpha()) / 2.0;
    return specfun::reg_inc_beta(p, p, u);
}

double ClosedFormSolution::potential_exact(double x) const {
    const double alpha = kernel_.alpha();
    if (alpha == 0.0)
        throw std::domain_error("potential_exact: eta has no closed form at alpha = 0");
    const double t = (x - center_) / radius_;
    const double rem = (kernel_.regime() == Regime::A) ? remainder_f(alpha, t)
                                                       : remainder_g(alpha, t);
    return eta() + radius_ * radius_ * rem / (2.0 * constants_.C_prime);
}

double ClosedFormSolution::potential_by_quadrature(double x, double tol) const {
    const double alpha = kernel_.alpha();
    const double p = -(alpha - 1.0) / 2.0;
    static thread_local struct {
        double alpha = std::numeric_limits<double>::quiet_NaN();
        quad::JacobiRule rule;
    } cache;
    if (cache.alpha != alpha) {
        cache.rule = quad::gauss_jacobi(128, p);
        cache.alpha = alpha;
    }
    const quad::JacobiRule& rule = cache.rule;

    const double t = (x - center_) / radius_;
    const double R = radius_;
    const double inv_c = 1.0 / constants_.C;

    // quadratic kernel part, exact for the polynomial integrand
    const double quad_part =
        0.5 * inv_c * rule.apply([&](double s) {
            const double d = (t - s) * R;
            return d * d;
        });

    // power (or log) part; the density is even about the center, so only
    // tau = |t| matters
    auto power = [alpha, R](double r_scaled) {
        const double r = r_scaled * R;
        return alpha == 0.0 ? std::log(r) : std::pow(r, alpha) / alpha;
    };
    double power_part;
    const double tau = std::fabs(t);
    if (tau > 1.0 + 1e-9) {
        // Clear of the support: the integrand is smooth on the open interval
        // and the density endpoints live in the rule weight. When tau sits so
        // close to the edge that the rule's endpoint clustering cannot
        // resolve the near-kink, fall back to adaptive pieces in endpoint
        // coordinates (those in turn require p away from -1).
        try {
            power_part = inv_c * quad::integrate_jacobi_symmetric(
                                     [&power, tau](double s) { return power(tau - s); }, p,
                                     tol * constants_.C);
        } catch (const quad::AccuracyError&) {
            const double piece_tol = 0.5 * tol * constants_.C;
            quad::Hints hints;
            hints.left_exponent = p;
            const double far = quad::integrate_adaptive(
                [&](double v) { return power((1.0 + tau) - v) * std::pow(v * (2.0 - v), p); },
                0.0, 1.0, piece_tol, hints);
            const double near = quad::integrate_adaptive(
                [&](double v) { return power((tau - 1.0) + v) * std::pow(v * (2.0 - v), p); },
                0.0, 1.0, piece_tol, hints);
            power_part = inv_c * (far + near);
        }
    } else {
        // Each piece is integrated in a coordinate v local to its singular
        // endpoint, so the endpoint treatment sees exact offsets instead of
        // differences quantized to ulps of the endpoint. Density-endpoint
        // pieces (exponent p, arbitrarily close to -1 as alpha approaches 3)
        // go through the Jacobi-weight rule; kernel-kink pieces keep the
        // adaptive substitution, whose exponent stays mild.
        const double kink_exp = (alpha == 0.0) ? 0.0 : alpha;
        double integral = 0.0;
        auto kink_piece = [&integral](const quad::Integrand& f, double len, double exponent,
                                      double piece_tol) {
            quad::Hints hints;
            hints.left_exponent = exponent;
            integral += quad::integrate_adaptive(f, 0.0, len, piece_tol, hints);
        };
        auto edge_piece = [&integral, p](const quad::Integrand& g, double len,
                                         double piece_tol) {
            integral += quad::integrate_power_left(g, len, p, piece_tol);
        };
        if (tau <= 1.0 - 1e-9) {
            const double piece_tol = 0.25 * tol * constants_.C;
            const double half_lo = 0.5 * (1.0 + tau);  // split of [-1, tau]
            const double half_hi = 0.5 * (1.0 - tau);  // split of [tau, 1]
            // s = -1 + v
            edge_piece([&](double v) {
                return power((1.0 + tau) - v) * std::pow(2.0 - v, p);
            }, half_lo, piece_tol);
            // s = tau - v
            kink_piece([&](double v) {
                return power(v) * std::pow(((1.0 - tau) + v) * ((1.0 + tau) - v), p);
            }, half_lo, kink_exp, piece_tol);
            // s = tau + v
            kink_piece([&](double v) {
                return power(v) * std::pow(((1.0 - tau) - v) * ((1.0 + tau) + v), p);
            }, half_hi, kink_exp, piece_tol);
            // s = 1 - v
            edge_piece([&](double v) {
                return power((1.0 - tau) - v) * std::pow(2.0 - v, p);
            }, half_hi, piece_tol);
        } else {
            // On the edge (within 1e-9 of the support boundary)
            const double piece_tol = 0.5 * tol * constants_.C;
            // s = -1 + v
            edge_piece([&](double v) {
                return power((1.0 + tau) - v) * std::pow(2.0 - v, p);
            }, 1.0, piece_tol);
            // s = 1 - v; the kernel kink merges with the density endpoint
            // into a single power of combined exponent (alpha + 1) / 2
            kink_piece([&](double v) {
                return power(std::fabs((tau - 1.0) + v)) * std::pow(v * (2.0 - v), p);
            }, 1.0, (alpha + 1.0) / 2.0, piece_tol);
        }
        power_part = inv_c * integral;
    }

    const double sign = (kernel_.regime() == Regime::A) ? 1.0 : -1.0;
    return sign * (power_part - quad_part);
}

double ClosedFormSolution::energy_by_quadrature(double tol) const {
    const double p = -(kernel_.alpha() - 1.0) / 2.0;
    const quad::JacobiRule rule = quad::gauss_jacobi(128, p);
    const double inv_c = 1.0 / constants_.C;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] *
               potential_by_quadrature(center_ + radius_ * rule.nodes[i], tol);
    return 0.5 * inv_c * acc;
}

double ClosedFormSolution::eta_empirical(double tol) const {
    return potential_by_quadrature(center_, tol);
}

double ClosedFormSolution::eta_ref(double tol) const {
    return energy_available() ? eta() : eta_empirical(tol);
}

}  // namespace ie1d::cf
