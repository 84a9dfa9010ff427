#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <ie1d/closed_form.hpp>
#include <ie1d/kernel.hpp>
#include <ie1d/quadrature.hpp>

namespace cf = ie1d::cf;
namespace quad = ie1d::quad;
using ie1d::Kernel;
using ie1d::Regime;

namespace {

cf::ClosedFormSolution make_solution(double alpha, double center = 0.0) {
    return cf::ClosedFormSolution(Kernel(alpha, ie1d::regime_of_alpha(alpha)),
                                  center);
}

// Radius/energy references fixed as literals before the implementation ran.
struct RadiusEnergyCase {
    double alpha;
    double R;
    double E;  // NaN marks "no closed form"
};
const RadiusEnergyCase kRadiusEnergyCases[] = {
    {0.0, 1.4142135623730950488, std::numeric_limits<double>::quiet_NaN()},
    {1.0, 1.0, -1.0 / 6.0},
    {0.5, 1.173246522889079, -0.5899317443448486},
    {2.5, 0.6192017465269675, -0.02556072019346979},
    {2.9, 0.524669191024, -0.0388322858948},
    {2.99, std::numeric_limits<double>::quiet_NaN(), -0.0413883929099},
    {2.999, 0.5002499638, -0.0416388839995},
};

}  // namespace

TEST_SUITE("closed_form") {

TEST_CASE("radius and energy match fixed references") {
    for (const auto& c : kRadiusEnergyCases) {
        CAPTURE(c.alpha);
        const auto sol = make_solution(c.alpha);
        if (!std::isnan(c.R))
            CHECK(sol.radius() == doctest::Approx(c.R).epsilon(2e-11));
        if (!std::isnan(c.E)) {
            CHECK(sol.energy() == doctest::Approx(c.E).epsilon(2e-11));
            CHECK(sol.eta() == doctest::Approx(2.0 * c.E).epsilon(2e-11));
        }
    }
}

TEST_CASE("alpha = 1 collapses to exact rationals") {
    const auto sol = make_solution(1.0);
    CHECK(sol.radius() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sol.energy() == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
    CHECK(sol.constants().C_prime == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::isnan(sol.constants().c));
    CHECK(std::isnan(sol.constants().c1));
}

TEST_CASE("alpha = 0 has radius sqrt(2) and no closed-form energy") {
    const auto sol = make_solution(0.0);
    CHECK(sol.radius() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK_FALSE(sol.energy_available());
    CHECK(std::isnan(sol.energy()));
    CHECK_THROWS_AS(sol.potential_exact(0.5), std::domain_error);
    // Fixed literal: 3/4 + ln(2)/2
    CHECK(sol.eta_empirical() ==
          doctest::Approx(1.0965735902799726547).epsilon(1e-9));
    CHECK(sol.eta_ref() == doctest::Approx(1.0965735902799726547).epsilon(1e-9));
}

TEST_CASE("constants satisfy their internal identities") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.5, 1.9, 2.1, 2.5, 2.9}) {
        CAPTURE(alpha);
        const cf::Constants k = cf::compute_constants(alpha);
        CHECK(k.C_tilde / k.C == doctest::Approx(1.0 / (4.0 - alpha)).epsilon(1e-13));
        // D coincides with C' by the reflection formula
        CHECK(k.D == doctest::Approx(k.C_prime).epsilon(1e-13));
        if (alpha != 1.0) {
            CHECK((alpha - 1.0) * k.c ==
                  doctest::Approx(2.0 * k.C_prime).epsilon(1e-12));
            CHECK((alpha - 1.0) * k.c1 ==
                  doctest::Approx(-2.0 * k.D).epsilon(1e-12));
        }
        CHECK(k.C > 0.0);
        CHECK(k.C_prime > 0.0);
    }
}

TEST_CASE("radius satisfies 2 C' R^(alpha-2) = C") {
    for (double alpha : {-0.5, 0.0, 0.5, 1.5, 2.2, 2.8}) {
        CAPTURE(alpha);
        const auto sol = make_solution(alpha);
        const cf::Constants& k = sol.constants();
        CHECK(2.0 * k.C_prime * std::pow(sol.radius(), alpha - 2.0) ==
              doctest::Approx(k.C).epsilon(1e-12));
    }
}

TEST_CASE("density is a symmetric probability density on (a-R, a+R)") {
    for (double alpha : {-0.5, 0.5, 1.0, 2.5}) {
        CAPTURE(alpha);
        const double a = 0.37;
        const auto sol = make_solution(alpha, a);
        const double R = sol.radius();
        CHECK(sol.density(a - 1.0001 * R) == 0.0);
        CHECK(sol.density(a + 1.0001 * R) == 0.0);
        CHECK(sol.density(a + 0.3 * R) ==
              doctest::Approx(sol.density(a - 0.3 * R)).epsilon(1e-12));
        CHECK(sol.density(a) > 0.0);

        // CDF endpoints, midpoint, and agreement with integrated density
        CHECK(sol.cdf(a - 1.0001 * R) == 0.0);
        CHECK(sol.cdf(a + 1.0001 * R) == 1.0);
        CHECK(sol.cdf(a) == doctest::Approx(0.5).epsilon(1e-12));
        // Integrate the density from the left edge in edge-local coordinates:
        // the (distance)^p factor goes into the quadrature weight.
        const double x0 = a + 0.3 * R;
        const double p = -(alpha - 1.0) / 2.0;
        const double edge_half = quad::integrate_power_left(
            [&](double v) { return sol.density(a - R + v) * std::pow(v, -p); },
            R, p, 1e-12);
        const double inner = quad::integrate_adaptive(
            [&](double x) { return sol.density(x); }, a, x0, 1e-12);
        CHECK(sol.cdf(x0) == doctest::Approx(edge_half + inner).epsilon(1e-9));
    }
}

TEST_CASE("second moment formula matches the density integral") {
    for (double alpha : {-0.5, 0.5, 2.5}) {
        CAPTURE(alpha);
        const auto sol = make_solution(alpha);
        const double R = sol.radius();
        const double p = -(alpha - 1.0) / 2.0;
        // x^2 density is even; integrate the right half from the edge inward
        const double m2 =
            2.0 * quad::integrate_power_left(
                      [&](double v) {
                          const double x = R - v;
                          return x * x * sol.density(x) * std::pow(v, -p);
                      },
                      R, p, 1e-12);
        CHECK(sol.second_moment() == doctest::Approx(m2).epsilon(1e-10));
    }
    // Fixed literal for alpha = 1/2
    CHECK(make_solution(0.5).second_moment() ==
          doctest::Approx(0.393287829563232).epsilon(1e-12));
}

TEST_CASE("potential_exact agrees with direct quadrature") {
    for (double alpha : {-0.5, 0.5, 1.0, 1.5, 2.5}) {
        CAPTURE(alpha);
        const double a = -0.21;
        const auto sol = make_solution(alpha, a);
        const double R = sol.radius();
        for (double t : {0.0, 0.45, 0.99, 1.2, 1.8, 2.6}) {
            CAPTURE(t);
            const double x = a + t * R;
            CHECK(sol.potential_exact(x) ==
                  doctest::Approx(sol.potential_by_quadrature(x, 1e-10))
                      .epsilon(1e-8));
        }
    }
}

TEST_CASE("potential equals eta on the support, exceeds it outside") {
    for (double alpha : {-0.5, 0.5, 2.5}) {
        CAPTURE(alpha);
        const auto sol = make_solution(alpha);
        const double R = sol.radius();
        const double eta = sol.eta();
        CHECK(sol.potential_exact(0.0) == doctest::Approx(eta).epsilon(1e-13));
        CHECK(sol.potential_exact(0.8 * R) == doctest::Approx(eta).epsilon(1e-13));
        CHECK(sol.potential_exact(1.3 * R) > eta);
        CHECK(sol.potential_exact(2.0 * R) > sol.potential_exact(1.3 * R));
    }
    // Exterior excess at 1.5 R, fixed literals
    {
        const auto sol = make_solution(2.5);
        CHECK(sol.potential_exact(1.5 * sol.radius()) - sol.eta() ==
              doctest::Approx(0.00774368414).epsilon(1e-8));
    }
    {
        const auto sol = make_solution(0.5);
        CHECK(sol.potential_exact(1.5 * sol.radius()) - sol.eta() ==
              doctest::Approx(0.3178169732).epsilon(1e-8));
    }
}

TEST_CASE("energy_by_quadrature reproduces the closed-form energy") {
    for (double alpha : {-0.5, 0.5, 1.0, 1.5, 2.2, 2.5, 2.9}) {
        CAPTURE(alpha);
        const auto sol = make_solution(alpha);
        CHECK(sol.energy_by_quadrature() ==
              doctest::Approx(sol.energy()).epsilon(1e-8));
    }
}

TEST_CASE("remainders vanish on [-1,1] and are positive outside") {
    for (double t : {0.0, 0.5, 0.999, 1.0}) {
        CHECK(cf::remainder_f(2.5, t) == 0.0);
        CHECK(cf::remainder_g(0.5, t) == 0.0);
        CHECK(cf::remainder_f(2.5, -t) == 0.0);
    }
    for (double t : {1.1, 1.7, 3.0}) {
        CAPTURE(t);
        CHECK(cf::remainder_f(2.5, t) > 0.0);
        CHECK(cf::remainder_g(0.5, t) > 0.0);
        CHECK(cf::remainder_g(-0.5, t) > 0.0);
        CHECK(cf::remainder_f(2.5, -t) == doctest::Approx(cf::remainder_f(2.5, t)));
    }
    // Fixed literal: remainder_f(2.5, 2) through the single-integral form
    CHECK(cf::remainder_f(2.5, 2.0) ==
          doctest::Approx(0.8956549108031078).epsilon(1e-10));
}

TEST_CASE("the two remainder forms agree where their ranges overlap") {
    // For alpha in (1,2) the triple-integral form equals minus the
    // single-integral form evaluated in the same scaled variable.
    for (double alpha : {1.2, 1.5, 1.8}) {
        for (double t : {1.3, 2.0, 2.8}) {
            CAPTURE(alpha);
            CAPTURE(t);
            CHECK(cf::remainder_g(alpha, t) ==
                  doctest::Approx(-cf::compint_remainder(alpha, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("triple_tail nested integral matches a fixed reference") {
    CHECK(cf::triple_tail(0.5, 1.5) ==
          doctest::Approx(0.179416852467).epsilon(1e-9));
}

TEST_CASE("integral building blocks obey their derivative relations") {
    // d/dx ramp(x) = one_sided(x); d/dx wedge(x) = (x^2-1)^{(a-3)/2} (x-1)
    const double h = 1e-5;
    for (double alpha : {1.5, 2.5}) {
        for (double x : {1.4, 2.1}) {
            CAPTURE(alpha);
            CAPTURE(x);
            const double dramp =
                (cf::ramp_integral(alpha, x + h) - cf::ramp_integral(alpha, x - h)) /
                (2.0 * h);
            CHECK(dramp == doctest::Approx(cf::one_sided_integral(alpha, x))
                               .epsilon(1e-7));
            const double dwedge =
                (cf::wedge_integral(alpha, x + h) -
                 cf::wedge_integral(alpha, x - h)) /
                (2.0 * h);
            const double expected =
                std::pow(x * x - 1.0, 0.5 * (alpha - 3.0)) * (x - 1.0);
            CHECK(dwedge == doctest::Approx(expected).epsilon(1e-7));
        }
    }
    // tail(x) decreases to 0: d/dx tail(x) = -(x^2-1)^{(a-3)/2}
    for (double alpha : {0.5, 1.5}) {
        const double x = 1.6;
        CAPTURE(alpha);
        const double dtail =
            (cf::tail_integral(alpha, x + h) - cf::tail_integral(alpha, x - h)) /
            (2.0 * h);
        CHECK(dtail == doctest::Approx(-std::pow(x * x - 1.0, 0.5 * (alpha - 3.0)))
                           .epsilon(1e-7));
    }
}

TEST_CASE("scaled interval power moment against an independent rule") {
    // For x > R the map y -> |x-y|^alpha is analytic on [-R, R], so a plain
    // symmetric-weight rule converges geometrically and furnishes an oracle:
    //   (1/alpha) int_{-R}^{R} |x-y|^alpha (R^2-y^2)^{-(alpha-1)/2} dy
    //     = C' x^2 + C' R^2 / alpha + R^2 rem(x/R)
    // with rem = compint_remainder in regime A and -remainder_g in regime B.
    for (double alpha : {0.5, 1.5, 2.5}) {
        const cf::Constants k = cf::compute_constants(alpha);
        const quad::JacobiRule rule = quad::gauss_jacobi(96, -0.5 * (alpha - 1.0));
        for (double R : {0.5, 1.0, 2.0}) {
            for (double t : {1.3, 2.0}) {
                CAPTURE(alpha);
                CAPTURE(R);
                CAPTURE(t);
                const double x = t * R;
                const double lhs =
                    R * R / alpha * rule.apply([&](double s) {
                        return std::pow(std::fabs(t - s), alpha);
                    });
                const double rem = alpha > 2.0 ? cf::compint_remainder(alpha, t)
                                               : -cf::remainder_g(alpha, t);
                const double rhs =
                    k.C_prime * x * x + k.C_prime * R * R / alpha + R * R * rem;
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("center shifts are exact translations") {
    const double a = 1.75;
    const auto base = make_solution(2.5);
    const auto moved = make_solution(2.5, a);
    CHECK(moved.center() == a);
    for (double z : {-0.4, 0.0, 0.3, 0.9}) {
        CAPTURE(z);
        CHECK(moved.density(a + z) == doctest::Approx(base.density(z)).epsilon(1e-13));
        CHECK(moved.cdf(a + z) == doctest::Approx(base.cdf(z)).epsilon(1e-13));
        CHECK(moved.potential_exact(a + z) ==
              doctest::Approx(base.potential_exact(z)).epsilon(1e-13));
    }
}

TEST_CASE("compute_constants rejects out-of-range alpha") {
    CHECK_THROWS_AS(cf::compute_constants(3.0), std::domain_error);
    CHECK_THROWS_AS(cf::compute_constants(-1.0), std::domain_error);
    CHECK_THROWS_AS(cf::compute_constants(3.5), std::domain_error);
}

}  // TEST_SUITE
