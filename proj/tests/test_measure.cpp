#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include <doctest.h>
#include <ie1d/measure.hpp>

namespace meas = ie1d::meas;
namespace cf = ie1d::cf;
using ie1d::Kernel;
using ie1d::Regime;

namespace {

meas::Measure closed_form_measure(double alpha, double center = 0.0) {
    return cf::ClosedFormSolution(Kernel(alpha, ie1d::regime_of_alpha(alpha)),
                                  center);
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("validate accepts good measures and rejects bad ones") {
    CHECK_NOTHROW(meas::validate(meas::DiscreteMeasure{{0.0, 1.0}, {0.5, 0.5}}));
    CHECK_NOTHROW(meas::validate(meas::GridMeasure{{0.0, 0.5, 1.0}, {0.5, 0.0, 0.5}}));

    // Weight sum off by more than 1e-12
    CHECK_THROWS_AS(meas::validate(meas::DiscreteMeasure{{0.0, 1.0}, {0.5, 0.6}}),
                    std::invalid_argument);
    // Nonpositive atomic weight
    CHECK_THROWS_AS(meas::validate(meas::DiscreteMeasure{{0.0, 1.0}, {1.0, 0.0}}),
                    std::invalid_argument);
    // Size mismatch
    CHECK_THROWS_AS(meas::validate(meas::DiscreteMeasure{{0.0}, {0.5, 0.5}}),
                    std::invalid_argument);
    // Negative grid weight
    CHECK_THROWS_AS(
        meas::validate(meas::GridMeasure{{0.0, 1.0, 2.0}, {0.6, -0.1, 0.5}}),
        std::invalid_argument);
    // Grid not strictly increasing
    CHECK_THROWS_AS(
        meas::validate(meas::GridMeasure{{0.0, 1.0, 1.0}, {0.4, 0.3, 0.3}}),
        std::invalid_argument);
    // Non-finite position
    CHECK_THROWS_AS(
        meas::validate(meas::DiscreteMeasure{{0.0, INFINITY}, {0.5, 0.5}}),
        std::invalid_argument);
}

TEST_CASE("two-atom energy matches the pair formula") {
    const meas::Measure mu = meas::DiscreteMeasure{{-0.5, 0.5}, {0.5, 0.5}};

    const Kernel ka(2.5, Regime::A);
    // (1/2) * 2 * w^2 * K(1); diagonal K(0) = 0
    CHECK(meas::energy(mu, ka) ==
          doctest::Approx(0.25 * (1.0 / 2.5 - 0.5)).epsilon(1e-14));

    const Kernel kb(0.0, Regime::B);
    // Diagonal excluded (K(0) = +inf); K(1) = 1/2
    CHECK(meas::energy(mu, kb) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(std::isfinite(meas::energy(mu, kb)));
}

TEST_CASE("atomic and grid measures with equal atoms have equal energy") {
    const std::vector<double> xs{-1.0, -0.25, 0.5, 1.25};
    const std::vector<double> ws{0.1, 0.4, 0.3, 0.2};
    const meas::Measure atoms = meas::DiscreteMeasure{xs, ws};
    const meas::Measure grid = meas::GridMeasure{xs, ws};
    for (double alpha : {2.5, 0.5, -0.5}) {
        CAPTURE(alpha);
        const Kernel k(alpha, ie1d::regime_of_alpha(alpha));
        CHECK(meas::energy(atoms, k) ==
              doctest::Approx(meas::energy(grid, k)).epsilon(1e-14));
    }
}

TEST_CASE("potential sum rule: integral of phi equals twice the energy") {
    const meas::Measure mu =
        meas::DiscreteMeasure{{-0.8, -0.1, 0.3, 0.9}, {0.25, 0.25, 0.25, 0.25}};
    for (double alpha : {2.5, 0.5}) {
        CAPTURE(alpha);
        const Kernel k(alpha, ie1d::regime_of_alpha(alpha));
        const auto& atoms = std::get<meas::DiscreteMeasure>(mu);
        double sum = 0.0;
        for (std::size_t i = 0; i < atoms.positions.size(); ++i)
            sum += atoms.weights[i] * meas::potential_at(mu, k, atoms.positions[i]);
        CHECK(sum == doctest::Approx(2.0 * meas::energy(mu, k)).epsilon(1e-13));
    }
}

TEST_CASE("closed-form energy routes to the exact value") {
    for (double alpha : {2.5, 0.5}) {
        CAPTURE(alpha);
        const Kernel k(alpha, ie1d::regime_of_alpha(alpha));
        const cf::ClosedFormSolution sol(k);
        CHECK(meas::energy(sol, k) == doctest::Approx(sol.energy()).epsilon(1e-14));
    }
    // alpha = 0: exact energy unavailable, quadrature value returned
    const Kernel k0(0.0, Regime::B);
    const cf::ClosedFormSolution sol0(k0);
    const double e0 = meas::energy(sol0, k0);
    CHECK(std::isfinite(e0));
    CHECK(e0 == doctest::Approx(sol0.energy_by_quadrature()).epsilon(1e-9));
}

TEST_CASE("potential_at on a closed-form measure matches its quadrature") {
    const Kernel k(2.5, Regime::A);
    const cf::ClosedFormSolution sol(k);
    for (double x : {0.0, 0.4, 1.1}) {
        CAPTURE(x);
        CHECK(meas::potential_at(sol, k, x) ==
              doctest::Approx(sol.potential_by_quadrature(x)).epsilon(1e-9));
    }
}

TEST_CASE("energy is translation invariant") {
    const meas::Measure mu =
        meas::DiscreteMeasure{{-0.7, 0.2, 0.6}, {0.3, 0.3, 0.4}};
    const Kernel k(2.5, Regime::A);
    const double base = meas::energy(mu, k);
    for (double t : {-2.0, 0.35, 11.0}) {
        CAPTURE(t);
        CHECK(meas::energy(meas::translate(mu, t), k) ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein1 basics on atomic measures") {
    const meas::Measure a = meas::DiscreteMeasure{{0.0}, {1.0}};
    const meas::Measure b = meas::DiscreteMeasure{{1.0}, {1.0}};
    CHECK(meas::wasserstein1(a, a) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(meas::wasserstein1(a, b) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(meas::wasserstein1(b, a) == doctest::Approx(1.0).epsilon(1e-14));

    // Split mass: W1(delta_0, (delta_{-1}+delta_1)/2) = 1
    const meas::Measure c = meas::DiscreteMeasure{{-1.0, 1.0}, {0.5, 0.5}};
    CHECK(meas::wasserstein1(a, c) == doctest::Approx(1.0).epsilon(1e-14));

    // Unsorted positions are handled
    const meas::Measure d = meas::DiscreteMeasure{{1.0, -1.0}, {0.5, 0.5}};
    CHECK(meas::wasserstein1(c, d) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("wasserstein1 of a translate equals the shift") {
    const meas::Measure atoms =
        meas::DiscreteMeasure{{-0.6, 0.1, 0.8}, {0.25, 0.5, 0.25}};
    CHECK(meas::wasserstein1(atoms, meas::translate(atoms, 0.4)) ==
          doctest::Approx(0.4).epsilon(1e-12));

    const meas::Measure sol = closed_form_measure(2.5);
    CHECK(meas::wasserstein1(sol, meas::translate(sol, 0.35)) ==
          doctest::Approx(0.35).epsilon(1e-6));
    CHECK(meas::wasserstein1(sol, sol) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wasserstein1 between atomic and closed-form measures") {
    // The closed form against its own two-point caricature: positive,
    // symmetric, and below the support diameter.
    const meas::Measure sol = closed_form_measure(2.5);
    const meas::Measure atoms = meas::DiscreteMeasure{{-0.5, 0.5}, {0.5, 0.5}};
    const double d1 = meas::wasserstein1(sol, atoms);
    const double d2 = meas::wasserstein1(atoms, sol);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
    CHECK(d1 > 0.0);
    CHECK(d1 < 2.0);
}

TEST_CASE("center_of_mass") {
    CHECK(meas::center_of_mass(meas::DiscreteMeasure{{-1.0, 2.0}, {0.75, 0.25}})
              .value == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(meas::center_of_mass(closed_form_measure(0.5, 1.3)).value ==
          doctest::Approx(1.3).epsilon(1e-12));
    const meas::Measure mu = meas::DiscreteMeasure{{0.0, 1.0}, {0.5, 0.5}};
    CHECK(meas::center_of_mass(meas::translate(mu, 2.0)).value ==
          doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("JSON round trip for every measure type") {
    {
        const meas::Measure mu =
            meas::DiscreteMeasure{{-0.5, 0.25, 1.0}, {0.2, 0.3, 0.5}};
        const auto j = meas::to_json(mu);
        CHECK(j.at("type") == "discrete");
        const meas::Measure back = meas::measure_from_json(j);
        const auto& d = std::get<meas::DiscreteMeasure>(back);
        CHECK(d.positions == std::get<meas::DiscreteMeasure>(mu).positions);
        CHECK(d.weights == std::get<meas::DiscreteMeasure>(mu).weights);
    }
    {
        const meas::Measure mu =
            meas::GridMeasure{{0.0, 0.5, 1.0}, {0.25, 0.5, 0.25}};
        const auto j = meas::to_json(mu);
        CHECK(j.at("type") == "grid");
        const meas::Measure back = meas::measure_from_json(j);
        const auto& g = std::get<meas::GridMeasure>(back);
        CHECK(g.grid == std::get<meas::GridMeasure>(mu).grid);
        CHECK(g.weights == std::get<meas::GridMeasure>(mu).weights);
    }
    {
        const meas::Measure mu = closed_form_measure(2.5, 0.7);
        const auto j = meas::to_json(mu);
        CHECK(j.at("type") == "closedform");
        CHECK(j.at("alpha") == 2.5);
        CHECK(j.at("regime") == "A");
        const meas::Measure back = meas::measure_from_json(j);
        const auto& s = std::get<cf::ClosedFormSolution>(back);
        CHECK(s.alpha() == 2.5);
        CHECK(s.center() == 0.7);
    }
}

TEST_CASE("measure_from_json rejects malformed input") {
    using nlohmann::json;
    CHECK_THROWS_AS(meas::measure_from_json(json{{"type", "nope"}}),
                    std::invalid_argument);
    // Weights not summing to one
    CHECK_THROWS_AS(meas::measure_from_json(json{{"type", "discrete"},
                                                 {"positions", {0.0, 1.0}},
                                                 {"weights", {0.5, 0.6}}}),
                    std::invalid_argument);
    // Closed form with a regime that contradicts alpha
    CHECK_THROWS_AS(
        meas::measure_from_json(
            json{{"type", "closedform"}, {"alpha", 2.5}, {"regime", "B"}, {"center", 0.0}}),
        std::domain_error);
}

}  // TEST_SUITE
