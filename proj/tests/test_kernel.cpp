#include <cmath>
#include <limits>
#include <stdexcept>

#include <doctest.h>
#include <ie1d/kernel.hpp>

using ie1d::Kernel;
using ie1d::Regime;

TEST_SUITE("kernel") {

TEST_CASE("constructor enforces the open parameter ranges") {
    CHECK_NOTHROW(Kernel(2.5, Regime::A));
    CHECK_NOTHROW(Kernel(2.001, Regime::A));
    CHECK_THROWS_AS(Kernel(2.0, Regime::A), std::domain_error);
    CHECK_THROWS_AS(Kernel(3.0, Regime::A), std::domain_error);
    CHECK_THROWS_AS(Kernel(1.0, Regime::A), std::domain_error);

    CHECK_NOTHROW(Kernel(0.0, Regime::B));
    CHECK_NOTHROW(Kernel(-0.999, Regime::B));
    CHECK_THROWS_AS(Kernel(-1.0, Regime::B), std::domain_error);
    CHECK_THROWS_AS(Kernel(2.0, Regime::B), std::domain_error);
    CHECK_THROWS_AS(Kernel(2.5, Regime::B), std::domain_error);
}

TEST_CASE("regime_of_alpha infers the unique admissible regime") {
    CHECK(ie1d::regime_of_alpha(2.5) == Regime::A);
    CHECK(ie1d::regime_of_alpha(2.999) == Regime::A);
    CHECK(ie1d::regime_of_alpha(1.9) == Regime::B);
    CHECK(ie1d::regime_of_alpha(0.0) == Regime::B);
    CHECK(ie1d::regime_of_alpha(-0.5) == Regime::B);
    CHECK_THROWS_AS(ie1d::regime_of_alpha(2.0), std::domain_error);
    CHECK_THROWS_AS(ie1d::regime_of_alpha(3.0), std::domain_error);
    CHECK_THROWS_AS(ie1d::regime_of_alpha(-1.0), std::domain_error);
    CHECK_THROWS_AS(ie1d::regime_of_alpha(5.0), std::domain_error);
}

TEST_CASE("value matches the defining formula") {
    const Kernel a(2.5, Regime::A);
    CHECK(a.value(2.0) ==
          doctest::Approx(std::pow(2.0, 2.5) / 2.5 - 2.0).epsilon(1e-15));
    CHECK(a.value(1.0) == doctest::Approx(1.0 / 2.5 - 0.5).epsilon(1e-15));
    CHECK(a.value(0.0) == 0.0);

    const Kernel b(0.5, Regime::B);
    CHECK(b.value(2.0) ==
          doctest::Approx(2.0 - std::pow(2.0, 0.5) / 0.5).epsilon(1e-15));
    CHECK(b.value(1.0) == doctest::Approx(0.5 - 2.0).epsilon(1e-15));
    CHECK(b.value(0.0) == 0.0);

    const Kernel blog(0.0, Regime::B);
    CHECK(blog.value(2.0) == doctest::Approx(2.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(blog.value(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::isinf(blog.value(0.0)));
    CHECK(blog.value(0.0) > 0.0);

    const Kernel bneg(-0.5, Regime::B);
    CHECK(std::isinf(bneg.value(0.0)));
}

TEST_CASE("derivative matches a central difference of value") {
    const double h = 1e-6;
    for (double alpha : {2.2, 2.8}) {
        const Kernel k(alpha, Regime::A);
        for (double r : {0.3, 1.0, 1.7, 2.4}) {
            CAPTURE(alpha);
            CAPTURE(r);
            const double fd = (k.value(r + h) - k.value(r - h)) / (2.0 * h);
            CHECK(k.derivative(r) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
    for (double alpha : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
        const Kernel k(alpha, Regime::B);
        for (double r : {0.3, 1.0, 1.7, 2.4}) {
            CAPTURE(alpha);
            CAPTURE(r);
            const double fd = (k.value(r + h) - k.value(r - h)) / (2.0 * h);
            CHECK(k.derivative(r) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("r = 1 is the unique stationary point and a minimum") {
    for (double alpha : {2.5, 0.5, 0.0, -0.5}) {
        const Kernel k(alpha, alpha > 2.0 ? Regime::A : Regime::B);
        CAPTURE(alpha);
        CHECK(k.derivative(1.0) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(k.derivative(0.5) < 0.0);
        CHECK(k.derivative(1.5) > 0.0);
        CHECK(k.value(0.9) > k.value(1.0));
        CHECK(k.value(1.1) > k.value(1.0));
    }
}

TEST_CASE("value and derivative reject negative r") {
    const Kernel k(2.5, Regime::A);
    CHECK_THROWS_AS(k.value(-0.1), std::domain_error);
    CHECK_THROWS_AS(k.derivative(0.0), std::domain_error);
    CHECK_THROWS_AS(k.derivative(-1.0), std::domain_error);
}

}  // TEST_SUITE
