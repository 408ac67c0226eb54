// SPDX-License-Identifier: MIT
#include "sasakilab/errors.hpp"
#include "sasakilab/jet.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sasakilab;

TEST_SUITE("jet") {

TEST_CASE("product of variables") {
    Jet x = Jet::variable(2, 2, 0, 3.0);
    Jet y = Jet::variable(2, 2, 1, 5.0);
    Jet f = x * y;
    CHECK(f.value() == 15.0);
    CHECK(f.d(0) == 5.0);
    CHECK(f.d(1) == 3.0);
    CHECK(f.partial({0, 1}) == 1.0);
    CHECK(f.partial({1, 0}) == 1.0);
    CHECK(f.partial({0, 0}) == 0.0);
}

TEST_CASE("exp at zero has unit derivatives") {
    Jet x = Jet::variable(1, 4, 0, 0.0);
    Jet e = exp(x);
    for (int k = 0; k <= 4; ++k) {
        std::vector<int> vars(static_cast<std::size_t>(k), 0);
        CHECK(e.partial(vars) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("elementary functions match closed-form derivatives") {
    const double a = 0.7;
    Jet x = Jet::variable(1, 4, 0, a);
    auto d = [](const Jet& j, int k) { return j.partial(std::vector<int>(static_cast<std::size_t>(k), 0)); };
    Jet s = sin(x);
    CHECK(d(s, 3) == doctest::Approx(-std::cos(a)));
    CHECK(d(s, 4) == doctest::Approx(std::sin(a)));
    Jet l = log(x);
    CHECK(d(l, 2) == doctest::Approx(-1.0 / (a * a)));
    CHECK(d(l, 4) == doctest::Approx(-6.0 / std::pow(a, 4)));
    Jet r = sqrt(x);
    CHECK(d(r, 2) == doctest::Approx(-0.25 * std::pow(a, -1.5)));
    Jet t = tan(x);
    const double sec2 = 1.0 / (std::cos(a) * std::cos(a));
    CHECK(d(t, 1) == doctest::Approx(sec2));
    CHECK(d(t, 2) == doctest::Approx(2.0 * sec2 * std::tan(a)));
    Jet q = Jet(1, 4, 1.0) / x;
    CHECK(d(q, 3) == doctest::Approx(-6.0 / std::pow(a, 4)));
    Jet p = pow(x, 2.5);
    CHECK(d(p, 2) == doctest::Approx(2.5 * 1.5 * std::pow(a, 0.5)));
    CHECK(d(sinh(x), 3) == doctest::Approx(std::cosh(a)));
    CHECK(d(cosh(x), 4) == doctest::Approx(std::cosh(a)));
}

TEST_CASE("sin squared agrees with finite differences") {
    const double a = std::acos(-1.0) / 4.0;
    const double h = 1e-5;
    auto f = [](double t) { return std::sin(t) * std::sin(t); };
    Jet x = Jet::variable(1, 2, 0, a);
    Jet s = ipow(sin(x), 2);
    CHECK(s.d(0) == doctest::Approx((f(a + h) - f(a - h)) / (2 * h)).epsilon(1e-6));
    CHECK(s.d(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random polynomial derivatives are exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double c[4] = {u(rng), u(rng), u(rng), u(rng)};
        const double px = u(rng), py = u(rng), pz = u(rng);
        Jet x = Jet::variable(3, 4, 0, px), y = Jet::variable(3, 4, 1, py), z = Jet::variable(3, 4, 2, pz);
        // f = c0 x^2 y + c1 y z^3 + c2 x y z + c3 x^4
        Jet f = c[0] * x * x * y + c[1] * y * ipow(z, 3) + c[2] * x * y * z + c[3] * ipow(x, 4);
        CHECK(f.partial({0, 0, 1}) == doctest::Approx(2 * c[0]));
        CHECK(f.partial({1, 2, 2, 2}) == doctest::Approx(6 * c[1]));
        CHECK(f.partial({2, 2, 1}) == doctest::Approx(6 * c[1] * pz));
        CHECK(f.partial({0, 1, 2}) == doctest::Approx(c[2]));
        CHECK(f.partial({0, 0, 0, 0}) == doctest::Approx(24 * c[3]));
        CHECK(f.partial({0, 0}) == doctest::Approx(2 * c[0] * py + 12 * c[3] * px * px));
    }
}

TEST_CASE("derivative and truncation are consistent") {
    Jet x = Jet::variable(2, 4, 0, 0.3), y = Jet::variable(2, 4, 1, -0.4);
    Jet f = exp(x * y) + sin(x + 2.0 * y);
    Jet fx = f.derivative(0);
    CHECK(fx.order() == 3);
    CHECK(fx.partial({1, 1}) == doctest::Approx(f.partial({0, 1, 1})));
    CHECK(fx.partial({0, 1, 0}) == doctest::Approx(f.partial({0, 0, 1, 0})));
    Jet g = f.truncated(2);
    CHECK(g.partial({0, 1}) == f.partial({0, 1}));
}

TEST_CASE("domain errors") {
    Jet x = Jet::variable(1, 2, 0, -1.0);
    CHECK_THROWS_AS(log(x), DomainError);
    CHECK_THROWS_AS(sqrt(x), DomainError);
    CHECK_THROWS_AS(pow(x, 0.5), DomainError);
    CHECK_NOTHROW(pow(x, 3.0));
    CHECK_THROWS_AS(Jet(1, 2, 1.0) / Jet(1, 2, 0.0), DomainError);
}

}
