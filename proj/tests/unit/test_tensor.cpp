// SPDX-License-Identifier: MIT
#include "helpers.hpp"
#include "sasakilab/errors.hpp"
#include "sasakilab/geodesic.hpp"
#include "sasakilab/tensor.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sasakilab;
using testutil::rel_diff;

TEST_SUITE("tensor") {

TEST_CASE("flat chart has no curvature") {
    const MetricSpec m = testutil::flat(3);
    const double p[3] = {0.3, -1.2, 2.0};
    CHECK(christoffel(m, p).max_abs() == 0.0);
    CHECK(riemann(m, p).max_abs() == 0.0);
    CHECK(scalar(m, p) == 0.0);
    CHECK(fd_oracle_riemann(m, p, 1e-4).max_abs() < 1e-9);
}

TEST_CASE("round S2 closed forms") {
    const MetricSpec m = testutil::round_s2();
    const double th = std::numbers::pi / 3;
    const double p[2] = {th, 0.4};
    const TensorValue gam = christoffel(m, p);
    CHECK(gam.at({0, 1, 1}) == doctest::Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-14));
    CHECK(gam.at({1, 0, 1}) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-14));
    const TensorValue R = riemann(m, p);
    CHECK(R.at({0, 1, 1, 0}) == doctest::Approx(std::sin(th) * std::sin(th)).epsilon(1e-13));
    CHECK(R.at({0, 1, 0, 1}) == doctest::Approx(-std::sin(th) * std::sin(th)).epsilon(1e-13));
    CHECK(scalar(m, p) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("degenerate metric is rejected") {
    const MetricSpec m = testutil::make_metric({"x", "y"}, {{-1, 1}, {-1, 1}}, {"1", "0", "0", "0"});
    const double p[2] = {0.0, 0.0};
    CHECK_THROWS_AS(christoffel(m, p), SingularMetricError);
    CHECK_THROWS_AS(m.value(p), SingularMetricError);
}

TEST_CASE("unit S3 has constant sectional curvature one") {
    const MetricSpec m = testutil::stereo_sphere(3);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const auto p = testutil::random_point(rng, 3, 1.5);
        const TensorValue R = riemann(m, p);
        const Eigen::MatrixXd g = m.value(p);
        const auto X = testutil::random_point(rng, 3, 1.0), Y = testutil::random_point(rng, 3, 1.0);
        double rxyyx = 0, gxx = 0, gyy = 0, gxy = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                gxx += g(i, j) * X[i] * X[j];
                gyy += g(i, j) * Y[i] * Y[j];
                gxy += g(i, j) * X[i] * Y[j];
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) rxyyx += R.at({i, j, k, l}) * X[i] * Y[j] * Y[k] * X[l];
            }
        CHECK(rxyyx / (gxx * gyy - gxy * gxy) == doctest::Approx(1.0).epsilon(1e-10));
        const TensorValue Ric = ricci(m, p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(Ric.at({i, j}) == doctest::Approx(2.0 * g(i, j)).epsilon(1e-10));
        CHECK(scalar(m, p) == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("S5 scalar curvature") {
    const MetricSpec m = testutil::stereo_sphere(5);
    const double p[5] = {0.1, -0.4, 0.7, 0.2, -0.3};
    CHECK(scalar(m, p) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("Riemann symmetries and first Bianchi on a generic metric") {
    const MetricSpec m = testutil::generic3();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const auto p = testutil::random_point(rng, 3, 0.8);
        const TensorValue R = riemann(m, p);
        const double scale = std::max(R.max_abs(), 1.0);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) {
                        const double r = R.at({i, j, k, l});
                        worst = std::max({worst, std::abs(r + R.at({j, i, k, l})), std::abs(r + R.at({i, j, l, k})),
                                          std::abs(r - R.at({k, l, i, j})),
                                          std::abs(r + R.at({j, k, i, l}) + R.at({k, i, j, l}))});
                    }
        CHECK(worst / scale < 1e-10);
    }
}

TEST_CASE("jets agree with the finite-difference oracle") {
    for (const MetricSpec& m : {testutil::generic3(), testutil::stereo_sphere(3)}) {
        std::mt19937_64 rng(9);
        for (int t = 0; t < 10; ++t) {
            const auto p = testutil::random_point(rng, 3, 0.8);
            const TensorValue a = riemann(m, p), b = fd_oracle_riemann(m, p, 1e-4);
            double dev = 0.0;
            for (std::size_t c = 0; c < a.size(); ++c) dev = std::max(dev, std::abs(a[c] - b[c]));
            CHECK(dev / std::max(a.max_abs(), 1e-300) < 1e-5);
        }
    }
    const MetricSpec m = testutil::generic3();
    const double p[3] = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(fd_oracle_riemann(m, p, 0.0), PreconditionError);
    const double edge[3] = {0.99995, 0.0, 0.0};
    CHECK_THROWS_AS(fd_oracle_riemann(m, edge, 1e-4), PreconditionError);
}

TEST_CASE("covariant derivatives") {
    const MetricSpec m = testutil::generic3();
    const double p[3] = {0.2, -0.3, 0.5};
    SUBCASE("metric compatibility") {
        const auto metric_field = [&](std::span<const double> q, int order) { return metric_jets(m, q, order).g; };
        CHECK(cov_deriv(metric_field, m, p, 1).max_abs() < 1e-12);
        CHECK(cov_deriv(metric_field, m, p, 2).max_abs() < 1e-11);
    }
    SUBCASE("Ricci identity for a covector") {
        const std::vector<std::string> names{"x", "y", "z"};
        const std::vector<CoordExpr> w{parse_expr("sin(x*y) + z", names), parse_expr("x^2*z", names),
                                       parse_expr("exp(y) - x*z", names)};
        const auto field = [&](std::span<const double> q, int order) {
            return expr_jets(w, Variance::Down, q, order);
        };
        const TensorValue h = cov_deriv(field, m, p, 2);
        const TensorJet mixed = riemann_mixed_jet(metric_jets(m, p, 2));
        double worst = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) {
                    double action = 0.0;
                    for (int q = 0; q < 3; ++q)
                        action -= w[static_cast<std::size_t>(q)].eval(p) *
                                  mixed.comp(static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + q))[0];
                    worst = std::max(worst, std::abs(h.at({k, j, i}) - h.at({k, i, j}) - action));
                }
        CHECK(worst < 1e-8);
    }
    SUBCASE("contracted second Bianchi") {
        const MetricJets mj = metric_jets(m, p, 3);
        const TensorJet ric = ricci_jet(riemann_mixed_jet(mj));
        const TensorValue dric = cov_deriv(ric, mj).value();
        const TensorJet R = scalar_jet(ric, mj);
        const Eigen::MatrixXd ginv = m.value(p).inverse();
        for (int i = 0; i < 3; ++i) {
            double div = 0.0;
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) div += ginv(j, l) * dric.at({i, j, l});
            CHECK(std::abs(div - 0.5 * R.comp(0)[1 + i]) < 1e-8);
        }
    }
    SUBCASE("insufficient order") {
        const auto field = [&](std::span<const double> q, int) { return metric_jets(m, q, 1).g; };
        CHECK_THROWS_AS(cov_deriv(field, m, p, 2), PreconditionError);
    }
}

TEST_CASE("Hessian, Laplacian and Lie derivative") {
    const MetricSpec f3 = testutil::flat(3);
    const std::vector<std::string> xs{"x1", "x2", "x3"};
    const CoordExpr r2 = parse_expr("x1^2 + x2^2 + x3^2", xs);
    const double p[3] = {0.4, 1.0, -2.0};
    const TensorValue h = hessian(r2, f3, p);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(h.at({i, j}) == (i == j ? 2.0 : 0.0));
    CHECK(laplacian(r2, f3, p) == doctest::Approx(6.0));

    const MetricSpec s2 = testutil::round_s2();
    const std::vector<std::string> ang{"th", "ph"};
    const std::vector<CoordExpr> rot{parse_expr("0", ang), parse_expr("1", ang)};
    const double q[2] = {1.1, 0.3};
    CHECK(lie_derivative(s2, rot, q).max_abs() < 1e-14);

    // Hessian of the coordinate function th vs. finite differences of its gradient.
    const CoordExpr f = parse_expr("th*cos(ph)", ang);
    const TensorValue hf = hessian(f, s2, q);
    const double hs = 1e-5;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double a[2] = {q[0], q[1]}, b[2] = {q[0], q[1]};
            a[i] += hs;
            b[i] -= hs;
            const double dd = (f.eval_jet(a, 1).d(j) - f.eval_jet(b, 1).d(j)) / (2 * hs);
            double conn = 0.0;
            const TensorValue gam = christoffel(s2, q);
            for (int k = 0; k < 2; ++k) conn += gam.at({k, i, j}) * f.eval_jet(q, 1).d(k);
            CHECK(hf.at({i, j}) == doctest::Approx(dd - conn).epsilon(1e-6));
        }
}

TEST_CASE("geodesics and distances") {
    const MetricSpec f3 = testutil::flat(3);
    const double o[3] = {0, 0, 0}, y[3] = {3, 4, 0};
    const DistanceEstimate e = distance_estimate(f3, o, y);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(5.0).epsilon(1e-12));
    const double far[3] = {0, 0, 11};
    CHECK_THROWS_AS(distance_estimate(f3, o, far), DomainError);

    const MetricSpec s2 = testutil::round_s2();
    // Two points on the equator pi/3 apart, and an off-equator pair via the
    // spherical law of cosines.
    const double a[2] = {std::numbers::pi / 2, 0.0}, b[2] = {std::numbers::pi / 2, std::numbers::pi / 3};
    const DistanceEstimate eq = distance_estimate(s2, a, b);
    CHECK(eq.converged);
    CHECK(std::abs(eq.value - std::numbers::pi / 3) < 1e-4);
    const double c[2] = {0.7, 0.2}, d[2] = {1.3, 1.0};
    const double cosang = std::cos(c[0]) * std::cos(d[0]) + std::sin(c[0]) * std::sin(d[0]) * std::cos(d[1] - c[1]);
    const DistanceEstimate off = distance_estimate(s2, c, d);
    CHECK(off.converged);
    CHECK(std::abs(off.value - std::acos(cosang)) < 1e-4);

    const double v0[2] = {1.0, 0.0};
    const GeodesicPath path = geodesic_integrate(s2, c, v0, 1.5, 300);
    CHECK(path.length() == doctest::Approx(1.5));
    CHECK(path.position.back()[0] == doctest::Approx(2.2).epsilon(1e-9));
    const GeodesicResiduals res = geodesic_residuals(s2, path);
    CHECK(res.unit_speed < 1e-9);
    CHECK(res.equation < 1e-4);
    CHECK_THROWS_AS(geodesic_integrate(s2, c, v0, 3.0, 300), DomainError);
    const double slow[2] = {0.5, 0.0};
    CHECK_THROWS_AS(geodesic_integrate(s2, c, slow, 1.0, 10), PreconditionError);
}

}
