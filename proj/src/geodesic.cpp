// SPDX-License-Identifier: MIT
#include "sasakilab/geodesic.hpp"

#include "sasakilab/errors.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace sasakilab {

namespace {

using Vec = std::vector<double>;

/// Second-order geodesic system as a first-order flow on (x, v).
struct Flow {
    const MetricSpec& metric;

    void accel(const Vec& x, const Vec& v, Vec& a) const {
        if (!metric.chart().contains(x)) throw DomainError("geodesic exits the domain box");
        const TensorValue gam = christoffel(metric, x);
        const std::size_t d = x.size();
        for (std::size_t k = 0; k < d; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) s += gam[(k * d + i) * d + j] * v[i] * v[j];
            a[k] = -s;
        }
    }

    void step(Vec& x, Vec& v, double h) const {
        const std::size_t d = x.size();
        Vec a1(d), a2(d), a3(d), a4(d), xt(d), vt(d);
        accel(x, v, a1);
        for (std::size_t i = 0; i < d; ++i) {
            xt[i] = x[i] + 0.5 * h * v[i];
            vt[i] = v[i] + 0.5 * h * a1[i];
        }
        const Vec v2 = vt;
        accel(xt, v2, a2);
        for (std::size_t i = 0; i < d; ++i) {
            xt[i] = x[i] + 0.5 * h * v2[i];
            vt[i] = v[i] + 0.5 * h * a2[i];
        }
        const Vec v3 = vt;
        accel(xt, v3, a3);
        for (std::size_t i = 0; i < d; ++i) {
            xt[i] = x[i] + h * v3[i];
            vt[i] = v[i] + h * a3[i];
        }
        const Vec v4 = vt;
        accel(xt, v4, a4);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        if (!metric.chart().contains(x)) throw DomainError("geodesic exits the domain box");
    }

    /// Endpoint at t = 1 of the geodesic with x(0) = x0, x'(0) = w.
    Vec shoot(const Vec& x0, const Vec& w, int steps) const {
        Vec x = x0, v = w;
        const double h = 1.0 / steps;
        for (int s = 0; s < steps; ++s) step(x, v, h);
        return x;
    }
};

double norm_g(const Eigen::MatrixXd& g, const Vec& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            s += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[i] * v[j];
    return std::sqrt(std::max(s, 0.0));
}

double segment_length(const MetricSpec& metric, const Vec& x, const Vec& y) {
    // 8-point Gauss-Legendre per sub-interval.
    static constexpr std::array<double, 4> nodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                 0.9602898564975363};
    static constexpr std::array<double, 4> weights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                   0.1012285362903763};
    const std::size_t d = x.size();
    Vec dir(d), p(d);
    for (std::size_t i = 0; i < d; ++i) dir[i] = y[i] - x[i];
    const int pieces = 16;
    double total = 0.0;
    for (int piece = 0; piece < pieces; ++piece) {
        const double a = static_cast<double>(piece) / pieces;
        const double half = 0.5 / pieces;
        for (std::size_t q = 0; q < nodes.size(); ++q)
            for (double sgn : {-1.0, 1.0}) {
                const double t = a + half * (1.0 + sgn * nodes[q]);
                for (std::size_t i = 0; i < d; ++i) p[i] = x[i] + t * dir[i];
                total += half * weights[q] * norm_g(metric.value(p), dir);
            }
    }
    return total;
}

}  // namespace

GeodesicPath geodesic_integrate(const MetricSpec& metric, std::span<const double> x0, std::span<const double> v0,
                                double length, int steps) {
    const int d = metric.dim();
    if (static_cast<int>(x0.size()) != d || static_cast<int>(v0.size()) != d)
        throw InputError("geodesic initial data dimension mismatch");
    if (steps < 1 || !(length >= 0.0)) throw PreconditionError("geodesic needs steps >= 1 and length >= 0");
    if (!metric.chart().contains(x0)) throw DomainError("geodesic start point outside the domain box");
    Vec x(x0.begin(), x0.end()), v(v0.begin(), v0.end());
    if (std::abs(norm_g(metric.value(x), v) - 1.0) > 1e-8)
        throw PreconditionError("geodesic initial velocity must have unit length");
    Flow flow{metric};
    GeodesicPath path;
    const double h = length / steps;
    path.s.push_back(0.0);
    path.position.push_back(x);
    path.velocity.push_back(v);
    for (int s = 1; s <= steps; ++s) {
        flow.step(x, v, h);
        path.s.push_back(s * h);
        path.position.push_back(x);
        path.velocity.push_back(v);
    }
    return path;
}

GeodesicResiduals geodesic_residuals(const MetricSpec& metric, const GeodesicPath& path) {
    GeodesicResiduals r;
    const std::size_t n = path.s.size();
    for (std::size_t k = 0; k < n; ++k) {
        const auto& x = path.position[k];
        const auto& v = path.velocity[k];
        r.unit_speed = std::max(r.unit_speed, std::abs(norm_g(metric.value(x), v) - 1.0));
        if (k == 0 || k + 1 == n) continue;
        const double h = path.s[k + 1] - path.s[k - 1];
        const TensorValue gam = christoffel(metric, x);
        const std::size_t d = x.size();
        for (std::size_t m = 0; m < d; ++m) {
            double res = (path.velocity[k + 1][m] - path.velocity[k - 1][m]) / h;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) res += gam[(m * d + i) * d + j] * v[i] * v[j];
            r.equation = std::max(r.equation, std::abs(res));
        }
    }
    return r;
}

DistanceEstimate distance_estimate(const MetricSpec& metric, std::span<const double> xs, std::span<const double> ys,
                                   const ShootingOptions& options) {
    const int d = metric.dim();
    if (static_cast<int>(xs.size()) != d || static_cast<int>(ys.size()) != d)
        throw InputError("distance endpoints dimension mismatch");
    if (!metric.chart().contains(xs) || !metric.chart().contains(ys))
        throw DomainError("distance endpoint outside the domain box");
    const Vec x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
    const std::size_t ud = x.size();
    DistanceEstimate est;
    const double straight = segment_length(metric, x, y);
    est.value = straight;

    Flow flow{metric};
    Vec w(ud);
    for (std::size_t i = 0; i < ud; ++i) w[i] = y[i] - x[i];
    auto residual = [&](const Vec& wv, Vec& f) {
        const Vec end = flow.shoot(x, wv, options.steps);
        double n2 = 0.0;
        for (std::size_t i = 0; i < ud; ++i) {
            f[i] = end[i] - y[i];
            n2 += f[i] * f[i];
        }
        return std::sqrt(n2);
    };
    Vec f(ud), fp(ud), trial(ud);
    double fn = 0.0;
    try {
        fn = residual(w, f);
    } catch (const DomainError&) {
        est.note = "initial shooting guess leaves the domain; coordinate segment length used";
        return est;
    }
    Eigen::MatrixXd J(static_cast<Eigen::Index>(ud), static_cast<Eigen::Index>(ud));
    for (int it = 0; it < options.max_iterations && fn > options.tolerance; ++it) {
        est.iterations = it + 1;
        try {
            for (std::size_t c = 0; c < ud; ++c) {
                const double hstep = 1e-7 * std::max(1.0, std::abs(w[c]));
                trial = w;
                trial[c] += hstep;
                residual(trial, fp);
                for (std::size_t r = 0; r < ud; ++r)
                    J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (fp[r] - f[r]) / hstep;
            }
        } catch (const DomainError&) {
            break;
        }
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(ud));
        for (std::size_t r = 0; r < ud; ++r) rhs(static_cast<Eigen::Index>(r)) = -f[r];
        const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(rhs);
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 20 && !improved; ++ls, lambda *= 0.5) {
            for (std::size_t c = 0; c < ud; ++c) trial[c] = w[c] + lambda * delta(static_cast<Eigen::Index>(c));
            try {
                const double tn = residual(trial, fp);
                if (tn < fn) {
                    w = trial;
                    f = fp;
                    fn = tn;
                    improved = true;
                }
            } catch (const DomainError&) {
            }
        }
        if (!improved) break;
    }
    if (fn <= std::max(options.tolerance, 1e-8)) {
        est.converged = true;
        est.value = std::min(straight, norm_g(metric.value(x), w));
    } else {
        est.note = "shooting did not converge; coordinate segment length used";
    }
    return est;
}

}  // namespace sasakilab
