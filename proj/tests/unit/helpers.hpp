// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/tensor.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testutil {

inline sasakilab::MetricSpec make_metric(std::vector<std::string> names, std::vector<sasakilab::Interval> box,
                                         const std::vector<std::string>& table) {
    sasakilab::Chart chart{std::move(names), std::move(box)};
    std::vector<sasakilab::CoordExpr> comps;
    for (const auto& t : table) comps.push_back(sasakilab::parse_expr(t, chart.names));
    return sasakilab::MetricSpec(std::move(chart), std::move(comps));
}

inline sasakilab::MetricSpec round_s2() {
    return make_metric({"th", "ph"}, {{0.1, 3.04}, {-4.0, 4.0}}, {"1", "0", "0", "sin(th)^2"});
}

inline sasakilab::MetricSpec flat(int d) {
    std::vector<std::string> names, table;
    std::vector<sasakilab::Interval> box;
    for (int i = 0; i < d; ++i) {
        names.push_back("x" + std::to_string(i + 1));
        box.push_back({-10.0, 10.0});
        for (int j = 0; j < d; ++j) table.push_back(i == j ? "1" : "0");
    }
    return make_metric(names, box, table);
}

/// Round unit sphere S^d in stereographic coordinates.
inline sasakilab::MetricSpec stereo_sphere(int d) {
    std::vector<std::string> names, table;
    std::vector<sasakilab::Interval> box;
    std::string r2;
    for (int i = 0; i < d; ++i) {
        names.push_back("u" + std::to_string(i + 1));
        box.push_back({-3.0, 3.0});
        r2 += (i ? " + " : "") + names.back() + "^2";
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) table.push_back(i == j ? "4 / (1 + " + r2 + ")^2" : "0");
    return make_metric(names, box, table);
}

/// An arbitrary non-symmetric-space metric on a box around the origin.
inline sasakilab::MetricSpec generic3() {
    return make_metric({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}},
                       {"1 + x^2", "0.3*y", "0.1*z*x", "0.3*y", "2 + sin(x)", "0.2*x*y", "0.1*z*x", "0.2*x*y",
                        "1.5 + 0.5*cos(y*z)"});
}

inline std::vector<double> random_point(std::mt19937_64& rng, int d, double r) {
    std::uniform_real_distribution<double> u(-r, r);
    std::vector<double> p(static_cast<std::size_t>(d));
    for (auto& v : p) v = u(rng);
    return p;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

}  // namespace testutil
