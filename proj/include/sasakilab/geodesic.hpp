// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/tensor.hpp"

#include <span>
#include <string>
#include <vector>

namespace sasakilab {

/// Arclength-parametrized geodesic sampled on a uniform grid.
struct GeodesicPath {
    std::vector<double> s;
    std::vector<std::vector<double>> position;
    std::vector<std::vector<double>> velocity;

    double length() const noexcept { return s.empty() ? 0.0 : s.back(); }
};

/// Fixed-step RK4 integration of the geodesic equation from (x0, v0), |v0|_g = 1.
/// Throws DomainError if the path leaves the chart's box.
GeodesicPath geodesic_integrate(const MetricSpec& metric, std::span<const double> x0, std::span<const double> v0,
                                double length, int steps);

/// Largest violation of |v|_g = 1 and of the geodesic equation (central
/// differences of the sampled velocity) over interior grid nodes.
struct GeodesicResiduals {
    double unit_speed = 0.0;
    double equation = 0.0;
};
GeodesicResiduals geodesic_residuals(const MetricSpec& metric, const GeodesicPath& path);

struct ShootingOptions {
    int steps = 64;
    int max_iterations = 40;
    double tolerance = 1e-10;
};

struct DistanceEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string note;
};

/// Upper-bound estimate of the distance between two chart points: the shorter
/// of the shooting geodesic (when it converges) and the coordinate segment.
DistanceEstimate distance_estimate(const MetricSpec& metric, std::span<const double> x, std::span<const double> y,
                                   const ShootingOptions& options = {});

}  // namespace sasakilab
