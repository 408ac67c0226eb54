// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/sasaki.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sasakilab {

/// Curvature and potential data at one point, expressed in the orthonormal
/// frame (e_1, ..., e_2n, xi): frame index 2n is the Reeb direction.
///
/// `depth` is the metric jet order used: 2 gives curvature only, 3 adds first
/// covariant derivatives, 4 adds the horizontal Laplacians and Hess R.
struct PointSample {
    std::vector<double> point;
    int n = 0;
    int depth = 0;
    Eigen::MatrixXd frame;  // chart components, d x (2n+1)

    TensorValue rm;   // R(e_a,e_b,e_c,e_d)
    TensorValue ric;  // Ric(e_a,e_b)
    double scalar = 0.0;

    TensorValue d_scalar;  // e_a(R)                        depth >= 3
    TensorValue d_ric;     // (nabla_{e_c} Ric)(e_a,e_b)    depth >= 3
    TensorValue d_rm;      // (nabla_{e_f} Rm)(e_a..e_d)    depth >= 3
    TensorValue hess_scalar;  // Hess R(e_a,e_b)           depth 4
    TensorValue lap_ric;      // sum_h nabla^2_{e_h,e_h} Ric  depth 4
    TensorValue lap_rm;       // sum_h nabla^2_{e_h,e_h} Rm   depth 4

    double psi = 0.0;
    TensorValue d_psi;     // e_a(psi)
    TensorValue hess_psi;  // Hess psi(e_a,e_b)
    double xi_psi = 0.0;   // |xi psi|

    bool has_lemma1 = false;
    TensorValue lie_v_gt;  // (L_V g^T)(e_a,e_b)

    int horizontal() const noexcept { return 2 * n; }
};

PointSample sample_point(const SolitonCandidate& candidate, std::span<const double> point, int depth,
                         std::uint64_t frame_seed);

/// Samples every point (in parallel when allowed); output order follows input.
std::vector<PointSample> evaluate_samples(const SolitonCandidate& candidate, std::span<const std::vector<double>> points,
                                       int depth, std::uint64_t frame_seed);

}  // namespace sasakilab
