// SPDX-License-Identifier: MIT
#include "sasakilab/sample.hpp"

#include "sasakilab/errors.hpp"
#include "sasakilab/parallel.hpp"

namespace sasakilab {

namespace {

/// Contracts the last two (covariant) slots of `t` with the symmetric P^{mn}.
TensorValue contract_last_two(const TensorValue& t, const Eigen::MatrixXd& P) {
    const int d = t.dim();
    std::vector<Variance> slots(t.slots().begin(), t.slots().end() - 2);
    TensorValue out(d, slots);
    const std::size_t dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    for (std::size_t o = 0; o < out.size(); ++o) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
            for (int k = 0; k < d; ++k) s += t[o * dd + static_cast<std::size_t>(m * d + k)] * P(m, k);
        out[o] = s;
    }
    return out;
}


}  // namespace

PointSample sample_point(const SolitonCandidate& candidate, std::span<const double> point, int depth,
                         std::uint64_t frame_seed) {
    if (depth < 2 || depth > 4) throw PreconditionError("sample depth must be 2, 3 or 4");
    const SasakianStructure& s = candidate.structure;
    const int d = s.dim();
    PointSample ps;
    ps.point.assign(point.begin(), point.end());
    ps.n = s.n;
    ps.depth = depth;

    const ContactPoint c = contact_point(s, point);
    const Eigen::MatrixXd E = horizontal_frame(s, point, frame_seed).vectors;
    ps.frame.resize(d, d);
    ps.frame.leftCols(d - 1) = E;
    ps.frame.col(d - 1) = c.xi;
    const Eigen::MatrixXd& F = ps.frame;
    const Eigen::MatrixXd P = E * E.transpose();

    const MetricJets mj = metric_jets(s.metric, point, depth);
    const TensorJet mixed = riemann_mixed_jet(mj);
    const TensorJet rm = lower_riemann(mixed, mj);
    const TensorJet ric = ricci_jet(mixed);
    const TensorJet sc = scalar_jet(ric, mj);
    ps.rm = frame_components(rm.value(), F);
    ps.ric = frame_components(ric.value(), F);
    ps.scalar = sc.comp(0)[0];

    if (depth >= 3) {
        const TensorJet drm = cov_deriv(rm, mj);
        const TensorJet dric = cov_deriv(ric, mj);
        const TensorJet dsc = cov_deriv(sc, mj);
        ps.d_rm = frame_components(drm.value(), F);
        ps.d_ric = frame_components(dric.value(), F);
        ps.d_scalar = frame_components(dsc.value(), F);
        if (depth == 4) {
            ps.lap_rm = frame_components(contract_last_two(cov_deriv(drm, mj).value(), P), F);
            ps.lap_ric = frame_components(contract_last_two(cov_deriv(dric, mj).value(), P), F);
            ps.hess_scalar = frame_components(cov_deriv(dsc, mj).value(), F);
        }
    }

    const TensorJet psi = TensorJet::scalar(candidate.psi.eval_jet(point, 2));
    const TensorJet dpsi = cov_deriv(psi, mj);
    ps.psi = psi.comp(0)[0];
    ps.d_psi = frame_components(dpsi.value(), F);
    ps.hess_psi = frame_components(cov_deriv(dpsi, mj).value(), F);
    ps.xi_psi = std::abs(ps.d_psi[static_cast<std::size_t>(d - 1)]);

    if (candidate.lemma1) {
        const auto& v = candidate.lemma1->v;
        ps.has_lemma1 = true;
        TensorValue lie(d, {Variance::Down, Variance::Down});
        if (!v.empty()) {
            if (static_cast<int>(v.size()) != d) throw InputError("lemma1 field dimension mismatch");
            const TensorJet vj = expr_jets(v, Variance::Up, point, 1);
            const TensorJet eta = expr_jets(s.eta, Variance::Down, point, 1);
            const auto& L = JetLayout::get(d);
            // g^T = g - eta (x) eta as order-1 jets.
            std::vector<double> gt(static_cast<std::size_t>(d * d * (d + 1)), 0.0);
            auto gtc = [&](int i, int j) { return gt.data() + static_cast<std::size_t>((i * d + j) * (d + 1)); };
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double* o = gtc(i, j);
                    for (int k = 0; k <= d; ++k) o[k] = mj.g.comp(static_cast<std::size_t>(i * d + j))[k];
                    fma_coeffs(L, 1, eta.comp(static_cast<std::size_t>(i)), eta.comp(static_cast<std::size_t>(j)), o,
                               -1.0);
                }
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < d; ++k) {
                        const double* vk = vj.comp(static_cast<std::size_t>(k));
                        acc += vk[0] * gtc(i, j)[1 + k] + gtc(k, j)[0] * vk[1 + i] + gtc(i, k)[0] * vk[1 + j];
                    }
                    lie.at({i, j}) = acc;
                }
        }
        ps.lie_v_gt = frame_components(lie, F);
    }
    return ps;
}

std::vector<PointSample> evaluate_samples(const SolitonCandidate& candidate, std::span<const std::vector<double>> points,
                                       int depth, std::uint64_t frame_seed) {
    std::vector<PointSample> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = sample_point(candidate, points[i], depth, frame_seed); });
    return out;
}

}  // namespace sasakilab
