// SPDX-License-Identifier: MIT
#include "sasakilab/spectral.hpp"

#include "sasakilab/errors.hpp"
#include "sasakilab/expr.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sasakilab {

SpectrumReport spectrum_from_frame_matrix(const Eigen::MatrixXd& ric, int n, double cluster_tol) {
    const Eigen::Index D = ric.rows();
    if (ric.cols() != D || D != 2 * n + 1) throw InputError("Ricci frame matrix must be (2n+1) x (2n+1)");
    const Eigen::MatrixXd sym = 0.5 * (ric + ric.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) throw DomainError("symmetric eigensolver failed");

    SpectrumReport r;
    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
    r.eigenvalues.assign(ev.data(), ev.data() + D);
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    r.rank_threshold = cluster_tol * scale;

    for (double v : r.eigenvalues) {
        if (!r.clusters.empty() && v - r.clusters.back().value <= r.rank_threshold) {
            auto& c = r.clusters.back();
            c.value = (c.value * c.multiplicity + v) / (c.multiplicity + 1);
            ++c.multiplicity;
        } else {
            r.clusters.push_back({v, 1});
        }
    }

    double above = std::numeric_limits<double>::infinity();
    double below = 0.0;
    for (double v : r.eigenvalues) {
        const double gap = std::abs(v - 1.0);
        if (gap > r.rank_threshold) {
            ++r.rank_ric_minus_g;
            above = std::min(above, gap);
        } else {
            below = std::max(below, gap);
        }
    }
    r.rank_gap_above = std::isfinite(above) ? above : 0.0;
    r.rank_gap_below = below;

    const double two_n = 2.0 * n;
    r.in_range_1_2n = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(), [&](double v) {
        return v >= 1.0 - r.rank_threshold && v <= two_n + r.rank_threshold;
    });

    // Projection of xi onto the whole 2n-eigenspace (degenerate on Einstein fixtures).
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < D; ++i)
        if (std::abs(ev(i) - two_n) < std::abs(ev(best) - two_n)) best = i;
    double proj = 0.0;
    for (Eigen::Index i = 0; i < D; ++i)
        if (i == best || std::abs(ev(i) - ev(best)) <= r.rank_threshold)
            proj += es.eigenvectors()(D - 1, i) * es.eigenvectors()(D - 1, i);
    r.xi_alignment = std::sqrt(proj);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(sym.topLeftCorner(D - 1, D - 1), Eigen::EigenvaluesOnly);
    r.horizontal_eigenvalues.assign(hs.eigenvalues().data(), hs.eigenvalues().data() + D - 1);
    return r;
}

SpectrumReport ricci_spectrum(const SasakianStructure& s, std::span<const double> point, double cluster_tol,
                              std::uint64_t frame_seed) {
    const int d = s.dim();
    const ContactPoint c = contact_point(s, point);
    Eigen::MatrixXd F(d, d);
    F.leftCols(d - 1) = horizontal_frame(s, point, frame_seed).vectors;
    F.col(d - 1) = c.xi;
    const TensorValue ric = ricci(s.metric, point);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> R(
        ric.data().data(), d, d);
    SpectrumReport r = spectrum_from_frame_matrix(F.transpose() * R * F, s.n, cluster_tol);
    r.point.assign(point.begin(), point.end());
    return r;
}

double quantized_value(int n, int k) { return (2.0 * n - 1.0) * k + (2.0 * n + 1.0); }

std::optional<int> quantize_scalar(double r, int n, double tol) {
    std::optional<int> found;
    for (int k = 1; k <= 2 * n + 1; ++k) {
        if (std::abs(r - quantized_value(n, k)) < tol) {
            if (found) return std::nullopt;
            found = k;
        }
    }
    return found;
}

double rigidity_certificate(double r, int n, int k) {
    if (k < 1 || k > 2 * n + 1) throw PreconditionError("rank k must lie in 1..2n+1");
    return (2.0 * n - 1.0) * (quantized_value(n, k) - r);
}

std::vector<EigenPair> eigenvalue_system_solve(double r, int n, int k1, int k2, const SeatOptions& seats) {
    if (k1 < 1 || k2 < 1) throw PreconditionError("multiplicities k1, k2 must be at least 1");
    const int m2n = seats.mult_2n.value_or(1);
    const int m1 = seats.mult_1.value_or(2 * n + 1 - k1 - k2 - m2n);
    if (m2n < 1 || m1 < 1 || k1 + k2 + m2n + m1 != 2 * n + 1)
        throw PreconditionError("eigenvalue seats k1 + k2 + m_2n + m_1 must equal 2n+1 with every seat used");
    const double dn = n;
    const double s1 = r - 2.0 * dn * m2n - m1;
    const double s2 = (2.0 * dn + 1.0) * r - 2.0 * dn * (4.0 * dn + 1.0) + 4.0 * dn * dn - 4.0 * dn * dn * m2n - m1;
    // k1 (k1 + k2) R1^2 - 2 s1 k1 R1 + (s1^2 - s2 k2) = 0.
    const double a = static_cast<double>(k1) * (k1 + k2);
    const double b = -2.0 * s1 * k1;
    const double c = s1 * s1 - s2 * k2;
    const double disc = static_cast<double>(k1) * k2 * ((k1 + k2) * s2 - s1 * s1);  // (b^2 - 4ac) / 4
    const double scale = std::max({1.0, std::abs(k1 * k2 * (k1 + k2) * s2), s1 * s1 * k1 * k2});
    std::vector<double> roots;
    if (disc < -1e-14 * scale) return {};
    if (disc <= 1e-14 * scale) {
        roots.push_back(-b / (2.0 * a));
    } else {
        // Stable pair of roots.
        const double sq = 2.0 * std::sqrt(disc);
        const double q = -0.5 * (b + std::copysign(sq, b));
        if (q != 0.0) {
            roots.push_back(q / a);
            roots.push_back(c / q);
        } else {
            roots.push_back(sq / (2.0 * a));
            roots.push_back(-sq / (2.0 * a));
        }
        std::sort(roots.begin(), roots.end());
    }
    std::vector<EigenPair> out;
    const auto in = [&](double v) { return v >= 1.0 && v <= 2.0 * dn; };
    for (double r1 : roots) {
        EigenPair p;
        p.r1 = r1;
        p.r2 = (s1 - k1 * r1) / k2;
        p.in_range = in(p.r1) && in(p.r2);
        out.push_back(p);
    }
    return out;
}

const char* verdict_kind_name(VerdictKind v) {
    switch (v) {
    case VerdictKind::SasakiEinstein: return "SasakiEinstein";
    case VerdictKind::RigidByCriterion1: return "RigidByCriterion1";
    case VerdictKind::RigidByCriterion2: return "RigidByCriterion2";
    case VerdictKind::NonexistentByTheory: return "NonexistentByTheory";
    case VerdictKind::ViolatesPositivity: return "ViolatesPositivity";
    case VerdictKind::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string Verdict::summary() const {
    std::string s = verdict_kind_name(kind);
    std::vector<std::string> parts;
    if (rank) parts.push_back("rank=" + std::to_string(*rank));
    parts.push_back("R=" + format_number(std::round(scalar_mean * 1e9) / 1e9 + 0.0));
    if (quantized_k) parts.push_back("k=" + std::to_string(*quantized_k));
    s += " (";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s + ")";
}

Verdict classify_samples(const ClassificationInput& in, const ClassifyOptions& opt) {
    if (in.scalar.empty()) throw InputError("classification needs at least one sample");
    if (in.spectra.size() != in.scalar.size()) throw InputError("one spectrum per scalar sample expected");
    const int n = in.n;
    Verdict v;
    v.radialflat_residual = in.radialflat_residual;
    const double m = static_cast<double>(in.scalar.size());
    v.scalar_mean = std::accumulate(in.scalar.begin(), in.scalar.end(), 0.0) / m;
    double var = 0.0;
    for (double r : in.scalar) var += (r - v.scalar_mean) * (r - v.scalar_mean);
    v.scalar_stddev = std::sqrt(var / m);
    v.constant_scalar = v.scalar_stddev / std::max(std::abs(v.scalar_mean), 1.0) < opt.constancy_tol;
    const double min_r = *std::min_element(in.scalar.begin(), in.scalar.end());
    if (in.radialflat_residual)
        v.evidence.push_back("rigid.radialflat residual " + format_number(*in.radialflat_residual));

    // eta-Einstein constancy of Ric_D.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : in.spectra)
        for (double e : s.horizontal_eigenvalues) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    if (std::isfinite(lo) && hi - lo < opt.constancy_tol * std::max(1.0, std::abs(hi)))
        v.evidence.push_back("eta-Einstein: Ric^T = " + format_number(std::round((lo + 2.0) * 1e9) / 1e9 + 0.0) +
                             " g^T constant over the sample");

    const auto finish = [&](VerdictKind k) {
        v.kind = k;
        return v;
    };
    const auto fallback = [&]() {
        if (min_r < 0.0) {
            v.evidence.push_back("positivity scan: min R = " + format_number(min_r));
            return finish(VerdictKind::ViolatesPositivity);
        }
        return finish(VerdictKind::Indeterminate);
    };

    if (!in.soliton_equation_holds) {
        v.evidence.push_back("soliton.n1.i fails: not a Sasaki-Ricci soliton candidate");
        return finish(VerdictKind::Indeterminate);
    }
    if (!v.constant_scalar) {
        v.evidence.push_back("scalar curvature not constant (stddev " + format_number(v.scalar_stddev) + ")");
        return fallback();
    }
    v.quantized_k = quantize_scalar(v.scalar_mean, n, opt.quantize_tol);
    if (v.quantized_k)
        v.evidence.push_back("R quantized with k=" + std::to_string(*v.quantized_k));
    else
        v.evidence.push_back("R outside the quantization set");

    if (v.quantized_k == 1) {
        v.evidence.push_back("R = 4n: would force Ric^T = 3g^T");
        return finish(VerdictKind::NonexistentByTheory);
    }

    const int rank0 = in.spectra.front().rank_ric_minus_g;
    const bool rank_constant = std::all_of(in.spectra.begin(), in.spectra.end(),
                                           [&](const SpectrumReport& s) { return s.rank_ric_minus_g == rank0; });
    if (rank_constant) {
        v.rank = rank0;
        v.evidence.push_back("rank(Ric - g) = " + std::to_string(rank0) + " at every point");
        if (rank0 >= 1) {
            v.certificate = rigidity_certificate(v.scalar_mean, n, rank0);
            v.evidence.push_back("certificate sum (R_j - 2n)^2 = " + format_number(*v.certificate));
            if (std::abs(*v.certificate) < (2.0 * n - 1.0) * opt.quantize_tol) {
                v.route = VerdictKind::RigidByCriterion2;
                return finish(VerdictKind::SasakiEinstein);
            }
        }
    } else {
        v.evidence.push_back("rank(Ric - g) varies over the sample");
    }
    const bool in_range = std::all_of(in.spectra.begin(), in.spectra.end(),
                                      [](const SpectrumReport& s) { return s.in_range_1_2n; });
    if (in_range) {
        v.evidence.push_back("all eigenvalues in [1, 2n]");
        v.route = VerdictKind::RigidByCriterion1;
        return finish(VerdictKind::SasakiEinstein);
    }
    v.evidence.push_back("eigenvalues leave [1, 2n]");
    return fallback();
}

std::vector<SpectrumReport> sample_spectra(const IdentityContext& context, double cluster_tol) {
    const int n = context.candidate().structure.n;
    const int D = 2 * n + 1;
    std::vector<SpectrumReport> out;
    for (const auto& ps : context.samples()) {
        Eigen::MatrixXd ric(D, D);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) ric(a, b) = ps.ric[static_cast<std::size_t>(a * D + b)];
        SpectrumReport s = spectrum_from_frame_matrix(ric, n, cluster_tol);
        s.point = ps.point;
        out.push_back(std::move(s));
    }
    return out;
}

Verdict classify(const IdentityContext& context, const ClassifyOptions& opt) {
    if (!context.axioms_hold())
        throw PreconditionError("Sasakian axioms fail (max residual " + format_number(context.max_axiom_residual()) +
                                ")");
    ClassificationInput in;
    in.n = context.candidate().structure.n;
    in.spectra = sample_spectra(context, opt.cluster_tol);
    for (const auto& ps : context.samples()) in.scalar.push_back(ps.scalar);
    const IdentityResidualReport n1 = run_identity("soliton.n1.i", context);
    in.soliton_equation_holds = n1.max_residual < opt.identity_tol;
    in.radialflat_residual = run_identity("rigid.radialflat", context).max_residual;
    return classify_samples(in, opt);
}

Verdict classify(const SolitonCandidate& candidate, std::span<const std::vector<double>> points,
                 const ClassifyOptions& opt) {
    IdentityOptions io;
    io.tolerance = opt.identity_tol;
    io.frame_seed = opt.frame_seed;
    const IdentityContext ctx(candidate, points, 2, io);
    return classify(ctx, opt);
}

ExtremalNote extremal_value_report(double r, int n, double tol) {
    const double dn = n;
    ExtremalNote e;
    if (std::abs(r - (4 * dn * dn + 2 * dn)) < tol) {
        e.kind = ExtremalNote::Case::EinsteinTop;
        e.note = "Sasaki-Einstein (k=2n+1 extremal); expects Ric^T = " + std::to_string(2 * n + 2) + " g^T";
    } else if (std::abs(r - (4 * dn * dn + 1)) < tol) {
        e.kind = ExtremalNote::Case::EinsteinNextToTop;
        e.note = "Sasaki-Einstein (k=2n extremal); expects sum (R_j - 2n)^2 = 0";
    } else if (std::abs(r - 4 * dn) < tol) {
        e.kind = ExtremalNote::Case::Nonexistent;
        e.note = "nonexistent; would force Ric^T=3g^T";
    } else {
        e.note = "not an extremal value";
    }
    return e;
}

}  // namespace sasakilab
