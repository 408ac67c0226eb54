// SPDX-License-Identifier: MIT
#include "sasakilab/identities.hpp"

#include "sasakilab/errors.hpp"
#include "sasakilab/expr.hpp"
#include "sasakilab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sasakilab {

const char* kind_name(IdentityKind k) {
    switch (k) {
    case IdentityKind::TensorEquality: return "tensor-equality";
    case IdentityKind::ScalarEquality: return "scalar-equality";
    case IdentityKind::Inequality: return "inequality";
    case IdentityKind::Constancy: return "constancy";
    }
    return "?";
}

const char* verdict_name(IdentityVerdict v) {
    switch (v) {
    case IdentityVerdict::Pass: return "pass";
    case IdentityVerdict::Fail: return "fail";
    case IdentityVerdict::PreconditionUnmet: return "precondition-unmet";
    }
    return "?";
}

const std::vector<IdentitySpec>& identity_registry() {
    using K = IdentityKind;
    static const std::vector<IdentitySpec> registry = {
        {"soliton.n1.i", K::TensorEquality, "Eq. (n1)(i)", "R_jk - 2n g_jk + psi_jk", 2},
        {"soliton.n1.ii", K::ScalarEquality, "Eq. (n1)(ii)", "R + Lap_B psi - (4n^2 + 2n)", 2},
        {"soliton.n1.iii", K::TensorEquality, "Eq. (n1)(iii)", "R_i - 2 R_ij psi_j + 2 psi_i", 3},
        {"soliton.n1.iv", K::Constancy, "Lemma (first integral)", "R + |grad psi|^2 - (4n-2) psi - C1", 2},
        {"soliton.n1.v", K::ScalarEquality, "Eq. (n1)(v)",
         "Lap_B R^T + 2|Ric_D|^2 - 2(2n+1)R + 4n(4n+1) - g(grad R^T, grad psi)", 4},
        {"soliton.n1.v.weighted", K::ScalarEquality, "Eq. (n1)(v) weighted",
         "Lap_{B,psi} R^T + 2|Ric^T|^2 - 2(2n+5)R^T + 24n(n+1)", 4},
        {"norm.ricD", K::ScalarEquality, "|Ric_D|^2 identity", "|Ric_D|^2 - (|Ric^T|^2 + 8n - 4R^T)", 2},
        {"soliton.s1.i", K::TensorEquality, "Eq. (s1)(i)",
         "R_ijkl,i - R_ijkl psi_i and R_ijkl,i - (R_jk,l - R_jl,k)", 3},
        {"soliton.s1.ii", K::TensorEquality, "Eq. (s1)(ii)",
         "R_ijkl psi_j psi_k + R_il/2 + psi_il - R_il,p psi_p - 2n R_il + R_ip R_pl", 4},
        {"soliton.s1.iii", K::TensorEquality, "Eq. (s1)(iii)",
         "Lap_{B,psi} R_ijkl - (4n-2)R_ijkl - 2(R_ipkq R_jplq - R_iplq R_jpkq) - R_pqij R_pqkl", 4},
        {"soliton.s1.iv", K::TensorEquality, "Eq. (s1)(iv)",
         "Lap_{B,psi} R_il - 4n(R_il - g_il) - 2 R_pq R_iplq", 4},
        {"soliton.s1.v", K::Inequality, "Eq. (s1)(v)", "min R (psi - C2) = C3 > 0", 2},
        {"rigid.a3", K::ScalarEquality, "Eq. (a3)", "Lap_{B,psi} R / 2 - tr((Ric_D - g^T)(2n g^T - Ric_D))", 4},
        {"rigid.a4", K::TensorEquality, "Eq. (a4)",
         "R(e_k,grad psi,grad psi,e_i) + R_ik/2 - (R_ij - g_ij)(2n g_jk - R_jk) - R_ik,j psi_j", 4},
        {"rigid.radialflat", K::TensorEquality, "Thm. criteria1 (ii)", "|R(., grad psi, grad psi, .)| on D", 2},
        {"rigid.a8", K::ScalarEquality, "Eq. (a8)",
         "Lap_{B,psi} R / 2 + |Ric_D - (R_D/2n) g^T|^2 - (R - 4n)(2n(2n+1) - R)/2n", 4},
        {"lemma1", K::TensorEquality, "Lemma (structure equation)",
         "Ric + (lambda+2)g - (lambda+2n+2) eta x eta + L_V g^T / 2", 2},
        {"ineq.cauchyschwarz", K::Inequality, "Cauchy-Schwarz bound", "R^2 - (2n|Ric_D|^2 + 4nR + 12n^2) <= 0", 2},
        {"ineq.positivity", K::Inequality, "Thm. nt", "R >= 0", 2},
        {"ineq.gradpsi", K::Inequality, "Lemma (gradient bound)", "|grad psi| - sqrt(4n-2) sqrt(psi + C2) <= 0", 2},
        {"ineq.basepoint", K::Inequality, "Eq. (p1)", "0 <= (4n-2) psi(y) + C1 <= 4n^2 + 2n at the minimizer y", 2},
    };
    return registry;
}

const IdentitySpec& identity_spec(std::string_view id) {
    for (const auto& spec : identity_registry())
        if (spec.id == id) return spec;
    throw InputError("unknown identity id: " + std::string(id));
}

std::optional<double> IdentityResidualReport::value(std::string_view key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    return std::nullopt;
}

int required_jet_order(std::span<const std::string> ids) {
    int order = 2;
    if (ids.empty()) {
        for (const auto& spec : identity_registry()) order = std::max(order, spec.jet_order);
    } else {
        for (const auto& id : ids) order = std::max(order, identity_spec(id).jet_order);
    }
    return order;
}

namespace {

// Frame-component accessors on flat storage; D = 2n+1.
struct Acc {
    int D;
    const PointSample& s;
    double rm(int a, int b, int c, int d) const { return s.rm[idx(a, b, c, d)]; }
    double drm(int a, int b, int c, int d, int f) const { return s.d_rm[idx(a, b, c, d) * D + f]; }
    double laprm(int a, int b, int c, int d) const { return s.lap_rm[idx(a, b, c, d)]; }
    double ric(int a, int b) const { return s.ric[idx(a, b)]; }
    double dric(int a, int b, int c) const { return s.d_ric[idx(a, b, c)]; }
    double lapric(int a, int b) const { return s.lap_ric[idx(a, b)]; }
    double dR(int a) const { return s.d_scalar[static_cast<std::size_t>(a)]; }
    double hessR(int a, int b) const { return s.hess_scalar[idx(a, b)]; }
    double dpsi(int a) const { return s.d_psi[static_cast<std::size_t>(a)]; }
    double hpsi(int a, int b) const { return s.hess_psi[idx(a, b)]; }

    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * D + b); }
    std::size_t idx(int a, int b, int c) const { return static_cast<std::size_t>((a * D + b) * D + c); }
    std::size_t idx(int a, int b, int c, int d) const {
        return static_cast<std::size_t>(((a * D + b) * D + c) * D + d);
    }
};

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

// Horizontal sums and norms.
double lap_R(const Acc& a, int H) {
    double s = 0.0;
    for (int h = 0; h < H; ++h) s += a.hessR(h, h);
    return s;
}
double grad_R_dot_psi(const Acc& a, int H) {
    double s = 0.0;
    for (int h = 0; h < H; ++h) s += a.dR(h) * a.dpsi(h);
    return s;
}
double grad_psi_sq(const Acc& a, int H) {
    double s = 0.0;
    for (int h = 0; h < H; ++h) s += a.dpsi(h) * a.dpsi(h);
    return s;
}
double ric_d_sq(const Acc& a, int H) {
    double s = 0.0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) s += a.ric(i, j) * a.ric(i, j);
    return s;
}

template <class F>
double norm2(int H, F f) {
    double s = 0.0;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) {
            const double v = f(i, j);
            s += v * v;
        }
    return std::sqrt(s);
}

double n1_iv_q(const PointSample& p) {
    const Acc a{p.horizontal() + 1, p};
    return p.scalar + grad_psi_sq(a, p.horizontal()) - (4.0 * p.n - 2.0) * p.psi;
}

struct Collected {
    std::vector<double> residual;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> notes;
    bool precondition_ok = true;
    bool force_fail = false;
};

Collected per_point(const IdentityContext& ctx, const std::function<double(const PointSample&)>& f) {
    Collected c;
    c.residual.reserve(ctx.samples().size());
    for (const auto& p : ctx.samples()) c.residual.push_back(f(p));
    return c;
}

Collected evaluate(const IdentitySpec& spec, const IdentityContext& ctx) {
    const std::string& id = spec.id;
    const auto& samples = ctx.samples();
    const int n = ctx.candidate().structure.n;
    const int H = 2 * n;
    const double dn = n;
    const auto acc = [](const PointSample& p) { return Acc{p.horizontal() + 1, p}; };

    if (id == "soliton.n1.i")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return norm2(H, [&](int j, int k) { return a.ric(j, k) - 2 * dn * delta(j, k) + a.hpsi(j, k); });
        });
    if (id == "soliton.n1.ii")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            double lap = 0.0;
            for (int h = 0; h < H; ++h) lap += a.hpsi(h, h);
            return std::abs(p.scalar + lap - (4 * dn * dn + 2 * dn));
        });
    if (id == "soliton.n1.iii")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            double s = 0.0;
            for (int i = 0; i < H; ++i) {
                double v = a.dR(i) + 2 * a.dpsi(i);
                for (int j = 0; j < H; ++j) v -= 2 * a.ric(i, j) * a.dpsi(j);
                s += v * v;
            }
            return std::sqrt(s);
        });
    if (id == "soliton.n1.iv") {
        const double c1 = ctx.c1();
        Collected c = per_point(ctx, [&](const PointSample& p) { return std::abs(n1_iv_q(p) - c1); });
        c.values = {{"C1", c1}, {"C2", ctx.c2()}};
        c.notes.push_back(ctx.c1_fitted() ? "C1 fitted as the sample mean" : "C1 supplied by the candidate");
        return c;
    }
    if (id == "soliton.n1.v")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return std::abs(lap_R(a, H) + 2 * ric_d_sq(a, H) - 2 * (2 * dn + 1) * p.scalar +
                            4 * dn * (4 * dn + 1) - grad_R_dot_psi(a, H));
        });
    if (id == "soliton.n1.v.weighted")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const double rt = p.scalar + 2 * dn;
            const double ric_t = norm2(H, [&](int i, int j) { return a.ric(i, j) + 2 * delta(i, j); });
            return std::abs(lap_R(a, H) - grad_R_dot_psi(a, H) + 2 * ric_t * ric_t -
                            2 * (2 * dn + 5) * rt + 24 * dn * (dn + 1));
        });
    if (id == "norm.ricD")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const double rt = p.scalar + 2 * dn;
            const double ric_t = norm2(H, [&](int i, int j) { return a.ric(i, j) + 2 * delta(i, j); });
            return std::abs(ric_d_sq(a, H) - (ric_t * ric_t + 8 * dn - 4 * rt));
        });
    if (id == "soliton.s1.i") {
        double max_div = 0.0;
        double max_bianchi = 0.0;
        Collected c = per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            double s1 = 0.0;
            double s2 = 0.0;
            for (int j = 0; j < H; ++j)
                for (int k = 0; k < H; ++k)
                    for (int l = 0; l < H; ++l) {
                        double div = 0.0;
                        double contr = 0.0;
                        for (int i = 0; i < H; ++i) {
                            div += a.drm(i, j, k, l, i);
                            contr += a.rm(i, j, k, l) * a.dpsi(i);
                        }
                        const double r1 = div - contr;
                        const double r2 = div - (a.dric(j, k, l) - a.dric(j, l, k));
                        s1 += r1 * r1;
                        s2 += r2 * r2;
                    }
            max_div = std::max(max_div, std::sqrt(s1));
            max_bianchi = std::max(max_bianchi, std::sqrt(s2));
            return std::max(std::sqrt(s1), std::sqrt(s2));
        });
        c.values = {{"divergence_max", max_div}, {"bianchi_max", max_bianchi}};
        return c;
    }
    if (id == "soliton.s1.ii")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return norm2(H, [&](int i, int l) {
                double v = 0.5 * a.hessR(i, l) + a.hpsi(i, l) - 2 * dn * a.ric(i, l);
                for (int j = 0; j < H; ++j)
                    for (int k = 0; k < H; ++k) v += a.rm(i, j, k, l) * a.dpsi(j) * a.dpsi(k);
                for (int q = 0; q < H; ++q) v += -a.dric(i, l, q) * a.dpsi(q) + a.ric(i, q) * a.ric(q, l);
                return v;
            });
        });
    if (id == "soliton.s1.iii")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            double s = 0.0;
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < H; ++j)
                    for (int k = 0; k < H; ++k)
                        for (int l = 0; l < H; ++l) {
                            double v = a.laprm(i, j, k, l) - (4 * dn - 2) * a.rm(i, j, k, l);
                            for (int q = 0; q < H; ++q) v -= a.drm(i, j, k, l, q) * a.dpsi(q);
                            for (int pp = 0; pp < H; ++pp)
                                for (int q = 0; q < H; ++q)
                                    v -= 2 * (a.rm(i, pp, k, q) * a.rm(j, pp, l, q) -
                                              a.rm(i, pp, l, q) * a.rm(j, pp, k, q)) +
                                         a.rm(pp, q, i, j) * a.rm(pp, q, k, l);
                            s += v * v;
                        }
            return std::sqrt(s);
        });
    if (id == "soliton.s1.iv")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return norm2(H, [&](int i, int l) {
                double v = a.lapric(i, l) - 4 * dn * (a.ric(i, l) - delta(i, l));
                for (int q = 0; q < H; ++q) v -= a.dric(i, l, q) * a.dpsi(q);
                for (int pp = 0; pp < H; ++pp)
                    for (int q = 0; q < H; ++q) v -= 2 * a.ric(pp, q) * a.rm(i, pp, l, q);
                return v;
            });
        });
    if (id == "soliton.s1.v") {
        const double c2 = ctx.c2();
        double c3 = std::numeric_limits<double>::infinity();
        Collected c = per_point(ctx, [&](const PointSample& p) {
            const double v = p.scalar * (p.psi - c2);
            c3 = std::min(c3, v);
            return std::max(0.0, -v);
        });
        c.values = {{"C3", c3}, {"C2", c2}};
        c.notes.push_back("psi shifted by -C2 so that C1 = 0");
        if (!(c3 > 0.0)) {
            c.force_fail = true;
            c.notes.push_back("min R psi is not positive");
        }
        return c;
    }
    if (id == "rigid.a3")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            double tr = 0.0;
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < H; ++j)
                    tr += (a.ric(i, j) - delta(i, j)) * (2 * dn * delta(j, i) - a.ric(j, i));
            return std::abs(0.5 * (lap_R(a, H) - grad_R_dot_psi(a, H)) - tr);
        });
    if (id == "rigid.a4")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return norm2(H, [&](int k, int i) {
                double lhs = 0.0;
                for (int x = 0; x < H; ++x)
                    for (int y = 0; y < H; ++y) lhs += a.rm(k, x, y, i) * a.dpsi(x) * a.dpsi(y);
                double rhs = -0.5 * a.hessR(i, k);
                for (int j = 0; j < H; ++j)
                    rhs += (a.ric(i, j) - delta(i, j)) * (2 * dn * delta(j, k) - a.ric(j, k)) +
                           a.dric(i, k, j) * a.dpsi(j);
                return lhs - rhs;
            });
        });
    if (id == "rigid.radialflat")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            return norm2(H, [&](int k, int i) {
                double v = 0.0;
                for (int x = 0; x < H; ++x)
                    for (int y = 0; y < H; ++y) v += a.rm(k, x, y, i) * a.dpsi(x) * a.dpsi(y);
                return v;
            });
        });
    if (id == "rigid.a8")
        return per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const double rd = p.scalar - 2 * dn;
            const double dev = norm2(H, [&](int i, int j) { return a.ric(i, j) - rd / (2 * dn) * delta(i, j); });
            return std::abs(0.5 * (lap_R(a, H) - grad_R_dot_psi(a, H)) + dev * dev -
                            (p.scalar - 4 * dn) * (2 * dn * (2 * dn + 1) - p.scalar) / (2 * dn));
        });
    if (id == "lemma1") {
        const auto& l1 = ctx.candidate().lemma1;
        if (!l1) {
            Collected c;
            c.precondition_ok = false;
            c.notes.push_back("candidate carries no lemma1 data (lambda, V)");
            return c;
        }
        const double lambda = l1->lambda;
        Collected c = per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const int D = H + 1;
            double s = 0.0;
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) {
                    const double ee = (i == H && j == H) ? 1.0 : 0.0;
                    const double v = a.ric(i, j) + (lambda + 2) * delta(i, j) - (lambda + 2 * dn + 2) * ee +
                                     0.5 * p.lie_v_gt[a.idx(i, j)];
                    s += v * v;
                }
            return std::sqrt(s);
        });
        c.values = {{"lambda", lambda}};
        return c;
    }
    if (id == "ineq.cauchyschwarz") {
        double margin = std::numeric_limits<double>::infinity();
        Collected c = per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const double lhs =
                p.scalar * p.scalar - (2 * dn * ric_d_sq(a, H) + 4 * dn * p.scalar + 12 * dn * dn);
            margin = std::min(margin, -lhs);
            return std::max(0.0, lhs);
        });
        c.values = {{"min_margin", margin}};
        return c;
    }
    if (id == "ineq.positivity") {
        double min_r = std::numeric_limits<double>::infinity();
        Collected c = per_point(ctx, [&](const PointSample& p) {
            min_r = std::min(min_r, p.scalar);
            return std::max(0.0, -p.scalar);
        });
        const double holo = holomorphicity_residual(ctx.candidate().structure, ctx.candidate().psi, ctx.points());
        c.values = {{"min_R", min_r}, {"holomorphicity_residual", holo}};
        if (min_r < 0.0) {
            c.notes.push_back(
                "negative scalar curvature conflicts with the positivity theorem for complete Sasaki-Ricci solitons "
                "(Thm. nt)");
            c.notes.push_back("Hamiltonian-holomorphic condition (pr1) checked separately: holomorphicity residual " +
                              format_number(holo));
        }
        return c;
    }
    if (id == "ineq.gradpsi") {
        const double c2 = ctx.c2();
        const double tol = ctx.options().tolerance;
        Collected c;
        for (const auto& p : samples)
            if (p.psi + c2 < -tol) {
                c.precondition_ok = false;
                c.notes.push_back("psi + C2 < 0 at a sample point");
                c.values = {{"C2", c2}};
                return c;
            }
        double margin = std::numeric_limits<double>::infinity();
        c = per_point(ctx, [&](const PointSample& p) {
            const Acc a = acc(p);
            const double lhs =
                std::sqrt(grad_psi_sq(a, H)) - std::sqrt(4 * dn - 2) * std::sqrt(std::max(0.0, p.psi + c2));
            margin = std::min(margin, -lhs);
            return std::max(0.0, lhs);
        });
        c.values = {{"C2", c2}, {"min_margin", margin}};
        return c;
    }
    if (id == "ineq.basepoint") {
        std::size_t y = 0;
        for (std::size_t i = 1; i < samples.size(); ++i)
            if (samples[i].psi < samples[y].psi) y = i;
        const double v = (4 * dn - 2) * samples[y].psi + ctx.c1();
        const double upper = 4 * dn * dn + 2 * dn;
        Collected c;
        c.residual.assign(samples.size(), 0.0);
        c.residual[y] = std::max({0.0, -v, v - upper});
        c.values = {{"psi_min", samples[y].psi},
                    {"R_predicted", v},
                    {"R_at_minimizer", samples[y].scalar},
                    {"minimizer_index", static_cast<double>(y)}};
        return c;
    }
    throw InputError("unknown identity id: " + id);
}

}  // namespace

IdentityContext::IdentityContext(const SolitonCandidate& candidate, std::span<const std::vector<double>> points,
                                 int depth, const IdentityOptions& options)
    : candidate_(&candidate), points_(points.begin(), points.end()), options_(options), depth_(depth) {
    if (points_.empty()) throw InputError("empty point set");
    const SasakianStructure& s = candidate.structure;
    for (const auto& p : points_) {
        if (static_cast<int>(p.size()) != s.dim()) throw InputError("point dimension mismatch");
        const double xi_psi = reeb_derivative(candidate.psi, s, p);
        if (xi_psi > kDefaultBasicTol)
            throw PreconditionError("potential is not basic: |xi psi| = " + format_number(xi_psi));
    }
    axiom_report_ = check_sasakian_axioms(s, points_, options_.axiom_tolerance);
    axioms_hold_ = axiom_report_.passed;
    max_axiom_residual_ = *std::max_element(axiom_report_.max_residual.begin(), axiom_report_.max_residual.end());
    if (!axioms_hold_) return;

    samples_ = evaluate_samples(candidate, points_, depth_, options_.frame_seed);
    if (candidate.c1) {
        c1_ = *candidate.c1;
    } else {
        double sum = 0.0;
        for (const auto& p : samples_) sum += n1_iv_q(p);
        c1_ = sum / static_cast<double>(samples_.size());
        c1_fitted_ = true;
    }
}

double IdentityContext::c2() const noexcept { return c1_ / (4.0 * candidate_->structure.n - 2.0); }

IdentityResidualReport run_identity(std::string_view id, const IdentityContext& context) {
    const IdentitySpec& spec = identity_spec(id);
    IdentityResidualReport r;
    r.id = spec.id;
    r.kind = spec.kind;
    r.anchor = spec.anchor;
    r.points = context.points().size();
    r.tolerance = context.options().tolerance;
    if (!context.axioms_hold()) {
        r.verdict = IdentityVerdict::PreconditionUnmet;
        r.notes.push_back("Sasakian axioms fail (max residual " + format_number(context.max_axiom_residual()) + ")");
        return r;
    }
    if (context.depth() < spec.jet_order)
        throw PreconditionError("jet order shortfall for " + spec.id + ": needs " + std::to_string(spec.jet_order) +
                                ", have " + std::to_string(context.depth()));
    Collected c = evaluate(spec, context);
    r.notes = std::move(c.notes);
    r.values = std::move(c.values);
    if (!c.precondition_ok) {
        r.verdict = IdentityVerdict::PreconditionUnmet;
        return r;
    }
    double sum = 0.0;
    for (double v : c.residual) {
        r.max_residual = std::max(r.max_residual, v);
        sum += v;
    }
    r.mean_residual = c.residual.empty() ? 0.0 : sum / static_cast<double>(c.residual.size());
    const bool finite = std::all_of(c.residual.begin(), c.residual.end(), [](double v) { return std::isfinite(v); });
    r.verdict = (finite && !c.force_fail && r.max_residual < r.tolerance) ? IdentityVerdict::Pass
                                                                           : IdentityVerdict::Fail;
    return r;
}

IdentityResidualReport run_identity(std::string_view id, const SolitonCandidate& candidate,
                                    std::span<const std::vector<double>> points, double tol) {
    IdentityOptions opt;
    opt.tolerance = tol;
    const IdentityContext ctx(candidate, points, identity_spec(id).jet_order, opt);
    return run_identity(id, ctx);
}

std::vector<IdentityResidualReport> run_all(const IdentityContext& context, std::span<const std::string> ids) {
    for (const auto& id : ids) identity_spec(id);
    std::vector<IdentityResidualReport> out;
    for (const auto& spec : identity_registry()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), spec.id) == ids.end()) continue;
        out.push_back(run_identity(spec.id, context));
    }
    return out;
}

std::vector<IdentityResidualReport> run_all(const SolitonCandidate& candidate,
                                            std::span<const std::vector<double>> points, double tol) {
    IdentityOptions opt;
    opt.tolerance = tol;
    const IdentityContext ctx(candidate, points, required_jet_order(), opt);
    return run_all(ctx);
}

double trapezoid_cutoff(double t, double s0) {
    if (t <= 0.0 || t >= s0) return 0.0;
    if (t < 1.0) return t;
    if (t > s0 - 1.0) return s0 - t;
    return 1.0;
}

SecondVariationReport second_variation_check(const SolitonCandidate& candidate, const GeodesicPath& geodesic,
                                             double minimality_bound) {
    const double s0 = geodesic.length();
    if (geodesic.s.size() < 2) throw PreconditionError("geodesic has fewer than two samples");
    if (!(s0 > 2.0)) throw PreconditionError("geodesic length must exceed 2, got " + format_number(s0));
    if (s0 > minimality_bound)
        throw PreconditionError("geodesic length " + format_number(s0) + " exceeds the minimality bound " +
                                format_number(minimality_bound));
    const MetricSpec& metric = candidate.structure.metric;
    const std::size_t m = geodesic.s.size();
    std::vector<double> ric_vv(m);
    parallel_for(m, [&](std::size_t k) {
        const TensorValue ric = ricci(metric, geodesic.position[k]);
        const auto& v = geodesic.velocity[k];
        const int d = metric.dim();
        double s = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                s += ric[static_cast<std::size_t>(i * d + j)] * v[static_cast<std::size_t>(i)] *
                     v[static_cast<std::size_t>(j)];
        ric_vv[k] = s;
    });

    // On each grid cell, split at the kinks of phi; phi^2 (quadratic) times a
    // linear Ric is cubic, so Simpson's rule is exact.
    double lhs = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double a = geodesic.s[k];
        const double b = geodesic.s[k + 1];
        std::vector<double> cuts{a};
        for (double kink : {1.0, s0 - 1.0})
            if (kink > a && kink < b) cuts.push_back(kink);
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        const auto ric_at = [&](double t) { return ric_vv[k] + (ric_vv[k + 1] - ric_vv[k]) * (t - a) / (b - a); };
        const auto f = [&](double t) {
            const double phi = trapezoid_cutoff(t, s0);
            return phi * phi * ric_at(t);
        };
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double lo = cuts[c];
            const double hi = cuts[c + 1];
            lhs += (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
        }
    }
    SecondVariationReport r;
    r.length = s0;
    r.lhs = lhs;
    r.rhs = 4.0 * candidate.structure.n;
    r.passed = lhs <= r.rhs;
    return r;
}

PotentialGrowthReport potential_growth_check(const IdentityContext& context, const ShootingOptions& shooting) {
    PotentialGrowthReport r;
    r.points = context.points().size();
    r.tolerance = context.options().tolerance;
    r.c2 = context.c2();
    if (!context.axioms_hold()) {
        r.notes.push_back("Sasakian axioms fail");
        return r;
    }
    const IdentityResidualReport pos = run_identity("ineq.positivity", context);
    if (pos.verdict != IdentityVerdict::Pass) {
        r.notes.push_back("ineq.positivity did not pass (min R = " + format_number(*pos.value("min_R")) + ")");
        return r;
    }
    const auto& samples = context.samples();
    for (const auto& p : samples)
        if (p.psi + r.c2 < -r.tolerance) {
            r.notes.push_back("psi + C2 < 0 at a sample point");
            return r;
        }
    const int n = context.candidate().structure.n;
    const MetricSpec& metric = context.candidate().structure.metric;
    const auto pts = context.points();
    std::size_t y = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].psi < samples[y].psi) y = i;
    r.minimizer = y;

    const std::size_t m = samples.size();
    std::vector<double> dist_y(m);
    std::vector<double> dist_next(m);
    parallel_for(m, [&](std::size_t i) {
        dist_y[i] = i == y ? 0.0 : distance_estimate(metric, pts[i], pts[y], shooting).value;
        const std::size_t j = (i + 1) % m;
        dist_next[i] = j == i ? 0.0 : distance_estimate(metric, pts[i], pts[j], shooting).value;
    });
    const auto f = [&](std::size_t i) { return std::sqrt(std::max(0.0, samples[i].psi + r.c2)); };
    const double lip = std::sqrt(n - 0.5);
    for (std::size_t i = 0; i < m; ++i) {
        const double shifted = samples[i].psi + r.c2;
        const double d = dist_y[i];
        r.upper_violation = std::max(r.upper_violation, shifted - n * (d + std::sqrt(3.0)) * (d + std::sqrt(3.0)));
        const double low = std::max(0.0, d - 7.0);
        r.lower_violation = std::max(r.lower_violation, n * low * low - shifted);
        const std::size_t j = (i + 1) % m;
        r.lipschitz_violation =
            std::max({r.lipschitz_violation, std::abs(f(i) - f(y)) - lip * d, std::abs(f(i) - f(j)) - lip * dist_next[i]});
    }
    r.notes.push_back("distances are upper-bound estimates; the lower growth bound is advisory");
    if (r.lower_violation > r.tolerance) r.notes.push_back("lower growth bound violated on the estimated distances");
    r.verdict = (r.upper_violation < r.tolerance && r.lipschitz_violation < r.tolerance) ? IdentityVerdict::Pass
                                                                                          : IdentityVerdict::Fail;
    return r;
}

}  // namespace sasakilab
