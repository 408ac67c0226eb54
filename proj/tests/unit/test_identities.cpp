// SPDX-License-Identifier: MIT
#include "sasakilab/errors.hpp"
#include "sasakilab/fixtures.hpp"
#include "sasakilab/identities.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

using namespace sasakilab;

namespace {

const LoadedManifold& cached(const std::string& name) {
    static std::map<std::string, LoadedManifold> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, fixture(name)).first;
    return it->second;
}

std::vector<std::vector<double>> pts(const LoadedManifold& m, std::size_t count, std::uint64_t seed = 23) {
    return sample_points(m.sample_box, count, seed);
}

/// Full-depth context, cached per (fixture, point count).
const IdentityContext& context(const std::string& name, std::size_t count = 4) {
    static std::map<std::pair<std::string, std::size_t>, std::unique_ptr<IdentityContext>> cache;
    auto& slot = cache[{name, count}];
    if (!slot) {
        const auto& m = cached(name);
        static std::map<std::pair<std::string, std::size_t>, std::vector<std::vector<double>>> points;
        auto& p = points[{name, count}];
        p = pts(m, count);
        slot = std::make_unique<IdentityContext>(*m.candidate, p, 4);
    }
    return *slot;
}

bool is_equality(IdentityKind k) { return k != IdentityKind::Inequality; }

const IdentityResidualReport& find(const std::vector<IdentityResidualReport>& reps, const std::string& id) {
    for (const auto& r : reps)
        if (r.id == id) return r;
    FAIL("missing identity " << id);
    return reps.front();
}

}  // namespace

TEST_SUITE("identities") {

TEST_CASE("registry ids are unique and anchored") {
    const auto& reg = identity_registry();
    CHECK(reg.size() == 21);
    for (std::size_t i = 0; i < reg.size(); ++i) {
        CHECK_FALSE(reg[i].anchor.empty());
        CHECK(reg[i].jet_order >= 2);
        CHECK(reg[i].jet_order <= 4);
        for (std::size_t j = i + 1; j < reg.size(); ++j) CHECK(reg[i].id != reg[j].id);
    }
    CHECK(identity_spec("soliton.n1.v").anchor == "Eq. (n1)(v)");
    CHECK_THROWS_AS(identity_spec("soliton.n9"), InputError);
}

TEST_CASE("closed-form constant of the (n1)(v) check vanishes") {
    // 2|Ric_D|^2 - 2(2n+1)R + 4n(4n+1) with |Ric_D|^2 = 8n^3, R = 4n^2 + 2n.
    for (long n = 1; n <= 50; ++n) {
        const long v = 2 * 8 * n * n * n - 2 * (2 * n + 1) * (4 * n * n + 2 * n) + 4 * n * (4 * n + 1);
        CHECK(v == 0);
    }
}

TEST_CASE("round spheres satisfy every identity") {
    for (const char* name : {"sphere3", "sphere5"}) {
        CAPTURE(name);
        const auto reps = run_all(context(name));
        CHECK(reps.size() == identity_registry().size());
        for (const auto& r : reps) {
            CAPTURE(r.id);
            if (is_equality(r.kind)) CHECK(r.max_residual < 1e-7);
            CHECK(r.verdict == IdentityVerdict::Pass);
        }
        const int n = cached(name).structure.n;
        const auto& iv = find(reps, "soliton.n1.iv");
        CHECK(std::abs(*iv.value("C1")) < 1e-9);
        const auto& pos = find(reps, "ineq.positivity");
        CHECK(*pos.value("min_R") == doctest::Approx(4.0 * n * n + 2.0 * n).epsilon(1e-9));
        const auto& s1v = find(reps, "soliton.s1.v");
        CHECK(*s1v.value("C3") > 0.0);
    }
}

TEST_CASE("sphere5 Cauchy-Schwarz margin") {
    const auto r = run_identity("ineq.cauchyschwarz", context("sphere5"));
    CHECK(r.verdict == IdentityVerdict::Pass);
    CHECK(*r.value("min_margin") == doctest::Approx(464.0 - 400.0).epsilon(1e-9));
}

TEST_CASE("Heisenberg Gaussian splits the soliton system") {
    const auto reps = run_all(context("heisenberg3"));
    CHECK(find(reps, "soliton.n1.i").max_residual < 1e-9);
    CHECK(find(reps, "soliton.n1.ii").max_residual < 1e-9);
    // R is constant while 2 R_ij psi_j - 2 psi_i = -6 psi_i does not vanish.
    CHECK(find(reps, "soliton.n1.iii").verdict == IdentityVerdict::Fail);
    CHECK(find(reps, "soliton.n1.iv").verdict == IdentityVerdict::Fail);
    const auto& pos = find(reps, "ineq.positivity");
    CHECK(pos.verdict == IdentityVerdict::Fail);
    CHECK(*pos.value("min_R") == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(*pos.value("holomorphicity_residual") < 1e-9);
    bool flagged = false;
    for (const auto& note : pos.notes) flagged |= note.find("Thm. nt") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("consistency cascade on spheres") {
    for (const char* name : {"sphere3", "sphere5"}) {
        const auto& ctx = context(name);
        const double eps = std::max(run_identity("soliton.n1.i", ctx).max_residual, 1e-7);
        CHECK(run_identity("soliton.n1.ii", ctx).max_residual < 100 * eps);
        CHECK(run_identity("soliton.n1.iii", ctx).max_residual < 100 * eps);
    }
}

TEST_CASE("weighted and unweighted (n1)(v) agree") {
    for (const char* name : {"sphere3", "sphere5", "heisenberg3", "sphere3.dhom(2)"}) {
        CAPTURE(name);
        const auto& ctx = context(name);
        const auto a = run_identity("soliton.n1.v", ctx);
        const auto b = run_identity("soliton.n1.v.weighted", ctx);
        CHECK(a.verdict == b.verdict);
        CHECK(std::abs(a.max_residual - b.max_residual) < 10 * ctx.options().tolerance);
        CHECK(run_identity("norm.ricD", ctx).max_residual < 1e-9);
    }
}

TEST_CASE("residuals do not depend on the horizontal frame") {
    const auto& m = cached("sphere3.dhom(2)");
    const auto p = pts(m, 3, 5);
    IdentityOptions o1;
    IdentityOptions o2;
    o2.frame_seed = 987654321;
    const IdentityContext c1(*m.candidate, p, 4, o1);
    const IdentityContext c2(*m.candidate, p, 4, o2);
    const auto r1 = run_all(c1);
    const auto r2 = run_all(c2);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CAPTURE(r1[i].id);
        if (r1[i].verdict == IdentityVerdict::PreconditionUnmet) continue;
        CHECK(std::abs(r1[i].max_residual - r2[i].max_residual) < 1e-9);
    }
}

TEST_CASE("trivial solitons are radially flat") {
    for (const char* name : {"sphere3", "sphere5"}) {
        const auto& ctx = context(name);
        CHECK(run_identity("rigid.radialflat", ctx).max_residual < 1e-8);
        CHECK(run_identity("rigid.a4", ctx).max_residual < 1e-8);
    }
}

TEST_CASE("global preconditions") {
    const auto& m = cached("sphere3");
    const std::vector<std::vector<double>> none;
    CHECK_THROWS_AS(IdentityContext(*m.candidate, none, 2), InputError);

    SolitonCandidate bad = *m.candidate;
    bad.psi = parse_expr("u1", m.file.coords);
    const auto p = pts(m, 2);
    CHECK_THROWS_AS(IdentityContext(bad, p, 2), PreconditionError);

    const IdentityContext shallow(*m.candidate, p, 2);
    CHECK_THROWS_AS(run_identity("soliton.s1.iii", shallow), PreconditionError);
    CHECK(run_identity("soliton.n1.i", shallow).verdict == IdentityVerdict::Pass);
    CHECK(run_identity("soliton.n1.i", *m.candidate, p, 1e-7).verdict == IdentityVerdict::Pass);
}

TEST_CASE("failed axioms make every verdict precondition-unmet") {
    const auto& m = cached("sphere3");
    SolitonCandidate c = *m.candidate;
    // Doubling the metric without rescaling eta and xi breaks eta(xi) = 1 and |xi| = 1.
    std::vector<CoordExpr> comps;
    const int d = c.structure.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            comps.push_back(parse_expr("2*(" + m.file.metric[static_cast<std::size_t>(std::min(i, j) * d +
                                                                                     std::max(i, j))] + ")",
                                       m.file.coords));
    c.structure.metric = MetricSpec(c.structure.metric.chart(), comps);
    const IdentityContext ctx(c, pts(m, 2), 2);
    CHECK_FALSE(ctx.axioms_hold());
    for (const auto& spec : identity_registry()) {
        if (spec.jet_order > 2) continue;
        CHECK(run_identity(spec.id, ctx).verdict == IdentityVerdict::PreconditionUnmet);
    }
}

TEST_CASE("lemma1 without data is precondition-unmet") {
    const auto& m = cached("heisenberg3");
    SolitonCandidate c = *m.candidate;
    c.lemma1.reset();
    const IdentityContext ctx(c, pts(m, 2), 2);
    CHECK(run_identity("lemma1", ctx).verdict == IdentityVerdict::PreconditionUnmet);
}

TEST_CASE("second variation on the round 3-sphere") {
    const auto& m = cached("sphere3");
    const double u = std::tan(0.75);
    const std::vector<double> x0{-u, 0.0, 0.0};
    const std::vector<double> v0{(1.0 + u * u) / 2.0, 0.0, 0.0};
    const GeodesicPath path = geodesic_integrate(m.structure.metric, x0, v0, 3.0, 300);
    CHECK(path.position.back()[0] == doctest::Approx(u).epsilon(1e-6));
    const SecondVariationReport r = second_variation_check(*m.candidate, path, *m.geodesic_bound);
    CHECK(r.lhs == doctest::Approx(10.0 / 3.0).epsilon(1e-6));
    CHECK(r.rhs == 4.0);
    CHECK(r.passed);

    const GeodesicPath shorter = geodesic_integrate(m.structure.metric, x0, v0, 1.5, 50);
    CHECK_THROWS_AS(second_variation_check(*m.candidate, shorter), PreconditionError);
    CHECK_THROWS_AS(second_variation_check(*m.candidate, path, 2.5), PreconditionError);
}

TEST_CASE("second variation along a Reeb orbit matches the closed form") {
    // Ric(xi, xi) = 2n, so the integral is 2n (s0 - 4/3).
    const auto& m = cached("heisenberg3");
    const std::vector<double> x0{0.3, -0.2, -3.0};
    const std::vector<double> v0{0.0, 0.0, 2.0};
    for (double s0 : {2.5, 3.0, 3.7}) {
        const GeodesicPath path = geodesic_integrate(m.structure.metric, x0, v0, s0, 97);
        const SecondVariationReport r = second_variation_check(*m.candidate, path);
        CHECK(std::abs(r.lhs - 2.0 * (s0 - 4.0 / 3.0)) < 1e-6);
    }
}

TEST_CASE("trapezoid cutoff") {
    CHECK(trapezoid_cutoff(0.5, 3.0) == 0.5);
    CHECK(trapezoid_cutoff(1.7, 3.0) == 1.0);
    CHECK(trapezoid_cutoff(2.75, 3.0) == doctest::Approx(0.25));
    CHECK(trapezoid_cutoff(-1.0, 3.0) == 0.0);
}

TEST_CASE("potential growth bounds") {
    const auto& m = cached("sphere3");
    const auto p = pts(m, 4);
    IdentityOptions o;
    o.tolerance = 1e-7;
    const IdentityContext ctx(*m.candidate, p, 2, o);
    const PotentialGrowthReport r = potential_growth_check(ctx);
    CHECK(r.verdict == IdentityVerdict::Pass);
    CHECK(r.upper_violation < 1e-9);
    CHECK(r.lipschitz_violation < 1e-9);

    const auto& h = cached("heisenberg3");
    const auto hp = pts(h, 3);
    const IdentityContext hctx(*h.candidate, hp, 2);
    CHECK(potential_growth_check(hctx).verdict == IdentityVerdict::PreconditionUnmet);
}

}  // TEST_SUITE
