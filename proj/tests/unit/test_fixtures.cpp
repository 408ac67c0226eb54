// SPDX-License-Identifier: MIT
#include "sasakilab/errors.hpp"
#include "sasakilab/fixtures.hpp"
#include "sasakilab/identities.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace sasakilab;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string shipped(const std::string& file) { return std::string(SASAKILAB_SOURCE_DIR) + "/fixtures/" + file; }

const char* kMinimal = R"([manifold]
name=toy
n=1
coords=x,y,z

[domain]
x=-1..1
y=-1..1
z=-1..1

[metric]
g[1][1]=1
g[1][2]=0
g[1][3]=0
g[2][2]=1
g[2][3]=0
g[3][3]=1

[eta]
eta[1]=0
eta[2]=0
eta[3]=1

[xi]
xi[1]=0
xi[2]=0
xi[3]=1
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("fixtures") {

TEST_CASE("shipped manifold files render byte-for-byte") {
    const std::vector<std::pair<std::string, std::string>> files{{"sphere3", "sphere3.manifold"},
                                                                 {"sphere5", "sphere5.manifold"},
                                                                 {"heisenberg3", "heisenberg3.manifold"},
                                                                 {"heisenberg5", "heisenberg5.manifold"},
                                                                 {"sphere3.dhom(2)", "sphere3.dhom-2.manifold"}};
    for (const auto& [name, file] : files) {
        CAPTURE(name);
        const std::string text = read_file(shipped(file));
        CHECK(text == render_manifold(fixture_file(name)));
        CHECK(render_manifold(parse_manifold_text(text)) == text);
        CHECK(parse_manifold_text(text) == fixture_file(name));
    }
}

TEST_CASE("loaded files evaluate like the fixtures") {
    for (const char* name : {"sphere3", "heisenberg5"}) {
        CAPTURE(name);
        const LoadedManifold a = fixture(name);
        const LoadedManifold b = load_manifold(shipped(std::string(name) + ".manifold"));
        const int d = a.structure.dim();
        for (const auto& p : sample_points(a.sample_box, 100, 99)) {
            CHECK((a.structure.metric.value(p) - b.structure.metric.value(p)).cwiseAbs().maxCoeff() < 1e-12);
            for (int i = 0; i < d; ++i) {
                const auto k = static_cast<std::size_t>(i);
                CHECK(std::abs(a.structure.eta[k].eval(p) - b.structure.eta[k].eval(p)) < 1e-12);
                CHECK(std::abs(a.structure.xi[k].eval(p) - b.structure.xi[k].eval(p)) < 1e-12);
            }
            CHECK(std::abs(a.candidate->psi.eval(p) - b.candidate->psi.eval(p)) < 1e-12);
        }
    }
}

TEST_CASE("catalog and fixture names") {
    CHECK(fixture_catalog().size() == 5);
    CHECK_THROWS_AS(fixture("sphere7"), InputError);
    CHECK_THROWS_AS(fixture("sphere3.dhom(0)"), InputError);
    CHECK_THROWS_AS(fixture("sphere3.dhom(x)"), InputError);
    CHECK(fixture("sphere3.dhom(0.5)").warnings.empty());
}

TEST_CASE("every fixture passes the axioms on 200 points") {
    for (const char* name : {"sphere3", "sphere5", "sphere3.dhom(2)", "heisenberg3", "heisenberg5"}) {
        CAPTURE(name);
        const LoadedManifold m = fixture(name);
        const AxiomReport r = check_sasakian_axioms(m.structure, sample_points(m.sample_box, 200, 2024), 1e-8);
        CHECK(r.passed);
    }
}

TEST_CASE("fixture curvature values") {
    const LoadedManifold s3 = fixture("sphere3");
    CHECK(scalar(s3.structure.metric, std::vector<double>{0.3, -0.2, 0.5}) == doctest::Approx(6.0).epsilon(1e-10));

    // The Heisenberg scalar curvature recorded in the catalog.
    for (const auto& [name, r] : std::vector<std::pair<std::string, double>>{{"heisenberg3", -2.0}, {"heisenberg5", -4.0}}) {
        CAPTURE(name);
        const LoadedManifold h = fixture(name);
        bool recorded = false;
        for (const auto& info : fixture_catalog())
            if (info.name == name) recorded = info.description.find("R = " + format_number(r)) != std::string::npos;
        CHECK(recorded);
        for (const auto& p : sample_points(h.sample_box, 5, 4)) {
            CHECK(scalar(h.structure.metric, p) == doctest::Approx(r).epsilon(1e-10));
            CHECK(transverse_ricci(h.structure, p).max_abs() < 1e-10);
        }
        const auto rep = run_identity("soliton.n1.i", *h.candidate, sample_points(h.sample_box, 6, 8), 1e-9);
        CHECK(rep.max_residual < 1e-9);
    }

    // D-homothetic deformation: eta-Einstein with a constant that differs from 2n+2.
    const LoadedManifold dh = fixture("sphere3.dhom(2)");
    for (const auto& p : sample_points(dh.sample_box, 5, 6)) {
        const Eigen::MatrixXd E = horizontal_frame(dh.structure, p, 1).vectors;
        const TensorValue rt = frame_components(transverse_ricci(dh.structure, p), E);
        CHECK(rt.at({0, 0}) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(rt.at({1, 1}) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(rt.at({0, 1})) < 1e-9);
    }
}

TEST_CASE("Heisenberg potential coefficient") {
    CHECK(fixture_file("heisenberg3").psi == "0.5*(x1^2 + y1^2)");
    const LoadedManifold h = fixture("heisenberg3");
    const CoordExpr profile = parse_expr("x1^2 + y1^2", h.file.coords);
    CHECK(solve_potential_coefficient(h.structure, profile, sample_points(h.sample_box, 8, 1)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("minimal file parses and renders") {
    const ManifoldFile f = parse_manifold_text(kMinimal);
    CHECK(f.name == "toy");
    CHECK(f.n == 1);
    CHECK(f.coords == std::vector<std::string>{"x", "y", "z"});
    CHECK_FALSE(f.psi.has_value());
    CHECK(parse_manifold_text(render_manifold(f)) == f);
    const LoadedManifold m = build_manifold(f);
    CHECK_FALSE(m.candidate.has_value());
    CHECK_FALSE(m.warnings.empty());  // flat R^3 is not Sasakian
}

TEST_CASE("comments, whitespace and symmetric completion") {
    std::string text = replace(kMinimal, "g[1][2]=0", "  g[1][2] = 0   # off-diagonal\ng[2][1]=0");
    text = "# header comment\n" + text + "\n[flags]\nphi_sign=-1\n";
    const ManifoldFile f = parse_manifold_text(text);
    CHECK(f.metric[1] == "0");
    CHECK(f.phi_sign == -1);
}

TEST_CASE("parse and dimension errors") {
    SUBCASE("2x2 metric with n=1") {
        std::string text = replace(kMinimal, "g[1][3]=0\n", "");
        text = replace(text, "g[2][3]=0\n", "");
        text = replace(text, "g[3][3]=1\n", "");
        CHECK_THROWS_WITH_AS(parse_manifold_text(text), doctest::Contains("dimension mismatch"), InputError);
    }
    SUBCASE("n does not match the coordinates") {
        CHECK_THROWS_WITH_AS(parse_manifold_text(replace(kMinimal, "n=1", "n=2")),
                             doctest::Contains("dimension mismatch"), InputError);
    }
    SUBCASE("metric expression syntax error") {
        try {
            parse_manifold_text(replace(kMinimal, "g[1][2]=0", "g[1][2]=x +* y"));
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.offset() == 3);
            CHECK(e.line() == 13);
        }
    }
    SUBCASE("undeclared coordinate") {
        CHECK_THROWS_WITH_AS(parse_manifold_text(replace(kMinimal, "eta[1]=0", "eta[1]=w")),
                             doctest::Contains("line 20"), ParseError);
    }
    SUBCASE("unknown key and section") {
        CHECK_THROWS_AS(parse_manifold_text(replace(kMinimal, "name=toy", "name=toy\ncolor=red")), ParseError);
        CHECK_THROWS_AS(parse_manifold_text(std::string(kMinimal) + "[extra]\nx=1\n"), ParseError);
    }
    SUBCASE("duplicate key") {
        CHECK_THROWS_WITH_AS(parse_manifold_text(replace(kMinimal, "xi[3]=1", "xi[3]=1\nxi[3]=2")),
                             doctest::Contains("duplicate"), ParseError);
    }
    SUBCASE("lower entry must repeat the upper entry") {
        CHECK_THROWS_AS(parse_manifold_text(replace(kMinimal, "g[1][2]=0", "g[1][2]=0\ng[2][1]=1")), ParseError);
    }
    SUBCASE("bad interval and flags") {
        CHECK_THROWS_AS(parse_manifold_text(replace(kMinimal, "x=-1..1", "x=1..-1")), ParseError);
        CHECK_THROWS_AS(parse_manifold_text(std::string(kMinimal) + "[flags]\nphi_sign=2\n"), ParseError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_manifold("/nonexistent/file.manifold"), InputError); }
}

}  // TEST_SUITE
