// SPDX-License-Identifier: MIT
#include "sasakilab/fixtures.hpp"

#include "sasakilab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace sasakilab {

namespace {

std::string fmt(double v) { return format_number(v); }

std::vector<std::string> names(const char* stem, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

std::vector<Interval> box(int d, double r) { return std::vector<Interval>(static_cast<std::size_t>(d), {-r, r}); }

std::string round_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return fmt(std::strtod(buf, nullptr));
}

ManifoldFile sphere(int n) {
    const int d = 2 * n + 1;
    ManifoldFile f;
    f.name = "sphere" + std::to_string(d);
    f.n = n;
    f.coords = names("u", d);
    f.geodesic_bound = std::numbers::pi;
    f.domain = box(d, 10.0);
    f.sample = box(d, 1.0);
    std::string rho = "1";
    for (const auto& c : f.coords) rho += " + " + c + "^2";
    const std::string conf = "(" + rho + ")^2";
    f.metric.assign(static_cast<std::size_t>(d * d), "");
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) f.metric[static_cast<std::size_t>(i * d + j)] = i == j ? "4/" + conf : "0";
    // Hopf field sum(x_i d/dy_i - y_i d/dx_i) pushed to the stereographic chart.
    const std::string t = f.coords.back();
    std::string last = "(1";
    for (int i = 0; i < 2 * n; ++i) last += " - " + f.coords[static_cast<std::size_t>(i)] + "^2";
    last += " + " + t + "^2)/2";
    for (int k = 0; k < n; ++k) {
        const std::string& x = f.coords[static_cast<std::size_t>(2 * k)];
        const std::string& y = f.coords[static_cast<std::size_t>(2 * k + 1)];
        f.xi.push_back("-" + y + " + " + x + "*" + t);
        f.xi.push_back(x + " + " + y + "*" + t);
    }
    f.xi.push_back(last);
    for (const auto& x : f.xi) f.eta.push_back("4*(" + x + ")/" + conf);
    f.psi = n == 1 ? "3" : "10/3";
    f.lemma1_lambda = -(2.0 * n + 2.0);
    f.lemma1_v.assign(static_cast<std::size_t>(d), "0");
    return f;
}

ManifoldFile sphere3_dhom(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InputError("D-homothetic parameter must be positive");
    const ManifoldFile base = sphere(1);
    ManifoldFile f = base;
    f.name = "sphere3.dhom(" + fmt(a) + ")";
    f.geodesic_bound.reset();
    const int d = 3;
    const double b = a * a - a;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const std::string ei = "(" + base.eta[static_cast<std::size_t>(i)] + ")";
            const std::string ej = "(" + base.eta[static_cast<std::size_t>(j)] + ")";
            std::string e;
            if (i == j) e = fmt(a) + "*" + base.metric[static_cast<std::size_t>(i * d + j)];
            if (b != 0.0) e += (e.empty() ? "" : " + ") + fmt(b) + "*" + ei + "*" + ej;
            f.metric[static_cast<std::size_t>(i * d + j)] = e.empty() ? "0" : e;
        }
    for (int i = 0; i < d; ++i) {
        f.eta[static_cast<std::size_t>(i)] = fmt(a) + "*" + base.eta[static_cast<std::size_t>(i)];
        f.xi[static_cast<std::size_t>(i)] = "(" + base.xi[static_cast<std::size_t>(i)] + ")/" + fmt(a);
    }
    // Constant candidate in the C1 = 0 gauge: R = 8/a - 2 for n = 1.
    f.psi = fmt((8.0 / a - 2.0) / 2.0);
    return f;
}

ManifoldFile heisenberg(int n) {
    const int d = 2 * n + 1;
    ManifoldFile f;
    f.name = "heisenberg" + std::to_string(d);
    f.n = n;
    for (int k = 1; k <= n; ++k) {
        f.coords.push_back("x" + std::to_string(k));
        f.coords.push_back("y" + std::to_string(k));
    }
    f.coords.push_back("z");
    f.geodesic_bound = HUGE_VAL;
    f.domain = box(d, 10.0);
    f.sample = box(d, 2.0);
    f.metric.assign(static_cast<std::size_t>(d * d), "");
    auto set = [&](int i, int j, std::string e) { f.metric[static_cast<std::size_t>(i * d + j)] = std::move(e); };
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) set(i, j, "0");
    // g = 1/4 sum(dx^2 + dy^2) + eta (x) eta with eta = (dz - sum y dx)/2.
    for (int a = 0; a < n; ++a) {
        const std::string ya = f.coords[static_cast<std::size_t>(2 * a + 1)];
        for (int b = a; b < n; ++b) {
            const std::string yb = f.coords[static_cast<std::size_t>(2 * b + 1)];
            set(2 * a, 2 * b, a == b ? "1/4 + " + ya + "^2/4" : ya + "*" + yb + "/4");
        }
        set(2 * a + 1, 2 * a + 1, "1/4");
        set(2 * a, d - 1, "-" + ya + "/4");
    }
    set(d - 1, d - 1, "1/4");
    for (int a = 0; a < n; ++a) {
        f.eta.push_back("-" + f.coords[static_cast<std::size_t>(2 * a + 1)] + "/2");
        f.eta.push_back("0");
    }
    f.eta.push_back("1/2");
    f.xi.assign(static_cast<std::size_t>(d - 1), "0");
    f.xi.push_back("2");
    return f;
}

std::string gaussian_profile(const ManifoldFile& f) {
    std::string s;
    for (int i = 0; i < 2 * f.n; ++i) s += (i ? " + " : "") + f.coords[static_cast<std::size_t>(i)] + "^2";
    return s;
}

}  // namespace

const std::vector<FixtureInfo>& fixture_catalog() {
    static const std::vector<FixtureInfo> catalog{
        {"sphere3", "round S^3, stereographic chart, Hopf Reeb field, trivial soliton psi = 3"},
        {"sphere5", "round S^5, stereographic chart, Hopf Reeb field, trivial soliton psi = 10/3"},
        {"sphere3.dhom(a)", "D-homothetic deformation of sphere3 with parameter a > 0 (eta-Einstein)"},
        {"heisenberg3", "Heisenberg group, transversely flat, Gaussian potential (diagnostic, R = -2 fails positivity)"},
        {"heisenberg5", "5-dimensional Heisenberg group with Gaussian potential (diagnostic, R = -4 fails positivity)"},
    };
    return catalog;
}

double solve_potential_coefficient(const SasakianStructure& s, const CoordExpr& profile,
                                   std::span<const std::vector<double>> points) {
    double num = 0.0, den = 0.0;
    for (const auto& p : points) {
        const Eigen::MatrixXd E = horizontal_frame(s, p, 0).vectors;
        const Eigen::MatrixXd g = s.metric.value(p);
        const TensorValue ric = ricci(s.metric, p), hess = hessian(profile, s.metric, p);
        const int d = s.dim();
        Eigen::MatrixXd A(d, d), B(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                A(i, j) = ric.at({i, j}) - 2.0 * s.n * g(i, j);
                B(i, j) = hess.at({i, j});
            }
        const Eigen::MatrixXd Af = E.transpose() * A * E, Bf = E.transpose() * B * E;
        num += (Af.array() * Bf.array()).sum();
        den += Bf.squaredNorm();
    }
    if (!(den > 0.0)) throw DomainError("potential profile has vanishing transverse Hessian");
    return -num / den;
}

ManifoldFile fixture_file(const std::string& name) {
    if (name == "sphere3") return sphere(1);
    if (name == "sphere5") return sphere(2);
    const std::string dhom = "sphere3.dhom(";
    if (name.rfind(dhom, 0) == 0 && name.back() == ')') {
        const std::string arg = name.substr(dhom.size(), name.size() - dhom.size() - 1);
        char* end = nullptr;
        const double a = std::strtod(arg.c_str(), &end);
        if (arg.empty() || end != arg.c_str() + arg.size()) throw InputError("bad D-homothetic parameter '" + arg + "'");
        return sphere3_dhom(a);
    }
    if (name == "heisenberg3" || name == "heisenberg5") {
        ManifoldFile f = heisenberg(name == "heisenberg3" ? 1 : 2);
        const std::string profile = gaussian_profile(f);
        const LoadedManifold bare = build_manifold(f, false);
        const auto pts = sample_points(bare.sample_box, 16, 0x6a55);
        const double c = solve_potential_coefficient(bare.structure, parse_expr(profile, f.coords), pts);
        f.psi = round_sig(c, 12) + "*(" + profile + ")";
        return f;
    }
    throw InputError("unknown fixture '" + name + "'");
}

LoadedManifold fixture(const std::string& name) { return load_manifold_text(render_manifold(fixture_file(name))); }

}  // namespace sasakilab
