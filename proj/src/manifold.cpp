// SPDX-License-Identifier: MIT
#include "sasakilab/manifold.hpp"

#include "sasakilab/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace sasakilab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg, 0, line);
}

double parse_number(std::string_view s, std::size_t line) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        fail(line, "invalid number '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, std::size_t line) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(line, "invalid integer '" + std::string(s) + "'");
    return v;
}

Interval parse_interval(std::string_view s, std::size_t line) {
    const auto dots = s.find("..");
    if (dots == std::string_view::npos) fail(line, "interval must be written lo..hi");
    const Interval iv{parse_number(s.substr(0, dots), line), parse_number(s.substr(dots + 2), line)};
    if (!(iv.lo < iv.hi)) fail(line, "empty interval");
    return iv;
}

/// Parses "name[i]" or "name[i][j]" into 0-based indices.
std::vector<int> parse_indices(std::string_view key, std::string_view name, std::size_t line) {
    if (key.substr(0, name.size()) != name) fail(line, "unknown key '" + std::string(key) + "'");
    std::vector<int> idx;
    std::string_view rest = key.substr(name.size());
    while (!rest.empty()) {
        if (rest.front() != '[') fail(line, "unknown key '" + std::string(key) + "'");
        const auto close = rest.find(']');
        if (close == std::string_view::npos) fail(line, "missing ']' in '" + std::string(key) + "'");
        idx.push_back(parse_int(rest.substr(1, close - 1), line) - 1);
        rest.remove_prefix(close + 1);
    }
    return idx;
}

std::string fmt(double v) { return format_number(v); }

std::string interval_text(const Interval& iv) { return fmt(iv.lo) + ".." + fmt(iv.hi); }

struct PendingEntries {
    std::map<std::pair<int, int>, std::pair<std::string, std::size_t>> metric;
    std::map<int, std::pair<std::string, std::size_t>> eta, xi, v;
    std::map<std::string, std::pair<std::string, std::size_t>> domain, sample;
};

}  // namespace

ManifoldFile parse_manifold_text(std::string_view text) {
    ManifoldFile f;
    PendingEntries pending;
    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::optional<std::size_t> n_line;
    std::size_t psi_line = 0;
    bool have_n = false, have_coords = false, have_name = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::set<std::string> known{"manifold", "domain", "sample", "metric", "eta",
                                                     "xi",       "potential", "flags", "lemma1"};
            if (!known.count(section)) fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) fail(line_no, "key outside of any section");
        if (!seen.insert(section + "/" + key).second) fail(line_no, "duplicate key '" + key + "'");
        if (section == "manifold") {
            if (key == "name") {
                f.name = value;
                have_name = true;
            } else if (key == "n") {
                f.n = parse_int(value, line_no);
                have_n = true;
                n_line = line_no;
            } else if (key == "coords") {
                std::string_view rest = value;
                while (true) {
                    const auto comma = rest.find(',');
                    const std::string name(trim(rest.substr(0, comma)));
                    if (name.empty()) fail(line_no, "empty coordinate name");
                    f.coords.push_back(name);
                    if (comma == std::string_view::npos) break;
                    rest.remove_prefix(comma + 1);
                }
                have_coords = true;
            } else if (key == "geodesic_bound") {
                f.geodesic_bound = value == "inf" ? HUGE_VAL : parse_number(value, line_no);
            } else {
                fail(line_no, "unknown key '" + key + "'");
            }
        } else if (section == "domain") {
            pending.domain[key] = {value, line_no};
        } else if (section == "sample") {
            pending.sample[key] = {value, line_no};
        } else if (section == "metric") {
            const auto idx = parse_indices(key, "g", line_no);
            if (idx.size() != 2) fail(line_no, "metric keys are g[i][j]");
            pending.metric[{idx[0], idx[1]}] = {value, line_no};
        } else if (section == "eta" || section == "xi") {
            const auto idx = parse_indices(key, section, line_no);
            if (idx.size() != 1) fail(line_no, "expected " + section + "[i]");
            (section == "eta" ? pending.eta : pending.xi)[idx[0]] = {value, line_no};
        } else if (section == "potential") {
            if (key == "psi") {
                f.psi = value;
                psi_line = line_no;
            }
            else if (key == "c1")
                f.c1 = parse_number(value, line_no);
            else
                fail(line_no, "unknown key '" + key + "'");
        } else if (section == "flags") {
            if (key != "phi_sign") fail(line_no, "unknown key '" + key + "'");
            const int s = parse_int(value, line_no);
            if (s != 1 && s != -1) fail(line_no, "phi_sign must be +1 or -1");
            f.phi_sign = s;
        } else if (section == "lemma1") {
            if (key == "lambda") {
                f.lemma1_lambda = parse_number(value, line_no);
            } else {
                const auto idx = parse_indices(key, "V", line_no);
                if (idx.size() != 1) fail(line_no, "expected V[i]");
                pending.v[idx[0]] = {value, line_no};
            }
        }
    }
    if (!have_name || !have_n || !have_coords) fail(line_no, "[manifold] requires name, n and coords");
    const int d = f.dim();
    if (f.n < 1 || d != 2 * f.n + 1)
        throw InputError("dimension mismatch: n=" + std::to_string(f.n) + " requires " + std::to_string(2 * f.n + 1) +
                         " coordinates, got " + std::to_string(d) + " (line " + std::to_string(n_line.value_or(0)) +
                         ")");

    auto boxes = [&](const auto& entries, const char* what) {
        std::vector<Interval> box;
        for (const auto& [name, val] : entries)
            if (std::find(f.coords.begin(), f.coords.end(), name) == f.coords.end())
                fail(val.second, std::string("unknown coordinate '") + name + "' in [" + what + "]");
        for (const auto& c : f.coords) {
            const auto it = entries.find(c);
            if (it == entries.end()) throw InputError(std::string("[") + what + "] is missing coordinate '" + c + "'");
            box.push_back(parse_interval(it->second.first, it->second.second));
        }
        return box;
    };
    f.domain = boxes(pending.domain, "domain");
    if (!pending.sample.empty()) f.sample = boxes(pending.sample, "sample");

    auto in_range = [&](int i, std::size_t line) {
        if (i < 0 || i >= d) throw InputError("dimension mismatch: index " + std::to_string(i + 1) +
                                              " out of range 1.." + std::to_string(d) + " (line " +
                                              std::to_string(line) + ")");
    };
    f.metric.assign(static_cast<std::size_t>(d * d), "");
    for (const auto& [ij, val] : pending.metric) {
        in_range(ij.first, val.second);
        in_range(ij.second, val.second);
        if (ij.first > ij.second) {
            const auto up = pending.metric.find({ij.second, ij.first});
            if (up == pending.metric.end() || up->second.first != val.first)
                fail(val.second, "lower-triangle metric entry must repeat the upper entry verbatim");
            continue;
        }
        f.metric[static_cast<std::size_t>(ij.first * d + ij.second)] = val.first;
    }
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            if (f.metric[static_cast<std::size_t>(i * d + j)].empty())
                throw InputError("dimension mismatch: metric entry g[" + std::to_string(i + 1) + "][" +
                                 std::to_string(j + 1) + "] missing for dimension " + std::to_string(d));
    auto vec = [&](const auto& entries, const char* what, bool required) {
        std::vector<std::string> out;
        if (entries.empty() && !required) return out;
        for (const auto& [i, val] : entries) in_range(i, val.second);
        for (int i = 0; i < d; ++i) {
            const auto it = entries.find(i);
            if (it == entries.end())
                throw InputError(std::string("dimension mismatch: ") + what + "[" + std::to_string(i + 1) +
                                 "] missing for dimension " + std::to_string(d));
            out.push_back(it->second.first);
        }
        return out;
    };
    f.eta = vec(pending.eta, "eta", true);
    f.xi = vec(pending.xi, "xi", true);
    f.lemma1_v = vec(pending.v, "V", false);

    auto check_expr = [&](const std::string& text, std::size_t line) {
        try {
            parse_expr(text, f.coords);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line) + ": " + e.what(), e.offset(), line);
        }
    };
    for (const auto& [ij, val] : pending.metric) check_expr(val.first, val.second);
    for (const auto* entries : {&pending.eta, &pending.xi, &pending.v})
        for (const auto& [i, val] : *entries) check_expr(val.first, val.second);
    if (f.psi) check_expr(*f.psi, psi_line);
    return f;
}

std::string render_manifold(const ManifoldFile& f) {
    std::ostringstream out;
    const int d = f.dim();
    out << "[manifold]\nname=" << f.name << "\nn=" << f.n << "\ncoords=";
    for (int i = 0; i < d; ++i) out << (i ? "," : "") << f.coords[static_cast<std::size_t>(i)];
    out << "\n";
    if (f.geodesic_bound)
        out << "geodesic_bound=" << (std::isinf(*f.geodesic_bound) ? std::string("inf") : fmt(*f.geodesic_bound))
            << "\n";
    out << "\n[domain]\n";
    for (int i = 0; i < d; ++i)
        out << f.coords[static_cast<std::size_t>(i)] << "=" << interval_text(f.domain[static_cast<std::size_t>(i)])
            << "\n";
    if (f.sample) {
        out << "\n[sample]\n";
        for (int i = 0; i < d; ++i)
            out << f.coords[static_cast<std::size_t>(i)] << "=" << interval_text((*f.sample)[static_cast<std::size_t>(i)])
                << "\n";
    }
    out << "\n[metric]\n";
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            out << "g[" << i + 1 << "][" << j + 1 << "]=" << f.metric[static_cast<std::size_t>(i * d + j)] << "\n";
    out << "\n[eta]\n";
    for (int i = 0; i < d; ++i) out << "eta[" << i + 1 << "]=" << f.eta[static_cast<std::size_t>(i)] << "\n";
    out << "\n[xi]\n";
    for (int i = 0; i < d; ++i) out << "xi[" << i + 1 << "]=" << f.xi[static_cast<std::size_t>(i)] << "\n";
    if (f.psi || f.c1) {
        out << "\n[potential]\n";
        if (f.psi) out << "psi=" << *f.psi << "\n";
        if (f.c1) out << "c1=" << fmt(*f.c1) << "\n";
    }
    out << "\n[flags]\nphi_sign=" << (f.phi_sign > 0 ? "+1" : "-1") << "\n";
    if (f.lemma1_lambda || !f.lemma1_v.empty()) {
        out << "\n[lemma1]\n";
        if (f.lemma1_lambda) out << "lambda=" << fmt(*f.lemma1_lambda) << "\n";
        for (std::size_t i = 0; i < f.lemma1_v.size(); ++i) out << "V[" << i + 1 << "]=" << f.lemma1_v[i] << "\n";
    }
    return out.str();
}

std::vector<std::vector<double>> sample_points(std::span<const Interval> box, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(box.size()));
    for (auto& p : pts)
        for (std::size_t i = 0; i < box.size(); ++i) p[i] = box[i].lo + (box[i].hi - box[i].lo) * u(rng);
    return pts;
}

LoadedManifold build_manifold(const ManifoldFile& f, bool check_axioms) {
    LoadedManifold m;
    m.file = f;
    const int d = f.dim();
    auto expr = [&](const std::string& text, const std::string& where) {
        try {
            return parse_expr(text, f.coords);
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what(), e.offset());
        }
    };
    std::vector<CoordExpr> g;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int a = std::min(i, j), b = std::max(i, j);
            g.push_back(expr(f.metric[static_cast<std::size_t>(a * d + b)],
                             "g[" + std::to_string(a + 1) + "][" + std::to_string(b + 1) + "]"));
        }
    SasakianStructure& s = m.structure;
    s.name = f.name;
    s.n = f.n;
    s.phi_sign = f.phi_sign;
    s.metric = MetricSpec(Chart{f.coords, f.domain}, std::move(g));
    for (int i = 0; i < d; ++i) {
        s.eta.push_back(expr(f.eta[static_cast<std::size_t>(i)], "eta[" + std::to_string(i + 1) + "]"));
        s.xi.push_back(expr(f.xi[static_cast<std::size_t>(i)], "xi[" + std::to_string(i + 1) + "]"));
    }
    m.sample_box = f.sample.value_or(f.domain);
    for (std::size_t i = 0; i < m.sample_box.size(); ++i)
        if (m.sample_box[i].lo < f.domain[i].lo || m.sample_box[i].hi > f.domain[i].hi)
            throw InputError("sample box must lie inside the domain box");
    m.geodesic_bound = f.geodesic_bound;
    if (f.psi) {
        SolitonCandidate c;
        c.structure = s;
        c.psi = expr(*f.psi, "psi");
        c.c1 = f.c1;
        if (f.lemma1_lambda || !f.lemma1_v.empty()) {
            Lemma1Data l;
            l.lambda = f.lemma1_lambda.value_or(-(2.0 * f.n + 2.0));
            for (std::size_t i = 0; i < f.lemma1_v.size(); ++i)
                l.v.push_back(expr(f.lemma1_v[i], "V[" + std::to_string(i + 1) + "]"));
            c.lemma1 = std::move(l);
        }
        m.candidate = std::move(c);
    }
    if (check_axioms) {
        const auto pts = sample_points(m.sample_box, 8, 0x5a5a);
        const AxiomReport rep = check_sasakian_axioms(s, pts, 1e-8);
        for (std::size_t a = 0; a < kAxiomCount; ++a)
            if (!(rep.max_residual[a] < rep.tolerance))
                m.warnings.push_back(std::string("axiom ") + axiom_name(static_cast<Axiom>(a)) +
                                     " fails: max residual " + fmt(rep.max_residual[a]));
        for (const auto& e : rep.errors) m.warnings.push_back(e);
    }
    return m;
}

LoadedManifold load_manifold_text(std::string_view text, bool check_axioms) {
    return build_manifold(parse_manifold_text(text), check_axioms);
}

LoadedManifold load_manifold(const std::string& path, bool check_axioms) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open manifold file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_manifold_text(buf.str(), check_axioms);
}

}  // namespace sasakilab
