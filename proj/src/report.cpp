// SPDX-License-Identifier: MIT
#include "sasakilab/report.hpp"

#include "sasakilab/errors.hpp"
#include "sasakilab/fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace sasakilab {

void RunConfig::validate() const {
    if (fixture.has_value() == manifold_path.has_value())
        throw InputError("exactly one of --fixture and --manifold is required");
    if (samples < 10) throw InputError("sample count must be at least 10");
    for (double t : {tol_axiom, tol_identity, cluster_tol, constancy_tol, fd_step})
        if (!(t > 0.0) || !std::isfinite(t)) throw InputError("tolerances and the finite-difference step must be positive");
    if (format != "json" && format != "md") throw InputError("format must be json or md");
    for (const auto& id : identities) identity_spec(id);
}

LoadedManifold load_source(const RunConfig& config) {
    return config.fixture ? fixture(*config.fixture) : load_manifold(*config.manifold_path);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

/// Non-finite doubles become strings so the report stays valid JSON.
Json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::uint64_t frame_seed(std::uint64_t seed) { return seed * 0x9e3779b97f4a7c15ULL + 0x5eed; }

Json config_json(const RunConfig& c) {
    Json j;
    j["source"] = c.fixture ? Json{{"fixture", *c.fixture}} : Json{{"manifold", *c.manifold_path}};
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["tol_axiom"] = c.tol_axiom;
    j["tol_identity"] = c.tol_identity;
    j["cluster_tol"] = c.cluster_tol;
    j["constancy_tol"] = c.constancy_tol;
    j["fd_step"] = c.fd_step;
    j["format"] = c.format;
    j["identities"] = c.identities;
    return j;
}

Json manifold_json(const LoadedManifold& m, bool potential_given) {
    Json j;
    j["name"] = m.file.name;
    j["n"] = m.file.n;
    j["dim"] = m.file.dim();
    j["coords"] = m.file.coords;
    j["psi"] = potential_given ? Json(*m.file.psi) : Json(nullptr);
    j["warnings"] = m.warnings;
    return j;
}

Json axioms_json(const IdentityContext& ctx) {
    const AxiomReport& a = ctx.axiom_report();
    Json j;
    j["tolerance"] = a.tolerance;
    j["points"] = a.points;
    j["passed"] = a.passed;
    Json res = Json::object();
    for (std::size_t i = 0; i < kAxiomCount; ++i) res[axiom_name(static_cast<Axiom>(i))] = num(a.max_residual[i]);
    j["max_residual"] = std::move(res);
    j["errors"] = a.errors;
    return j;
}

Json fd_json(const SasakianStructure& s, std::span<const std::vector<double>> points, double h) {
    const std::size_t m = std::min<std::size_t>(points.size(), 5);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const TensorValue ad = riemann(s.metric, points[i]);
        const TensorValue fd = fd_oracle_riemann(s.metric, points[i], h);
        double diff = 0.0;
        for (std::size_t k = 0; k < ad.size(); ++k) diff = std::max(diff, std::abs(ad[k] - fd[k]));
        worst = std::max(worst, diff / std::max(1.0, ad.max_abs()));
    }
    return Json{{"step", h}, {"points", m}, {"max_relative_difference", num(worst)}};
}

Json identity_json(const IdentityResidualReport& r) {
    Json j;
    j["id"] = r.id;
    j["kind"] = kind_name(r.kind);
    j["anchor"] = r.anchor;
    j["points"] = r.points;
    j["max_residual"] = num(r.max_residual);
    j["mean_residual"] = num(r.mean_residual);
    j["tolerance"] = r.tolerance;
    j["verdict"] = verdict_name(r.verdict);
    j["notes"] = r.notes;
    Json vals = Json::object();
    for (const auto& [k, v] : r.values) vals[k] = num(v);
    j["values"] = std::move(vals);
    return j;
}

Json spectrum_json(const std::vector<SpectrumReport>& spectra, const std::vector<PointSample>& samples,
                   double cluster_tol) {
    Json j;
    j["cluster_tol"] = cluster_tol;
    j["points"] = spectra.size();
    if (spectra.empty()) return j;
    const std::size_t D = spectra.front().eigenvalues.size();
    std::vector<double> lo(D, std::numeric_limits<double>::infinity());
    std::vector<double> hi(D, -std::numeric_limits<double>::infinity());
    std::set<int> ranks;
    double align = 1.0;
    bool in_range = true;
    for (const auto& s : spectra) {
        for (std::size_t i = 0; i < D; ++i) {
            lo[i] = std::min(lo[i], s.eigenvalues[i]);
            hi[i] = std::max(hi[i], s.eigenvalues[i]);
        }
        ranks.insert(s.rank_ric_minus_g);
        align = std::min(align, s.xi_alignment);
        in_range = in_range && s.in_range_1_2n;
    }
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (const auto& p : samples) {
        rmin = std::min(rmin, p.scalar);
        rmax = std::max(rmax, p.scalar);
    }
    Json lo_j = Json::array();
    Json hi_j = Json::array();
    for (std::size_t i = 0; i < D; ++i) {
        lo_j.push_back(num(lo[i]));
        hi_j.push_back(num(hi[i]));
    }
    j["eigenvalues_min"] = std::move(lo_j);
    j["eigenvalues_max"] = std::move(hi_j);
    j["first_point_clusters"] = Json::array();
    for (const auto& c : spectra.front().clusters)
        j["first_point_clusters"].push_back(Json{{"value", num(c.value)}, {"multiplicity", c.multiplicity}});
    j["ranks"] = std::vector<int>(ranks.begin(), ranks.end());
    j["in_range_1_2n"] = in_range;
    j["min_xi_alignment"] = num(align);
    j["scalar_min"] = num(rmin);
    j["scalar_max"] = num(rmax);
    return j;
}

Json verdict_json(const Verdict& v, int n) {
    Json j;
    j["verdict"] = verdict_kind_name(v.kind);
    j["route"] = v.route ? Json(verdict_kind_name(*v.route)) : Json(nullptr);
    j["summary"] = v.summary();
    j["scalar_mean"] = num(v.scalar_mean);
    j["scalar_stddev"] = num(v.scalar_stddev);
    j["constant_scalar"] = v.constant_scalar;
    j["quantized_k"] = v.quantized_k ? Json(*v.quantized_k) : Json(nullptr);
    j["rank"] = v.rank ? Json(*v.rank) : Json(nullptr);
    j["certificate"] = v.certificate ? num(*v.certificate) : Json(nullptr);
    j["radialflat_residual"] = v.radialflat_residual ? num(*v.radialflat_residual) : Json(nullptr);
    j["extremal"] = v.constant_scalar ? Json(extremal_value_report(v.scalar_mean, n).note) : Json(nullptr);
    j["evidence"] = v.evidence;
    return j;
}

struct Prepared {
    LoadedManifold manifold;
    SolitonCandidate candidate;
    bool potential_given = false;
    std::vector<std::vector<double>> points;
};

Prepared prepare(const RunConfig& config) {
    Prepared p;
    p.manifold = load_source(config);
    if (p.manifold.candidate) {
        p.candidate = *p.manifold.candidate;
        p.potential_given = true;
    } else {
        p.candidate.structure = p.manifold.structure;
        p.candidate.psi = CoordExpr::number(0.0, p.manifold.structure.dim());
    }
    p.points = sample_points(p.manifold.sample_box, config.samples, config.seed);
    return p;
}

Json header(const RunConfig& config, const std::string& command) {
    Json r;
    r["tool"] = Json{{"name", "sasakilab"}, {"version", kToolVersion}};
    r["command"] = command;
    r["config"] = config_json(config);
    return r;
}

}  // namespace

RunResult cmd_verify(const RunConfig& config) {
    config.validate();
    const auto t_total = Clock::now();
    Json timings;
    auto t = Clock::now();
    Prepared p = prepare(config);
    timings["load_ms"] = ms_since(t);

    Json r = header(config, "verify");
    r["manifold"] = manifold_json(p.manifold, p.potential_given);

    t = Clock::now();
    IdentityOptions io;
    io.tolerance = config.tol_identity;
    io.axiom_tolerance = config.tol_axiom;
    io.frame_seed = frame_seed(config.seed);
    const IdentityContext ctx(p.candidate, p.points, required_jet_order(config.identities), io);
    timings["sampling_ms"] = ms_since(t);
    r["axioms"] = axioms_json(ctx);

    t = Clock::now();
    r["fd_oracle"] = fd_json(p.candidate.structure, p.points, config.fd_step);
    timings["fd_oracle_ms"] = ms_since(t);

    std::vector<std::string> notes;
    if (!p.potential_given) notes.push_back("no potential given; psi = 0 assumed");

    t = Clock::now();
    const auto reps = run_all(ctx, config.identities);
    Json ids = Json::array();
    std::size_t pass = 0, fail = 0, unmet = 0;
    for (const auto& rep : reps) {
        ids.push_back(identity_json(rep));
        switch (rep.verdict) {
        case IdentityVerdict::Pass: ++pass; break;
        case IdentityVerdict::Fail: ++fail; break;
        case IdentityVerdict::PreconditionUnmet: ++unmet; break;
        }
        if (rep.id == "ineq.positivity" && rep.verdict == IdentityVerdict::Fail)
            notes.push_back("positivity fails although the soliton identities are evaluated separately; "
                            "see ineq.positivity notes (Thm. nt conflict)");
    }
    r["identities"] = std::move(ids);
    timings["identities_ms"] = ms_since(t);

    t = Clock::now();
    if (ctx.axioms_hold()) {
        ClassifyOptions co;
        co.cluster_tol = config.cluster_tol;
        co.constancy_tol = config.constancy_tol;
        co.identity_tol = config.tol_identity;
        co.frame_seed = io.frame_seed;
        r["spectrum"] = spectrum_json(sample_spectra(ctx, config.cluster_tol), ctx.samples(), config.cluster_tol);
        r["classification"] = verdict_json(classify(ctx, co), p.candidate.structure.n);
    } else {
        r["spectrum"] = nullptr;
        r["classification"] = nullptr;
        notes.push_back("Sasakian axioms fail; spectrum and classification skipped");
    }
    timings["spectral_ms"] = ms_since(t);

    const bool axioms_ok = ctx.axioms_hold();
    RunResult out;
    out.exit_code = (!axioms_ok || fail > 0) ? 1 : 0;
    r["summary"] = Json{{"axioms_passed", axioms_ok},
                        {"pass", pass},
                        {"fail", fail},
                        {"precondition_unmet", unmet},
                        {"exit_code", out.exit_code}};
    r["notes"] = notes;
    timings["total_ms"] = ms_since(t_total);
    r["timings"] = std::move(timings);
    out.report = std::move(r);
    return out;
}

RunResult cmd_classify(const RunConfig& config) {
    config.validate();
    const auto t_total = Clock::now();
    Json timings;
    auto t = Clock::now();
    Prepared p = prepare(config);
    timings["load_ms"] = ms_since(t);

    Json r = header(config, "classify");
    r["manifold"] = manifold_json(p.manifold, p.potential_given);
    t = Clock::now();
    IdentityOptions io;
    io.tolerance = config.tol_identity;
    io.axiom_tolerance = config.tol_axiom;
    io.frame_seed = frame_seed(config.seed);
    const IdentityContext ctx(p.candidate, p.points, 2, io);
    r["axioms"] = axioms_json(ctx);
    RunResult out;
    std::vector<std::string> notes;
    if (ctx.axioms_hold()) {
        ClassifyOptions co;
        co.cluster_tol = config.cluster_tol;
        co.constancy_tol = config.constancy_tol;
        co.identity_tol = config.tol_identity;
        co.frame_seed = io.frame_seed;
        const Verdict v = classify(ctx, co);
        r["spectrum"] = spectrum_json(sample_spectra(ctx, config.cluster_tol), ctx.samples(), config.cluster_tol);
        r["classification"] = verdict_json(v, p.candidate.structure.n);
        out.exit_code = v.kind == VerdictKind::ViolatesPositivity ? 1 : 0;
    } else {
        r["spectrum"] = nullptr;
        r["classification"] = nullptr;
        notes.push_back("Sasakian axioms fail; classification skipped");
        out.exit_code = 1;
    }
    timings["spectral_ms"] = ms_since(t);
    r["summary"] = Json{{"axioms_passed", ctx.axioms_hold()}, {"exit_code", out.exit_code}};
    r["notes"] = notes;
    timings["total_ms"] = ms_since(t_total);
    r["timings"] = std::move(timings);
    out.report = std::move(r);
    return out;
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

Json without_timings(const Json& report) {
    Json copy = report;
    copy.erase("timings");
    return copy;
}

namespace {

std::string cell(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
}

}  // namespace

std::string render_markdown(const Json& r) {
    std::ostringstream md;
    const Json& m = r["manifold"];
    md << "# sasakilab " << cell(r["command"]) << ": " << cell(m["name"]) << "\n\n";
    md << "- tool version: " << cell(r["tool"]["version"]) << "\n";
    md << "- n = " << cell(m["n"]) << ", coordinates: ";
    for (std::size_t i = 0; i < m["coords"].size(); ++i) md << (i ? ", " : "") << cell(m["coords"][i]);
    md << "\n- samples: " << cell(r["config"]["samples"]) << ", seed: " << cell(r["config"]["seed"]) << "\n";
    md << "- psi: " << cell(m["psi"]) << "\n\n";

    if (r.contains("classification") && !r["classification"].is_null()) {
        const Json& c = r["classification"];
        md << "## Classification\n\n**" << cell(c["summary"]) << "**\n\n| evidence |\n|---|\n";
        for (const auto& e : c["evidence"]) md << "| " << cell(e) << " |\n";
        if (!c["extremal"].is_null()) md << "| extremal value: " << cell(c["extremal"]) << " |\n";
        md << "\n";
    }

    const Json& a = r["axioms"];
    md << "## Sasakian axioms (" << (a["passed"].get<bool>() ? "pass" : "fail") << ", tol " << cell(a["tolerance"])
       << ")\n\n| axiom | max residual |\n|---|---|\n";
    for (const auto& [k, v] : a["max_residual"].items()) md << "| " << k << " | " << cell(v) << " |\n";
    md << "\n";

    if (r.contains("fd_oracle")) {
        const Json& f = r["fd_oracle"];
        md << "## AD vs finite differences\n\nstep " << cell(f["step"]) << ", " << cell(f["points"])
           << " points, max relative difference " << cell(f["max_relative_difference"]) << "\n\n";
    }

    if (r.contains("identities")) {
        md << "## Identities\n\n| id | anchor | verdict | max residual | mean residual | tol | values |\n"
              "|---|---|---|---|---|---|---|\n";
        for (const auto& i : r["identities"]) {
            std::string vals;
            for (const auto& [k, v] : i["values"].items()) vals += (vals.empty() ? "" : ", ") + k + "=" + cell(v);
            md << "| " << cell(i["id"]) << " | " << cell(i["anchor"]) << " | " << cell(i["verdict"]) << " | "
               << cell(i["max_residual"]) << " | " << cell(i["mean_residual"]) << " | " << cell(i["tolerance"])
               << " | " << vals << " |\n";
        }
        md << "\n";
        for (const auto& i : r["identities"])
            for (const auto& note : i["notes"]) md << "- " << cell(i["id"]) << ": " << cell(note) << "\n";
        md << "\n";
    }

    if (r.contains("spectrum") && !r["spectrum"].is_null()) {
        const Json& s = r["spectrum"];
        md << "## Ricci spectrum\n\n- eigenvalue ranges:";
        for (std::size_t i = 0; i < s["eigenvalues_min"].size(); ++i)
            md << " [" << cell(s["eigenvalues_min"][i]) << ", " << cell(s["eigenvalues_max"][i]) << "]";
        md << "\n- rank(Ric - g): " << cell(s["ranks"]) << "\n- min xi alignment: " << cell(s["min_xi_alignment"])
           << "\n- R range: [" << cell(s["scalar_min"]) << ", " << cell(s["scalar_max"]) << "]\n\n";
    }

    if (!r["notes"].empty()) {
        md << "## Notes\n\n";
        for (const auto& n : r["notes"]) md << "- " << cell(n) << "\n";
        md << "\n";
    }
    md << "## Summary\n\n";
    for (const auto& [k, v] : r["summary"].items()) md << "- " << k << ": " << cell(v) << "\n";
    md << "\n## Timings (ms)\n\n";
    for (const auto& [k, v] : r["timings"].items()) md << "- " << k << ": " << cell(v) << "\n";
    return md.str();
}

}  // namespace sasakilab
