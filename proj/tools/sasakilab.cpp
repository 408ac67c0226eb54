// SPDX-License-Identifier: MIT
// sasakilab command-line front end.
#include "sasakilab/errors.hpp"
#include "sasakilab/fixtures.hpp"
#include "sasakilab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace sasakilab;

namespace {

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + out + "'");
    f << text;
}

void add_run_flags(CLI::App* cmd, RunConfig& cfg, std::string& fixture, std::string& manifold, std::string& ids,
                   std::string& out) {
    cmd->add_option("--fixture", fixture, "Shipped fixture name (see `list fixtures`)");
    cmd->add_option("--manifold", manifold, "Manifold file path");
    cmd->add_option("--samples", cfg.samples, "Number of sample points (>= 10)");
    cmd->add_option("--seed", cfg.seed, "Sampling seed");
    cmd->add_option("--tol-axiom", cfg.tol_axiom, "Axiom residual tolerance");
    cmd->add_option("--tol-identity", cfg.tol_identity, "Identity residual tolerance");
    cmd->add_option("--cluster-tol", cfg.cluster_tol, "Relative eigenvalue clustering tolerance");
    cmd->add_option("--constancy-tol", cfg.constancy_tol, "Relative stddev bound for constant scalar curvature");
    cmd->add_option("--fd-step", cfg.fd_step, "Finite-difference step of the AD-vs-FD spot check");
    cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "md"}));
    cmd->add_option("--out", out, "Write the report to this path instead of stdout");
    cmd->add_option("--identities", ids, "Comma-separated identity ids (default: all)");
}

void finish_config(RunConfig& cfg, const std::string& fixture, const std::string& manifold, const std::string& ids) {
    if (!fixture.empty()) cfg.fixture = fixture;
    if (!manifold.empty()) cfg.manifold_path = manifold;
    std::size_t start = 0;
    while (start < ids.size()) {
        std::size_t end = ids.find(',', start);
        if (end == std::string::npos) end = ids.size();
        if (end > start) cfg.identities.push_back(ids.substr(start, end - start));
        start = end + 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sasakian geometry and Sasaki-Ricci soliton verification workbench"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string list_what;
    auto* list = app.add_subcommand("list", "List fixtures or identities");
    list->add_option("what", list_what, "fixtures | identities")->required()->check(CLI::IsMember({"fixtures", "identities"}));

    RunConfig cfg;
    std::string fixture_name, manifold_path, ids, out;
    auto* verify = app.add_subcommand("verify", "Axioms, identities, spectrum and classification report");
    add_run_flags(verify, cfg, fixture_name, manifold_path, ids, out);
    auto* classify_cmd = app.add_subcommand("classify", "Spectral classification verdict");
    add_run_flags(classify_cmd, cfg, fixture_name, manifold_path, ids, out);

    std::string export_name, export_out;
    auto* exp = app.add_subcommand("export-fixture", "Print a fixture as a manifold file");
    exp->add_option("name", export_name, "Fixture name")->required();
    exp->add_option("--out", export_out, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*list) {
            if (list_what == "fixtures") {
                for (const auto& f : fixture_catalog()) std::cout << f.name << "  " << f.description << "\n";
            } else {
                for (const auto& s : identity_registry()) std::cout << s.id << " → " << s.anchor << "\n";
            }
            return 0;
        }
        if (*exp) {
            emit(render_manifold(fixture_file(export_name)), export_out);
            return 0;
        }
        finish_config(cfg, fixture_name, manifold_path, ids);
        if (*verify) {
            const RunResult r = cmd_verify(cfg);
            emit(cfg.format == "md" ? render_markdown(r.report) : render_json(r.report), out);
            return r.exit_code;
        }
        const RunResult r = cmd_classify(cfg);
        if (cfg.format == "md") {
            emit(render_markdown(r.report), out);
        } else {
            emit(render_json(r.report), out);
        }
        if (!out.empty() || cfg.format == "json") {
            const auto& c = r.report["classification"];
            std::cerr << (c.is_null() ? std::string("no verdict (Sasakian axioms fail)")
                                      : c["summary"].get<std::string>())
                      << "\n";
        }
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "sasakilab: " << e.what() << "\n";
        return 2;
    }
}
