// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/manifold.hpp"
#include "sasakilab/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sasakilab {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::optional<std::string> fixture;
    std::optional<std::string> manifold_path;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    double tol_axiom = 1e-8;
    double tol_identity = 1e-7;
    double cluster_tol = kDefaultClusterTol;
    double constancy_tol = 1e-6;
    double fd_step = 1e-4;
    std::string format = "json";  // json | md
    std::vector<std::string> identities;  // empty: all

    /// Throws InputError on an invalid combination.
    void validate() const;
};

/// Loads the configured fixture or manifold file.
LoadedManifold load_source(const RunConfig& config);

struct RunResult {
    Json report;
    int exit_code = 0;
};

/// Axioms, AD-vs-FD spot check, identities, spectrum and classification.
/// Exit code 1 when an axiom check or any identity verdict fails.
RunResult cmd_verify(const RunConfig& config);
/// Spectrum and classification only. Exit code 1 for ViolatesPositivity.
RunResult cmd_classify(const RunConfig& config);

/// Canonical serialization: two-space indentation and a trailing newline.
std::string render_json(const Json& report);
std::string render_markdown(const Json& report);
/// Copy of a report with the "timings" member removed.
Json without_timings(const Json& report);

}  // namespace sasakilab
