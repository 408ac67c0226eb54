// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/sasaki.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasakilab {

/// Text-level contents of a manifold file. Expressions are kept verbatim so a
/// file renders back byte-for-byte.
///
/// Format: UTF-8, one `key=value` per line under `[section]` headers, `#`
/// starts a comment.
///   [manifold] name, n, coords (comma list), geodesic_bound (optional)
///   [domain]   <coord>=lo..hi for every coordinate
///   [sample]   optional sampling box, same syntax (defaults to the domain)
///   [metric]   g[i][j]=expr, 1-based, upper triangle required
///   [eta]      eta[i]=expr
///   [xi]       xi[i]=expr
///   [potential] psi=expr, c1=number (optional)
///   [flags]    phi_sign=+1|-1
///   [lemma1]   lambda=number, V[i]=expr (optional)
struct ManifoldFile {
    std::string name;
    int n = 0;
    std::vector<std::string> coords;
    std::optional<double> geodesic_bound;
    std::vector<Interval> domain;
    std::optional<std::vector<Interval>> sample;
    std::vector<std::string> metric;  // row-major d x d, lower triangle empty
    std::vector<std::string> eta;
    std::vector<std::string> xi;
    std::optional<std::string> psi;
    std::optional<double> c1;
    int phi_sign = 1;
    std::optional<double> lemma1_lambda;
    std::vector<std::string> lemma1_v;

    int dim() const noexcept { return static_cast<int>(coords.size()); }
    friend bool operator==(const ManifoldFile&, const ManifoldFile&) = default;
};

/// Parses manifold text; ParseError carries the 1-based line (and, for
/// expressions, the byte offset inside the expression).
ManifoldFile parse_manifold_text(std::string_view text);
/// Canonical rendering.
std::string render_manifold(const ManifoldFile& file);

struct LoadedManifold {
    ManifoldFile file;
    SasakianStructure structure;
    std::optional<SolitonCandidate> candidate;
    std::vector<Interval> sample_box;
    std::optional<double> geodesic_bound;
    std::vector<std::string> warnings;
};

/// Builds the structure from parsed text, checking dimensions and expressions.
/// Axiom failures become warnings (checked on a few seeded sample points).
LoadedManifold build_manifold(const ManifoldFile& file, bool check_axioms = true);
LoadedManifold load_manifold_text(std::string_view text, bool check_axioms = true);
LoadedManifold load_manifold(const std::string& path, bool check_axioms = true);

/// Uniform seeded points in a box.
std::vector<std::vector<double>> sample_points(std::span<const Interval> box, std::size_t count, std::uint64_t seed);

}  // namespace sasakilab
