// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/geodesic.hpp"
#include "sasakilab/sample.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sasakilab {

enum class IdentityKind : std::uint8_t { TensorEquality, ScalarEquality, Inequality, Constancy };
const char* kind_name(IdentityKind k);

enum class IdentityVerdict : std::uint8_t { Pass, Fail, PreconditionUnmet };
const char* verdict_name(IdentityVerdict v);

struct IdentitySpec {
    std::string id;
    IdentityKind kind;
    std::string anchor;       // equation label, e.g. "Eq. (n1)(v)"
    std::string description;  // the residual being measured
    int jet_order;            // metric jet order needed (2, 3 or 4)
};

/// All identities, in evaluation order.
const std::vector<IdentitySpec>& identity_registry();
/// Throws InputError for an unknown id.
const IdentitySpec& identity_spec(std::string_view id);

struct IdentityResidualReport {
    std::string id;
    IdentityKind kind = IdentityKind::ScalarEquality;
    std::string anchor;
    std::size_t points = 0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    IdentityVerdict verdict = IdentityVerdict::PreconditionUnmet;
    std::vector<std::string> notes;
    /// Named scalar outputs (fitted constants, margins, extrema) in insertion order.
    std::vector<std::pair<std::string, double>> values;

    std::optional<double> value(std::string_view key) const;
};

struct IdentityOptions {
    double tolerance = 1e-7;
    double axiom_tolerance = 1e-8;
    std::uint64_t frame_seed = 0x5eed;
};

/// Samples plus the derived constants shared by every identity of one run.
/// Construction checks the preconditions common to all identities:
/// a non-empty point set (InputError), a basic potential (PreconditionError)
/// and the Sasakian axioms (recorded, turning every verdict into
/// precondition-unmet).
class IdentityContext {
public:
    IdentityContext(const SolitonCandidate& candidate, std::span<const std::vector<double>> points, int depth,
                    const IdentityOptions& options = {});

    const SolitonCandidate& candidate() const noexcept { return *candidate_; }
    std::span<const std::vector<double>> points() const noexcept { return points_; }
    const std::vector<PointSample>& samples() const noexcept { return samples_; }
    const IdentityOptions& options() const noexcept { return options_; }
    int depth() const noexcept { return depth_; }
    bool axioms_hold() const noexcept { return axioms_hold_; }
    double max_axiom_residual() const noexcept { return max_axiom_residual_; }
    const AxiomReport& axiom_report() const noexcept { return axiom_report_; }
    /// C1 as supplied by the candidate or fitted as the sample mean of R + |grad psi|^2 - (4n-2) psi.
    double c1() const noexcept { return c1_; }
    bool c1_fitted() const noexcept { return c1_fitted_; }
    /// C2 = C1 / (4n - 2).
    double c2() const noexcept;

private:
    const SolitonCandidate* candidate_;
    std::vector<std::vector<double>> points_;
    IdentityOptions options_;
    int depth_;
    std::vector<PointSample> samples_;
    AxiomReport axiom_report_;
    bool axioms_hold_ = false;
    double max_axiom_residual_ = 0.0;
    double c1_ = 0.0;
    bool c1_fitted_ = false;
};

/// Evaluates one identity on an existing context. Throws PreconditionError
/// when the context's jet order is below the identity's requirement.
IdentityResidualReport run_identity(std::string_view id, const IdentityContext& context);
IdentityResidualReport run_identity(std::string_view id, const SolitonCandidate& candidate,
                                    std::span<const std::vector<double>> points, double tol);

/// Every registry entry (or the listed subset, kept in registry order).
std::vector<IdentityResidualReport> run_all(const IdentityContext& context,
                                            std::span<const std::string> ids = {});
std::vector<IdentityResidualReport> run_all(const SolitonCandidate& candidate,
                                            std::span<const std::vector<double>> points, double tol);

/// Highest jet order needed by the listed identities (all when empty).
int required_jet_order(std::span<const std::string> ids = {});

struct SecondVariationReport {
    double length = 0.0;
    double lhs = 0.0;  // integral of phi^2 Ric(gamma', gamma')
    double rhs = 0.0;  // 2n integral of (phi')^2 = 4n
    bool passed = false;
};

/// Trapezoid test function of the second-variation argument: t on [0,1],
/// 1 on [1, s0-1], s0 - t after.
double trapezoid_cutoff(double t, double s0);

/// Integrates phi^2 Ric(gamma', gamma') along a sampled geodesic. Ric along the
/// path is linear between grid nodes and the product is integrated exactly.
/// Throws PreconditionError when s0 <= 2 or s0 exceeds `minimality_bound`.
SecondVariationReport second_variation_check(const SolitonCandidate& candidate, const GeodesicPath& geodesic,
                                             double minimality_bound = std::numeric_limits<double>::infinity());

struct PotentialGrowthReport {
    IdentityVerdict verdict = IdentityVerdict::PreconditionUnmet;
    std::size_t points = 0;
    std::size_t minimizer = 0;  // index of the sampled minimizer y of psi
    double c2 = 0.0;
    double upper_violation = 0.0;      // max of psi + C2 - n (d + sqrt 3)^2
    double lower_violation = 0.0;      // max of n (d - 7)_+^2 - psi - C2 (advisory)
    double lipschitz_violation = 0.0;  // max of |f(x) - f(x')| - sqrt(n - 1/2) d
    double tolerance = 0.0;
    std::vector<std::string> notes;
};

/// Growth bounds of psi + C2 against distance estimates to the sampled minimizer.
PotentialGrowthReport potential_growth_check(const IdentityContext& context, const ShootingOptions& shooting = {});

}  // namespace sasakilab
