// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/identities.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sasakilab {

struct EigenCluster {
    double value = 0.0;
    int multiplicity = 0;
};

/// Eigenstructure of the Ricci operator at one point, computed in the
/// orthonormal frame (e_1, ..., e_2n, xi).
struct SpectrumReport {
    std::vector<double> point;
    std::vector<double> eigenvalues;  // ascending, 2n+1 values
    std::vector<EigenCluster> clusters;
    int rank_ric_minus_g = 0;
    bool in_range_1_2n = false;
    double rank_threshold = 0.0;
    /// Closest |lambda - 1| counted in the rank and farthest one not counted
    /// (0 when there is none): the location of the rank cut.
    double rank_gap_above = 0.0;
    double rank_gap_below = 0.0;
    /// Length of the projection of xi onto the eigenspace of the eigenvalue
    /// closest to 2n.
    double xi_alignment = 0.0;
    /// Eigenvalues of Ric restricted to D (2n values, ascending).
    std::vector<double> horizontal_eigenvalues;
};

inline constexpr double kDefaultClusterTol = 1e-5;

/// Symmetric eigenproblem of Ric in an orthonormal frame. `cluster_tol` is
/// relative: eigenvalues closer than cluster_tol * max(1, max|lambda|) share a
/// cluster and |lambda - 1| below that cut does not count towards the rank.
SpectrumReport ricci_spectrum(const SasakianStructure& s, std::span<const double> point,
                              double cluster_tol = kDefaultClusterTol, std::uint64_t frame_seed = 0x5eed);

/// Spectrum from a symmetric matrix already in an orthonormal frame whose last
/// vector is xi.
SpectrumReport spectrum_from_frame_matrix(const Eigen::MatrixXd& ric, int n, double cluster_tol = kDefaultClusterTol);

/// Spectra at every sample of a context, from the frame Ricci matrices.
std::vector<SpectrumReport> sample_spectra(const IdentityContext& context, double cluster_tol = kDefaultClusterTol);

/// The unique k in 1..2n+1 with |R - ((2n-1)k + (2n+1))| < tol.
std::optional<int> quantize_scalar(double r, int n, double tol);
/// (2n-1)k + (2n+1).
double quantized_value(int n, int k);

/// (2n-1)((2n-1)k + (2n+1) - R): the value of sum_{j<=k} (R_j - 2n)^2 forced by
/// the trace and |Ric_D|^2 relations. Throws PreconditionError unless 1 <= k <= 2n+1.
double rigidity_certificate(double r, int n, int k);

struct EigenPair {
    double r1 = 0.0;
    double r2 = 0.0;
    bool in_range = false;  // both in [1, 2n]
};

/// Multiplicities of the fixed eigenvalues 2n and 1. Defaults: one seat for
/// 2n (xi) and every seat left after k1 + k2 + 1 for the eigenvalue 1.
struct SeatOptions {
    std::optional<int> mult_2n;
    std::optional<int> mult_1;
};

/// Real solutions (R1, R2) of
///   k1 R1 + k2 R2 = R - 2n m_2n - m_1
///   k1 R1^2 + k2 R2^2 = (2n+1) R - 2n(4n+1) + 4n^2 - 4n^2 m_2n - m_1
/// which for m_2n = m_1 = 1 reads k1 R1 + k2 R2 = R - 2n - 1 and
/// k1 R1^2 + k2 R2^2 = (2n+1) R - 8n^2 - 2n - 1.
/// Throws PreconditionError unless k1, k2 >= 1 and the seats fit in 2n+1.
std::vector<EigenPair> eigenvalue_system_solve(double r, int n, int k1, int k2, const SeatOptions& seats = {});

enum class VerdictKind : std::uint8_t {
    SasakiEinstein,
    RigidByCriterion1,
    RigidByCriterion2,
    NonexistentByTheory,
    ViolatesPositivity,
    Indeterminate,
};
const char* verdict_kind_name(VerdictKind v);

struct Verdict {
    VerdictKind kind = VerdictKind::Indeterminate;
    std::optional<VerdictKind> route;  // RigidByCriterion1/2 when kind is SasakiEinstein
    double scalar_mean = 0.0;
    double scalar_stddev = 0.0;
    bool constant_scalar = false;
    std::optional<int> quantized_k;
    std::optional<int> rank;  // when constant over the sample
    std::optional<double> certificate;
    std::optional<double> radialflat_residual;
    std::vector<std::string> evidence;

    /// One-line summary, e.g. "SasakiEinstein (rank=5, R=20, k=5)".
    std::string summary() const;
};

struct ClassifyOptions {
    double cluster_tol = kDefaultClusterTol;
    double constancy_tol = 1e-6;  // stddev / max(|mean|, 1)
    double quantize_tol = 1e-6;
    double identity_tol = 1e-7;
    std::uint64_t frame_seed = 0x5eed;
};

/// Per-point data the decision tree consumes.
struct ClassificationInput {
    int n = 1;
    std::vector<double> scalar;
    std::vector<SpectrumReport> spectra;
    bool soliton_equation_holds = true;  // "soliton.n1.i" passed
    std::optional<double> radialflat_residual;
};

/// Decision tree: soliton equation gate, constant R, R = 4n, constant rank with
/// a vanishing certificate, eigenvalues in [1, 2n], positivity, else Indeterminate.
Verdict classify_samples(const ClassificationInput& input, const ClassifyOptions& options = {});

/// Samples spectra on the context's points and classifies. Throws
/// PreconditionError when the Sasakian axioms fail.
Verdict classify(const IdentityContext& context, const ClassifyOptions& options = {});
Verdict classify(const SolitonCandidate& candidate, std::span<const std::vector<double>> points,
                 const ClassifyOptions& options = {});

struct ExtremalNote {
    enum class Case : std::uint8_t { EinsteinTop, EinsteinNextToTop, Nonexistent, Neutral } kind = Case::Neutral;
    std::string note;
};
/// Consequences of the three extremal values R = 4n^2 + 2n, 4n^2 + 1 and 4n.
ExtremalNote extremal_value_report(double r, int n, double tol = 1e-6);

}  // namespace sasakilab
