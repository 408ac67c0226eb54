// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/tensor.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sasakilab {

/// Contact metric data (g, eta, xi) on a single chart of dimension 2n+1.
/// phi is derived pointwise as phi = phi_sign * (-nabla xi).
struct SasakianStructure {
    std::string name;
    int n = 1;
    MetricSpec metric;
    std::vector<CoordExpr> eta;
    std::vector<CoordExpr> xi;
    int phi_sign = 1;

    int dim() const noexcept { return 2 * n + 1; }
    const Chart& chart() const noexcept { return metric.chart(); }
};

/// User data of the lemma1 identity: Ric + (lambda+2)g - (lambda+2n+2) eta x eta + 1/2 L_V g^T.
struct Lemma1Data {
    double lambda = 0.0;
    std::vector<CoordExpr> v;
};

struct SolitonCandidate {
    SasakianStructure structure;
    CoordExpr psi;
    std::optional<double> c1;
    std::optional<Lemma1Data> lemma1;
};

/// Contact-structure quantities at a point: values and the derived phi.
struct ContactPoint {
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    Eigen::VectorXd xi;
    Eigen::VectorXd eta;
    Eigen::MatrixXd phi;      // phi^a_b, acting on column vectors
    Eigen::MatrixXd nabla_xi;  // (nabla_b xi)^a
};
ContactPoint contact_point(const SasakianStructure& s, std::span<const double> point);

enum class Axiom : std::uint8_t {
    EtaXi,
    PhiXi,
    EtaPhi,
    PhiSquared,
    PhiMetric,
    DEta,
    Killing,
    RicciXi,
    CurvatureXi,
};
inline constexpr std::size_t kAxiomCount = 9;
/// Stable key of an axiom, e.g. "eta(xi)=1".
const char* axiom_name(Axiom a);

/// Per-axiom residual norms (orthonormal-frame Frobenius norms) at one point.
std::array<double, kAxiomCount> axiom_residuals(const SasakianStructure& s, std::span<const double> point);

struct AxiomReport {
    std::array<double, kAxiomCount> max_residual{};
    std::size_t points = 0;
    double tolerance = 0.0;
    bool passed = false;
    std::vector<std::string> errors;  // per-point evaluation failures
};
AxiomReport check_sasakian_axioms(const SasakianStructure& s, std::span<const std::vector<double>> points,
                                  double tol);

/// 2n g-orthonormal vectors annihilated by eta, as columns of a d x 2n matrix.
struct HorizontalFrame {
    std::vector<double> point;
    Eigen::MatrixXd vectors;
};
/// Gram-Schmidt over eta-kernel projections of seeded random vectors.
HorizontalFrame horizontal_frame(const SasakianStructure& s, std::span<const double> point, std::uint64_t seed);
/// Frame of the form (e_1, phi e_1, e_2, phi e_2, ...).
HorizontalFrame j_adapted_frame(const SasakianStructure& s, std::span<const double> point, std::uint64_t seed);

/// Ric^T = Ric + 2g restricted to D, returned as a chart tensor that vanishes on xi.
TensorValue transverse_ricci(const SasakianStructure& s, std::span<const double> point);
/// Horizontal trace of Ric^T, equal to R + 2n.
double transverse_scalar(const SasakianStructure& s, std::span<const double> point);

/// Basic-function operators. Throw PreconditionError when |xi f| > basic_tol.
inline constexpr double kDefaultBasicTol = 1e-8;
double basic_laplacian(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point,
                       double basic_tol = kDefaultBasicTol);
double weighted_basic_laplacian(const CoordExpr& f, const SasakianStructure& s, const CoordExpr& psi,
                                std::span<const double> point, double basic_tol = kDefaultBasicTol);
/// Hess f restricted to D (as a chart tensor annihilating xi).
TensorValue transverse_hessian(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point,
                               double basic_tol = kDefaultBasicTol);

/// X = X_D + eta(X) xi with eta(X) = -i psi and iota_{X_D} omega^T = i dbar_B psi.
struct HamiltonianField {
    std::vector<std::complex<double>> horizontal;  // X_D, chart components
    std::complex<double> vertical;                 // eta(X)
    std::vector<std::complex<double>> full;        // X_D + eta(X) xi
};
HamiltonianField hamiltonian_field_from_potential(const SasakianStructure& s, const CoordExpr& psi,
                                                  std::span<const double> point,
                                                  double basic_tol = kDefaultBasicTol);
/// Max over points of |H + J H J| / 2 (Frobenius, J-adapted frame), where H is
/// the transverse Hessian of psi and J = phi on D.
double holomorphicity_residual(const SasakianStructure& s, const CoordExpr& psi,
                               std::span<const std::vector<double>> points, double basic_tol = kDefaultBasicTol);

/// |xi f| at a point.
double reeb_derivative(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point);

/// Components of an all-covariant chart tensor in a frame (columns of `frame`).
TensorValue frame_components(const TensorValue& t, const Eigen::MatrixXd& frame);

}  // namespace sasakilab
