// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/expr.hpp"
#include "sasakilab/jet.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sasakilab {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Coordinate names plus the closed domain box on which expressions are valid.
struct Chart {
    std::vector<std::string> names;
    std::vector<Interval> box;

    int dim() const noexcept { return static_cast<int>(names.size()); }
    bool contains(std::span<const double> point) const;
    /// Smallest distance from `point` to a face of the box (negative outside).
    double boundary_distance(std::span<const double> point) const;
};

/// Symmetric table of metric component expressions on a chart.
class MetricSpec {
public:
    MetricSpec() = default;
    /// `components` is the full dim x dim table in row-major order; only the
    /// upper triangle is read.
    MetricSpec(Chart chart, std::vector<CoordExpr> components);

    const Chart& chart() const noexcept { return chart_; }
    int dim() const noexcept { return chart_.dim(); }
    const CoordExpr& component(int i, int j) const;

    /// Numeric matrix at a point. Throws SingularMetricError unless SPD.
    Eigen::MatrixXd value(std::span<const double> point) const;

private:
    Chart chart_;
    std::vector<CoordExpr> upper_;  // packed upper triangle, row-major
};

enum class Variance : std::uint8_t { Up, Down };

/// Dense tensor components at a point. Components are stored row-major with the
/// first slot most significant.
class TensorValue {
public:
    TensorValue() = default;
    TensorValue(int dim, std::vector<Variance> slots);

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(slots_.size()); }
    const std::vector<Variance>& slots() const noexcept { return slots_; }
    int covariant_rank() const noexcept;
    int contravariant_rank() const noexcept { return rank() - covariant_rank(); }

    std::size_t size() const noexcept { return data_.size(); }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    double operator[](std::size_t flat) const noexcept { return data_[flat]; }
    double& operator[](std::size_t flat) noexcept { return data_[flat]; }

    std::size_t flat_index(std::span<const int> idx) const;
    double at(std::initializer_list<int> idx) const { return data_[flat_index({idx.begin(), idx.size()})]; }
    double& at(std::initializer_list<int> idx) { return data_[flat_index({idx.begin(), idx.size()})]; }

    /// Largest absolute component.
    double max_abs() const noexcept;

private:
    int dim_ = 0;
    std::vector<Variance> slots_;
    std::vector<double> data_;
};

/// A tensor field expanded as Taylor jets around a point: every component is a
/// jet of the same order in the chart variables.
class TensorJet {
public:
    TensorJet() = default;
    TensorJet(int dim, std::vector<Variance> slots, int order);

    static TensorJet from_jets(int dim, std::vector<Variance> slots, std::span<const Jet> jets);
    static TensorJet scalar(const Jet& f);

    int dim() const noexcept { return dim_; }
    int rank() const noexcept { return static_cast<int>(slots_.size()); }
    int order() const noexcept { return order_; }
    const std::vector<Variance>& slots() const noexcept { return slots_; }
    const JetLayout& layout() const noexcept { return *layout_; }
    std::size_t components() const noexcept { return ncomp_; }
    std::size_t stride() const noexcept { return ncoef_; }

    double* comp(std::size_t flat) noexcept { return data_.data() + flat * ncoef_; }
    const double* comp(std::size_t flat) const noexcept { return data_.data() + flat * ncoef_; }
    Jet component(std::size_t flat) const;

    TensorJet truncated(int order) const;
    TensorValue value() const;

private:
    int dim_ = 0;
    int order_ = 0;
    std::vector<Variance> slots_;
    const JetLayout* layout_ = nullptr;
    std::size_t ncomp_ = 0;
    std::size_t ncoef_ = 0;
    std::vector<double> data_;
};

/// Metric, inverse metric and Christoffel symbols as jets around one point.
/// `g` and `ginv` carry `order`, `gamma` (slots Up,Down,Down) carries order - 1.
struct MetricJets {
    int order = 0;
    TensorJet g;
    TensorJet ginv;
    TensorJet gamma;
};

MetricJets metric_jets(const MetricSpec& metric, std::span<const double> point, int order);

/// Covariant derivative: the derivative slot is appended last and the result
/// has order T.order() - 1. Requires T.order() >= 1 and gamma order >= T.order() - 1.
TensorJet cov_deriv(const TensorJet& t, const MetricJets& mj);

/// R^m_{ijk} with R(e_i,e_j)e_k = R^m_{ijk} e_m; slots (Down,Down,Down,Up) in
/// index order (i,j,k,m). Order is mj.order - 2.
TensorJet riemann_mixed_jet(const MetricJets& mj);
/// R_{ijkl} = g(R(e_i,e_j)e_k, e_l).
TensorJet riemann_jet(const MetricJets& mj);
/// Lowers the last slot of the mixed tensor with g.
TensorJet lower_riemann(const TensorJet& mixed, const MetricJets& mj);
/// Ric_{jk} = R^i_{ijk} summed over i, from the mixed tensor.
TensorJet ricci_jet(const TensorJet& riemann_mixed);
/// g^{jk} Ric_{jk}.
TensorJet scalar_jet(const TensorJet& ricci, const MetricJets& mj);

/// Contracts an (Up, Down) or (Down, Up) slot pair.
TensorJet contract(const TensorJet& t, int slot_a, int slot_b);

// Point-value front ends.
TensorValue christoffel(const MetricSpec& metric, std::span<const double> point);
TensorValue riemann(const MetricSpec& metric, std::span<const double> point);
TensorValue ricci(const MetricSpec& metric, std::span<const double> point);
double scalar(const MetricSpec& metric, std::span<const double> point);

/// Generates a tensor field's jets of the requested order around a point.
using TensorFieldFn = std::function<TensorJet(std::span<const double> point, int order)>;

/// First or second covariant derivative of a generated field at a point.
TensorValue cov_deriv(const TensorFieldFn& field, const MetricSpec& metric, std::span<const double> point,
                      int order);

TensorValue hessian(const CoordExpr& f, const MetricSpec& metric, std::span<const double> point);
double laplacian(const CoordExpr& f, const MetricSpec& metric, std::span<const double> point);
/// (L_X g)_{ij} = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k.
TensorValue lie_derivative(const MetricSpec& metric, std::span<const CoordExpr> field,
                           std::span<const double> point);

/// Riemann tensor from central differences (step h) of Christoffel symbols.
TensorValue fd_oracle_riemann(const MetricSpec& metric, std::span<const double> point, double h);

/// Jets of a list of expressions as a rank-1 tensor jet.
TensorJet expr_jets(std::span<const CoordExpr> exprs, Variance variance, std::span<const double> point,
                    int order);

}  // namespace sasakilab
