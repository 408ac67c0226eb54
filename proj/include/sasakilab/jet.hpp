// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sasakilab {

/// Highest derivative order carried by a jet. Two covariant derivatives of the
/// Riemann tensor need four derivatives of the metric.
inline constexpr int kMaxJetOrder = 4;

/// Highest number of independent variables (chart dimension) supported.
inline constexpr int kMaxJetVars = 12;

/// Shared multi-index bookkeeping for truncated Taylor polynomials in `nvars`
/// variables. Multi-indices are graded by total degree, so the coefficients of a
/// jet of order k are a prefix of those of any higher-order jet.
class JetLayout {
public:
    struct Product {
        int lhs;
        int rhs;
        int result;
    };

    static const JetLayout& get(int nvars);

    int nvars() const noexcept { return nvars_; }
    /// Number of coefficients of a jet of the given order.
    int size(int order) const noexcept { return degree_start_[order + 1]; }
    int degree(int idx) const noexcept { return degree_[idx]; }
    std::span<const std::uint8_t> exponents(int idx) const noexcept {
        return {exps_.data() + static_cast<std::size_t>(idx) * kMaxJetVars,
                static_cast<std::size_t>(nvars_)};
    }
    /// Index of a multi-index, or -1 if its degree exceeds kMaxJetOrder.
    int index_of(std::span<const std::uint8_t> exps) const;
    /// alpha! for the multi-index at `idx`.
    double factorial(int idx) const noexcept { return factorial_[idx]; }

    /// All pairs (lhs, rhs) with lhs + rhs = result, sorted by result index.
    /// The pairs contributing to results of degree <= k form a prefix.
    std::span<const Product> products(int order) const noexcept {
        return {products_.data(), static_cast<std::size_t>(product_end_[order])};
    }
    /// For variable m: src_[dst] is the index of dst + e_m (valid for
    /// degree(dst) < kMaxJetOrder).
    int shifted(int var, int idx) const noexcept {
        return shift_[static_cast<std::size_t>(var) * size(kMaxJetOrder) + idx];
    }

private:
    explicit JetLayout(int nvars);

    int nvars_;
    std::vector<std::uint8_t> exps_;
    std::vector<int> degree_;
    std::vector<int> degree_start_;
    std::vector<double> factorial_;
    std::vector<std::uint64_t> keys_;
    std::vector<int> key_order_;
    std::vector<Product> products_;
    std::vector<int> product_end_;
    std::vector<int> shift_;
};

/// Truncated multivariate Taylor polynomial: the value of an expression plus
/// all of its partial derivatives up to `order` at one point. Coefficients are
/// stored in Taylor normalization (d^alpha f / alpha!).
class Jet {
public:
    Jet() = default;
    Jet(int nvars, int order, double value = 0.0);

    static Jet constant(int nvars, int order, double value) { return Jet(nvars, order, value); }
    /// The coordinate function x_var expanded around x_var = value.
    static Jet variable(int nvars, int order, int var, double value);

    bool valid() const noexcept { return layout_ != nullptr; }
    int nvars() const noexcept { return layout_->nvars(); }
    int order() const noexcept { return order_; }
    const JetLayout& layout() const noexcept { return *layout_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    double value() const noexcept { return coeffs_[0]; }
    double coeff(int idx) const noexcept { return coeffs_[static_cast<std::size_t>(idx)]; }
    double& coeff(int idx) noexcept { return coeffs_[static_cast<std::size_t>(idx)]; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }

    /// Partial derivative d^k f / dx_{vars[0]} ... dx_{vars[k-1]}; symmetric in
    /// the order of `vars` by construction.
    double partial(std::span<const int> vars) const;
    double partial(std::initializer_list<int> vars) const {
        return partial(std::span<const int>(vars.begin(), vars.size()));
    }
    /// First-order partial, shorthand.
    double d(int var) const;

    Jet truncated(int order) const;
    /// d/dx_var as a jet of order - 1.
    Jet derivative(int var) const;
    /// f(this) given f and its derivatives f^(k)(value()) for k = 0..order.
    Jet compose(std::span<const double> derivs) const;

    bool all_finite() const noexcept;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(double s);
    Jet& operator+=(double s) {
        coeffs_[0] += s;
        return *this;
    }

    friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
    friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
    friend Jet operator*(const Jet& lhs, const Jet& rhs);
    friend Jet operator/(const Jet& lhs, const Jet& rhs);
    friend Jet operator*(Jet lhs, double s) { return lhs *= s; }
    friend Jet operator*(double s, Jet rhs) { return rhs *= s; }
    friend Jet operator+(Jet lhs, double s) { return lhs += s; }
    friend Jet operator-(Jet lhs, double s) { return lhs += -s; }
    friend Jet operator-(Jet j) { return j *= -1.0; }

private:
    const JetLayout* layout_ = nullptr;
    int order_ = 0;
    std::vector<double> coeffs_;
};

/// Multiply-accumulate: acc += a * b, truncated at acc's order.
void fma_into(Jet& acc, const Jet& a, const Jet& b);

/// Raw-coefficient kernel: acc += s * a * b, all arrays holding at least
/// layout.size(order) Taylor coefficients.
void fma_coeffs(const JetLayout& layout, int order, const double* a, const double* b, double* acc,
                double s = 1.0);
/// Raw-coefficient kernel: acc += s * d/dx_var(src), where src has order + 1.
void add_derivative_coeffs(const JetLayout& layout, int order, const double* src, int var, double* acc,
                           double s = 1.0);

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
/// x^p for real p; requires x > 0 unless p is a nonnegative integer.
Jet pow(const Jet& x, double p);
/// x^k by repeated multiplication; negative k divides.
Jet ipow(const Jet& x, int k);

}  // namespace sasakilab
