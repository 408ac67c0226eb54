// SPDX-License-Identifier: MIT
#include "sasakilab/jet.hpp"

#include "sasakilab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace sasakilab {

namespace {

std::uint64_t key_of(std::span<const std::uint8_t> exps) {
    std::uint64_t key = 0;
    for (std::size_t i = exps.size(); i-- > 0;) key = key * (kMaxJetOrder + 1) + exps[i];
    return key;
}

void enumerate_degree(int nvars, int var, int remaining, std::array<std::uint8_t, kMaxJetVars>& cur,
                      std::vector<std::array<std::uint8_t, kMaxJetVars>>& out) {
    if (var == nvars - 1) {
        cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
        out.push_back(cur);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
        enumerate_degree(nvars, var + 1, remaining - e, cur, out);
    }
    cur[static_cast<std::size_t>(var)] = 0;
}

double factorial_of(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

JetLayout::JetLayout(int nvars) : nvars_(nvars) {
    std::vector<std::array<std::uint8_t, kMaxJetVars>> all;
    degree_start_.push_back(0);
    for (int d = 0; d <= kMaxJetOrder; ++d) {
        std::array<std::uint8_t, kMaxJetVars> cur{};
        enumerate_degree(nvars, 0, d, cur, all);
        degree_start_.push_back(static_cast<int>(all.size()));
    }
    const int total = static_cast<int>(all.size());
    exps_.resize(static_cast<std::size_t>(total) * kMaxJetVars);
    for (int i = 0; i < total; ++i) {
        std::copy(all[static_cast<std::size_t>(i)].begin(), all[static_cast<std::size_t>(i)].end(),
                  exps_.begin() + static_cast<std::ptrdiff_t>(i) * kMaxJetVars);
        int deg = 0;
        double fact = 1.0;
        for (int v = 0; v < nvars; ++v) {
            deg += all[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
            fact *= factorial_of(all[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]);
        }
        degree_.push_back(deg);
        factorial_.push_back(fact);
        keys_.push_back(key_of(exponents(i)));
    }
    key_order_.resize(static_cast<std::size_t>(total));
    std::iota(key_order_.begin(), key_order_.end(), 0);
    std::sort(key_order_.begin(), key_order_.end(),
              [&](int a, int b) { return keys_[static_cast<std::size_t>(a)] < keys_[static_cast<std::size_t>(b)]; });

    // Product table, sorted by result index; result indices grow with degree.
    std::vector<std::uint8_t> sum(static_cast<std::size_t>(nvars));
    for (int r = 0; r < total; ++r) {
        for (int a = 0; a < total; ++a) {
            if (degree_[static_cast<std::size_t>(a)] > degree_[static_cast<std::size_t>(r)]) break;
            auto ea = exponents(a);
            auto er = exponents(r);
            bool ok = true;
            for (int v = 0; v < nvars; ++v) {
                if (ea[static_cast<std::size_t>(v)] > er[static_cast<std::size_t>(v)]) {
                    ok = false;
                    break;
                }
                sum[static_cast<std::size_t>(v)] =
                    static_cast<std::uint8_t>(er[static_cast<std::size_t>(v)] - ea[static_cast<std::size_t>(v)]);
            }
            if (!ok) continue;
            products_.push_back({a, index_of(sum), r});
        }
    }
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        const int end_r = size(k);
        product_end_.push_back(static_cast<int>(std::count_if(
            products_.begin(), products_.end(), [&](const Product& p) { return p.result < end_r; })));
    }

    shift_.assign(static_cast<std::size_t>(nvars) * static_cast<std::size_t>(total), -1);
    for (int v = 0; v < nvars; ++v) {
        for (int i = 0; i < total; ++i) {
            if (degree_[static_cast<std::size_t>(i)] >= kMaxJetOrder) continue;
            auto e = exponents(i);
            std::vector<std::uint8_t> up(e.begin(), e.end());
            up[static_cast<std::size_t>(v)]++;
            shift_[static_cast<std::size_t>(v) * static_cast<std::size_t>(total) + static_cast<std::size_t>(i)] =
                index_of(up);
        }
    }
}

const JetLayout& JetLayout::get(int nvars) {
    if (nvars < 1 || nvars > kMaxJetVars)
        throw PreconditionError("jet: unsupported number of variables " + std::to_string(nvars));
    static std::mutex mutex;
    static std::array<std::unique_ptr<JetLayout>, kMaxJetVars + 1> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[static_cast<std::size_t>(nvars)];
    if (!slot) slot.reset(new JetLayout(nvars));
    return *slot;
}

int JetLayout::index_of(std::span<const std::uint8_t> exps) const {
    int deg = 0;
    for (auto e : exps) deg += e;
    if (deg > kMaxJetOrder) return -1;
    const std::uint64_t key = key_of(exps);
    auto it = std::lower_bound(key_order_.begin(), key_order_.end(), key,
                               [&](int idx, std::uint64_t k) { return keys_[static_cast<std::size_t>(idx)] < k; });
    if (it == key_order_.end() || keys_[static_cast<std::size_t>(*it)] != key) return -1;
    return *it;
}

Jet::Jet(int nvars, int order, double value) : layout_(&JetLayout::get(nvars)), order_(order) {
    if (order < 0 || order > kMaxJetOrder) throw PreconditionError("jet: order must be in 0..4");
    coeffs_.assign(static_cast<std::size_t>(layout_->size(order)), 0.0);
    coeffs_[0] = value;
}

Jet Jet::variable(int nvars, int order, int var, double value) {
    Jet j(nvars, order, value);
    if (order >= 1) j.coeffs_[static_cast<std::size_t>(1 + var)] = 1.0;
    return j;
}

double Jet::partial(std::span<const int> vars) const {
    if (static_cast<int>(vars.size()) > order_) throw PreconditionError("jet: derivative order exceeds jet order");
    std::array<std::uint8_t, kMaxJetVars> e{};
    for (int v : vars) e[static_cast<std::size_t>(v)]++;
    const int idx = layout_->index_of(std::span<const std::uint8_t>(e.data(), static_cast<std::size_t>(nvars())));
    return coeffs_[static_cast<std::size_t>(idx)] * layout_->factorial(idx);
}

double Jet::d(int var) const {
    if (order_ < 1) throw PreconditionError("jet: derivative order exceeds jet order");
    return coeffs_[static_cast<std::size_t>(1 + var)];
}

Jet Jet::truncated(int order) const {
    if (order >= order_) return *this;
    Jet j = *this;
    j.order_ = order;
    j.coeffs_.resize(static_cast<std::size_t>(layout_->size(order)));
    return j;
}

Jet Jet::derivative(int var) const {
    if (order_ < 1) throw PreconditionError("jet: cannot differentiate an order-0 jet");
    Jet r(nvars(), order_ - 1);
    const int n = layout_->size(order_ - 1);
    for (int i = 0; i < n; ++i) {
        const int src = layout_->shifted(var, i);
        const double mult = layout_->exponents(src)[static_cast<std::size_t>(var)];
        r.coeffs_[static_cast<std::size_t>(i)] = mult * coeffs_[static_cast<std::size_t>(src)];
    }
    return r;
}

Jet Jet::compose(std::span<const double> derivs) const {
    // Horner in h = x - x0, using Taylor coefficients f^(k)/k!.
    Jet h = *this;
    h.coeffs_[0] = 0.0;
    Jet acc(nvars(), order_, derivs[static_cast<std::size_t>(order_)] / factorial_of(order_));
    for (int k = order_ - 1; k >= 0; --k) {
        acc = acc * h;
        acc.coeffs_[0] += derivs[static_cast<std::size_t>(k)] / factorial_of(k);
    }
    return acc;
}

bool Jet::all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return std::isfinite(c); });
}

Jet& Jet::operator+=(const Jet& rhs) {
    if (rhs.order_ < order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    if (rhs.order_ < order_) *this = truncated(rhs.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
    const int order = std::min(lhs.order_, rhs.order_);
    Jet r(lhs.nvars(), order);
    for (const auto& p : lhs.layout_->products(order))
        r.coeffs_[static_cast<std::size_t>(p.result)] +=
            lhs.coeffs_[static_cast<std::size_t>(p.lhs)] * rhs.coeffs_[static_cast<std::size_t>(p.rhs)];
    return r;
}

void fma_into(Jet& acc, const Jet& a, const Jet& b) {
    if (acc.order() > std::min(a.order(), b.order())) throw PreconditionError("jet: fma order mismatch");
    const double* pa = a.coeffs().data();
    const double* pb = b.coeffs().data();
    for (const auto& p : acc.layout().products(acc.order()))
        acc.coeff(p.result) += pa[p.lhs] * pb[p.rhs];
}

void fma_coeffs(const JetLayout& layout, int order, const double* a, const double* b, double* acc, double s) {
    if (s == 1.0) {
        for (const auto& p : layout.products(order)) acc[p.result] += a[p.lhs] * b[p.rhs];
    } else {
        for (const auto& p : layout.products(order)) acc[p.result] += s * a[p.lhs] * b[p.rhs];
    }
}

void add_derivative_coeffs(const JetLayout& layout, int order, const double* src, int var, double* acc,
                           double s) {
    const int n = layout.size(order);
    for (int i = 0; i < n; ++i) {
        const int from = layout.shifted(var, i);
        acc[i] += s * layout.exponents(from)[static_cast<std::size_t>(var)] * src[from];
    }
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
    const double b0 = rhs.coeffs_[0];
    if (b0 == 0.0) throw DomainError("division by zero");
    const int order = std::min(lhs.order_, rhs.order_);
    Jet r(lhs.nvars(), order);
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = lhs.coeffs_[i];
    // Products are sorted by result; for rhs index != 0 the lhs index has lower
    // degree than the result and is already final.
    const auto prods = lhs.layout_->products(order);
    std::size_t k = 0;
    for (std::size_t res = 0; res < r.coeffs_.size(); ++res) {
        double acc = r.coeffs_[res];
        for (; k < prods.size() && static_cast<std::size_t>(prods[k].result) == res; ++k)
            if (prods[k].rhs != 0)
                acc -= r.coeffs_[static_cast<std::size_t>(prods[k].lhs)] *
                       rhs.coeffs_[static_cast<std::size_t>(prods[k].rhs)];
        r.coeffs_[res] = acc / b0;
    }
    return r;
}

namespace {

std::array<double, kMaxJetOrder + 1> pow_derivs(double x, double p, int order) {
    std::array<double, kMaxJetOrder + 1> d{};
    double coef = 1.0;
    for (int k = 0; k <= order; ++k) {
        d[static_cast<std::size_t>(k)] = coef * std::pow(x, p - k);
        coef *= (p - k);
    }
    return d;
}

}  // namespace

Jet sin(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 5> d{s, c, -s, -c, s};
    return x.compose(d);
}

Jet cos(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 5> d{c, -s, -c, s, c};
    return x.compose(d);
}

Jet tan(const Jet& x) {
    const double c = std::cos(x.value());
    if (c == 0.0) throw DomainError("tan: argument at a pole");
    const double t = std::tan(x.value());
    const double s2 = 1.0 + t * t;
    const std::array<double, 5> d{t, s2, 2.0 * t * s2, (2.0 + 6.0 * t * t) * s2, (16.0 * t + 24.0 * t * t * t) * s2};
    return x.compose(d);
}

Jet exp(const Jet& x) {
    const double e = std::exp(x.value());
    const std::array<double, 5> d{e, e, e, e, e};
    return x.compose(d);
}

Jet log(const Jet& x) {
    const double v = x.value();
    if (!(v > 0.0)) throw DomainError("log of nonpositive value");
    const std::array<double, 5> d{std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v)};
    return x.compose(d);
}

Jet sqrt(const Jet& x) {
    const double v = x.value();
    if (v < 0.0) throw DomainError("sqrt of negative value");
    if (v == 0.0 && x.order() > 0) throw DomainError("sqrt: derivative undefined at 0");
    return x.compose(pow_derivs(v, 0.5, x.order()));
}

Jet sinh(const Jet& x) {
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    const std::array<double, 5> d{s, c, s, c, s};
    return x.compose(d);
}

Jet cosh(const Jet& x) {
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    const std::array<double, 5> d{c, s, c, s, c};
    return x.compose(d);
}

Jet pow(const Jet& x, double p) {
    if (p == std::floor(p) && std::abs(p) <= 64.0) return ipow(x, static_cast<int>(p));
    if (!(x.value() > 0.0)) throw DomainError("non-integer power of nonpositive base");
    return x.compose(pow_derivs(x.value(), p, x.order()));
}

Jet ipow(const Jet& x, int k) {
    if (k == 0) return Jet(x.nvars(), x.order(), 1.0);
    if (k < 0) {
        Jet one(x.nvars(), x.order(), 1.0);
        return one / ipow(x, -k);
    }
    Jet result(x.nvars(), x.order(), 1.0);
    Jet base = x;
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            result = first ? base : result * base;
            first = false;
        }
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

}  // namespace sasakilab
