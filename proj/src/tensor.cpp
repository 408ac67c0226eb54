// SPDX-License-Identifier: MIT
#include "sasakilab/tensor.hpp"

#include "sasakilab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sasakilab {

namespace {

std::size_t ipow_size(int d, int r) {
    std::size_t n = 1;
    for (int i = 0; i < r; ++i) n *= static_cast<std::size_t>(d);
    return n;
}

std::vector<std::size_t> strides_for(int d, int rank) {
    std::vector<std::size_t> s(static_cast<std::size_t>(rank));
    std::size_t st = 1;
    for (int i = rank - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = st;
        st *= static_cast<std::size_t>(d);
    }
    return s;
}

void digits_of(std::size_t flat, int d, int rank, int* out) {
    for (int i = rank - 1; i >= 0; --i) {
        out[i] = static_cast<int>(flat % static_cast<std::size_t>(d));
        flat /= static_cast<std::size_t>(d);
    }
}

}  // namespace

bool Chart::contains(std::span<const double> point) const {
    if (point.size() != box.size()) return false;
    for (std::size_t i = 0; i < box.size(); ++i)
        if (!(point[i] >= box[i].lo && point[i] <= box[i].hi)) return false;
    return true;
}

double Chart::boundary_distance(std::span<const double> point) const {
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < box.size() && i < point.size(); ++i)
        dist = std::min({dist, point[i] - box[i].lo, box[i].hi - point[i]});
    return dist;
}

MetricSpec::MetricSpec(Chart chart, std::vector<CoordExpr> components) : chart_(std::move(chart)) {
    const int d = chart_.dim();
    if (components.size() != static_cast<std::size_t>(d * d))
        throw InputError("metric table must have dim x dim entries");
    if (chart_.box.size() != static_cast<std::size_t>(d)) throw InputError("chart box dimension mismatch");
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) upper_.push_back(std::move(components[static_cast<std::size_t>(i * d + j)]));
}

const CoordExpr& MetricSpec::component(int i, int j) const {
    if (i > j) std::swap(i, j);
    const int d = dim();
    const int packed = i * d - i * (i - 1) / 2 + (j - i);
    return upper_[static_cast<std::size_t>(packed)];
}

Eigen::MatrixXd MetricSpec::value(std::span<const double> point) const {
    const int d = dim();
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) g(i, j) = g(j, i) = component(i, j).eval(point);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw SingularMetricError("metric is not positive definite at point");
    return g;
}

TensorValue::TensorValue(int dim, std::vector<Variance> slots)
    : dim_(dim), slots_(std::move(slots)), data_(ipow_size(dim, static_cast<int>(slots_.size())), 0.0) {}

int TensorValue::covariant_rank() const noexcept {
    return static_cast<int>(std::count(slots_.begin(), slots_.end(), Variance::Down));
}

std::size_t TensorValue::flat_index(std::span<const int> idx) const {
    if (idx.size() != slots_.size()) throw PreconditionError("tensor index rank mismatch");
    std::size_t flat = 0;
    for (int i : idx) {
        if (i < 0 || i >= dim_) throw PreconditionError("tensor index out of range");
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return flat;
}

double TensorValue::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

TensorJet::TensorJet(int dim, std::vector<Variance> slots, int order)
    : dim_(dim),
      order_(order),
      slots_(std::move(slots)),
      layout_(&JetLayout::get(dim)),
      ncomp_(ipow_size(dim, static_cast<int>(slots_.size()))),
      ncoef_(static_cast<std::size_t>(layout_->size(order))),
      data_(ncomp_ * ncoef_, 0.0) {}

TensorJet TensorJet::from_jets(int dim, std::vector<Variance> slots, std::span<const Jet> jets) {
    int order = kMaxJetOrder;
    for (const auto& j : jets) order = std::min(order, j.order());
    TensorJet t(dim, std::move(slots), order);
    if (jets.size() != t.ncomp_) throw PreconditionError("tensor jet component count mismatch");
    for (std::size_t c = 0; c < t.ncomp_; ++c)
        std::copy_n(jets[c].coeffs().data(), t.ncoef_, t.comp(c));
    return t;
}

TensorJet TensorJet::scalar(const Jet& f) { return from_jets(f.nvars(), {}, std::span<const Jet>(&f, 1)); }

Jet TensorJet::component(std::size_t flat) const {
    Jet j(dim_, order_);
    for (std::size_t i = 0; i < ncoef_; ++i) j.coeff(static_cast<int>(i)) = comp(flat)[i];
    return j;
}

TensorJet TensorJet::truncated(int order) const {
    if (order >= order_) return *this;
    TensorJet t(dim_, slots_, order);
    for (std::size_t c = 0; c < ncomp_; ++c) std::copy_n(comp(c), t.ncoef_, t.comp(c));
    return t;
}

TensorValue TensorJet::value() const {
    TensorValue v(dim_, slots_);
    for (std::size_t c = 0; c < ncomp_; ++c) v[c] = comp(c)[0];
    return v;
}

MetricJets metric_jets(const MetricSpec& metric, std::span<const double> point, int order) {
    if (order < 1 || order > kMaxJetOrder) throw PreconditionError("metric jet order must be in 1..4");
    const int d = metric.dim();
    if (static_cast<int>(point.size()) != d) throw InputError("point dimension does not match chart");
    const auto& L = JetLayout::get(d);
    MetricJets mj;
    mj.order = order;
    mj.g = TensorJet(d, {Variance::Down, Variance::Down}, order);
    const std::size_t nc = mj.g.stride();
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            Jet e = metric.component(i, j).eval_jet(point, order);
            std::copy_n(e.coeffs().data(), nc, mj.g.comp(static_cast<std::size_t>(i * d + j)));
            std::copy_n(e.coeffs().data(), nc, mj.g.comp(static_cast<std::size_t>(j * d + i)));
        }

    Eigen::MatrixXd g0(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g0(i, j) = mj.g.comp(static_cast<std::size_t>(i * d + j))[0];
    Eigen::LLT<Eigen::MatrixXd> llt(g0);
    if (llt.info() != Eigen::Success) throw SingularMetricError("metric is not positive definite at point");
    const Eigen::MatrixXd g0inv = llt.solve(Eigen::MatrixXd::Identity(d, d));

    // Solve g * ginv = I coefficient by coefficient in graded order.
    mj.ginv = TensorJet(d, {Variance::Up, Variance::Up}, order);
    const auto prods = L.products(order);
    std::size_t k = 0;
    Eigen::MatrixXd rhs(d, d), gl(d, d), xm(d, d);
    for (std::size_t r = 0; r < nc; ++r) {
        rhs.setZero();
        if (r == 0) rhs.setIdentity();
        for (; k < prods.size() && static_cast<std::size_t>(prods[k].result) == r; ++k) {
            const auto& p = prods[k];
            if (p.lhs == 0) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    gl(i, j) = mj.g.comp(static_cast<std::size_t>(i * d + j))[p.lhs];
                    xm(i, j) = mj.ginv.comp(static_cast<std::size_t>(i * d + j))[p.rhs];
                }
            rhs.noalias() -= gl * xm;
        }
        const Eigen::MatrixXd xr = g0inv * rhs;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) mj.ginv.comp(static_cast<std::size_t>(i * d + j))[r] = 0.5 * (xr(i, j) + xr(j, i));
    }

    const int go = order - 1;
    TensorJet first(d, {Variance::Down, Variance::Down, Variance::Down}, go);
    for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double* out = first.comp(static_cast<std::size_t>((l * d + i) * d + j));
                add_derivative_coeffs(L, go, mj.g.comp(static_cast<std::size_t>(j * d + l)), i, out, 0.5);
                add_derivative_coeffs(L, go, mj.g.comp(static_cast<std::size_t>(i * d + l)), j, out, 0.5);
                add_derivative_coeffs(L, go, mj.g.comp(static_cast<std::size_t>(i * d + j)), l, out, -0.5);
                std::copy_n(out, first.stride(), first.comp(static_cast<std::size_t>((l * d + j) * d + i)));
            }
    mj.gamma = TensorJet(d, {Variance::Up, Variance::Down, Variance::Down}, go);
    for (int m = 0; m < d; ++m)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double* out = mj.gamma.comp(static_cast<std::size_t>((m * d + i) * d + j));
                for (int l = 0; l < d; ++l)
                    fma_coeffs(L, go, mj.ginv.comp(static_cast<std::size_t>(m * d + l)),
                               first.comp(static_cast<std::size_t>((l * d + i) * d + j)), out);
                std::copy_n(out, mj.gamma.stride(), mj.gamma.comp(static_cast<std::size_t>((m * d + j) * d + i)));
            }
    return mj;
}

TensorJet cov_deriv(const TensorJet& t, const MetricJets& mj) {
    if (t.order() < 1) throw PreconditionError("insufficient jet order for covariant derivative");
    const int out_order = t.order() - 1;
    if (mj.gamma.order() < out_order) throw PreconditionError("insufficient metric jet order");
    const int d = t.dim();
    const int r = t.rank();
    const auto& L = t.layout();
    auto slots = t.slots();
    slots.push_back(Variance::Down);
    TensorJet out(d, slots, out_order);
    const auto stride = strides_for(d, r);
    std::vector<int> idx(static_cast<std::size_t>(r));
    const std::size_t ud = static_cast<std::size_t>(d);
    for (std::size_t flat = 0; flat < t.components(); ++flat) {
        digits_of(flat, d, r, idx.data());
        for (int a = 0; a < d; ++a) {
            double* o = out.comp(flat * ud + static_cast<std::size_t>(a));
            add_derivative_coeffs(L, out_order, t.comp(flat), a, o);
            for (int s = 0; s < r; ++s) {
                const std::size_t is = static_cast<std::size_t>(idx[static_cast<std::size_t>(s)]);
                const std::size_t st = stride[static_cast<std::size_t>(s)];
                const std::size_t base = flat - is * st;
                const bool down = t.slots()[static_cast<std::size_t>(s)] == Variance::Down;
                for (std::size_t p = 0; p < ud; ++p) {
                    const double* gam = down ? mj.gamma.comp((p * ud + static_cast<std::size_t>(a)) * ud + is)
                                             : mj.gamma.comp((is * ud + static_cast<std::size_t>(a)) * ud + p);
                    fma_coeffs(L, out_order, gam, t.comp(base + p * st), o, down ? -1.0 : 1.0);
                }
            }
        }
    }
    return out;
}

TensorJet riemann_mixed_jet(const MetricJets& mj) {
    if (mj.order < 2) throw PreconditionError("curvature needs metric jets of order >= 2");
    const TensorJet& G = mj.gamma;
    const int d = G.dim();
    const std::size_t ud = static_cast<std::size_t>(d);
    const int ro = mj.order - 2;
    const auto& L = G.layout();
    TensorJet R(d, {Variance::Down, Variance::Down, Variance::Down, Variance::Up}, ro);
    auto gam = [&](std::size_t m, std::size_t i, std::size_t j) { return G.comp((m * ud + i) * ud + j); };
    auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t m) {
        return ((i * ud + j) * ud + k) * ud + m;
    };
    for (std::size_t i = 0; i < ud; ++i)
        for (std::size_t j = i + 1; j < ud; ++j)
            for (std::size_t k = 0; k < ud; ++k)
                for (std::size_t m = 0; m < ud; ++m) {
                    double* o = R.comp(at(i, j, k, m));
                    add_derivative_coeffs(L, ro, gam(m, j, k), static_cast<int>(i), o);
                    add_derivative_coeffs(L, ro, gam(m, i, k), static_cast<int>(j), o, -1.0);
                    for (std::size_t p = 0; p < ud; ++p) {
                        fma_coeffs(L, ro, gam(p, j, k), gam(m, i, p), o);
                        fma_coeffs(L, ro, gam(p, i, k), gam(m, j, p), o, -1.0);
                    }
                    double* anti = R.comp(at(j, i, k, m));
                    for (std::size_t c = 0; c < R.stride(); ++c) anti[c] = -o[c];
                }
    return R;
}

TensorJet riemann_jet(const MetricJets& mj) { return lower_riemann(riemann_mixed_jet(mj), mj); }

TensorJet lower_riemann(const TensorJet& mixed, const MetricJets& mj) {
    const int d = mixed.dim();
    const std::size_t ud = static_cast<std::size_t>(d);
    const int ro = mixed.order();
    const auto& L = mixed.layout();
    TensorJet R(d, {Variance::Down, Variance::Down, Variance::Down, Variance::Down}, ro);
    for (std::size_t ijk = 0; ijk < ud * ud * ud; ++ijk)
        for (std::size_t l = 0; l < ud; ++l) {
            double* o = R.comp(ijk * ud + l);
            for (std::size_t m = 0; m < ud; ++m) fma_coeffs(L, ro, mixed.comp(ijk * ud + m), mj.g.comp(m * ud + l), o);
        }
    return R;
}

TensorJet contract(const TensorJet& t, int slot_a, int slot_b) {
    if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= t.rank() || slot_b >= t.rank())
        throw PreconditionError("invalid contraction slots");
    if (t.slots()[static_cast<std::size_t>(slot_a)] == t.slots()[static_cast<std::size_t>(slot_b)])
        throw PreconditionError("contraction needs one upper and one lower slot");
    const int d = t.dim();
    const int r = t.rank();
    std::vector<Variance> slots;
    for (int s = 0; s < r; ++s)
        if (s != slot_a && s != slot_b) slots.push_back(t.slots()[static_cast<std::size_t>(s)]);
    TensorJet out(d, slots, t.order());
    const auto in_stride = strides_for(d, r);
    std::vector<int> idx(static_cast<std::size_t>(r - 2));
    for (std::size_t flat = 0; flat < out.components(); ++flat) {
        digits_of(flat, d, r - 2, idx.data());
        std::size_t base = 0;
        int q = 0;
        for (int s = 0; s < r; ++s) {
            if (s == slot_a || s == slot_b) continue;
            base += static_cast<std::size_t>(idx[static_cast<std::size_t>(q++)]) * in_stride[static_cast<std::size_t>(s)];
        }
        const std::size_t step = in_stride[static_cast<std::size_t>(slot_a)] + in_stride[static_cast<std::size_t>(slot_b)];
        double* o = out.comp(flat);
        for (int p = 0; p < d; ++p) {
            const double* src = t.comp(base + static_cast<std::size_t>(p) * step);
            for (std::size_t c = 0; c < out.stride(); ++c) o[c] += src[c];
        }
    }
    return out;
}

TensorJet ricci_jet(const TensorJet& riemann_mixed) { return contract(riemann_mixed, 0, 3); }

TensorJet scalar_jet(const TensorJet& ricci, const MetricJets& mj) {
    const int d = ricci.dim();
    TensorJet s(d, {}, ricci.order());
    for (std::size_t c = 0; c < ricci.components(); ++c)
        fma_coeffs(ricci.layout(), ricci.order(), mj.ginv.comp(c), ricci.comp(c), s.comp(0));
    return s;
}

TensorValue christoffel(const MetricSpec& metric, std::span<const double> point) {
    return metric_jets(metric, point, 1).gamma.value();
}

TensorValue riemann(const MetricSpec& metric, std::span<const double> point) {
    return riemann_jet(metric_jets(metric, point, 2)).value();
}

TensorValue ricci(const MetricSpec& metric, std::span<const double> point) {
    return ricci_jet(riemann_mixed_jet(metric_jets(metric, point, 2))).value();
}

double scalar(const MetricSpec& metric, std::span<const double> point) {
    const MetricJets mj = metric_jets(metric, point, 2);
    return scalar_jet(ricci_jet(riemann_mixed_jet(mj)), mj).comp(0)[0];
}

TensorValue cov_deriv(const TensorFieldFn& field, const MetricSpec& metric, std::span<const double> point,
                      int order) {
    if (order != 1 && order != 2) throw PreconditionError("covariant derivative order must be 1 or 2");
    const TensorJet t = field(point, order);
    if (t.order() < order) throw PreconditionError("insufficient jet order supplied by field");
    const MetricJets mj = metric_jets(metric, point, order);
    TensorJet r = cov_deriv(t.truncated(order), mj);
    if (order == 2) r = cov_deriv(r, mj);
    return r.value();
}

TensorValue hessian(const CoordExpr& f, const MetricSpec& metric, std::span<const double> point) {
    return cov_deriv([&](std::span<const double> p, int order) { return TensorJet::scalar(f.eval_jet(p, order)); },
                     metric, point, 2);
}

double laplacian(const CoordExpr& f, const MetricSpec& metric, std::span<const double> point) {
    const TensorValue h = hessian(f, metric, point);
    const Eigen::MatrixXd ginv = metric.value(point).inverse();
    double s = 0.0;
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j) s += ginv(i, j) * h.at({i, j});
    return s;
}

TensorJet expr_jets(std::span<const CoordExpr> exprs, Variance variance, std::span<const double> point,
                    int order) {
    std::vector<Jet> jets;
    jets.reserve(exprs.size());
    for (const auto& e : exprs) jets.push_back(e.eval_jet(point, order));
    return TensorJet::from_jets(static_cast<int>(point.size()), {variance}, jets);
}

TensorValue lie_derivative(const MetricSpec& metric, std::span<const CoordExpr> field,
                           std::span<const double> point) {
    const int d = metric.dim();
    if (static_cast<int>(field.size()) != d) throw InputError("vector field dimension mismatch");
    const MetricJets mj = metric_jets(metric, point, 1);
    const TensorJet x = expr_jets(field, Variance::Up, point, 1);
    TensorValue out(d, {Variance::Down, Variance::Down});
    auto g = [&](int i, int j) { return mj.g.comp(static_cast<std::size_t>(i * d + j)); };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                s += x.comp(static_cast<std::size_t>(k))[0] * g(i, j)[1 + k];
                s += g(k, j)[0] * x.comp(static_cast<std::size_t>(k))[1 + i];
                s += g(i, k)[0] * x.comp(static_cast<std::size_t>(k))[1 + j];
            }
            out.at({i, j}) = s;
        }
    return out;
}

TensorValue fd_oracle_riemann(const MetricSpec& metric, std::span<const double> point, double h) {
    if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
    if (!(metric.chart().boundary_distance(point) > 2.0 * h))
        throw PreconditionError("point too close to the domain boundary for the finite-difference step");
    const int d = metric.dim();
    const std::size_t ud = static_cast<std::size_t>(d);
    const TensorValue g0 = christoffel(metric, point);
    std::vector<TensorValue> dgam;
    std::vector<double> p(point.begin(), point.end());
    for (int a = 0; a < d; ++a) {
        p[static_cast<std::size_t>(a)] = point[static_cast<std::size_t>(a)] + h;
        const TensorValue plus = christoffel(metric, p);
        p[static_cast<std::size_t>(a)] = point[static_cast<std::size_t>(a)] - h;
        const TensorValue minus = christoffel(metric, p);
        p[static_cast<std::size_t>(a)] = point[static_cast<std::size_t>(a)];
        TensorValue diff(d, plus.slots());
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = (plus[c] - minus[c]) / (2.0 * h);
        dgam.push_back(std::move(diff));
    }
    auto gam = [&](std::size_t m, std::size_t i, std::size_t j) { return g0[(m * ud + i) * ud + j]; };
    const Eigen::MatrixXd g = metric.value(point);
    TensorValue R(d, {Variance::Down, Variance::Down, Variance::Down, Variance::Down});
    std::vector<double> mixed(ud);
    for (std::size_t i = 0; i < ud; ++i)
        for (std::size_t j = 0; j < ud; ++j)
            for (std::size_t k = 0; k < ud; ++k) {
                for (std::size_t m = 0; m < ud; ++m) {
                    double v = dgam[i][(m * ud + j) * ud + k] - dgam[j][(m * ud + i) * ud + k];
                    for (std::size_t q = 0; q < ud; ++q) v += gam(q, j, k) * gam(m, i, q) - gam(q, i, k) * gam(m, j, q);
                    mixed[m] = v;
                }
                for (std::size_t l = 0; l < ud; ++l) {
                    double s = 0.0;
                    for (std::size_t m = 0; m < ud; ++m)
                        s += mixed[m] * g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l));
                    R[((i * ud + j) * ud + k) * ud + l] = s;
                }
            }
    return R;
}

}  // namespace sasakilab
