// SPDX-License-Identifier: MIT
#include "sasakilab/sasaki.hpp"

#include "sasakilab/errors.hpp"

#include <cmath>
#include <random>

namespace sasakilab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd eval_vector(std::span<const CoordExpr> exprs, std::span<const double> point) {
    VectorXd v(static_cast<Eigen::Index>(exprs.size()));
    for (std::size_t i = 0; i < exprs.size(); ++i) v(static_cast<Eigen::Index>(i)) = exprs[i].eval(point);
    return v;
}

void check_dims(const SasakianStructure& s, std::span<const double> point) {
    const auto d = static_cast<std::size_t>(s.dim());
    if (static_cast<std::size_t>(s.metric.dim()) != d || s.eta.size() != d || s.xi.size() != d)
        throw InputError("structure component counts do not match dimension 2n+1");
    if (point.size() != d) throw InputError("point dimension does not match chart");
}

/// g-orthonormal frame F with F^T g F = I.
MatrixXd orthonormal_frame(const MatrixXd& g) {
    Eigen::LLT<MatrixXd> llt(g);
    const MatrixXd L = llt.matrixL();
    return L.transpose().triangularView<Eigen::Upper>().solve(MatrixXd::Identity(g.rows(), g.cols()));
}

double frob(const MatrixXd& m) { return m.norm(); }

double covector_norm(const VectorXd& w, const MatrixXd& ginv) { return std::sqrt(std::max(0.0, w.dot(ginv * w))); }

/// Norm of an all-covariant (0,2) tensor in an orthonormal frame.
double bilinear_norm(const MatrixXd& b, const MatrixXd& F) { return frob(F.transpose() * b * F); }

void require_basic(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point, double tol) {
    const double xf = reeb_derivative(f, s, point);
    if (!(xf <= tol))
        throw PreconditionError("function is not basic: |xi f| = " + std::to_string(xf) + " exceeds tolerance");
}

VectorXd gradient_covector(const CoordExpr& f, std::span<const double> point) {
    const Jet j = f.eval_jet(point, 1);
    VectorXd w(j.nvars());
    for (int i = 0; i < j.nvars(); ++i) w(i) = j.d(i);
    return w;
}

MatrixXd as_matrix(const TensorValue& t) {
    const int d = t.dim();
    MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = t[static_cast<std::size_t>(i * d + j)];
    return m;
}

TensorValue from_matrix(const MatrixXd& m) {
    TensorValue t(static_cast<int>(m.rows()), {Variance::Down, Variance::Down});
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) t[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    return t;
}

MatrixXd horizontal_projector(const ContactPoint& c) {
    // P v = v - eta(v)/eta(xi) xi
    const double ex = c.eta.dot(c.xi);
    return MatrixXd::Identity(c.g.rows(), c.g.cols()) - c.xi * c.eta.transpose() / ex;
}

class FrameBuilder {
public:
    FrameBuilder(const ContactPoint& c, std::uint64_t seed) : c_(c), rng_(seed), proj_(horizontal_projector(c)) {}

    VectorXd random_horizontal() {
        std::normal_distribution<double> nd;
        VectorXd v(c_.g.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng_);
        return proj_ * v;
    }

    /// Orthonormalizes v against the accepted vectors; false if degenerate.
    bool accept(VectorXd v) {
        const double scale = std::sqrt(std::max(v.dot(c_.g * v), 0.0));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : vecs_) v -= e.dot(c_.g * v) * e;
        v = proj_ * v;
        const double nrm = std::sqrt(std::max(v.dot(c_.g * v), 0.0));
        if (!(nrm > 1e-6 * std::max(scale, 1e-300))) return false;
        vecs_.push_back(v / nrm);
        return true;
    }

    void add_random() {
        for (int attempt = 0; attempt < 64; ++attempt)
            if (accept(random_horizontal())) return;
        throw DomainError("degenerate horizontal projection: cannot complete the frame");
    }

    std::size_t size() const { return vecs_.size(); }
    const VectorXd& back() const { return vecs_.back(); }

    MatrixXd matrix() const {
        MatrixXd m(c_.g.rows(), static_cast<Eigen::Index>(vecs_.size()));
        for (std::size_t i = 0; i < vecs_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vecs_[i];
        return m;
    }

private:
    const ContactPoint& c_;
    std::mt19937_64 rng_;
    MatrixXd proj_;
    std::vector<VectorXd> vecs_;
};

}  // namespace

ContactPoint contact_point(const SasakianStructure& s, std::span<const double> point) {
    check_dims(s, point);
    const int d = s.dim();
    const MetricJets mj = metric_jets(s.metric, point, 1);
    ContactPoint c;
    c.g = MatrixXd(d, d);
    c.ginv = MatrixXd(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            c.g(i, j) = mj.g.comp(static_cast<std::size_t>(i * d + j))[0];
            c.ginv(i, j) = mj.ginv.comp(static_cast<std::size_t>(i * d + j))[0];
        }
    c.eta = eval_vector(s.eta, point);
    const TensorJet xi = expr_jets(s.xi, Variance::Up, point, 1);
    c.xi = VectorXd(d);
    for (int a = 0; a < d; ++a) c.xi(a) = xi.comp(static_cast<std::size_t>(a))[0];
    c.nabla_xi = MatrixXd(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double v = xi.comp(static_cast<std::size_t>(a))[1 + b];
            for (int k = 0; k < d; ++k) v += mj.gamma.comp(static_cast<std::size_t>((a * d + b) * d + k))[0] * c.xi(k);
            c.nabla_xi(a, b) = v;
        }
    c.phi = -static_cast<double>(s.phi_sign) * c.nabla_xi;
    return c;
}

const char* axiom_name(Axiom a) {
    switch (a) {
        case Axiom::EtaXi: return "eta(xi)=1";
        case Axiom::PhiXi: return "phi(xi)=0";
        case Axiom::EtaPhi: return "eta(phi)=0";
        case Axiom::PhiSquared: return "phi^2=-id+xi(x)eta";
        case Axiom::PhiMetric: return "g(phi,phi)=g-eta(x)eta";
        case Axiom::DEta: return "d(eta)=2g(.,phi.)";
        case Axiom::Killing: return "L_xi(g)=0";
        case Axiom::RicciXi: return "Ric(.,xi)=2n.eta";
        case Axiom::CurvatureXi: return "R(X,Y)xi=eta(Y)X-eta(X)Y";
    }
    return "?";
}

std::array<double, kAxiomCount> axiom_residuals(const SasakianStructure& s, std::span<const double> point) {
    const ContactPoint c = contact_point(s, point);
    const int d = s.dim();
    const std::size_t ud = static_cast<std::size_t>(d);
    const MatrixXd F = orthonormal_frame(c.g);
    const MatrixXd I = MatrixXd::Identity(d, d);
    std::array<double, kAxiomCount> r{};
    r[static_cast<std::size_t>(Axiom::EtaXi)] = std::abs(c.eta.dot(c.xi) - 1.0);
    r[static_cast<std::size_t>(Axiom::PhiXi)] = covector_norm(c.g * (c.phi * c.xi), c.ginv);
    r[static_cast<std::size_t>(Axiom::EtaPhi)] = covector_norm(c.phi.transpose() * c.eta, c.ginv);
    r[static_cast<std::size_t>(Axiom::PhiSquared)] =
        bilinear_norm(c.g * (c.phi * c.phi + I - c.xi * c.eta.transpose()), F);
    r[static_cast<std::size_t>(Axiom::PhiMetric)] =
        bilinear_norm(c.phi.transpose() * c.g * c.phi - c.g + c.eta * c.eta.transpose(), F);

    const TensorJet eta = expr_jets(s.eta, Variance::Down, point, 1);
    MatrixXd deta(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            deta(a, b) = eta.comp(static_cast<std::size_t>(b))[1 + a] - eta.comp(static_cast<std::size_t>(a))[1 + b];
    r[static_cast<std::size_t>(Axiom::DEta)] = bilinear_norm(deta - 2.0 * c.g * c.phi, F);
    r[static_cast<std::size_t>(Axiom::Killing)] = bilinear_norm(as_matrix(lie_derivative(s.metric, s.xi, point)), F);

    const MetricJets mj = metric_jets(s.metric, point, 2);
    const TensorJet mixed = riemann_mixed_jet(mj);
    const TensorValue ric = ricci_jet(mixed).value();
    r[static_cast<std::size_t>(Axiom::RicciXi)] = covector_norm(as_matrix(ric) * c.xi - 2.0 * s.n * c.eta, c.ginv);

    // T_ijl = g_lm (R^m_ijk xi^k - eta_j delta^m_i + eta_i delta^m_j)
    TensorValue t(d, {Variance::Down, Variance::Down, Variance::Down});
    for (std::size_t i = 0; i < ud; ++i)
        for (std::size_t j = 0; j < ud; ++j) {
            VectorXd up(d);
            for (std::size_t m = 0; m < ud; ++m) {
                double v = 0.0;
                for (std::size_t k = 0; k < ud; ++k)
                    v += mixed.comp(((i * ud + j) * ud + k) * ud + m)[0] * c.xi(static_cast<Eigen::Index>(k));
                if (m == i) v -= c.eta(static_cast<Eigen::Index>(j));
                if (m == j) v += c.eta(static_cast<Eigen::Index>(i));
                up(static_cast<Eigen::Index>(m)) = v;
            }
            const VectorXd low = c.g * up;
            for (std::size_t l = 0; l < ud; ++l) t[(i * ud + j) * ud + l] = low(static_cast<Eigen::Index>(l));
        }
    const TensorValue tf = frame_components(t, F);
    double sq = 0.0;
    for (double v : tf.data()) sq += v * v;
    r[static_cast<std::size_t>(Axiom::CurvatureXi)] = std::sqrt(sq);
    return r;
}

AxiomReport check_sasakian_axioms(const SasakianStructure& s, std::span<const std::vector<double>> points,
                                  double tol) {
    AxiomReport rep;
    rep.tolerance = tol;
    rep.points = points.size();
    for (std::size_t p = 0; p < points.size(); ++p) {
        try {
            const auto r = axiom_residuals(s, points[p]);
            for (std::size_t a = 0; a < kAxiomCount; ++a)
                rep.max_residual[a] = std::max(rep.max_residual[a], std::isfinite(r[a]) ? r[a] : HUGE_VAL);
        } catch (const Error& e) {
            rep.errors.push_back("point " + std::to_string(p) + ": " + e.what());
        }
    }
    rep.passed = rep.errors.empty() && !points.empty();
    for (double m : rep.max_residual) rep.passed = rep.passed && m < tol;
    return rep;
}

HorizontalFrame horizontal_frame(const SasakianStructure& s, std::span<const double> point, std::uint64_t seed) {
    const ContactPoint c = contact_point(s, point);
    FrameBuilder fb(c, seed);
    for (int h = 0; h < 2 * s.n; ++h) fb.add_random();
    return {std::vector<double>(point.begin(), point.end()), fb.matrix()};
}

HorizontalFrame j_adapted_frame(const SasakianStructure& s, std::span<const double> point, std::uint64_t seed) {
    const ContactPoint c = contact_point(s, point);
    FrameBuilder fb(c, seed);
    for (int h = 0; h < s.n; ++h) {
        fb.add_random();
        if (!fb.accept(c.phi * fb.back()))
            throw DomainError("degenerate horizontal projection: phi annihilates a horizontal vector");
    }
    return {std::vector<double>(point.begin(), point.end()), fb.matrix()};
}

TensorValue frame_components(const TensorValue& t, const MatrixXd& frame) {
    for (Variance v : t.slots())
        if (v != Variance::Down) throw PreconditionError("frame_components expects an all-covariant tensor");
    const int d = t.dim();
    const int D = static_cast<int>(frame.cols());
    const int r = t.rank();
    // Transform one slot at a time; dims[s] is the current extent of slot s.
    std::vector<int> dims(static_cast<std::size_t>(r), d);
    std::vector<double> cur(t.data().begin(), t.data().end());
    for (int s = 0; s < r; ++s) {
        std::size_t outer = 1, inner = 1;
        for (int q = 0; q < s; ++q) outer *= static_cast<std::size_t>(dims[static_cast<std::size_t>(q)]);
        for (int q = s + 1; q < r; ++q) inner *= static_cast<std::size_t>(dims[static_cast<std::size_t>(q)]);
        std::vector<double> next(outer * static_cast<std::size_t>(D) * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o)
            for (int m = 0; m < d; ++m) {
                const double* src = cur.data() + (o * static_cast<std::size_t>(d) + static_cast<std::size_t>(m)) * inner;
                for (int a = 0; a < D; ++a) {
                    const double f = frame(m, a);
                    if (f == 0.0) continue;
                    double* dst = next.data() + (o * static_cast<std::size_t>(D) + static_cast<std::size_t>(a)) * inner;
                    for (std::size_t i = 0; i < inner; ++i) dst[i] += f * src[i];
                }
            }
        cur.swap(next);
        dims[static_cast<std::size_t>(s)] = D;
    }
    TensorValue out(D, t.slots());
    std::copy(cur.begin(), cur.end(), out.data().begin());
    return out;
}

TensorValue transverse_ricci(const SasakianStructure& s, std::span<const double> point) {
    const ContactPoint c = contact_point(s, point);
    const MatrixXd P = horizontal_projector(c);
    const MatrixXd ric = as_matrix(ricci(s.metric, point));
    return from_matrix(P.transpose() * (ric + 2.0 * c.g) * P);
}

double transverse_scalar(const SasakianStructure& s, std::span<const double> point) {
    const MatrixXd E = horizontal_frame(s, point, 0).vectors;
    return (E.transpose() * as_matrix(transverse_ricci(s, point)) * E).trace();
}

double reeb_derivative(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point) {
    check_dims(s, point);
    return std::abs(gradient_covector(f, point).dot(eval_vector(s.xi, point)));
}

TensorValue transverse_hessian(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point,
                               double basic_tol) {
    require_basic(f, s, point, basic_tol);
    const ContactPoint c = contact_point(s, point);
    const MatrixXd P = horizontal_projector(c);
    return from_matrix(P.transpose() * as_matrix(hessian(f, s.metric, point)) * P);
}

double basic_laplacian(const CoordExpr& f, const SasakianStructure& s, std::span<const double> point,
                       double basic_tol) {
    require_basic(f, s, point, basic_tol);
    const MatrixXd E = horizontal_frame(s, point, 0).vectors;
    return (E.transpose() * as_matrix(hessian(f, s.metric, point)) * E).trace();
}

double weighted_basic_laplacian(const CoordExpr& f, const SasakianStructure& s, const CoordExpr& psi,
                                std::span<const double> point, double basic_tol) {
    require_basic(psi, s, point, basic_tol);
    const double lap = basic_laplacian(f, s, point, basic_tol);
    const ContactPoint c = contact_point(s, point);
    return lap - gradient_covector(f, point).dot(c.ginv * gradient_covector(psi, point));
}

HamiltonianField hamiltonian_field_from_potential(const SasakianStructure& s, const CoordExpr& psi,
                                                  std::span<const double> point, double basic_tol) {
    require_basic(psi, s, point, basic_tol);
    const ContactPoint c = contact_point(s, point);
    const VectorXd grad = c.ginv * gradient_covector(psi, point);
    const VectorXd jgrad = c.phi * grad;
    HamiltonianField x;
    x.vertical = std::complex<double>(0.0, -psi.eval(point));
    for (Eigen::Index a = 0; a < grad.size(); ++a) {
        const std::complex<double> h(-0.5 * grad(a), 0.5 * jgrad(a));
        x.horizontal.push_back(h);
        x.full.push_back(h + x.vertical * c.xi(a));
    }
    return x;
}

double holomorphicity_residual(const SasakianStructure& s, const CoordExpr& psi,
                               std::span<const std::vector<double>> points, double basic_tol) {
    double worst = 0.0;
    for (const auto& p : points) {
        require_basic(psi, s, p, basic_tol);
        const ContactPoint c = contact_point(s, p);
        const MatrixXd E = j_adapted_frame(s, p, 0).vectors;
        const MatrixXd H = E.transpose() * as_matrix(hessian(psi, s.metric, p)) * E;
        const MatrixXd J = E.transpose() * c.g * c.phi * E;
        worst = std::max(worst, 0.5 * (H + J * H * J).norm());
    }
    return worst;
}

}  // namespace sasakilab
