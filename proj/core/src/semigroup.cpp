#include "tentkit/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "tentkit/error.hpp"
#include "tentkit/fourier.hpp"

namespace tentkit {

namespace {

constexpr double kMaxPoissonMean = 4.0e5;
constexpr std::size_t kMaxCacheEntries = 512;

// columns = components
Mat as_columns(const SpatialField& f)
{
    Mat X(f.cells(), f.components());
    for (int k = 0; k < f.components(); ++k)
        for (int c = 0; c < f.cells(); ++c) X(c, k) = f(c, k);
    return X;
}

SpatialField from_columns(const GridSpec& g, const Mat& X)
{
    SpatialField f(g, static_cast<int>(X.cols()));
    for (int k = 0; k < X.cols(); ++k)
        for (int c = 0; c < g.cells(); ++c) f(c, k) = X(c, k);
    return f;
}

} // namespace

std::string to_string(PropagationMethod m)
{
    switch (m) {
    case PropagationMethod::automatic: return "automatic";
    case PropagationMethod::fourier: return "fourier";
    case PropagationMethod::hermitian_eigen: return "hermitian_eigen";
    case PropagationMethod::pade: return "pade";
    case PropagationMethod::uniformization: return "uniformization";
    }
    return "automatic";
}

PropagationMethod method_from_string(const std::string& name)
{
    for (auto m : {PropagationMethod::automatic, PropagationMethod::fourier, PropagationMethod::hermitian_eigen,
                   PropagationMethod::pade, PropagationMethod::uniformization})
        if (to_string(m) == name) return m;
    fail("config.invalid", "unknown propagation method '" + name + "'");
}

struct Semigroup::Eig {
    bool real = false;
    Eigen::MatrixXd Vr;
    Mat Vc;
    Eigen::VectorXd lambda;

    // coefficients V^H X
    Mat to_modes(const Mat& X) const
    {
        if (!real) return Vc.adjoint() * X;
        Eigen::MatrixXd re = Vr.transpose() * X.real();
        Eigen::MatrixXd im = Vr.transpose() * X.imag();
        Mat out(re.rows(), re.cols());
        out.real() = re;
        out.imag() = im;
        return out;
    }
    Mat from_modes(const Mat& C) const
    {
        if (!real) return Vc * C;
        Eigen::MatrixXd re = Vr * C.real();
        Eigen::MatrixXd im = Vr * C.imag();
        Mat out(re.rows(), re.cols());
        out.real() = re;
        out.imag() = im;
        return out;
    }
};

struct Semigroup::Unif {
    double mu = 0.0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> P;
};

Semigroup::Semigroup(DiscreteGenerator generator, PropagationMethod method)
    : gen_(std::make_shared<const DiscreteGenerator>(std::move(generator))), method_(method)
{
    if (method_ == PropagationMethod::automatic) {
        if (gen_->is_identity())
            method_ = PropagationMethod::fourier;
        else if (gen_->is_hermitian())
            method_ = PropagationMethod::hermitian_eigen;
        else
            method_ = PropagationMethod::pade;
    }
    switch (method_) {
    case PropagationMethod::fourier:
        require(gen_->is_identity(), "semigroup.route", "the Fourier route needs A = I");
        break;
    case PropagationMethod::hermitian_eigen:
        require(gen_->is_hermitian(), "semigroup.route", "the eigen route needs a Hermitian generator");
        break;
    case PropagationMethod::uniformization:
        require(gen_->is_real_m_matrix(), "semigroup.route", "uniformization needs a real M-matrix generator");
        break;
    default: break;
    }
}

const Semigroup::Eig& Semigroup::eig() const
{
    std::call_once(eig_once_, [this] {
        auto e = std::make_shared<Eig>();
        const Mat L = gen_->dense();
        if (gen_->is_real()) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.real());
            e->real = true;
            e->Vr = es.eigenvectors();
            e->lambda = es.eigenvalues();
        } else {
            Eigen::SelfAdjointEigenSolver<Mat> es(L);
            e->Vc = es.eigenvectors();
            e->lambda = es.eigenvalues();
        }
        // L is positive semi-definite; clip roundoff below zero
        e->lambda = e->lambda.cwiseMax(0.0);
        eig_ = std::move(e);
    });
    return *eig_;
}

const Semigroup::Unif& Semigroup::unif() const
{
    std::call_once(unif_once_, [this] {
        auto u = std::make_shared<Unif>();
        const SparseMat& L = gen_->matrix();
        double mu = 0.0;
        for (int r = 0; r < L.rows(); ++r) mu = std::max(mu, L.coeff(r, r).real());
        u->mu = mu;
        Eigen::SparseMatrix<double, Eigen::RowMajor> P = (L.real() * (-1.0 / mu)).eval();
        for (int r = 0; r < P.rows(); ++r) P.coeffRef(r, r) += 1.0;
        P.prune(0.0);
        u->P = std::move(P);
        unif_ = std::move(u);
    });
    return *unif_;
}

const Mat& Semigroup::pade_exp(double t) const
{
    std::lock_guard lock(mutex_);
    auto it = exp_cache_.find(t);
    if (it != exp_cache_.end()) return it->second;
    if (exp_cache_.size() >= kMaxCacheEntries) exp_cache_.clear();
    return exp_cache_.emplace(t, expm(gen_->dense() * cplx(-t))).first->second;
}

const PhiFunctions& Semigroup::pade_phi(double dt) const
{
    std::lock_guard lock(mutex_);
    auto it = phi_cache_.find(dt);
    if (it != phi_cache_.end()) return it->second;
    if (phi_cache_.size() >= kMaxCacheEntries) phi_cache_.clear();
    return phi_cache_.emplace(dt, phi_functions(gen_->dense() * cplx(-dt))).first->second;
}

void Semigroup::split_mean(const SpatialField& f, SpatialField& zero_mean, std::vector<cplx>& means) const
{
    zero_mean = f;
    means.assign(f.components(), 0.0);
    for (int k = 0; k < f.components(); ++k) {
        means[k] = f.mean(k);
        for (auto& v : zero_mean.component(k)) v -= means[k];
    }
}

SpatialField Semigroup::route_apply(const SpatialField& f0, double t) const
{
    const GridSpec& g = grid();
    switch (method_) {
    case PropagationMethod::fourier: {
        const auto sigma = discrete_laplacian_symbol(g);
        std::vector<double> m(sigma.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-t * sigma[i]);
        return apply_symbol(f0, m);
    }
    case PropagationMethod::hermitian_eigen: {
        const Eig& e = eig();
        Mat C = e.to_modes(as_columns(f0));
        for (Eigen::Index i = 0; i < C.rows(); ++i) C.row(i) *= std::exp(-t * e.lambda(i));
        return from_columns(g, e.from_modes(C));
    }
    case PropagationMethod::pade: return from_columns(g, pade_exp(t) * as_columns(f0));
    case PropagationMethod::uniformization: {
        SpatialField zero(g, f0.components());
        return route_slab(f0, zero, zero, zero, t);
    }
    default: break;
    }
    fail("semigroup.route", "unresolved propagation method");
}

SpatialField Semigroup::route_slab(const SpatialField& u, const SpatialField& g0, const SpatialField& g1,
                                   const SpatialField& c, double dt) const
{
    const GridSpec& g = grid();
    switch (method_) {
    case PropagationMethod::fourier: {
        const auto sigma = discrete_laplacian_symbol(g);
        const int cells = g.cells();
        SpatialField out(g, u.components());
        for (int k = 0; k < u.components(); ++k) {
            const auto U = dft_forward(g, u.component(k));
            const auto A = dft_forward(g, g0.component(k));
            const auto B = dft_forward(g, g1.component(k));
            const auto C = dft_forward(g, c.component(k));
            std::vector<cplx> R(cells);
            for (int i = 0; i < cells; ++i) {
                const double z = -dt * sigma[i];
                const double p2 = phi2(z);
                R[i] = std::exp(z) * U[i] + dt * (phi1(z) * A[i] + p2 * (B[i] - A[i]) + (2.0 * phi3(z) - p2) * C[i]);
            }
            const auto r = dft_inverse(g, R);
            std::copy(r.begin(), r.end(), out.component(k).begin());
        }
        return out;
    }
    case PropagationMethod::hermitian_eigen: {
        const Eig& e = eig();
        const Mat U = e.to_modes(as_columns(u));
        const Mat A = e.to_modes(as_columns(g0));
        const Mat B = e.to_modes(as_columns(g1));
        const Mat C = e.to_modes(as_columns(c));
        Mat R(U.rows(), U.cols());
        for (Eigen::Index i = 0; i < U.rows(); ++i) {
            const double z = -dt * e.lambda(i);
            const double p2 = phi2(z);
            R.row(i) = std::exp(z) * U.row(i) +
                       dt * (phi1(z) * A.row(i) + p2 * (B.row(i) - A.row(i)) + (2.0 * phi3(z) - p2) * C.row(i));
        }
        return from_columns(g, e.from_modes(R));
    }
    case PropagationMethod::pade: {
        const PhiFunctions& p = pade_phi(dt);
        const Mat A = as_columns(g0);
        const Mat R = p.e * as_columns(u) +
                      dt * (p.phi1 * A + p.phi2 * (as_columns(g1) - A) + (2.0 * p.phi3 - p.phi2) * as_columns(c));
        return from_columns(g, R);
    }
    case PropagationMethod::uniformization: {
        const Unif& un = unif();
        const double lam = un.mu * dt;
        if (lam > kMaxPoissonMean)
            fail("semigroup.budget", "uniformization series too long for this time step; use another route");
        // Poisson weights w_k and upper tails Q_m = sum_{k >= m} w_k up to
        // the point where w_k underflows, so far-field entries keep their
        // relative accuracy.
        const int K = static_cast<int>(lam + 40.0 * std::sqrt(lam + 1.0) + 800.0);
        // Recurrence outward from the mode, then renormalised: evaluating
        // k log(lam) - lgamma(k+1) directly loses ~1e-10 at large lam.
        std::vector<double> w(K + 4, 0.0), Q(K + 5, 0.0);
        const int mode = std::min(static_cast<int>(lam), K + 3);
        w[mode] = 1.0;
        for (int k = mode + 1; k <= K + 3; ++k) w[k] = w[k - 1] * (lam / k);
        for (int k = mode - 1; k >= 0; --k) w[k] = w[k + 1] * ((k + 1) / lam);
        for (int k = K + 3; k >= 0; --k) Q[k] = Q[k + 1] + w[k];
        const double total = Q[0];
        for (auto& v : w) v /= total;
        for (auto& v : Q) v /= total;
        int top = K;
        while (top > 0 && w[top] == 0.0 && Q[top + 1] == 0.0) --top;
        const double mu = un.mu;
        const int cells = g.cells();
        SpatialField out(g, u.components());
        for (int comp = 0; comp < u.components(); ++comp) {
            Eigen::Map<const Eigen::VectorXcd> U(u.component(comp).data(), cells);
            Eigen::Map<const Eigen::VectorXcd> A(g0.component(comp).data(), cells);
            Eigen::Map<const Eigen::VectorXcd> B(g1.component(comp).data(), cells);
            Eigen::Map<const Eigen::VectorXcd> C(c.component(comp).data(), cells);
            auto term = [&](int k) {
                const double c0 = (dt > 0.0) ? (k + 1) * Q[k + 2] / (mu * mu * dt) : 0.0;
                const double c1 = Q[k + 1] / mu - c0;
                // int_0^1 w_k(lam s) s^m ds = (k+1)...(k+m) Q_{k+m+1} / lam^{m+1}
                const double c2 =
                    (dt > 0.0) ? (k + 1.0) * (k + 2.0) * Q[k + 3] / (mu * mu * mu * dt * dt) - c0 : 0.0;
                Eigen::VectorXcd v = w[k] * U;
                if (c0 != 0.0) v += c0 * A;
                if (c1 != 0.0) v += c1 * B;
                if (c2 != 0.0) v += c2 * C;
                return v;
            };
            Eigen::VectorXcd y = term(top);
            Eigen::VectorXd yr, yi;
            for (int k = top - 1; k >= 0; --k) {
                yr = un.P * y.real();
                yi = un.P * y.imag();
                y.real() = yr;
                y.imag() = yi;
                y += term(k);
            }
            Eigen::Map<Eigen::VectorXcd>(out.component(comp).data(), cells) = y;
        }
        return out;
    }
    default: break;
    }
    fail("semigroup.route", "unresolved propagation method");
}

SpatialField Semigroup::apply(const SpatialField& f, double t) const
{
    require(t >= 0.0, "semigroup.negative_time", "semigroup needs t >= 0");
    require(f.grid().same_space(grid()), "grid.mismatch", "field and generator grids differ");
    if (t == 0.0) return f;
    // the Poisson series preserves constants on its own; splitting off the
    // mean would bury far-field tails under its roundoff
    if (method_ == PropagationMethod::uniformization) return route_apply(f, t);
    SpatialField f0;
    std::vector<cplx> means;
    split_mean(f, f0, means);
    SpatialField out = route_apply(f0, t);
    for (int k = 0; k < out.components(); ++k)
        for (auto& v : out.component(k)) v += means[k];
    return out;
}

SpatialField Semigroup::grad_apply(const SpatialField& f, double t) const
{
    require(t > 0.0, "semigroup.negative_time", "gradient semigroup needs t > 0");
    return gen_->gradient(apply(f, t));
}

SpatialField Semigroup::slab_step(const SpatialField& u, const SpatialField& g0, const SpatialField& g1,
                                  double dt, const SpatialField* c) const
{
    require(dt > 0.0, "semigroup.negative_time", "slab step needs dt > 0");
    require(u.components() == g0.components() && u.components() == g1.components() &&
                (!c || c->components() == u.components()),
            "operator.shape", "slab step operands differ in shape");
    const SpatialField zero = c ? SpatialField() : SpatialField(grid(), u.components());
    const SpatialField& curv = c ? *c : zero;
    if (method_ == PropagationMethod::uniformization) return route_slab(u, g0, g1, curv, dt);
    SpatialField u0, a0, b0, c0;
    std::vector<cplx> mu, ma, mb, mc;
    split_mean(u, u0, mu);
    split_mean(g0, a0, ma);
    split_mean(g1, b0, mb);
    split_mean(curv, c0, mc);
    SpatialField out = route_slab(u0, a0, b0, c0, dt);
    // on constants: phi1(0) = 1, phi2(0) = 1/2, phi3(0) = 1/6
    for (int k = 0; k < out.components(); ++k) {
        const cplx m = mu[k] + dt * (ma[k] + 0.5 * (mb[k] - ma[k]) - mc[k] / 6.0);
        for (auto& v : out.component(k)) v += m;
    }
    return out;
}

Mat Semigroup::dense_exponential(double t) const
{
    require(t >= 0.0, "semigroup.negative_time", "semigroup needs t >= 0");
    const int N = grid().cells();
    if (method_ == PropagationMethod::pade) return t == 0.0 ? Mat::Identity(N, N) : pade_exp(t);
    if (method_ == PropagationMethod::hermitian_eigen) {
        const Eig& e = eig();
        const Eigen::VectorXd d = (-t * e.lambda).array().exp();
        if (e.real) return (e.Vr * d.asDiagonal() * e.Vr.transpose()).cast<cplx>();
        return e.Vc * d.cast<cplx>().asDiagonal() * e.Vc.adjoint();
    }
    SpatialField basis(grid(), N);
    for (int c = 0; c < N; ++c) basis(c, c) = 1.0;
    return as_columns(apply(basis, t));
}

} // namespace tentkit
