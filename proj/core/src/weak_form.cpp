#include <cmath>
#include <limits>

#include "tentkit/cauchy.hpp"
#include "tentkit/error.hpp"

namespace tentkit {

namespace {

// exp(1 - 1/(1 - x^2)) on (-1, 1): equals 1 at the center
double bump(double x) { return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0; }

double periodic_offset(double d, double period)
{
    d = std::fmod(d, period);
    if (d > period / 2.0) d -= period;
    if (d < -period / 2.0) d += period;
    return d;
}

double ball_l2_sq(const SpatialField& f, const std::vector<int>& cells)
{
    double s = 0.0;
    for (int c : cells)
        for (int k = 0; k < f.components(); ++k) s += std::norm(f(c, k));
    return s * f.grid().cell_volume();
}

int node_index(const GridSpec& g, double t)
{
    for (int k = 0; k < g.levels; ++k)
        if (std::abs(g.time(k) - t) <= 1e-9 * t) return k;
    return -1;
}

double implied(double lhs, double rhs)
{
    if (rhs > 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

} // namespace

double TestFunction::time_part(double t) const
{
    const double lam = std::log(t);
    return bump((2.0 * lam - lam_lo - lam_hi) / (lam_hi - lam_lo));
}

double TestFunction::time_derivative(double t) const
{
    const double x = (2.0 * std::log(t) - lam_lo - lam_hi) / (lam_hi - lam_lo);
    if (std::abs(x) >= 1.0) return 0.0;
    const double q = 1.0 - x * x;
    return bump(x) * (-2.0 * x / (q * q)) * (2.0 / (lam_hi - lam_lo)) / t;
}

double TestFunction::space_part(const GridSpec& g, int cell) const
{
    const auto x = g.center(cell);
    const double dx = periodic_offset(x[0] - cx, g.period);
    const double dy = g.n == 2 ? periodic_offset(x[1] - cy, g.period) : 0.0;
    return bump(std::sqrt(dx * dx + dy * dy) / radius);
}

std::vector<TestFunction> default_testbank(const GridSpec& g, int size, std::uint64_t seed)
{
    Rng rng(seed);
    const double lo = std::log(g.t_min), hi = std::log(g.t_max);
    const double inner_lo = lo + 0.15 * (hi - lo), inner_hi = hi - 0.15 * (hi - lo);
    const double span = inner_hi - inner_lo;
    std::vector<TestFunction> bank;
    for (int i = 0; i < size; ++i) {
        TestFunction tf;
        const double width = rng.uniform(0.3, 0.7) * span;
        tf.lam_lo = inner_lo + rng.uniform() * (span - width);
        tf.lam_hi = tf.lam_lo + width;
        tf.cx = rng.uniform(0.0, g.period);
        tf.cy = g.n == 2 ? rng.uniform(0.0, g.period) : 0.0;
        tf.radius = rng.uniform(g.period / 8.0, g.period / 3.0);
        bank.push_back(tf);
    }
    return bank;
}

WeakResidualRecord weak_residual(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                                 const std::vector<TestFunction>& bank)
{
    const GridSpec& g = sg.grid();
    require(!bank.empty(), "weak.testbank", "test bank is empty");
    require(u.grid() == g && u.components() == 1, "grid.mismatch", "solution does not live on the generator grid");
    const DiscreteGenerator& gen = sg.generator();
    const int L = g.levels;

    std::vector<SpatialField> u_lv(L), flux(L), f_lv(L), F_lv(L);
    for (int k = 0; k < L; ++k) {
        u_lv[k] = u.level(k);
        flux[k] = gen.apply_face(gen.gradient(u_lv[k]));
        if (problem.f && !problem.f->is_zero()) f_lv[k] = problem.f->at(g.time(k));
        if (problem.F && !problem.F->is_zero()) F_lv[k] = problem.F->at(g.time(k));
    }
    std::vector<double> w(L, 0.0);
    for (int k = 1; k + 1 < L; ++k) w[k] = (g.time(k + 1) - g.time(k - 1)) / 2.0;

    WeakResidualRecord rec;
    for (const auto& tf : bank) {
        for (int k : {0, 1, L - 2, L - 1})
            require(tf.time_part(g.time(k)) == 0.0, "weak.testbank",
                    "test functions must vanish on the first and last two levels");
        SpatialField chi(g, 1);
        for (int c = 0; c < g.cells(); ++c) chi(c) = tf.space_part(g, c);
        const SpatialField gchi = gen.gradient(chi);
        const double chi_sq = std::pow(chi.l2_norm(), 2);
        const double gchi_sq = std::pow(gchi.l2_norm(), 2);

        cplx R = 0.0;
        double N = 0.0;
        for (int k = 1; k + 1 < L; ++k) {
            const double t = g.time(k);
            const double psi = tf.time_part(t);
            const double dpsi = tf.time_derivative(t);
            N += w[k] * (psi * psi * (chi_sq + gchi_sq) + dpsi * dpsi * chi_sq);
            if (psi == 0.0) continue;
            SpatialField du = u_lv[k + 1];
            du -= u_lv[k - 1];
            du *= 0.5;
            cplx term = pair(du, chi);
            cplx body = pair(flux[k], gchi);
            if (!f_lv[k].data().empty()) body -= pair(f_lv[k], chi);
            if (!F_lv[k].data().empty()) body += pair(F_lv[k], gchi);
            R += psi * (term + w[k] * body);
        }
        const double r = N > 0.0 ? std::abs(R) / std::sqrt(N) : 0.0;
        rec.per_test.push_back(r);
        rec.max_residual = std::max(rec.max_residual, r);
    }
    return rec;
}

CaccioppoliRecord caccioppoli_check(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                                    const CaccioppoliGeometry& geo, double budget)
{
    const GridSpec& g = sg.grid();
    require(geo.a < geo.c && geo.c < geo.b, "cauchy.geometry", "need a < c < b");
    require(geo.a >= g.t_min * (1.0 - 1e-12) && geo.b <= g.t_max * (1.0 + 1e-12), "cauchy.geometry",
            "time interval leaves the ladder");
    const int kb = node_index(g, geo.b);
    require(kb >= 0, "cauchy.geometry", "b must be a ladder node");
    require(geo.radius >= g.h() && 2.0 * geo.radius <= g.period / 2.0, "cauchy.geometry",
            "2B must fit inside the torus");
    require(geo.center >= 0 && geo.center < g.cells(), "cauchy.geometry", "center outside the grid");

    const auto B = ball_cells(g, geo.center, geo.radius);
    const auto B2 = ball_cells(g, geo.center, 2.0 * geo.radius);
    const auto w_ab = dt_weights(g, geo.a, geo.b);
    const auto w_cb = dt_weights(g, geo.c, geo.b);
    const DiscreteGenerator& gen = sg.generator();

    double Iu = 0.0, If = 0.0, IF = 0.0, Ig = 0.0;
    for (int k = 0; k < g.levels; ++k) {
        if (w_ab[k] == 0.0 && w_cb[k] == 0.0) continue;
        const SpatialField uk = u.level(k);
        Iu += w_ab[k] * ball_l2_sq(uk, B2);
        if (w_cb[k] != 0.0) Ig += w_cb[k] * ball_l2_sq(gen.gradient(uk), B);
        if (problem.f && !problem.f->is_zero()) If += w_ab[k] * ball_l2_sq(problem.f->at(g.time(k)), B2);
        if (problem.F && !problem.F->is_zero()) IF += w_ab[k] * ball_l2_sq(problem.F->at(g.time(k)), B2);
    }
    const double r2 = geo.radius * geo.radius;
    const double ba = geo.b - geo.a, ca = geo.c - geo.a;

    CaccioppoliRecord rec;
    rec.lhs_trace = ball_l2_sq(u.level(kb), B);
    rec.rhs_trace = (1.0 / r2 + 1.0 / ba) * Iu + r2 * If + IF;
    rec.lhs_gradient = Ig;
    rec.rhs_gradient = (1.0 / ca) * (1.0 + ba / r2) * Iu + r2 * ba / ca * If + ba / ca * IF;
    rec.constant_trace = implied(rec.lhs_trace, rec.rhs_trace);
    rec.constant_gradient = implied(rec.lhs_gradient, rec.rhs_gradient);
    rec.pass = rec.constant_trace <= budget && rec.constant_gradient <= budget;
    return rec;
}

EnergyRecord energy_tent_check(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem,
                               double beta, Exponent p, double budget)
{
    EnergyRecord rec;
    rec.beta = beta;
    rec.p = p;
    TentNormSpec spec;
    spec.p = p;
    spec.beta = beta + 0.5;
    rec.grad_u = tent_norm(gradient_field(sg.generator(), u), spec);
    if (problem.F && !problem.F->is_zero()) rec.F_norm = tent_norm(problem.F->on_ladder(), spec);
    spec.beta = beta + 1.0;
    rec.u_norm = tent_norm(u, spec);
    spec.beta = beta;
    if (problem.f && !problem.f->is_zero()) rec.f_norm = tent_norm(problem.f->on_ladder(), spec);
    rec.constant = implied(rec.grad_u, rec.u_norm + rec.F_norm + rec.f_norm);
    rec.pass = rec.constant <= budget;
    return rec;
}

} // namespace tentkit
