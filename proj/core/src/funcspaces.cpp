#include "tentkit/funcspaces.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "tentkit/error.hpp"
#include "tentkit/fourier.hpp"

namespace tentkit {

namespace {

std::vector<double> weighted_level(const SpaceTimeField& F, int k, double beta)
{
    auto v = abs_sq(F, k);
    const double w = std::pow(F.grid().time(k), -2.0 * beta);
    for (double& x : v) x *= w;
    return v;
}

double outer_lp(const GridSpec& g, const std::vector<double>& inner_sq, double p)
{
    std::vector<double> v(inner_sq.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(std::max(inner_sq[i], 0.0), p / 2.0);
    return std::pow(g.cell_volume() * pairwise_sum(v), 1.0 / p);
}

void check_finite(const SpaceTimeField& F)
{
    if (!F.all_finite()) fail("funcspaces.nonfinite", "field has non-finite entries");
}

} // namespace

void TentNormSpec::validate() const
{
    if (!(aperture >= 1.0)) fail("funcspaces.spec", "aperture must be >= 1");
    if (!(carleson_deficit >= 0.0)) fail("funcspaces.spec", "carleson_deficit must be >= 0");
    if (!std::isfinite(beta)) fail("funcspaces.spec", "beta must be finite");
}

namespace {

// Wide cones keep the normalisation of the aperture-1 ball: sum over
// B(x, a r) divided by |B(x, r)|. This makes the norm nondecreasing in a.
double aperture_scale(const GridSpec& g, double aperture, double r)
{
    if (aperture == 1.0) return 1.0;
    return static_cast<double>(ball_cell_count(g, aperture * r)) / ball_cell_count(g, r);
}

} // namespace

double tent_norm(const SpaceTimeField& F, const TentNormSpec& spec)
{
    spec.validate();
    if (spec.kind == TentKind::z) return z_norm(F, spec);
    if (spec.p.is_infinite()) return carleson_norm(F, spec);
    check_finite(F);
    const GridSpec& g = F.grid();
    const auto w = dt_weights(g);
    std::vector<double> inner(g.cells(), 0.0);
    for (int k = 0; k < g.levels; ++k) {
        if (w[k] == 0.0) continue;
        const auto v = weighted_level(F, k, spec.beta);
        const auto m = ball_means(g, v, spec.aperture * std::sqrt(g.time(k)));
        const double wk = w[k] * aperture_scale(g, spec.aperture, std::sqrt(g.time(k)));
        for (int i = 0; i < g.cells(); ++i) inner[i] += wk * m[i];
    }
    return outer_lp(g, inner, spec.p.value());
}

double carleson_norm(const SpaceTimeField& F, const TentNormSpec& spec)
{
    spec.validate();
    check_finite(F);
    const GridSpec& g = F.grid();
    std::vector<std::vector<double>> levels(g.levels);
    for (int k = 0; k < g.levels; ++k) levels[k] = weighted_level(F, k, spec.beta);
    double best = 0.0;
    const double cover = g.period / 2.0 * std::sqrt(static_cast<double>(g.n));
    for (int m = 0;; ++m) {
        const double r = g.h() * std::ldexp(1.0, m);
        const auto w = dt_weights(g, g.t_min, r * r);
        std::vector<double> acc(g.cells(), 0.0);
        for (int k = 0; k < g.levels; ++k) {
            if (w[k] == 0.0) continue;
            const auto mean = ball_means(g, levels[k], spec.aperture * r);
            for (int i = 0; i < g.cells(); ++i) acc[i] += w[k] * mean[i];
        }
        const double measure = ball_cell_count(g, spec.aperture * r) * g.cell_volume();
        const double scale = std::pow(measure, -spec.carleson_deficit);
        for (double a : acc) best = std::max(best, scale * std::sqrt(std::max(a, 0.0)));
        if (r >= cover) break;
    }
    return best;
}

double z_norm(const SpaceTimeField& F, const TentNormSpec& spec)
{
    spec.validate();
    check_finite(F);
    const GridSpec& g = F.grid();
    const auto outer = dt_over_t_weights(g);
    std::vector<std::vector<double>> levels(g.levels);
    for (int k = 0; k < g.levels; ++k) levels[k] = weighted_level(F, k, spec.beta);
    const bool inf = spec.p.is_infinite();
    const double p = spec.p.value();
    std::vector<double> acc(g.cells(), 0.0);
    double sup = 0.0;
    for (int k = 0; k < g.levels; ++k) {
        const double t = g.time(k);
        const auto w = dt_weights(g, t / 2.0, t);
        std::vector<double> inner(g.cells(), 0.0);
        for (int m = 0; m < g.levels; ++m) {
            if (w[m] == 0.0) continue;
            const auto mean = ball_means(g, levels[m], spec.aperture * std::sqrt(t));
            const double wm = w[m] * aperture_scale(g, spec.aperture, std::sqrt(t));
            for (int i = 0; i < g.cells(); ++i) inner[i] += wm * mean[i];
        }
        if (inf) {
            for (double v : inner) sup = std::max(sup, std::sqrt(std::max(v, 0.0)));
        } else {
            for (int i = 0; i < g.cells(); ++i) acc[i] += outer[k] * std::pow(std::max(inner[i], 0.0), p / 2.0);
        }
    }
    if (inf) return sup;
    return std::pow(g.cell_volume() * pairwise_sum(acc), 1.0 / p);
}

double weighted_l2_sq(const SpaceTimeField& F, double beta)
{
    const GridSpec& g = F.grid();
    const auto w = dt_weights(g);
    std::vector<double> terms(g.levels);
    for (int k = 0; k < g.levels; ++k) terms[k] = w[k] * g.cell_volume() * pairwise_sum(weighted_level(F, k, beta));
    return pairwise_sum(terms);
}

SpatialField divergence_preimage(const SpatialField& f)
{
    const GridSpec& g = f.grid();
    if (f.components() != 1) fail("funcspaces.shape", "divergence preimage expects a scalar field");
    const auto hat = dft_forward(g, f.component(0));
    SpatialField G(g, g.n);
    std::vector<std::vector<cplx>> d;
    for (int a = 0; a < g.n; ++a) {
        // div_h = -G^H has symbol -conj((e^{i xi h} - 1)/h)
        auto s = forward_difference_symbol(g, a);
        for (auto& v : s) v = -std::conj(v);
        d.push_back(std::move(s));
    }
    for (int a = 0; a < g.n; ++a) {
        std::vector<cplx> b(hat.size());
        for (std::size_t i = 0; i < hat.size(); ++i) {
            double den = 0;
            for (int c = 0; c < g.n; ++c) den += std::norm(d[c][i]);
            b[i] = den > 0 ? std::conj(d[a][i]) * hat[i] / den : cplx(0.0);
        }
        const auto v = dft_inverse(g, b);
        std::copy(v.begin(), v.end(), G.component(a).begin());
    }
    return G;
}

namespace {

SpatialField forward_gradient(const SpatialField& f)
{
    const GridSpec& g = f.grid();
    SpatialField out(g, g.n);
    const int N = g.points;
    for (int cell = 0; cell < g.cells(); ++cell) {
        const int i = g.n == 1 ? cell : cell % N;
        const int j = g.n == 1 ? 0 : cell / N;
        out(cell, 0) = (f(g.cell_index(i + 1, j)) - f(cell)) / g.h();
        if (g.n == 2) out(cell, 1) = (f(g.cell_index(i, j + 1)) - f(cell)) / g.h();
    }
    return out;
}

} // namespace

SliceResult slice_norm(const SpatialField& f, Exponent p, double delta, SliceOrder order)
{
    const GridSpec& g = f.grid();
    if (!(delta > 0.0) || std::sqrt(delta) < g.h() * (1.0 - 1e-12))
        fail("funcspaces.slice_scale", "slice scale sqrt(delta) must be at least one cell width");
    if (p.reciprocal() > 1.0) fail("funcspaces.slice_exponent", "slice spaces need p >= 1");
    SliceResult r;
    SpatialField g_field;
    switch (order) {
    case SliceOrder::plain: g_field = f; break;
    case SliceOrder::grad: g_field = forward_gradient(f); break;
    case SliceOrder::div:
        g_field = divergence_preimage(f);
        r.upper_bound = true;
        break;
    }
    const auto m = ball_means(g, abs_sq(g_field), std::sqrt(delta));
    if (p.is_infinite()) {
        double s = 0;
        for (double v : m) s = std::max(s, v);
        r.value = std::sqrt(s);
    } else {
        r.value = outer_lp(g, m, p.value());
    }
    return r;
}

TentAtom make_atom(const GridSpec& g, int center, double radius, double beta, Exponent p, AtomShape shape,
                   std::uint64_t seed, int components)
{
    if (!(radius >= g.h() / 2.0)) fail("funcspaces.atom_geometry", "atom radius below half a cell");
    if (radius * radius < g.t_min)
        fail("funcspaces.atom_geometry", "r(B)^2 below t_min: the atom has no ladder support");
    if (center < 0 || center >= g.cells()) fail("funcspaces.atom_geometry", "center outside the grid");
    TentAtom a;
    a.center = center;
    a.radius = radius;
    a.beta = beta;
    a.p = p;
    a.field = SpaceTimeField(g, components);
    const auto cells = ball_cells(g, center, radius);
    a.ball_cells = static_cast<int>(cells.size());
    a.ball_measure = a.ball_cells * g.cell_volume();
    Rng rng(seed);
    for (int k = 0; k < g.levels; ++k) {
        if (g.time(k) > radius * radius) break;
        for (int c : cells) {
            if (shape == AtomShape::flat) {
                a.field(k, c, 0) = 1.0;
            } else {
                for (int comp = 0; comp < components; ++comp) a.field(k, c, comp) = cplx(rng.normal(), rng.normal());
            }
        }
    }
    const double current = std::sqrt(weighted_l2_sq(a.field, beta));
    if (!(current > 0.0)) fail("funcspaces.atom_geometry", "atom has empty quadrature support");
    const double target = std::pow(a.ball_measure, -(p.reciprocal() - 0.5));
    a.field *= target / current;
    return a;
}

bool atom_support_ok(const TentAtom& a)
{
    const GridSpec& g = a.field.grid();
    const auto cells = ball_cells(g, a.center, a.radius);
    std::vector<bool> inside(g.cells(), false);
    for (int c : cells) inside[c] = true;
    for (int k = 0; k < g.levels; ++k) {
        const bool t_ok = g.time(k) <= a.radius * a.radius;
        for (int comp = 0; comp < a.field.components(); ++comp)
            for (int c = 0; c < g.cells(); ++c)
                if ((!t_ok || !inside[c]) && a.field(k, c, comp) != cplx(0.0)) return false;
    }
    return true;
}

double atom_l2_beta(const TentAtom& a) { return std::sqrt(weighted_l2_sq(a.field, a.beta)); }

ApertureRatio aperture_ratio(const SpaceTimeField& F, const TentNormSpec& spec, double aperture2)
{
    if (!(aperture2 >= 1.0)) fail("funcspaces.spec", "aperture must be >= 1");
    ApertureRatio r;
    const double base = tent_norm(F, spec);
    if (!(base > 0.0)) return r;
    TentNormSpec wide = spec;
    wide.aperture = aperture2;
    r.ratio = tent_norm(F, wide) / base;
    r.defined = true;
    return r;
}

void validate_embedding_line(int n, const TentNormSpec& from, const TentNormSpec& to)
{
    if (from.beta == to.beta && from.p == to.p) return;
    if (!(from.beta > to.beta)) fail("embedding.line", "need beta0 > beta1");
    if (!(from.p < to.p)) fail("embedding.line", "need p0 < p1");
    const double a = 2.0 * from.beta - n * from.p.reciprocal();
    const double b = 2.0 * to.beta - n * to.p.reciprocal();
    if (std::abs(a - b) > kLineTolerance) fail("embedding.line", "2beta0 - n/p0 != 2beta1 - n/p1");
}

EmbeddingRecord embedding_check(const SpaceTimeField& F, const TentNormSpec& from, const TentNormSpec& to,
                                double budget)
{
    validate_embedding_line(F.grid().n, from, to);
    EmbeddingRecord r;
    r.budget = budget;
    r.from_norm = tent_norm(F, from);
    r.to_norm = tent_norm(F, to);
    r.ratio = r.from_norm > 0 ? r.to_norm / r.from_norm : 0.0;
    r.pass = r.ratio <= budget;
    return r;
}

std::string norm_csv_header() { return "kind,beta,p,aperture,carleson_deficit,value,n,points,levels,t_min,t_max"; }

std::string norm_csv_row(const TentNormSpec& s, double value, const GridSpec& g)
{
    std::ostringstream os;
    os << std::setprecision(17) << (s.kind == TentKind::tent ? "tent" : "z") << ',' << s.beta << ',' << s.p.str()
       << ',' << s.aperture << ',' << s.carleson_deficit << ',' << value << ',' << g.n << ',' << g.points << ','
       << g.levels << ',' << g.t_min << ',' << g.t_max;
    return os.str();
}

} // namespace tentkit
