#include "tentkit/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "tentkit/error.hpp"
#include "tentkit/fourier.hpp"

namespace tentkit {

namespace {

double psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// Smooth step: 0 at x <= 0, 1 at x >= 1.
double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = psi(x);
    return a / (a + psi(1.0 - x));
}

double partition_residual(const GridSpec& g, const LPFamily& fam)
{
    const auto& w = wavenumbers(g);
    double worst = 0.0;
    for (double r : w.modulus) {
        if (r == 0.0) continue;
        double s = 0.0;
        for (int j = fam.j_min; j <= fam.j_max; ++j) s += fam.symbol(j, r);
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

NormMeta base_meta(const GridSpec& g, const LPFamily& fam)
{
    NormMeta m;
    m.j_min = fam.j_min;
    m.j_max = fam.j_max;
    m.partition_residual = partition_residual(g, fam);
    return m;
}

// All blocks' spectra, one component at a time, scaled by 2^{js}.
std::vector<std::vector<cplx>> weighted_blocks(const SpatialField& f, double s, const LPFamily& fam, int comp)
{
    const GridSpec& g = f.grid();
    const auto& w = wavenumbers(g);
    const auto hat = dft_forward(g, f.component(comp));
    std::vector<std::vector<cplx>> blocks;
    for (int j = fam.j_min; j <= fam.j_max; ++j) {
        std::vector<cplx> b(hat.size());
        bool any = false;
        const double weight = std::pow(2.0, j * s);
        for (std::size_t i = 0; i < hat.size(); ++i) {
            const double sym = fam.symbol(j, w.modulus[i]);
            if (sym != 0.0) any = true;
            b[i] = weight * sym * hat[i];
        }
        if (!any) {
            blocks.emplace_back();
            continue;
        }
        blocks.push_back(dft_inverse(g, b));
    }
    return blocks;
}

double lp_of(const GridSpec& g, const std::vector<double>& abs_sq_vals, double p)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : abs_sq_vals) m = std::max(m, v);
        return std::sqrt(m);
    }
    std::vector<double> v(abs_sq_vals.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(abs_sq_vals[i], p / 2.0);
    return std::pow(g.cell_volume() * pairwise_sum(v), 1.0 / p);
}

} // namespace

double LPFamily::theta(double r)
{
    r = std::abs(r);
    if (r <= kInner) return 1.0;
    if (r >= kOuter) return 0.0;
    return smooth_step((kOuter - r) / (kOuter - kInner));
}

double LPFamily::symbol(int j, double modulus) const
{
    return chi(std::ldexp(modulus, -j));
}

LPFamily LPFamily::for_grid(const GridSpec& g)
{
    const auto& w = wavenumbers(g);
    double lo = 0, hi = 0;
    for (double r : w.modulus) {
        if (r == 0.0) continue;
        lo = lo == 0.0 ? r : std::min(lo, r);
        hi = std::max(hi, r);
    }
    LPFamily fam;
    // chi_j is nonzero only for 0.65 * 2^j < |xi| < 1.7 * 2^j
    fam.j_min = static_cast<int>(std::floor(std::log2(lo / kOuter)));
    fam.j_max = static_cast<int>(std::ceil(std::log2(hi / (kInner / 2.0))));
    return fam;
}

SpatialField lp_block(const SpatialField& f, int j, const LPFamily& fam)
{
    if (!fam.contains(j)) fail("spectral.band", "block index " + std::to_string(j) + " outside the resolvable band");
    const auto& w = wavenumbers(f.grid());
    std::vector<double> sym(w.modulus.size());
    for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = fam.symbol(j, w.modulus[i]);
    return apply_symbol(f, sym);
}

NormResult hardy_sobolev_norm(const SpatialField& f, const SpaceParams& params, const LPFamily& fam)
{
    const GridSpec& g = f.grid();
    NormResult res;
    res.meta = base_meta(g, fam);
    std::vector<double> square(g.cells(), 0.0);
    for (int c = 0; c < f.components(); ++c)
        for (const auto& b : weighted_blocks(f, params.s(), fam, c))
            for (std::size_t i = 0; i < b.size(); ++i) square[i] += std::norm(b[i]);
    const double p = params.p().value();
    if (params.p().is_infinite()) {
        res.meta.surrogate = true;
        res.meta.note = "p = inf: supremum of the square function, not the bmo-type norm";
    }
    res.value = lp_of(g, square, p);
    return res;
}

NormResult besov_norm(const SpatialField& f, const SpaceParams& params, const LPFamily& fam)
{
    const GridSpec& g = f.grid();
    NormResult res;
    res.meta = base_meta(g, fam);
    const int nb = fam.j_max - fam.j_min + 1;
    std::vector<std::vector<double>> sq(nb, std::vector<double>(g.cells(), 0.0));
    std::vector<bool> present(nb, false);
    for (int c = 0; c < f.components(); ++c) {
        auto blocks = weighted_blocks(f, params.s(), fam, c);
        for (int b = 0; b < nb; ++b) {
            if (blocks[b].empty()) continue;
            present[b] = true;
            for (int i = 0; i < g.cells(); ++i) sq[b][i] += std::norm(blocks[b][i]);
        }
    }
    const bool inf = params.p().is_infinite();
    const double p = params.p().value();
    std::vector<double> terms;
    double sup = 0.0;
    for (int b = 0; b < nb; ++b) {
        if (!present[b]) continue;
        const double nrm = lp_of(g, sq[b], p);
        if (inf)
            sup = std::max(sup, nrm);
        else
            terms.push_back(std::pow(nrm, p));
    }
    res.value = inf ? sup : std::pow(pairwise_sum(terms), 1.0 / p);
    return res;
}

FractionalResult fractional_laplacian(const SpatialField& f, double order)
{
    if (!(order >= -2.0 && order <= 2.0)) fail("spectral.order", "order must lie in [-2, 2]");
    FractionalResult r;
    const auto& w = wavenumbers(f.grid());
    std::vector<double> sym(w.modulus.size());
    for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = w.modulus[i] == 0.0 ? 0.0 : std::pow(w.modulus[i], order);
    if (order < 0.0) {
        const double scale = std::max(1.0, f.max_abs());
        for (int c = 0; c < f.components(); ++c)
            if (std::abs(f.mean(c)) > 1e-12 * scale) {
                r.warning = true;
                r.note = "negative order on data with nonzero mean: constant component annihilated";
            }
    }
    r.field = apply_symbol(f, sym);
    return r;
}

namespace {

std::vector<double> heat_symbol_base(const GridSpec& g, HeatSymbol kind)
{
    if (kind == HeatSymbol::discrete) return discrete_laplacian_symbol(g);
    const auto& w = wavenumbers(g);
    std::vector<double> s(w.modulus.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = w.modulus[i] * w.modulus[i];
    return s;
}

std::vector<cplx> gradient_symbol(const GridSpec& g, int axis, HeatSymbol kind)
{
    if (kind == HeatSymbol::discrete) return forward_difference_symbol(g, axis);
    const auto& w = wavenumbers(g);
    std::vector<cplx> s(g.cells());
    for (int c = 0; c < g.cells(); ++c) {
        const bool nyq = axis == 0 ? w.nyquist1[c] : w.nyquist2[c];
        s[c] = nyq ? cplx(0.0) : cplx(0.0, axis == 0 ? w.xi1[c] : w.xi2[c]);
    }
    return s;
}

} // namespace

SpatialField heat_multiplier(const SpatialField& f, double t, HeatSymbol kind)
{
    if (!(t >= 0.0)) fail("spectral.time", "heat multiplier needs t >= 0");
    if (t == 0.0) return f;
    auto s = heat_symbol_base(f.grid(), kind);
    for (auto& v : s) v = std::exp(-t * v);
    return apply_symbol(f, s);
}

SpaceTimeField heat_extension(const SpatialField& f, HeatSymbol kind)
{
    const GridSpec& g = f.grid();
    SpaceTimeField out(g, f.components());
    const auto base = heat_symbol_base(g, kind);
    for (int c = 0; c < f.components(); ++c) {
        const auto hat = dft_forward(g, f.component(c));
        for (int k = 0; k < g.levels; ++k) {
            const double t = g.time(k);
            std::vector<cplx> b(hat.size());
            for (std::size_t i = 0; i < hat.size(); ++i) b[i] = std::exp(-t * base[i]) * hat[i];
            const auto v = dft_inverse(g, b);
            std::copy(v.begin(), v.end(), out.slice(k, c).begin());
        }
    }
    return out;
}

SpaceTimeField gradient_heat_extension(const SpatialField& f, HeatSymbol kind)
{
    const GridSpec& g = f.grid();
    if (f.components() != 1) fail("spectral.shape", "gradient extension expects a scalar field");
    SpaceTimeField out(g, g.n);
    const auto base = heat_symbol_base(g, kind);
    const auto hat = dft_forward(g, f.component(0));
    std::vector<std::vector<cplx>> grads;
    for (int a = 0; a < g.n; ++a) grads.push_back(gradient_symbol(g, a, kind));
    for (int k = 0; k < g.levels; ++k) {
        const double t = g.time(k);
        for (int a = 0; a < g.n; ++a) {
            std::vector<cplx> b(hat.size());
            for (std::size_t i = 0; i < hat.size(); ++i) b[i] = grads[a][i] * std::exp(-t * base[i]) * hat[i];
            const auto v = dft_inverse(g, b);
            std::copy(v.begin(), v.end(), out.slice(k, a).begin());
        }
    }
    return out;
}

SpatialField spectral_gradient(const SpatialField& f)
{
    const GridSpec& g = f.grid();
    if (f.components() != 1) fail("spectral.shape", "gradient expects a scalar field");
    SpatialField out(g, g.n);
    const auto hat = dft_forward(g, f.component(0));
    for (int a = 0; a < g.n; ++a) {
        const auto s = gradient_symbol(g, a, HeatSymbol::continuous);
        std::vector<cplx> b(hat.size());
        for (std::size_t i = 0; i < hat.size(); ++i) b[i] = s[i] * hat[i];
        const auto v = dft_inverse(g, b);
        std::copy(v.begin(), v.end(), out.component(a).begin());
    }
    return out;
}

} // namespace tentkit
