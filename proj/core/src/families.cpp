#include "tentkit/families.hpp"

#include <cmath>
#include <numbers>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_offset(double d, double period)
{
    d = std::fmod(d, period);
    if (d > period / 2.0) d -= period;
    if (d < -period / 2.0) d += period;
    return d;
}

void remove_mean(SpatialField& f)
{
    for (int k = 0; k < f.components(); ++k) {
        const cplx m = f.mean(k);
        for (auto& v : f.component(k)) v -= m;
    }
}

} // namespace

std::string to_string(Family f)
{
    switch (f) {
    case Family::bandlimited: return "bandlimited";
    case Family::gaussian: return "gaussian";
    case Family::atoms: return "atoms";
    case Family::spikes: return "spikes";
    }
    return "bandlimited";
}

Family family_from_string(const std::string& name)
{
    for (auto f : {Family::bandlimited, Family::gaussian, Family::atoms, Family::spikes})
        if (to_string(f) == name) return f;
    fail("config.unknown_family", "unknown test family '" + name + "'");
}

SpatialField bandlimited_field(const GridSpec& g, std::uint64_t seed, const FamilyParams& params)
{
    require(params.k_lo >= 1 && params.k_hi >= params.k_lo, "family.invalid", "need 1 <= k_lo <= k_hi");
    require(params.k_hi < g.points / 2, "family.invalid", "band exceeds the grid Nyquist mode");
    Rng rng(seed);
    struct Mode {
        int k1, k2;
        double amp, phase;
    };
    std::vector<Mode> modes;
    while (static_cast<int>(modes.size()) < params.modes) {
        const int k1 = rng.integer(-params.k_hi, params.k_hi);
        const int k2 = g.n == 2 ? rng.integer(-params.k_hi, params.k_hi) : 0;
        const double r = std::sqrt(static_cast<double>(k1 * k1 + k2 * k2));
        if (r < params.k_lo || r > params.k_hi) continue;
        modes.push_back({k1, k2, rng.normal(), rng.uniform(0.0, kTwoPi)});
    }
    const double P = g.period;
    return SpatialField::sample(g, [&](double x, double y) {
        double v = 0.0;
        for (const auto& m : modes) v += m.amp * std::cos(kTwoPi * (m.k1 * x + m.k2 * y) / P + m.phase);
        return cplx(v, 0.0);
    });
}

SpatialField gaussian_field(const GridSpec& g, std::uint64_t seed)
{
    Rng rng(seed);
    const int count = rng.integer(2, 5);
    struct G {
        double x, y, width, amp;
    };
    std::vector<G> gs;
    for (int i = 0; i < count; ++i)
        gs.push_back({rng.uniform(0.0, g.period), g.n == 2 ? rng.uniform(0.0, g.period) : 0.0,
                      rng.uniform(4.0 * g.h(), g.period / 16.0), rng.normal()});
    SpatialField f = SpatialField::sample(g, [&](double x, double y) {
        double v = 0.0;
        for (const auto& q : gs) {
            const double dx = wrap_offset(x - q.x, g.period);
            const double dy = g.n == 2 ? wrap_offset(y - q.y, g.period) : 0.0;
            v += q.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * q.width * q.width));
        }
        return cplx(v, 0.0);
    });
    remove_mean(f);
    return f;
}

SpatialField atom_field(const GridSpec& g, std::uint64_t seed)
{
    Rng rng(seed);
    const int center = rng.integer(0, g.cells() - 1);
    const double r = rng.uniform(2.0, std::max(2.5, g.points / 16.0)) * g.h();
    const auto cells = ball_cells(g, center, r);
    SpatialField f(g, 1);
    const double height = 1.0 / (cells.size() * g.cell_volume());
    for (int c : cells) f(c) = height;
    remove_mean(f);
    return f;
}

SpatialField spike_field(const GridSpec& g, std::uint64_t seed)
{
    Rng rng(seed);
    SpatialField f(g, 1);
    const int count = rng.integer(1, 3);
    for (int i = 0; i < count; ++i)
        f(rng.integer(0, g.cells() - 1)) += (rng.uniform() < 0.5 ? -1.0 : 1.0) / g.cell_volume();
    return f;
}

SpatialField family_member(Family family, const GridSpec& g, std::uint64_t seed, const FamilyParams& params)
{
    switch (family) {
    case Family::bandlimited: return bandlimited_field(g, seed, params);
    case Family::gaussian: return gaussian_field(g, seed);
    case Family::atoms: return atom_field(g, seed);
    case Family::spikes: return spike_field(g, seed);
    }
    fail("config.unknown_family", "unknown test family");
}

SpatialField vector_member(Family family, const GridSpec& g, std::uint64_t seed, const FamilyParams& params)
{
    Rng rng(seed);
    SpatialField out(g, g.n);
    for (int a = 0; a < g.n; ++a) {
        const SpatialField c = family_member(family, g, rng.bits(), params);
        std::copy(c.component(0).begin(), c.component(0).end(), out.component(a).begin());
    }
    return out;
}

SpaceTimeBumps SpaceTimeBumps::random(const GridSpec& g, std::uint64_t seed, int components, int count)
{
    Rng rng(seed);
    SpaceTimeBumps b;
    b.period = g.period;
    b.n = g.n;
    if (count <= 0) count = rng.integer(1, 6);
    const double lo = std::log(g.t_min), hi = std::log(g.t_max);
    for (int i = 0; i < count; ++i) {
        Bump bump;
        bump.amplitude = rng.normal();
        bump.t = std::exp(rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo)));
        bump.x = rng.uniform(0.0, g.period);
        bump.y = g.n == 2 ? rng.uniform(0.0, g.period) : 0.0;
        bump.width = rng.uniform(0.3, 1.0);
        bump.comp = rng.integer(0, components - 1);
        b.bumps.push_back(bump);
    }
    return b;
}

cplx SpaceTimeBumps::operator()(double t, double x, double y, int comp) const
{
    double v = 0.0;
    for (const auto& b : bumps) {
        if (b.comp != comp) continue;
        const double lt = std::log(t / b.t);
        const double dx = wrap_offset(x - b.x, period);
        const double dy = n == 2 ? wrap_offset(y - b.y, period) : 0.0;
        v += b.amplitude * std::exp(-lt * lt / b.width) * std::exp(-(dx * dx + dy * dy) / b.t);
    }
    return cplx(v, 0.0);
}

SpaceTimeField SpaceTimeBumps::sample(const GridSpec& grid, int components) const
{
    return SpaceTimeField::sample(grid, components,
                                  [this](double t, double x, double y, int c) { return (*this)(t, x, y, c); });
}

SpatialField SpaceTimeBumps::at(const GridSpec& grid, int components, double t) const
{
    SpatialField f(grid, components);
    for (int c = 0; c < grid.cells(); ++c) {
        const auto x = grid.center(c);
        for (int k = 0; k < components; ++k) f(c, k) = (*this)(t, x[0], x[1], k);
    }
    return f;
}

} // namespace tentkit
