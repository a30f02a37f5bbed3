#include "tentkit/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

double set_distance(const GridSpec& g, const std::vector<int>& E, const std::vector<int>& F)
{
    double d = std::numeric_limits<double>::infinity();
    for (int a : E)
        for (int b : F) d = std::min(d, torus_distance(g, a, b));
    return d;
}

int random_cell(const GridSpec& g, Rng& rng) { return rng.integer(0, g.cells() - 1); }

// runs of grid indices below threshold, widest run containing p = 2 (or
// the nearest point to 2 when 2 is not on the grid)
std::pair<int, int> widest_run(const std::vector<double>& p, const std::vector<double>& sup, double threshold)
{
    int anchor = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (std::abs(p[i] - 2.0) < std::abs(p[anchor] - 2.0)) anchor = static_cast<int>(i);
    if (!(sup[anchor] < threshold)) return {-1, -1};
    int lo = anchor, hi = anchor;
    while (lo > 0 && sup[lo - 1] < threshold) --lo;
    while (hi + 1 < static_cast<int>(p.size()) && sup[hi + 1] < threshold) ++hi;
    return {lo, hi};
}

} // namespace

DecayRecord offdiagonal_probe(const Semigroup& sg, double t, double separation, int trials, std::uint64_t seed)
{
    const GridSpec& g = sg.grid();
    require(t > 0.0, "semigroup.negative_time", "probe needs t > 0");
    require(separation >= 2.0 * g.h(), "probe.separation", "separation must be at least 2h");
    require(trials > 0, "probe.separation", "at least one trial required");
    // largest distance two points can have on the torus
    const double reach = g.period / 2.0 * std::sqrt(static_cast<double>(g.n));
    require(separation < reach - 2.0 * g.h(), "probe.separation", "sets not separable on this torus");

    Rng rng(seed);
    DecayRecord rec;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<int> E, F;
        double dist = 0.0;
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            const double target = separation * rng.uniform(1.0, 2.0);
            const double rE = rng.uniform(0.5, 2.0) * g.h();
            const double rF = rng.uniform(0.5, 2.0) * g.h();
            const int cE = random_cell(g, rng);
            // F's center at distance target + rE + rF along a random direction
            const double reachF = target + rE + rF;
            const double ang = rng.uniform(0.0, 2.0 * 3.141592653589793);
            const auto x = g.center(cE);
            const int di = static_cast<int>(std::lround(reachF * (g.n == 1 ? 1.0 : std::cos(ang)) / g.h()));
            const int dj = g.n == 1 ? 0 : static_cast<int>(std::lround(reachF * std::sin(ang) / g.h()));
            const int i0 = static_cast<int>(std::lround(x[0] / g.h()));
            const int j0 = g.n == 1 ? 0 : static_cast<int>(std::lround(x[1] / g.h()));
            const int cF = g.cell_index(g.wrap(i0 + di), g.n == 1 ? 0 : g.wrap(j0 + dj));
            E = ball_cells(g, cE, rE);
            F = ball_cells(g, cF, rF);
            if (E.empty() || F.empty()) continue;
            dist = set_distance(g, E, F);
            placed = dist >= separation;
        }
        if (!placed) fail("probe.separation", "could not place separated sets on this torus");

        SpatialField cols(g, static_cast<int>(F.size()));
        for (std::size_t k = 0; k < F.size(); ++k) cols(F[k], static_cast<int>(k)) = 1.0;
        const SpatialField out = sg.apply(cols, t);
        Mat M(E.size(), F.size());
        for (std::size_t r = 0; r < E.size(); ++r)
            for (std::size_t k = 0; k < F.size(); ++k) M(r, k) = out(E[r], static_cast<int>(k));
        const double nrm = Eigen::JacobiSVD<Mat>(M).singularValues()(0);
        rec.samples.push_back({dist, t, nrm});
    }

    std::vector<double> xs, ys;
    double sum = 0.0;
    for (const auto& s : rec.samples) {
        sum += s.norm;
        if (s.norm > 0.0) {
            xs.push_back(s.distance * s.distance / s.t);
            ys.push_back(std::log(s.norm));
        }
    }
    rec.mean_norm = sum / rec.samples.size();
    if (xs.size() >= 2) {
        const LineFit fit = fit_line(xs, ys);
        rec.fitted_c = -fit.slope;
        rec.intercept = fit.intercept;
        rec.residual = fit.residual;
    }
    return rec;
}

ExponentEstimate estimate_exponents(const Semigroup& sg, const std::vector<double>& p_grid,
                                    const std::vector<double>& times, int trials, std::uint64_t seed,
                                    double threshold)
{
    const GridSpec& g = sg.grid();
    ExponentEstimate est;
    est.threshold = threshold;
    est.note = "indicative only: finite torus, p > 1 probed; Hardy-space endpoints p <= 1 not represented";
    for (double p : p_grid)
        if (p > 1.0 && std::isfinite(p)) est.p_grid.push_back(p);
    std::sort(est.p_grid.begin(), est.p_grid.end());
    if (est.p_grid.empty() || times.empty() || trials <= 0) {
        est.note += "; nothing to probe";
        return est;
    }

    Rng rng(seed);
    std::vector<SpatialField> inputs;
    for (int k = 0; k < trials; ++k) {
        SpatialField f(g, 1);
        if (k % 2 == 0) {
            const double r = rng.uniform(1.0, std::max(1.5, g.points / 8.0)) * g.h();
            for (int c : ball_cells(g, random_cell(g, rng), r)) f(c) = 1.0;
        } else {
            const int spikes = rng.integer(1, 4);
            for (int s = 0; s < spikes; ++s) f(random_cell(g, rng)) += rng.uniform() < 0.5 ? -1.0 : 1.0;
            if (f.max_abs() == 0.0) f(random_cell(g, rng)) = 1.0;
        }
        inputs.push_back(std::move(f));
    }

    const std::size_t P = est.p_grid.size();
    est.semigroup_sup.assign(P, 0.0);
    est.gradient_sup.assign(P, 0.0);
    for (const auto& f : inputs) {
        std::vector<double> fn(P);
        for (std::size_t i = 0; i < P; ++i) fn[i] = f.lp_norm(est.p_grid[i]);
        for (double t : times) {
            if (!(t > 0.0)) continue;
            const SpatialField u = sg.apply(f, t);
            SpatialField gu = sg.generator().gradient(u);
            gu *= std::sqrt(t);
            for (std::size_t i = 0; i < P; ++i) {
                const double p = est.p_grid[i];
                est.semigroup_sup[i] = std::max(est.semigroup_sup[i], u.lp_norm(p) / fn[i]);
                est.gradient_sup[i] = std::max(est.gradient_sup[i], gu.lp_norm(p) / fn[i]);
            }
        }
    }
    const auto [plo, phi] = widest_run(est.p_grid, est.semigroup_sup, threshold);
    const auto [qlo, qhi] = widest_run(est.p_grid, est.gradient_sup, threshold);
    if (plo >= 0) {
        est.p_lo = est.p_grid[plo];
        est.p_hi = est.p_grid[phi];
        est.p_covers_grid = plo == 0 && phi == static_cast<int>(P) - 1;
    }
    if (qlo >= 0) {
        est.q_lo = est.p_grid[qlo];
        est.q_hi = est.p_grid[qhi];
        est.q_covers_grid = qlo == 0 && qhi == static_cast<int>(P) - 1;
    }
    return est;
}

} // namespace tentkit
