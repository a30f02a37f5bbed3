#include <algorithm>
#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "tentkit/error.hpp"
#include "tentkit/families.hpp"
#include "tentkit/funcspaces.hpp"

using namespace tentkit;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

GridSpec grid1(int points = 128)
{
    const double h = 1.0 / points;
    return GridSpec::make(1, 1.0, points, 4.0 * h * h, 1.0 / 16.0, 17);
}

GridSpec grid2(int points = 32)
{
    const double h = 1.0 / points;
    return GridSpec::make(2, 1.0, points, 4.0 * h * h, 1.0 / 16.0, 12);
}

SpaceTimeField random_field(const GridSpec& g, std::uint64_t seed, int comps = 1)
{
    return SpaceTimeBumps::random(g, seed, comps).sample(g, comps);
}

TentNormSpec spec(double beta, double p, double aperture = 1.0)
{
    TentNormSpec s;
    s.beta = beta;
    s.p = std::isinf(p) ? Exponent::infinity() : Exponent::finite(p);
    s.aperture = aperture;
    return s;
}

// sum_k w_k t_k^{-2 beta} h^n sum_x |F|^2 with w the piecewise-linear dt weights.
double direct_weighted_sq(const SpaceTimeField& F, double beta)
{
    const GridSpec& g = F.grid();
    auto w = dt_weights(g);
    double s = 0.0;
    for (int k = 0; k < g.levels; ++k) {
        double lev = 0.0;
        for (int c = 0; c < g.cells(); ++c)
            for (int m = 0; m < F.components(); ++m) lev += std::norm(F(k, c, m));
        s += w[k] * std::pow(g.time(k), -2.0 * beta) * lev * g.cell_volume();
    }
    return s;
}

} // namespace

TEST(TentNorm, ZeroField)
{
    auto g = grid1();
    SpaceTimeField Z(g);
    for (double p : {0.5, 1.0, 2.0, 4.0, kInf}) EXPECT_EQ(tent_norm(Z, spec(-0.25, p)), 0.0);
    TentNormSpec z = spec(0.0, 2.0);
    z.kind = TentKind::z;
    EXPECT_EQ(tent_norm(Z, z), 0.0);
}

TEST(TentNorm, P2IsWeightedL2)
{
    for (auto g : {grid1(), grid2()}) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            auto F = random_field(g, seed, 2);
            for (double beta : {-0.5, 0.0, 0.3}) {
                double oracle = std::sqrt(direct_weighted_sq(F, beta));
                EXPECT_NEAR(tent_norm(F, spec(beta, 2.0)), oracle, 1e-10 * oracle);
                EXPECT_NEAR(weighted_l2_sq(F, beta), oracle * oracle, 1e-10 * oracle * oracle);
            }
        }
    }
}

TEST(TentNorm, MonotoneInAperture)
{
    auto g = grid1();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto F = random_field(g, seed);
        for (double p : {0.5, 1.0, 3.0}) {
            double prev = 0.0;
            for (double a : {1.0, 1.5, 2.0, 4.0}) {
                double v = tent_norm(F, spec(-0.2, p, a));
                // Larger apertures see supersets of cells.
                EXPECT_GE(v, prev * (1.0 - 1e-12));
                prev = v;
            }
        }
    }
}

TEST(TentNorm, QuasiTriangleBelowOne)
{
    auto g = grid1();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto F = random_field(g, seed), G = random_field(g, 100 + seed);
        for (double p : {0.5, 0.8, 1.0}) {
            auto s = spec(-0.1, p);
            double lhs = std::pow(tent_norm(F + G, s), p);
            double rhs = std::pow(tent_norm(F, s), p) + std::pow(tent_norm(G, s), p);
            EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
        }
    }
}

TEST(TentNorm, ParabolicScalingOnNestedGrids)
{
    // F_l(t, x) = F(l^2 t, l x) about the torus center; both bumps sit well
    // inside the domain and the ladder, so the change of variables is exact
    // up to quadrature.
    const int N = 1024;
    const double h = 1.0 / N;
    auto g = GridSpec::make(1, 1.0, N, 4.0 * h * h, 1.0 / 64.0, 57);
    auto bump = [](double t, double x) {
        double d = x - 0.5;
        return std::exp(-d * d / (0.002)) * std::exp(-std::pow(std::log(t / 1e-3), 2) / 2.0);
    };
    auto F = SpaceTimeField::sample(g, 1, [&](double t, double x, double, int) { return cplx(bump(t, x), 0.0); });
    const double lam = 2.0;
    auto Fl = SpaceTimeField::sample(g, 1, [&](double t, double x, double, int) {
        return cplx(bump(lam * lam * t, lam * (x - 0.5) + 0.5), 0.0);
    });
    for (double beta : {-0.5, -0.25, 0.0}) {
        for (double p : {1.0, 2.0, 4.0}) {
            double expect = std::pow(lam, 2.0 * beta - 1.0 - 1.0 / p);
            double got = tent_norm(Fl, spec(beta, p)) / tent_norm(F, spec(beta, p));
            EXPECT_NEAR(got / expect, 1.0, 0.03) << "beta=" << beta << " p=" << p;
        }
    }
}

TEST(Carleson, ConstantFieldReachesHorizon)
{
    const int N = 64;
    const double h = 1.0 / N;
    auto g = GridSpec::make(1, 1.0, N, 4.0 * h * h, 0.01, 12);
    SpaceTimeField one(g);
    for (auto& v : one.data()) v = 1.0;
    // Radii h 2^m include 0.125 with r^2 > t_max, so the box integral saturates.
    double expect = std::sqrt(g.t_max - g.t_min);
    EXPECT_NEAR(carleson_norm(one, spec(0.0, kInf)), expect, 1e-12);
    EXPECT_NEAR(tent_norm(one, spec(0.0, kInf)), expect, 1e-12);
}

TEST(Carleson, SingleWhitneyCubeMatchesExhaustiveSup)
{
    const int N = 64;
    const double h = 1.0 / N;
    auto g = GridSpec::make(1, 1.0, N, 4.0 * h * h, 0.05, 16);
    SpaceTimeField F(g);
    const int k0 = 6, c0 = 20;
    const double t0 = g.time(k0);
    for (int x : ball_cells(g, c0, std::sqrt(t0))) F(k0, x) = 1.0;
    auto s = spec(0.0, kInf);
    // Exhaustive sup over the dyadic ball family, written out directly.
    double best = 0.0;
    for (double r = h; ; r *= 2.0) {
        bool covers = ball_stencil(g, r).covers_torus;
        auto wk = dt_weights(g, g.t_min, std::min(r * r, g.t_max));
        for (int c = 0; c < g.cells(); ++c) {
            auto cells = ball_cells(g, c, r);
            double v = 0.0;
            for (int k = 0; k < g.levels; ++k) {
                double m = 0.0;
                for (int x : cells) m += std::norm(F(k, x));
                v += wk[k] * m / cells.size();
            }
            best = std::max(best, std::sqrt(v));
        }
        if (covers) break;
    }
    EXPECT_NEAR(carleson_norm(F, s), best, 1e-12 * best);
    EXPECT_GT(best, 0.0);
}

TEST(ZNorm, BandAgainstTentAtP2)
{
    auto g = grid1();
    double lo = 1e9, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto F = random_field(g, seed);
        auto t = spec(-0.25, 2.0);
        auto z = t;
        z.kind = TentKind::z;
        double r = z_norm(F, z) / tent_norm(F, t);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GE(lo, 0.25);
    EXPECT_LE(hi, 4.0);
}

TEST(SliceNorm, PlainIdentities)
{
    auto g = grid2();
    SpatialField z(g);
    EXPECT_EQ(slice_norm(z, Exponent::finite(2.0), 0.01, SliceOrder::plain).value, 0.0);
    auto f = gaussian_field(g, 3);
    for (double d : {0.001, 0.01, 0.05})
        EXPECT_NEAR(slice_norm(f, Exponent::finite(2.0), d, SliceOrder::plain).value, f.l2_norm(), 1e-12);
    auto c = SpatialField::constant(g, 3.0);
    for (double p : {1.0, 2.0, 5.0})
        EXPECT_NEAR(slice_norm(c, Exponent::finite(p), 0.01, SliceOrder::plain).value, 3.0, 1e-12); // period 1
    EXPECT_THROW(slice_norm(f, Exponent::finite(2.0), 0.5 * g.h() * g.h(), SliceOrder::plain), Error);
    EXPECT_TRUE(slice_norm(f, Exponent::finite(2.0), 0.01, SliceOrder::div).upper_bound);
}

TEST(SliceNorm, ConstantScalesWithPeriod)
{
    const double P = 2.0;
    const int N = 64;
    auto g = GridSpec::make(1, P, N, 4.0 * (P / N) * (P / N), 0.25, 10);
    auto c = SpatialField::constant(g, 1.5);
    for (double p : {1.0, 2.0, 3.0})
        EXPECT_NEAR(slice_norm(c, Exponent::finite(p), 0.01, SliceOrder::plain).value, 1.5 * std::pow(P, 1.0 / p),
                    1e-12);
}

TEST(Divergence, PreimageInvertsDiv)
{
    auto g = grid2();
    auto f = gaussian_field(g, 8);
    auto G = divergence_preimage(f);
    ASSERT_EQ(G.components(), 2);
    // Backward-difference divergence, the negative adjoint of the forward gradient.
    SpatialField d(g);
    for (int i = 0; i < g.points; ++i)
        for (int j = 0; j < g.points; ++j) {
            int c = g.cell_index(i, j);
            d(c) = (G(c, 0) - G(g.cell_index(g.wrap(i - 1), j), 0) + G(c, 1) - G(g.cell_index(i, g.wrap(j - 1)), 1)) /
                   g.h();
        }
    auto target = f - SpatialField::constant(g, f.mean());
    EXPECT_LT((d - target).max_abs(), 1e-9 * f.max_abs());
}

TEST(Atoms, FlatAtomConstantAndNormalisation)
{
    auto g = grid1(256);
    for (double p : {0.5, 1.0, 2.0}) {
        for (double beta : {-0.5, 0.0}) {
            const double r = 8.0 * g.h();
            auto a = make_atom(g, 100, r, beta, Exponent::finite(p), AtomShape::flat);
            EXPECT_TRUE(atom_support_ok(a));
            double target = std::pow(a.ball_measure, -(1.0 / p - 0.5));
            EXPECT_NEAR(atom_l2_beta(a), target, 1e-10 * target);
            // Solve for the constant: c^2 sum_{t_k <= r^2} w_k (full-ladder weights) t_k^{-2 beta} |B| = target^2.
            auto w = dt_weights(g);
            double q = 0.0;
            for (int k = 0; k < g.levels; ++k)
                if (g.time(k) <= r * r) q += w[k] * std::pow(g.time(k), -2.0 * beta);
            double c = target / std::sqrt(q * a.ball_measure);
            double vmax = 0.0;
            for (int k = 0; k < g.levels; ++k)
                for (int x = 0; x < g.cells(); ++x) {
                    double v = std::abs(a.field(k, x));
                    if (v == 0.0) continue;
                    EXPECT_NEAR(v, c, 1e-10 * c);
                    vmax = std::max(vmax, v);
                }
            EXPECT_GT(vmax, 0.0);
        }
    }
}

TEST(Atoms, SupportAndUniformTentBound)
{
    auto g = grid1(256);
    Rng rng(11);
    const double beta = -0.25, p = 1.0;
    double lo = 1e9, hi = 0.0;
    for (int i = 0; i < 50; ++i) {
        int center = rng.integer(0, g.cells() - 1);
        double r = std::sqrt(g.t_min) * std::exp2(rng.uniform(0.0, 3.0));
        auto a = make_atom(g, center, r, beta, Exponent::finite(p), AtomShape::random, 1000 + i);
        EXPECT_TRUE(atom_support_ok(a));
        for (int k = 0; k < g.levels; ++k)
            for (int x = 0; x < g.cells(); ++x)
                if (g.time(k) > r * r || torus_distance(g, center, x) >= r) EXPECT_EQ(a.field(k, x), cplx(0.0));
        double v = tent_norm(a.field, spec(beta, p));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LE(hi / lo, 16.0);
    EXPECT_THROW(make_atom(g, 0, 0.5 * std::sqrt(g.t_min), beta, Exponent::finite(p), AtomShape::flat), Error);
}

TEST(Aperture, RatioProperties)
{
    auto g = grid1();
    auto F = random_field(g, 4);
    auto r = aperture_ratio(F, spec(0.0, 1.0), 1.0);
    EXPECT_TRUE(r.defined);
    EXPECT_NEAR(r.ratio, 1.0, 1e-14);
    SpaceTimeField Z(g);
    EXPECT_FALSE(aperture_ratio(Z, spec(0.0, 1.0), 2.0).defined);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto G = random_field(g, seed);
        auto q = aperture_ratio(G, spec(-0.3, 1.0), 2.0);
        EXPECT_GE(q.ratio, 1.0 - 1e-12);
        EXPECT_LE(q.ratio, 2.0 * 8.0);
    }
}

TEST(Embedding, IdentityAndLineCheck)
{
    auto g = grid1();
    auto F = random_field(g, 2);
    auto s = spec(0.0, 1.0);
    auto rec = embedding_check(F, s, s);
    EXPECT_NEAR(rec.ratio, 1.0, 1e-14);
    EXPECT_TRUE(rec.pass);
    // (0, 1) -> (beta1, 2) on the line 2 beta - 1/p = const: beta1 = -1/4.
    auto to = spec(-0.25, 2.0);
    EXPECT_NO_THROW(validate_embedding_line(1, s, to));
    EXPECT_THROW(validate_embedding_line(1, s, spec(-0.2, 2.0)), Error);
    EXPECT_THROW(embedding_check(F, s, spec(0.1, 2.0)), Error);
}

TEST(Embedding, RandomFieldsWithinBudget)
{
    auto g = grid1();
    auto from = spec(0.0, 1.0), to = spec(-0.25, 2.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto rec = embedding_check(random_field(g, seed), from, to, 32.0);
        worst = std::max(worst, rec.ratio);
        EXPECT_TRUE(rec.pass) << "seed " << seed << " ratio " << rec.ratio;
    }
    EXPECT_GT(worst, 0.0);
}

TEST(NormCsv, HeaderAndRowAgree)
{
    auto g = grid1();
    auto head = norm_csv_header();
    auto row = norm_csv_row(spec(-0.25, 2.0), 1.5, g);
    EXPECT_EQ(std::count(head.begin(), head.end(), ','), std::count(row.begin(), row.end(), ','));
}
