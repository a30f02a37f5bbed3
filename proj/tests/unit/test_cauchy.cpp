#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tentkit/cauchy.hpp"
#include "tentkit/error.hpp"
#include "tentkit/families.hpp"
#include "tentkit/fourier.hpp"
#include "tentkit/spectral.hpp"

using namespace tentkit;

namespace {

GridSpec grid1(int points = 64, int levels = 24)
{
    const double h = 1.0 / points;
    return GridSpec::make(1, 1.0, points, 4.0 * h * h, 1.0 / 16.0, levels);
}

Semigroup identity_sg(const GridSpec& g) { return Semigroup(DiscreteGenerator(CoefficientField::identity(g))); }
Semigroup checker_sg(const GridSpec& g) { return Semigroup(DiscreteGenerator(CoefficientField::checkerboard(g, 0.125, 4.0))); }

SpatialField mode(const GridSpec& g, int k)
{
    const double tau = 2.0 * std::numbers::pi / g.period;
    return SpatialField::sample(g, [=](double x, double) { return std::polar(1.0, tau * k * x); });
}

struct ModeSymbols {
    double sigma; // discrete Laplacian eigenvalue
    cplx grad;    // forward-difference symbol
};

ModeSymbols symbols(const GridSpec& g, int k)
{
    const double xi = 2.0 * std::numbers::pi * k / g.period, h = g.h();
    return {4.0 / (h * h) * std::pow(std::sin(xi * h / 2.0), 2), (std::polar(1.0, xi * h) - 1.0) / h};
}

double rel_l2(const SpaceTimeField& a, const SpaceTimeField& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        num += std::norm(a.data()[i] - b.data()[i]);
        den += std::norm(b.data()[i]);
    }
    return std::sqrt(num / den);
}

} // namespace

TEST(IntegrationLadder, NodesEmbedTheGridLadder)
{
    auto g = grid1();
    auto lad = IntegrationLadder::for_grid(g);
    EXPECT_EQ(lad.nodes.front(), 0.0);
    for (std::size_t i = 1; i < lad.nodes.size(); ++i) EXPECT_GT(lad.nodes[i], lad.nodes[i - 1]);
    for (int k = 0; k < g.levels; ++k) EXPECT_EQ(lad.nodes[lad.grid_offset + k], g.time(k));
    EXPECT_LE(lad.nodes[1], IntegrationLadder::kDefaultDepth * g.t_min * g.rho());
}

TEST(TimeSource, BelowLadderHoldOrJoin)
{
    auto g = grid1();
    auto F = SpaceTimeField::sample(g, 1, [](double t, double x, double, int) { return cplx(t + x, 0.0); });
    auto held = TimeSource::from_field(F);
    auto first = F.level(0);
    EXPECT_EQ((held.at(0.5 * g.t_min) - first).max_abs(), 0.0);
    auto zero = SpatialField(g);
    auto joined = TimeSource::from_field(F, zero);
    EXPECT_LT((joined.at(0.5 * g.t_min) - 0.5 * first).max_abs(), 1e-14);
    // Between ladder nodes the samples are joined linearly.
    double tm = 0.5 * (g.time(3) + g.time(4));
    EXPECT_LT((held.at(tm) - 0.5 * (F.level(3) + F.level(4))).max_abs(), 1e-14);
    EXPECT_TRUE(TimeSource::zero(g, 1).is_zero());
}

TEST(Propagate, ConstantsAndHeat)
{
    auto g = grid1();
    auto sg = checker_sg(g);
    auto one = propagate(sg, SpatialField::constant(g, 1.0));
    for (auto v : one.data()) EXPECT_LT(std::abs(v - 1.0), 1e-12);

    auto id = identity_sg(g);
    auto u0 = gaussian_field(g, 3);
    auto u = propagate(id, u0);
    auto ref = heat_extension(u0, HeatSymbol::discrete);
    EXPECT_LT(rel_l2(u, ref), 1e-9);

    auto v = propagate(sg, u0);
    for (int k = 1; k < g.levels; ++k) {
        auto step = sg.apply(v.level(k - 1), g.time(k) - g.time(k - 1));
        EXPECT_LT((step - v.level(k)).l2_norm(), 1e-9 * v.level(k).l2_norm());
    }
}

TEST(LionsOp, ZeroSourceAndSingleModeClosedForm)
{
    auto g = grid1();
    auto sg = identity_sg(g);
    EXPECT_EQ(lions_op(sg, TimeSource::zero(g, 1)).max_abs(), 0.0);

    const int k = 3;
    auto e = mode(g, k);
    auto [sigma, gsym] = symbols(g, k);
    // F(s) = s e (one component); div_h = -G^H has symbol -conj(gsym).
    auto F = TimeSource::from_function(g, 1, [&](double s) { return s * e; });
    auto u = lions_op(sg, F);
    const cplx d = -std::conj(gsym);
    for (int l = 0; l < g.levels; ++l) {
        double t = g.time(l);
        double integral = (sigma * t - 1.0 + std::exp(-sigma * t)) / (sigma * sigma);
        auto expect = (d * integral) * e;
        EXPECT_LT((u.level(l) - expect).max_abs(), 0.02 * expect.max_abs());
        EXPECT_LT((u.level(l) - expect).max_abs(), 1e-9 * expect.max_abs()); // linear in s: exact slabs
    }
}

TEST(LionsGradOp, IsGradientOfLionsOp)
{
    auto g = grid1();
    auto sg = checker_sg(g);
    auto F = TimeSource::from_function(g, 1, [&](double s) {
        return SpaceTimeBumps::random(g, 4).at(g, 1, s);
    });
    auto u = lions_op(sg, F);
    auto du = lions_grad_op(sg, F);
    auto fd = gradient_field(sg.generator(), u);
    EXPECT_LT(rel_l2(du, fd), 1e-6);

    auto id = identity_sg(g);
    const int k = 2;
    auto e = mode(g, k);
    auto [sigma, gsym] = symbols(g, k);
    auto G = TimeSource::from_function(g, 1, [&](double) { return e; });
    auto grad = lions_grad_op(id, G);
    for (int l = 0; l < g.levels; l += 5) {
        double t = g.time(l);
        cplx amp = gsym * (-std::conj(gsym)) * (1.0 - std::exp(-sigma * t)) / sigma;
        EXPECT_LT((grad.level(l) - amp * e).max_abs(), 1e-9 * std::abs(amp));
    }
}

TEST(SourceOp, ConstantAndMode)
{
    auto g = grid1();
    EXPECT_EQ(source_op(checker_sg(g), TimeSource::zero(g, 1)).max_abs(), 0.0);
    auto one = SpatialField::constant(g, 1.0);
    auto u = source_op(checker_sg(g), TimeSource::from_function(g, 1, [&](double) { return one; }));
    for (int l = 0; l < g.levels; ++l)
        for (int c = 0; c < g.cells(); ++c) EXPECT_NEAR(u(l, c).real(), g.time(l), 1e-12);

    const int k = 5;
    auto e = mode(g, k);
    double sigma = symbols(g, k).sigma;
    auto v = source_op(identity_sg(g), TimeSource::from_function(g, 1, [&](double) { return e; }));
    for (int l = 0; l < g.levels; ++l) {
        double amp = (1.0 - std::exp(-g.time(l) * sigma)) / sigma;
        EXPECT_LT((v.level(l) - amp * e).max_abs(), 1e-10 * amp);
    }
}

TEST(Solve, SuperpositionAndL2Estimate)
{
    auto g = grid1();
    auto sg = checker_sg(g);
    CauchyProblem zero;
    EXPECT_EQ(solve(sg, zero).max_abs(), 0.0);

    auto bumps = SpaceTimeBumps::random(g, 7, 1);
    CauchyProblem p;
    p.u0 = gaussian_field(g, 1);
    p.F = TimeSource::from_field(bumps.sample(g, 1));
    p.f = TimeSource::from_field(SpaceTimeBumps::random(g, 8, 1).sample(g, 1));
    CauchyProblem a, b, c;
    a.u0 = p.u0;
    b.F = p.F;
    c.f = p.f;
    auto whole = solve(sg, p);
    auto parts = solve(sg, a) + solve(sg, b) + solve(sg, c);
    EXPECT_LT((whole - parts).max_abs(), 1e-12 * whole.max_abs());

    CauchyProblem q;
    q.u0 = p.u0;
    q.F = p.F;
    double C = l2_estimate_constant(sg, solve(sg, q), q);
    EXPECT_GT(C, 0.0);
    EXPECT_LT(C, 4.0);
}

TEST(WeakResidual, ConstantsAreExactAndNoiseIsLinear)
{
    auto g = grid1(64, 32);
    auto sg = checker_sg(g);
    auto bank = default_testbank(g);
    EXPECT_EQ(bank.size(), 12u);
    EXPECT_THROW(weak_residual(sg, SpaceTimeField(g), CauchyProblem{}, {}), Error);

    SpaceTimeField one(g);
    for (auto& v : one.data()) v = 1.0;
    CauchyProblem none;
    EXPECT_LT(weak_residual(sg, one, none, bank).max_residual, 1e-14);

    CauchyProblem p;
    p.u0 = gaussian_field(g, 2);
    EXPECT_LT(weak_residual(sg, solve(sg, p), p, bank).max_residual, 1e-3);

    // Noise on an exact solution: the residual is eps times that of the noise.
    SpaceTimeField noise(g);
    Rng rng(5);
    for (auto& v : noise.data()) v = rng.normal();
    std::vector<double> r;
    for (double eps : {1e-3, 2e-3, 4e-3}) {
        SpaceTimeField un = one;
        for (std::size_t i = 0; i < un.data().size(); ++i) un.data()[i] += eps * noise.data()[i];
        r.push_back(weak_residual(sg, un, none, bank).max_residual);
    }
    EXPECT_GT(r[0], 0.0);
    EXPECT_NEAR(r[1] / r[0], 2.0, 1e-9);
    EXPECT_NEAR(r[2] / r[1], 2.0, 1e-9);
}

TEST(Caccioppoli, ConstantAndSpikeSweep)
{
    auto g = grid1(128, 33);
    auto sg = checker_sg(g);
    SpaceTimeField one(g);
    for (auto& v : one.data()) v = 1.0;
    CauchyProblem none;
    CaccioppoliGeometry geo{g.time(4), g.time(10), g.time(20), 64, 0.1};
    auto rc = caccioppoli_check(sg, one, none, geo);
    EXPECT_EQ(rc.lhs_gradient, 0.0);
    EXPECT_LE(rc.lhs_trace, rc.rhs_trace);
    EXPECT_TRUE(rc.pass);

    SpatialField spike(g);
    spike(64) = 1.0 / g.h();
    CauchyProblem p;
    p.u0 = spike;
    auto u = solve(sg, p);
    Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        int ka = rng.integer(2, 10), kc = ka + rng.integer(2, 8), kb = kc + rng.integer(2, 10);
        CaccioppoliGeometry q{g.time(ka), g.time(kc), g.time(kb), rng.integer(32, 96), rng.uniform(0.05, 0.2)};
        auto rec = caccioppoli_check(sg, u, p, q);
        EXPECT_LE(rec.constant_trace, 64.0);
        EXPECT_LE(rec.constant_gradient, 64.0);
        EXPECT_TRUE(rec.pass);
    }
    EXPECT_THROW(caccioppoli_check(sg, u, p, {g.time(10), g.time(5), g.time(20), 64, 0.1}), Error);
}

TEST(Energy, ConstantSolution)
{
    auto g = grid1();
    auto sg = checker_sg(g);
    SpaceTimeField one(g);
    for (auto& v : one.data()) v = 1.0;
    auto rec = energy_tent_check(sg, one, CauchyProblem{}, -0.5, Exponent::finite(2.0));
    EXPECT_EQ(rec.grad_u, 0.0);
    EXPECT_EQ(rec.F_norm, 0.0);
    EXPECT_EQ(rec.f_norm, 0.0);
    EXPECT_TRUE(rec.pass);
}

TEST(Energy, HeatSolutionWithinBudget)
{
    auto g = grid1(128, 33);
    auto sg = checker_sg(g);
    CauchyProblem p;
    p.u0 = gaussian_field(g, 4);
    auto u = solve(sg, p);
    for (double beta : {-0.75, -0.5, -0.25}) {
        auto rec = energy_tent_check(sg, u, p, beta, Exponent::finite(2.0));
        EXPECT_GT(rec.grad_u, 0.0);
        EXPECT_LE(rec.constant, 64.0);
        EXPECT_TRUE(rec.pass);
    }
}

TEST(Duhamel, IdentitiesVanishForLaplacianAndConverge)
{
    auto g = grid1(64, 32);
    auto id = identity_sg(g);
    auto u0 = gaussian_field(g, 6);
    auto F = TimeSource::from_field(SpaceTimeBumps::random(g, 3, 1).sample(g, 1));
    auto r0 = duhamel_identities(id, id, u0, F);
    EXPECT_LT(r0.max_residual(), 1e-12);

    double prev = 0.0;
    for (int levels : {32, 63}) {
        auto gg = grid1(64, levels);
        auto sg = checker_sg(gg);
        auto lap = identity_sg(gg);
        auto rec = duhamel_identities(sg, lap, gaussian_field(gg, 6),
                                      TimeSource::from_field(SpaceTimeBumps::random(gg, 3, 1).sample(gg, 1)));
        ASSERT_TRUE(rec.lions && rec.semigroup_via_L && rec.semigroup_via_delta);
        EXPECT_LT(rec.max_residual(), 1e-2);
        if (prev > 0.0) EXPECT_LT(rec.max_residual(), prev);
        prev = rec.max_residual();
    }
    auto only_u0 = duhamel_identities(id, id, u0, std::nullopt);
    EXPECT_FALSE(only_u0.lions.has_value());
}

TEST(Traces, LabelsAndConvergence)
{
    EXPECT_EQ(trace_theory_label(-1.5, Exponent::finite(2.0), TraceMode::Lp), "unverified-by-theory");
    EXPECT_NE(trace_theory_label(-0.25, Exponent::finite(1.5), TraceMode::Lp), "unverified-by-theory");
    EXPECT_EQ(trace_theory_label(-0.75, Exponent::finite(1.5), TraceMode::Lp), "unverified-by-theory");
    EXPECT_NE(trace_theory_label(-0.5, Exponent::finite(4.0), TraceMode::slice_div), "unverified-by-theory");

    auto g = grid1(128, 33);
    auto sg = checker_sg(g);
    auto u0 = gaussian_field(g, 2);
    auto u = propagate(sg, u0);
    auto rec = trace_convergence(u, u0, TraceMode::Lp, Exponent::finite(2.0));
    EXPECT_TRUE(rec.decreasing);
    EXPECT_LT(rec.final_over_initial, 0.5);
    EXPECT_GT(rec.fitted_rate, 0.0);
    EXPECT_EQ(rec.times.front(), g.t_max);

    auto F = TimeSource::from_field(SpaceTimeBumps::random(g, 5, 1).sample(g, 1));
    auto w = lions_op(sg, F);
    auto pr = trace_convergence(w, std::nullopt, TraceMode::pairing);
    EXPECT_LT(pr.values.back(), pr.values.front());
}

TEST(Endpoint, LaplacianRatioIsOneOverRootTwo)
{
    // A = I, n = 1: |div symbol|^2 = sigma, so a cosine of amplitude a contributes
    // a^2/2 * (e^{-2 sigma t_min} - e^{-2 sigma t_max}) / 2 to the squared T^2_0
    // norm over the ladder, against a^2/2 to ||f||_2^2. The ratio tends to 1/sqrt 2.
    const int N = 128;
    const double h = 1.0 / N;
    auto g = GridSpec::make(1, 1.0, N, h * h, 4.0, 97);
    auto sg = identity_sg(g);
    const double tau = 2.0 * std::numbers::pi;
    auto f = SpatialField::sample(g, [&](double x, double) {
        return cplx(std::cos(tau * 2 * x) + 0.5 * std::cos(tau * 5 * x), 0.0);
    });
    double num = 0.0, den = 0.0;
    for (auto [k, a] : {std::pair{2, 1.0}, std::pair{5, 0.5}}) {
        double sigma = symbols(g, k).sigma;
        num += a * a / 2.0 * (std::exp(-2.0 * sigma * g.t_min) - std::exp(-2.0 * sigma * g.t_max)) / 2.0;
        den += a * a / 2.0;
    }
    const double truncated = std::sqrt(num / den);
    auto rec = endpoint_divergence_semigroup(sg, f, Exponent::finite(2.0));
    ASSERT_TRUE(rec.ratio.has_value());
    EXPECT_NEAR(*rec.ratio, truncated, 2e-3);
    EXPECT_NEAR(truncated, 1.0 / std::sqrt(2.0), 0.02);
    EXPECT_NEAR(rec.f_norm, std::sqrt(den), 1e-12);
    auto r1 = endpoint_divergence_semigroup(sg, f, Exponent::finite(1.0));
    EXPECT_FALSE(r1.ratio.has_value());
}
