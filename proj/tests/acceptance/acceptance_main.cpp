// Acceptance harness: one PASS/FAIL line per criterion, tolerances pinned here.
// Usage: tentkit_acceptance [criterion ...]   (no arguments runs all 13)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tentkit/cauchy.hpp"
#include "tentkit/coefficients.hpp"
#include "tentkit/error.hpp"
#include "tentkit/exponents.hpp"
#include "tentkit/families.hpp"
#include "tentkit/funcspaces.hpp"
#include "tentkit/generator.hpp"
#include "tentkit/numerics.hpp"
#include "tentkit/semigroup.hpp"
#include "tentkit/spectral.hpp"
#include "tentkit/verify.hpp"

using namespace tentkit;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel_field(const SpatialField& a, const SpatialField& b) { return (a - b).l2_norm() / b.l2_norm(); }

double rate(double coarse, double fine) { return std::log2(coarse / fine); }

GridSpec grid1(int points, double t_min, double t_max, int levels)
{
    return GridSpec::make(1, 1.0, points, t_min, t_max, levels);
}

// ---- 1 ------------------------------------------------------------------------

Outcome exponent_arithmetic()
{
    Outcome o;
    Rng rng(101);
    double worst_s = 0.0, worst_tilde = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int n = 1 + i % 3;
        const ExponentProfile lap = ExponentProfile::laplacian(n);
        const double s = rng.uniform(-1.0, 1.0);
        const double beta = rng.uniform(-0.999, 2.0);
        worst_s = std::max(worst_s, rel(p_minus_s(lap, s).value(), n / (n + s + 1.0)));
        worst_tilde = std::max(worst_tilde, rel(p_tilde(lap, beta).value(), n / (n + 2.0 * beta + 2.0)));
    }
    o.check(worst_s <= 1e-12, "p_-(s,-Laplacian) = n/(n+s+1) on 1e4 points: max rel err " + sci(worst_s) + " (tol 1e-12)");
    o.check(worst_tilde <= 1e-12,
            "p~(beta) = n/(n+2beta+2) on 1e4 points: max rel err " + sci(worst_tilde) + " (tol 1e-12)");

    double worst_one = 0.0, worst_limit = 0.0;
    for (int i = 0; i < 20; ++i) {
        const int n = 3 + i % 3;
        // strict invariant: n/(n+1) <= p_- < 2n/(n+2), q_+ > 2
        const double inv_hi = (n + 1.0) / n, inv_lo = (n + 2.0) / (2.0 * n);
        const Exponent pm = Exponent::from_reciprocal(rng.uniform(inv_lo + 1e-6, inv_hi));
        const Exponent pms = Exponent::from_reciprocal(rng.uniform(inv_lo + 1e-6, inv_hi));
        const Exponent qp = Exponent::from_reciprocal(rng.uniform(0.0, 0.49));
        const Exponent qps = Exponent::from_reciprocal(rng.uniform(0.0, 0.49));
        const ExponentProfile prof = ExponentProfile::make(n, pm, qp, pms, qps);
        worst_one = std::max(worst_one, std::abs(p_tilde(prof, beta_L(prof)).value() - 1.0));
        // 1/p~ is affine near beta = -1: linear extrapolation from two nearby points
        const double limit = 2.0 * p_tilde(prof, -1.0 + 1e-6).reciprocal() - p_tilde(prof, -1.0 + 2e-6).reciprocal();
        worst_limit = std::max(worst_limit, std::abs(limit - (1.0 - qps.reciprocal())));
    }
    o.check(worst_one <= 1e-12, "p~_L(beta(L)) = 1 on 20 random profiles: max err " + sci(worst_one) + " (tol 1e-12)");
    o.check(worst_limit <= 1e-12,
            "beta -> -1 limit of 1/p~ equals 1/q_+(L*)' on 20 profiles: max err " + sci(worst_limit) + " (tol 1e-12)");
    return o;
}

// ---- 2 ------------------------------------------------------------------------

Outcome fubini_identities()
{
    Outcome o;
    double worst_tent = 0.0, worst_slice = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 2;
        const GridSpec g = n == 1 ? GridSpec::make(1, 1.0, 128, 1.0 / 16384, 1.0 / 16, 24)
                                  : GridSpec::make(2, 1.0, 32, 1.0 / 1024, 1.0 / 16, 16);
        Rng rng(200 + i);
        SpaceTimeField F = SpaceTimeField::sample(g, 1, [&](double, double, double, int) {
            return cplx(rng.normal(), rng.normal());
        });
        const double beta = rng.uniform(-0.75, 0.75);
        TentNormSpec spec;
        spec.beta = beta;
        const double tent = tent_norm(F, spec);
        worst_tent = std::max(worst_tent, rel(tent * tent, weighted_l2_sq(F, beta)));

        const SpatialField f = F.level(i % g.levels);
        const double delta = std::pow(g.h() * (1 + i % 5), 2);
        const double slice = slice_norm(f, Exponent::finite(2.0), delta, SliceOrder::plain).value;
        worst_slice = std::max(worst_slice, rel(slice, f.l2_norm()));
    }
    o.check(worst_tent <= 1e-10,
            "||F||_{T^2_beta}^2 = weighted quadrature, 50 fields: max rel err " + sci(worst_tent) + " (tol 1e-10)");
    o.check(worst_slice <= 1e-10,
            "slice norm at p=2 = ||f||_2, 50 fields: max rel err " + sci(worst_slice) + " (tol 1e-10)");
    return o;
}

// ---- 3 ------------------------------------------------------------------------

// F(t, x) = time bump * parabolic Gaussian centred at the torus midpoint
SpaceTimeField dilated(const GridSpec& g, double lambda)
{
    const double tc = std::sqrt(g.t_min * g.t_max) * 2.0;
    return SpaceTimeField::sample(g, 1, [=](double t, double x, double, int) {
        const double s = lambda * lambda * t;
        const double z = lambda * (x - 0.5);
        const double lt = std::log(s / tc);
        return cplx(std::exp(-lt * lt / 2.0) * std::exp(-z * z / (0.5 * s)), 0.0);
    });
}

Outcome scaling_law()
{
    Outcome o;
    const double lambda = 2.0;
    double worst = 0.0;
    for (int points : {1024, 2048}) {
        const double h = 1.0 / points;
        // 8 levels per octave: t -> 4t is an exact 16-level shift
        const double t_min = 4.0 * h * h * std::exp2(0.0);
        const int octaves = static_cast<int>(std::round(std::log2((1.0 / 256.0) / t_min))) + 0;
        const GridSpec g = grid1(points, t_min, t_min * std::exp2(octaves), 8 * octaves + 1);
        const SpaceTimeField F = dilated(g, 1.0), Fl = dilated(g, lambda);
        double level_worst = 0.0;
        for (double beta : {-0.25, 0.0, 0.5})
            for (double p : {1.0, 2.0, 4.0}) {
                TentNormSpec spec;
                spec.beta = beta;
                spec.p = Exponent::finite(p);
                const double got = tent_norm(Fl, spec) / tent_norm(F, spec);
                const double want = std::pow(lambda, 2.0 * beta - 1.0 - 1.0 / p);
                level_worst = std::max(level_worst, rel(got, want));
            }
        o.lines.push_back("     N=" + std::to_string(points) + ": max rel deviation " + sci(level_worst));
        worst = level_worst;
    }
    o.check(worst <= 0.03, "||F_2||/||F|| vs 2^{2beta-1-n/p} on 3x3 (beta,p), finest nested grid: " + sci(worst) +
                               " (tol 0.03)");
    return o;
}

// ---- 4 ------------------------------------------------------------------------

Outcome semigroup_correctness()
{
    Outcome o;
    const GridSpec g1 = grid1(128, 1.0 / 16384, 1.0 / 16, 17);
    const GridSpec g2 = GridSpec::make(2, 1.0, 16, 1.0 / 256, 1.0 / 16, 9);
    struct Case {
        std::string name;
        CoefficientField coeff;
        PropagationMethod method;
    };
    PresetParams pp;
    std::vector<Case> cases;
    for (const GridSpec& g : {g1, g2}) {
        const std::string d = g.n == 1 ? "1d " : "2d ";
        cases.push_back({d + "identity/fourier", CoefficientField::identity(g), PropagationMethod::automatic});
        cases.push_back({d + "checkerboard/eigen", make_preset("checkerboard", g, pp), PropagationMethod::automatic});
        cases.push_back({d + "checkerboard/pade", make_preset("checkerboard", g, pp), PropagationMethod::pade});
        cases.push_back({d + "checkerboard/uniformization", make_preset("checkerboard", g, pp),
                         PropagationMethod::uniformization});
        cases.push_back({d + "complex/pade", make_preset("complex-perturbation", g, pp), PropagationMethod::automatic});
    }
    double worst_comp = 0.0, worst_cons = 0.0, worst_diss = 0.0, worst_contract = 0.0;
    bool hermitian_bitwise = true;
    for (const auto& c : cases) {
        const GridSpec& g = c.coeff.grid();
        const DiscreteGenerator gen(c.coeff);
        const Semigroup sg(gen, c.method);
        const SpatialField f = family_member(Family::gaussian, g, 41);
        const double s = 3e-3, t = 5e-3;
        worst_comp = std::max(worst_comp, rel_field(sg.apply(sg.apply(f, s), t), sg.apply(f, s + t)));
        const SpatialField one = SpatialField::constant(g, 1.0);
        for (double tt : {1e-4, 1e-2, 1.0})
            worst_cons = std::max(worst_cons, (sg.apply(one, tt) - one).max_abs());
        if (gen.is_hermitian()) {
            const Mat L = gen.dense();
            hermitian_bitwise = hermitian_bitwise && (L - L.adjoint()).cwiseAbs().maxCoeff() == 0.0;
            // Re<Lu, u> >= 0 up to roundoff of the form itself
            const double scale = gen.norm_inf();
            for (int k = 0; k < 8; ++k) {
                const SpatialField u = family_member(Family::spikes, g, 60 + k);
                const SpatialField Lu = gen.apply(u);
                double form = 0.0, uu = 0.0;
                for (int i = 0; i < g.cells(); ++i) {
                    form += (Lu(i) * std::conj(u(i))).real();
                    uu += std::norm(u(i));
                }
                worst_diss = std::max(worst_diss, -form / (scale * uu));
                for (double tt : {1e-4, 1e-2})
                    worst_contract = std::max(worst_contract, sg.apply(u, tt).l2_norm() / u.l2_norm() - 1.0);
            }
        }
        o.lines.push_back("     " + c.name + " (route " + to_string(sg.method()) + ")");
    }
    o.check(worst_comp <= 1e-9, "composition e^{-tL}e^{-sL} = e^{-(s+t)L}: " + sci(worst_comp) + " (tol 1e-9)");
    o.check(worst_cons <= 1e-12, "conservation e^{-tL}1 = 1: " + sci(worst_cons) + " (tol 1e-12)");

    // independent route on A = I against the DFT multiplier of the discrete Laplacian
    double worst_dft = 0.0;
    for (const GridSpec& g : {g1, g2}) {
        const Semigroup eig(DiscreteGenerator(CoefficientField::identity(g)), PropagationMethod::hermitian_eigen);
        const Semigroup pade(DiscreteGenerator(CoefficientField::identity(g)), PropagationMethod::pade);
        const SpatialField f = family_member(Family::bandlimited, g, 5, FamilyParams{1, g.points / 4, 16});
        for (double t : {1e-4, 1e-3, 1e-2}) {
            const SpatialField ref = heat_multiplier(f, t, HeatSymbol::discrete);
            worst_dft = std::max({worst_dft, rel_field(eig.apply(f, t), ref), rel_field(pade.apply(f, t), ref)});
        }
    }
    o.check(worst_dft <= 1e-9, "A = I (eigen and Pade routes) vs DFT multiplier: " + sci(worst_dft) + " (tol 1e-9)");
    o.check(hermitian_bitwise, "Hermitian presets: L == L^H bit for bit");
    o.check(worst_diss <= 1e-14, "Hermitian dissipativity Re<Lu,u> >= -1e-14 ||L|| ||u||^2: worst " + sci(worst_diss));
    o.check(worst_contract <= 1e-13, "Hermitian contraction ||e^{-tL}u|| <= ||u||: worst excess " + sci(worst_contract) +
                                         " (tol 1e-13)");
    return o;
}

// ---- 5 ------------------------------------------------------------------------

Outcome duhamel_suite()
{
    Outcome o;
    const double t_min = 1.0 / 16384, t_max = 1.0 / 16;
    const int base_levels = 64;
    double worst = 0.0, worst_rate = 1e9;
    for (const std::string preset : {"identity", "checkerboard", "complex-perturbation"}) {
        std::vector<DuhamelRecord> recs;
        for (int levels : {base_levels, 2 * base_levels - 1}) {
            const GridSpec g = grid1(128, t_min, t_max, levels);
            const Semigroup sgL(DiscreteGenerator(make_preset(preset, g, {})));
            const Semigroup sgD(DiscreteGenerator(CoefficientField::identity(g)));
            const SpatialField u0 = family_member(Family::bandlimited, g, 3, FamilyParams{1, 16, 12});
            const SpaceTimeBumps b = SpaceTimeBumps::random(g, 9, 1);
            const TimeSource F = TimeSource::from_function(g, 1, [b, g](double s) { return b.at(g, 1, s); });
            recs.push_back(duhamel_identities(sgL, sgD, u0, F));
        }
        const auto& a = recs[0];
        const auto& r = recs[1];
        std::string line = "     " + preset + ":";
        const std::pair<const char*, std::pair<std::optional<double>, std::optional<double>>> parts[] = {
            {"lions", {a.lions, r.lions}},
            {"E via L", {a.semigroup_via_L, r.semigroup_via_L}},
            {"E via Delta", {a.semigroup_via_delta, r.semigroup_via_delta}}};
        for (const auto& [name, pr] : parts) {
            const double base = pr.first.value_or(NAN), fine = pr.second.value_or(NAN);
            worst = std::max(worst, base);
            line += std::string(" ") + name + " " + sci(base) + "->" + sci(fine);
            if (base > 1e-12) {
                const double rr = rate(base, fine);
                worst_rate = std::min(worst_rate, rr);
                line += " (rate " + sci(rr) + ")";
            } else {
                line += " (exact)";
            }
        }
        o.lines.push_back(line);
    }
    o.check(worst <= 1e-3, "all Duhamel residuals at baseline (64 levels): max " + sci(worst) + " (tol 1e-3)");
    o.check(worst_rate >= 1.5, "refinement rate under level doubling: min " + sci(worst_rate) + " (tol >= 1.5)");
    return o;
}

// ---- 6 ------------------------------------------------------------------------

CauchyProblem smooth_problem(const GridSpec& g)
{
    CauchyProblem p;
    p.u0 = family_member(Family::bandlimited, g, 17, FamilyParams{1, 8, 8});
    const SpaceTimeBumps bF = SpaceTimeBumps::random(g, 18, g.n);
    const SpaceTimeBumps bf = SpaceTimeBumps::random(g, 19, 1);
    const int n = g.n;
    p.F = TimeSource::from_function(g, n, [bF, g, n](double s) { return bF.at(g, n, s); });
    p.f = TimeSource::from_function(g, 1, [bf, g](double s) { return bf.at(g, 1, s); });
    return p;
}

Outcome weak_solution()
{
    Outcome o;
    std::vector<double> res;
    for (int levels : {64, 127}) {
        const GridSpec g = grid1(128, 1.0 / 16384, 1.0 / 16, levels);
        const Semigroup sg(DiscreteGenerator(make_preset("checkerboard", g, {})));
        const CauchyProblem prob = smooth_problem(g);
        const SpaceTimeField u = solve(sg, prob);
        res.push_back(weak_residual(sg, u, prob, default_testbank(g)).max_residual);
    }
    const double rr = rate(res[0], res[1]);
    o.lines.push_back("     checkerboard, 12 test functions: " + sci(res[0]) + " -> " + sci(res[1]));
    o.check(res[0] <= 1e-4, "weak residual at baseline: " + sci(res[0]) + " (tol 1e-4)");
    o.check(rr >= 1.5, "refinement rate: " + sci(rr) + " (tol >= 1.5)");
    return o;
}

// ---- 7 ------------------------------------------------------------------------

struct EnergyConstants {
    std::vector<double> cacc;
    double energy = 0.0;
};

EnergyConstants energy_constants(int points, int levels)
{
    const GridSpec g = grid1(points, 1.0 / 16384, 1.0 / 16, levels);
    const Semigroup sg(DiscreteGenerator(make_preset("checkerboard", g, {})));
    const CauchyProblem prob = smooth_problem(g);
    const SpaceTimeField u = solve(sg, prob);
    EnergyConstants out;
    // 10 parabolically scaled geometries: b = r^2 on the ladder, (a, c) = (b/4, b/2)
    for (int i = 0; i < 10; ++i) {
        const int k = g.levels / 2 + (i % 5) * (g.levels / 10) - g.levels / 5;
        const double b = g.time(k);
        CaccioppoliGeometry geo;
        geo.b = b;
        geo.a = b / 4.0;
        geo.c = b / 2.0;
        geo.radius = std::sqrt(b);
        geo.center = static_cast<int>((i < 5 ? 0.3 : 0.71) * g.points);
        const CaccioppoliRecord r = caccioppoli_check(sg, u, prob, geo);
        out.cacc.push_back(std::max(r.constant_trace, r.constant_gradient));
    }
    out.energy = energy_tent_check(sg, u, prob, 0.0, Exponent::finite(2.0)).constant;
    return out;
}

Outcome energy_inequalities()
{
    Outcome o;
    const EnergyConstants base = energy_constants(128, 64), fine = energy_constants(256, 127);
    const auto [lo, hi] = std::minmax_element(base.cacc.begin(), base.cacc.end());
    double drift = 0.0;
    for (std::size_t i = 0; i < base.cacc.size(); ++i) drift = std::max(drift, rel(fine.cacc[i], base.cacc[i]));
    drift = std::max(drift, rel(fine.energy, base.energy));
    std::string list;
    for (double c : base.cacc) list += " " + sci(c);
    o.lines.push_back("     Caccioppoli constants:" + list);
    o.lines.push_back("     tent energy constant " + sci(base.energy) + " -> " + sci(fine.energy));
    o.check(*hi <= 64.0 && base.energy <= 64.0,
            "implied constants <= 64: max Caccioppoli " + sci(*hi) + ", energy " + sci(base.energy));
    o.check(*hi / *lo <= 8.0, "geometry-uniform within factor 8: spread " + sci(*hi / *lo));
    o.check(drift <= 0.3, "resolution-stable under one refinement: max drift " + sci(drift) + " (tol 0.3)");
    return o;
}

// ---- 8 ------------------------------------------------------------------------

ExperimentSpec heat_spec(double s)
{
    ExperimentSpec spec;
    spec.name = "heat";
    spec.grid = GridSpec::make(1, 64.0, 1024, 4.0 * std::pow(64.0 / 1024, 2), 16.0, 41);
    spec.s = s;
    spec.p = Exponent::finite(2.0);
    spec.variant = "extension";
    spec.family = Family::bandlimited;
    spec.family_params = FamilyParams{4, 64, 24};
    spec.samples = 20;
    spec.seed = 7;
    spec.sensitivity = false;
    return spec;
}

Outcome heat_bands()
{
    Outcome o;
    const std::pair<double, double> cases[] = {{-1.0, 2.0}, {-0.5, 2.0}, {-0.5, 1.0}, {-0.1, 2.0}};
    for (const auto& [s, p] : cases) {
        ExperimentSpec spec = heat_spec(s);
        spec.p = Exponent::finite(p);
        const EquivalenceReport r = run_heat_characterization(spec);
        o.check(r.base.band <= 16.0 && r.stability <= 0.5,
                "(s,p)=(" + sci(s) + "," + sci(p) + "): band " + sci(r.base.band) + " (tol 16), stability " +
                    sci(r.stability) + " (tol 0.5)");
    }
    return o;
}

// ---- 9 ------------------------------------------------------------------------

Outcome rough_equivalence()
{
    Outcome o;
    for (double beta : {-0.5, -0.75}) {
        ExperimentSpec spec;
        spec.name = "parabolic";
        spec.preset = "checkerboard";
        spec.grid = grid1(256, 4.0 / (256.0 * 256.0), 1.0 / 16, 33);
        spec.beta = beta;
        spec.p = Exponent::finite(2.0);
        spec.family = Family::bandlimited;
        spec.family_params = FamilyParams{4, 32, 24};
        spec.samples = 20;
        spec.seed = 7;
        spec.sensitivity = false;
        spec.budgets.band = 32.0;
        const EquivalenceReport r = run_parabolic_equivalence(spec);
        std::string line = "beta=" + sci(beta) + ": grad band " + sci(r.base.band) + " (tol 32), stability " +
                           sci(r.stability) + " (tol 0.5)";
        bool ok = r.verdict == Verdict::pass;
        if (beta == -0.75) {
            const auto it = r.extra.find("value_tent");
            const bool reported = it != r.extra.end() && !it->second.ratios.empty();
            ok = ok && reported;
            line += reported ? ", value band " + sci(it->second.band) + " reported" : ", value band missing";
        }
        o.check(ok, line);
    }
    return o;
}

// ---- 10 -----------------------------------------------------------------------

Outcome molecular()
{
    Outcome o;
    for (const std::string preset : {"checkerboard", "identity"}) {
        ExperimentSpec spec;
        spec.name = "molecular";
        spec.preset = preset;
        spec.grid = grid1(2048, 4.0 / (2048.0 * 2048.0), 1.0 / 16, 33);
        spec.beta = 0.0;
        spec.p = Exponent::finite(2.0);
        spec.j_min = 4;
        spec.j_max = 7;
        spec.sensitivity = false;
        const DecayProfile r = run_molecular_decay(spec);
        for (int region = 0; region < 3; ++region) {
            std::string prof;
            for (double v : r.profile[region]) prof += " " + sci(v);
            o.lines.push_back("     " + preset + " region " + std::to_string(region + 1) + ":" + prof);
        }
        if (preset == "checkerboard")
            o.check(r.monotone == std::vector<bool>{true, true, true},
                    "Hermitian preset: all three region profiles strictly decreasing on j = 4..7");
        else
            o.check(r.region1_log_convex, "A = I: -log of the region-1 profile convex in j (super-exponential)");
    }
    return o;
}

// ---- 11 -----------------------------------------------------------------------

Outcome embedding_chain()
{
    Outcome o;
    ExperimentSpec spec;
    spec.name = "embeddings";
    spec.grid = grid1(256, 4.0 / (256.0 * 256.0), 1.0 / 4, 49);
    spec.chain = {{0.0, Exponent::finite(1.0)}, {-0.25, Exponent::finite(2.0)}, {-0.375, Exponent::finite(4.0)}};
    spec.samples = 50;
    spec.seed = 11;
    spec.sensitivity = false;
    const EmbeddingTable t = run_embedding_sweep(spec);
    for (const auto& row : t.rows)
        if (row.input == "atom")
            o.lines.push_back("     atom r=" + sci(row.radius) + ": hop1 " + sci(row.hop1) + ", hop2 " + sci(row.hop2));
    o.check(t.max_hop1 <= 32.0 && t.max_hop2 <= 32.0,
            "(0,1)T -> (-1/4,2)Z -> (-3/8,4)T over 50 fields: hops " + sci(t.max_hop1) + ", " + sci(t.max_hop2) +
                " (tol 32)");
    o.check(t.atom_spread_hop1 <= 0.2 && t.atom_spread_hop2 <= 0.2,
            "atom ratios over 3 octaves of radius: spreads " + sci(t.atom_spread_hop1) + ", " +
                sci(t.atom_spread_hop2) + " (tol 0.2)");
    return o;
}

// ---- 12 -----------------------------------------------------------------------

Outcome endpoint_band()
{
    Outcome o;
    for (const std::string preset : {"identity", "checkerboard"}) {
        // ladder starts at h^2 and data stay below mode 8, so the part of
        // int_0^inf dt below t_min is under 8% for every mode
        const GridSpec g = grid1(256, 1.0 / (256.0 * 256.0), 4.0, 65);
        const Semigroup sg(DiscreteGenerator(make_preset(preset, g, {})));
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpatialField f = vector_member(Family::bandlimited, g, 300 + i, FamilyParams{1, 8, 8});
            const EndpointRecord r = endpoint_divergence_semigroup(sg, f, Exponent::finite(2.0));
            lo = std::min(lo, *r.ratio);
            hi = std::max(hi, *r.ratio);
        }
        o.check(lo >= 0.25 && hi <= 4.0,
                preset + ": ||G(f)||_{T^2_0} / ||f||_2 in [" + sci(lo) + ", " + sci(hi) + "] (tol [1/4, 4])");
    }
    return o;
}

// ---- 13 -----------------------------------------------------------------------

Outcome determinism()
{
    Outcome o;
    ExperimentSpec spec = heat_spec(-1.0);
    spec.grid = GridSpec::make(1, 1.0, 256, 4.0 / (256.0 * 256.0), 1.0 / 16, 33);
    spec.family_params = FamilyParams{4, 32, 24};
    spec.sensitivity = true;
    const std::string a = report_json(run_heat_characterization(spec), spec);
    const std::string b = report_json(run_heat_characterization(spec), spec);
    o.check(a == b, "heat report rerun byte-identical (" + std::to_string(a.size()) + " bytes)");

    ExperimentSpec e;
    e.grid = grid1(128, 4.0 / (128.0 * 128.0), 1.0 / 4, 33);
    e.chain = {{0.0, Exponent::finite(1.0)}, {-0.25, Exponent::finite(2.0)}, {-0.375, Exponent::finite(4.0)}};
    e.samples = 8;
    e.sensitivity = false;
    o.check(report_json(run_embedding_sweep(e), e) == report_json(run_embedding_sweep(e), e),
            "embedding report rerun byte-identical");
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exponent arithmetic exactness", exponent_arithmetic},
        {"p = 2 Fubini identities", fubini_identities},
        {"parabolic scaling law", scaling_law},
        {"semigroup correctness", semigroup_correctness},
        {"Duhamel identity suite", duhamel_suite},
        {"weak-solution residual", weak_solution},
        {"Caccioppoli and tent energy inequalities", energy_inequalities},
        {"heat characterization bands", heat_bands},
        {"rough-coefficient equivalence", rough_equivalence},
        {"molecular decay", molecular},
        {"embedding chain", embedding_chain},
        {"endpoint quadratic band", endpoint_band},
        {"determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.check(false, std::string("threw: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s  %s  [%.1f s]\n", id, out.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs);
        for (const auto& line : out.lines) std::printf("      %s\n", line.c_str());
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
