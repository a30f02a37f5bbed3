#include "tentkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tentkit/error.hpp"
#include "tentkit/spectral.hpp"

namespace tentkit {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTiny = 1e-8; // near-zero norms are excluded from ratios

template <class Fn>
void parallel_for(int count, Fn&& fn)
{
    const int workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::uint64_t sample_seed(std::uint64_t seed, int i)
{
    Rng base(seed);
    return base.split(static_cast<std::uint64_t>(i)).bits();
}

std::vector<double> finite_only(const std::vector<double>& v)
{
    std::vector<double> out;
    for (double x : v)
        if (std::isfinite(x)) out.push_back(x);
    return out;
}

double ratio_or_nan(double lhs, double rhs)
{
    if (!(rhs > kTiny) || !(lhs > kTiny)) return kNaN;
    return lhs / rhs;
}

double drift(const BandSummary& a, const BandSummary& b)
{
    if (a.ratios.empty() || b.ratios.empty()) return kNaN;
    return std::max(std::abs(b.min / a.min - 1.0), std::abs(b.max / a.max - 1.0));
}

int octave_levels(double log_rho) { return static_cast<int>(std::lround(std::log(2.0) / log_rho)); }

// headline(grid) under the three standard grid perturbations
template <class Headline>
std::vector<SensitivityRecord> sensitivity_records(const GridSpec& g, double base, Headline&& headline)
{
    std::vector<SensitivityRecord> out;
    auto record = [&](const std::string& name, auto&& make_grid) {
        SensitivityRecord r;
        r.perturbation = name;
        try {
            r.headline = headline(make_grid());
            r.relative_change = base != 0.0 ? std::abs(r.headline - base) / std::abs(base) : kNaN;
        } catch (const Error& e) {
            r.skipped = true;
            r.note = e.what();
            r.headline = r.relative_change = kNaN;
        }
        out.push_back(r);
    };
    const int extra = std::max(1, octave_levels(g.log_step()));
    record("t_min/2", [&] { return GridSpec::make(g.n, g.period, g.points, g.t_min / 2.0, g.t_max, g.levels + extra); });
    record("t_max*2", [&] { return GridSpec::make(g.n, g.period, g.points, g.t_min, g.t_max * 2.0, g.levels + extra); });
    record("points*2", [&] { return g.with_points(g.points * 2); });
    return out;
}

SpaceTimeField component_of(const SpaceTimeField& F, int comp)
{
    const GridSpec& g = F.grid();
    SpaceTimeField out(g, 1);
    for (int k = 0; k < g.levels; ++k) {
        const auto src = F.slice(k, comp);
        std::copy(src.begin(), src.end(), out.slice(k, 0).begin());
    }
    return out;
}

SpatialField stack_samples(const GridSpec& g, const ExperimentSpec& spec)
{
    SpatialField U(g, spec.samples);
    for (int i = 0; i < spec.samples; ++i) {
        const SpatialField f = family_member(spec.family, g, sample_seed(spec.seed, i), spec.family_params);
        std::copy(f.component(0).begin(), f.component(0).end(), U.component(i).begin());
    }
    return U;
}

SpatialField column(const SpatialField& U, int i)
{
    SpatialField f(U.grid(), 1);
    std::copy(U.component(i).begin(), U.component(i).end(), f.component(0).begin());
    return f;
}

// ---- heat / besov ---------------------------------------------------------

bool heat_in_theory(const ExperimentSpec& spec, std::string& label)
{
    if (spec.variant == "extension") {
        if (spec.s < 0.0) return true;
        label = "out-of-theory: the extension characterization needs s < 0";
        return false;
    }
    if (spec.variant == "gradient") {
        if (spec.s < 1.0) return true;
        label = "out-of-theory: the gradient characterization needs s < 1";
        return false;
    }
    fail("config.invalid", "variant must be 'extension' or 'gradient'");
}

std::vector<double> heat_ratios(const ExperimentSpec& spec, const GridSpec& g, bool zspace)
{
    const LPFamily fam = LPFamily::for_grid(g);
    const bool ext = spec.variant == "extension";
    TentNormSpec ts;
    ts.beta = ext ? (spec.s + 1.0) / 2.0 : spec.s / 2.0;
    ts.p = spec.p;
    ts.kind = zspace ? TentKind::z : TentKind::tent;
    const SpaceParams sp =
        SpaceParams::from_s(spec.s, spec.p, zspace ? SpaceVariant::besov : SpaceVariant::hardy_sobolev);
    std::vector<double> out(spec.samples, kNaN);
    parallel_for(spec.samples, [&](int i) {
        const SpatialField f = family_member(spec.family, g, sample_seed(spec.seed, i), spec.family_params);
        const SpaceTimeField E =
            ext ? heat_extension(f, HeatSymbol::discrete) : gradient_heat_extension(f, HeatSymbol::discrete);
        const double lhs = tent_norm(E, ts);
        const double rhs = zspace ? besov_norm(f, sp, fam).value : hardy_sobolev_norm(f, sp, fam).value;
        out[i] = ratio_or_nan(lhs, rhs);
    });
    return finite_only(out);
}

EquivalenceReport heat_like(const ExperimentSpec& spec, bool zspace)
{
    EquivalenceReport rep;
    rep.name = spec.name;
    rep.kind = zspace ? "besov" : "heat";
    if (!heat_in_theory(spec, rep.label)) {
        rep.verdict = Verdict::out_of_theory;
        return rep;
    }
    rep.label = "in-theory";
    rep.base = BandSummary::of(heat_ratios(spec, spec.grid, zspace));
    bool ok = !rep.base.ratios.empty() && rep.base.band <= spec.budgets.band;
    if (spec.refine) {
        rep.refined = BandSummary::of(heat_ratios(spec, refine_grid(spec.grid), zspace));
        rep.stability = drift(rep.base, rep.refined);
        ok = ok && rep.stability <= spec.budgets.stability;
    }
    if (spec.sensitivity)
        rep.sensitivity = sensitivity_records(spec.grid, rep.base.band, [&](const GridSpec& g) {
            return BandSummary::of(heat_ratios(spec, g, zspace)).band;
        });
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

// ---- parabolic --------------------------------------------------------------

struct ParabolicBands {
    std::vector<double> grad, value;
};

ParabolicBands parabolic_ratios(const ExperimentSpec& spec, const GridSpec& g)
{
    const Semigroup sg(DiscreteGenerator(make_preset(spec.preset, g, spec.preset_params)));
    const LPFamily fam = LPFamily::for_grid(g);
    const SpaceParams sp = SpaceParams::from_s(2.0 * spec.beta + 1.0, spec.p);
    const bool with_value = spec.beta > -1.0 && spec.beta < -0.5;

    const SpatialField U = stack_samples(g, spec);
    const SpaceTimeField V = propagate(sg, U);
    ParabolicBands out;
    out.grad.assign(spec.samples, kNaN);
    out.value.assign(spec.samples, kNaN);
    parallel_for(spec.samples, [&](int i) {
        const SpatialField u0 = column(U, i);
        const SpaceTimeField v = component_of(V, i);
        const double rhs = hardy_sobolev_norm(u0, sp, fam).value;
        TentNormSpec ts;
        ts.p = spec.p;
        ts.beta = spec.beta + 0.5;
        out.grad[i] = ratio_or_nan(tent_norm(gradient_field(sg.generator(), v), ts), rhs);
        if (with_value) {
            ts.beta = spec.beta + 1.0;
            out.value[i] = ratio_or_nan(tent_norm(v, ts), rhs);
        }
    });
    out.grad = finite_only(out.grad);
    out.value = finite_only(out.value);
    return out;
}

// ---- molecular ----------------------------------------------------------------

GridSpec octave_ladder(int n, double period, int points, double t_min, double t_top, int per_octave)
{
    const int steps = static_cast<int>(std::ceil(std::log2(t_top / t_min) * per_octave - 1e-9));
    const int levels = std::max(8, steps + 1);
    const double t_max = t_min * std::exp2(static_cast<double>(levels - 1) / per_octave);
    return GridSpec::make(n, period, points, t_min, t_max, levels);
}

double weighted_region(const SpaceTimeField& u, double beta, double t_lo, double t_hi, const std::vector<int>& cells)
{
    const GridSpec& g = u.grid();
    const auto w = dt_weights(g, t_lo, t_hi);
    std::vector<double> terms;
    for (int k = 0; k < g.levels; ++k) {
        if (w[k] == 0.0) continue;
        double s = 0.0;
        for (int c : cells) s += std::norm(u(k, c));
        terms.push_back(w[k] * std::pow(g.time(k), -2.0 * (beta + 1.0)) * s * g.cell_volume());
    }
    return pairwise_sum(terms);
}

// default: two cells, raised to sqrt(t_min) so the atom keeps a ladder level
double molecular_radius(const ExperimentSpec& spec, const GridSpec& g)
{
    if (spec.atom_radius > 0.0) return spec.atom_radius;
    return std::max(2.0 * g.h(), std::sqrt(g.t_min));
}

struct MolecularRun {
    std::vector<std::vector<double>> profile;
    std::string route1, route_main;
};

MolecularRun molecular_profiles(const ExperimentSpec& spec, const GridSpec& base)
{
    const double r = molecular_radius(spec, base);
    require(spec.j_min >= 4 && spec.j_max >= spec.j_min, "molecular.geometry", "need 4 <= j_min <= j_max");
    const double outer = std::exp2(spec.j_max + 1) * r;
    require(outer <= base.period / 2.0, "molecular.geometry", "ball too large for torus at requested j_max");
    require(r * r >= base.t_min, "funcspaces.atom_geometry", "atom radius squared below t_min");
    const int q = spec.levels_per_octave;
    const GridSpec g = octave_ladder(base.n, base.period, base.points, base.t_min, outer * outer, q);
    const GridSpec g1 = octave_ladder(base.n, base.period, base.points, base.t_min, 64.0 * r * r, q);

    const CoefficientField coeff = make_preset(spec.preset, g, spec.preset_params);
    const DiscreteGenerator gen(coeff);
    const PropagationMethod route1 =
        gen.is_real_m_matrix() ? PropagationMethod::uniformization : PropagationMethod::automatic;
    const Semigroup sg(gen);
    const Semigroup sg1(DiscreteGenerator(CoefficientField(g1, coeff.matrices(), coeff.label())), route1);

    const int center = 0;
    const TentAtom a = make_atom(g, center, r, spec.beta + 0.5, spec.p, AtomShape::flat, spec.seed, g.n);
    const TentAtom a1 = make_atom(g1, center, r, spec.beta + 0.5, spec.p, AtomShape::flat, spec.seed, g.n);
    const SpaceTimeField u = lions_op(sg, TimeSource::from_field(a.field, a.field.level(0)));
    const SpaceTimeField u1 = lions_op(sg1, TimeSource::from_field(a1.field, a1.field.level(0)));

    MolecularRun run;
    run.route1 = to_string(sg1.method());
    run.route_main = to_string(sg.method());
    run.profile.assign(3, {});
    const double inv_p = spec.p.reciprocal();
    for (int j = spec.j_min; j <= spec.j_max; ++j) {
        const double rj = std::exp2(j) * r, rj1 = std::exp2(j + 1) * r;
        std::vector<int> annulus, ball;
        for (int c = 0; c < g.cells(); ++c) {
            const double d = torus_distance(g, center, c);
            if (d < rj1) {
                ball.push_back(c);
                if (d >= rj) annulus.push_back(c);
            }
        }
        const double measure = ball.size() * g.cell_volume();
        const double scale = std::pow(measure, inv_p - 0.5);
        const double m1 = weighted_region(u1, spec.beta, g1.t_min, 64.0 * r * r, annulus);
        const double m2 = weighted_region(u, spec.beta, 64.0 * r * r, rj * rj, annulus);
        const double m3 = weighted_region(u, spec.beta, rj * rj, rj1 * rj1, ball);
        run.profile[0].push_back(std::sqrt(m1) * scale);
        run.profile[1].push_back(std::sqrt(m2) * scale);
        run.profile[2].push_back(std::sqrt(m3) * scale);
    }
    return run;
}

// ---- embeddings ---------------------------------------------------------------

TentNormSpec norm_spec(double beta, Exponent p, TentKind kind)
{
    TentNormSpec s;
    s.beta = beta;
    s.p = p;
    s.kind = kind;
    return s;
}

EmbeddingRow embedding_row(const SpaceTimeField& F, const ExperimentSpec& spec)
{
    const auto& c = spec.chain;
    const double t0 = tent_norm(F, norm_spec(c[0].first, c[0].second, TentKind::tent));
    const double z1 = tent_norm(F, norm_spec(c[1].first, c[1].second, TentKind::z));
    const double t2 = tent_norm(F, norm_spec(c[2].first, c[2].second, TentKind::tent));
    EmbeddingRow row;
    row.hop1 = ratio_or_nan(z1, t0);
    row.hop2 = ratio_or_nan(t2, z1);
    return row;
}

std::vector<EmbeddingRow> embedding_rows(const ExperimentSpec& spec, const GridSpec& g)
{
    std::vector<EmbeddingRow> rows(spec.samples);
    parallel_for(spec.samples, [&](int i) {
        const SpaceTimeBumps b = SpaceTimeBumps::random(g, sample_seed(spec.seed, i), 1);
        rows[i] = embedding_row(b.sample(g, 1), spec);
        rows[i].input = "random";
        rows[i].index = i;
    });
    for (int m = 0; m < 4; ++m) {
        const double r = 4.0 * g.h() * std::exp2(m);
        const TentAtom a = make_atom(g, g.cells() / 2 + (g.n == 2 ? g.points / 2 : 0), r, spec.chain[0].first,
                                     spec.chain[0].second, AtomShape::flat, spec.seed, 1);
        EmbeddingRow row = embedding_row(a.field, spec);
        row.input = "atom";
        row.index = m;
        row.radius = r;
        rows.push_back(row);
    }
    return rows;
}

double spread(const std::vector<double>& v)
{
    const auto f = finite_only(v);
    if (f.empty()) return kNaN;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    return *hi / *lo - 1.0;
}

void summarize(EmbeddingTable& t)
{
    std::vector<double> a1, a2;
    t.max_hop1 = t.max_hop2 = 0.0;
    for (const auto& r : t.rows) {
        if (std::isfinite(r.hop1)) t.max_hop1 = std::max(t.max_hop1, r.hop1);
        if (std::isfinite(r.hop2)) t.max_hop2 = std::max(t.max_hop2, r.hop2);
        if (r.input == "atom") {
            a1.push_back(r.hop1);
            a2.push_back(r.hop2);
        }
    }
    t.atom_spread_hop1 = spread(a1);
    t.atom_spread_hop2 = spread(a2);
}

// ---- json -------------------------------------------------------------------------

json num(double v)
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

json num_list(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

json exponent_json(Exponent p) { return p.str(); }

json grid_json(const GridSpec& g)
{
    return {{"n", g.n},           {"period", g.period}, {"points", g.points},
            {"t_min", g.t_min},   {"t_max", g.t_max},   {"levels", g.levels}};
}

json spec_object(const ExperimentSpec& s)
{
    json chain = json::array();
    for (const auto& [b, p] : s.chain) chain.push_back({{"beta", b}, {"p", exponent_json(p)}});
    return {
        {"name", s.name},
        {"preset", s.preset},
        {"preset_params",
         {{"block", s.preset_params.block},
          {"contrast", s.preset_params.contrast},
          {"kappa", s.preset_params.kappa},
          {"seed", s.preset_params.seed}}},
        {"grid", grid_json(s.grid)},
        {"profile",
         {{"n", s.profile.n},
          {"p_minus_L", exponent_json(s.profile.p_minus_L)},
          {"q_plus_L", exponent_json(s.profile.q_plus_L)},
          {"p_minus_Lstar", exponent_json(s.profile.p_minus_Lstar)},
          {"q_plus_Lstar", exponent_json(s.profile.q_plus_Lstar)}}},
        {"s", s.s},
        {"variant", s.variant},
        {"beta", s.beta},
        {"p", exponent_json(s.p)},
        {"gamma", s.gamma},
        {"q", exponent_json(s.q)},
        {"chain", chain},
        {"family", to_string(s.family)},
        {"family_params",
         {{"k_lo", s.family_params.k_lo}, {"k_hi", s.family_params.k_hi}, {"modes", s.family_params.modes}}},
        {"samples", s.samples},
        {"seed", s.seed},
        {"atom_radius", s.atom_radius},
        {"j_min", s.j_min},
        {"j_max", s.j_max},
        {"levels_per_octave", s.levels_per_octave},
        {"refine", s.refine},
        {"sensitivity", s.sensitivity},
        {"budgets",
         {{"band", s.budgets.band},
          {"stability", s.budgets.stability},
          {"constant", s.budgets.constant},
          {"embedding", s.budgets.embedding},
          {"scale_stability", s.budgets.scale_stability},
          {"cross_check", s.budgets.cross_check},
          {"lipschitz", s.budgets.lipschitz}}},
    };
}

json band_json(const BandSummary& b)
{
    return {{"ratios", num_list(b.ratios)}, {"min", num(b.min)}, {"max", num(b.max)}, {"band", num(b.band)}};
}

json sensitivity_json(const std::vector<SensitivityRecord>& recs)
{
    json a = json::array();
    for (const auto& r : recs) {
        json o = {{"perturbation", r.perturbation},
                  {"headline", num(r.headline)},
                  {"relative_change", num(r.relative_change)},
                  {"skipped", r.skipped}};
        if (!r.note.empty()) o["note"] = r.note;
        a.push_back(o);
    }
    return a;
}

json envelope(const std::string& kind, const ExperimentSpec& spec, Verdict v, const std::string& label)
{
    return {{"schema", "tentkit.report/1"}, {"kind", kind},          {"spec", spec_object(spec)},
            {"spec_hash", spec_hash(spec)}, {"verdict", to_string(v)}, {"label", label}};
}

} // namespace

int thread_count()
{
    if (const char* env = std::getenv("TENTKIT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string spec_json(const ExperimentSpec& spec) { return spec_object(spec).dump(); }

std::string spec_hash(const ExperimentSpec& spec)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : spec_json(spec)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

GridSpec refine_grid(const GridSpec& g)
{
    return GridSpec::make(g.n, g.period, g.points * 2, g.t_min, g.t_max, 2 * (g.levels - 1) + 1);
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::out_of_theory: return "out-of-theory";
    }
    return "fail";
}

BandSummary BandSummary::of(std::vector<double> ratios)
{
    BandSummary b;
    b.ratios = std::move(ratios);
    if (b.ratios.empty()) return b;
    const auto [lo, hi] = std::minmax_element(b.ratios.begin(), b.ratios.end());
    b.min = *lo;
    b.max = *hi;
    b.band = b.max / b.min;
    return b;
}

EquivalenceReport run_heat_characterization(const ExperimentSpec& spec) { return heat_like(spec, false); }

EquivalenceReport run_besov_suite(const ExperimentSpec& spec)
{
    EquivalenceReport rep = heat_like(spec, true);
    if (rep.verdict == Verdict::out_of_theory) return rep;
    const GridSpec& g = spec.grid;

    // Lipschitz endpoint: ||grad e^{t Delta} g||_{Z^inf_{1/2}} against max |G g|
    double lip_lo = std::numeric_limits<double>::infinity(), lip_hi = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const SpatialField low = SpatialField::sample(
            g, [&](double x, double) { return cplx(std::cos(2.0 * std::numbers::pi * k * x / g.period), 0.0); });
        const double lhs =
            tent_norm(gradient_heat_extension(low, HeatSymbol::discrete), norm_spec(0.5, Exponent::infinity(), TentKind::z));
        const SpatialField G = DiscreteGenerator(CoefficientField::identity(g)).gradient(low);
        const double rhs = G.lp_norm(std::numeric_limits<double>::infinity());
        const double ratio = lhs / rhs;
        lip_lo = std::min(lip_lo, ratio);
        lip_hi = std::max(lip_hi, ratio);
    }
    rep.metrics["lipschitz_ratio_min"] = lip_lo;
    rep.metrics["lipschitz_ratio_max"] = lip_hi;

    // p = 2: Besov and Hardy-Sobolev are the same Fourier-side quadrature
    const LPFamily fam = LPFamily::for_grid(g);
    double cross = 0.0;
    for (int i = 0; i < spec.samples; ++i) {
        const SpatialField f = family_member(spec.family, g, sample_seed(spec.seed, i), spec.family_params);
        const double b = besov_norm(f, SpaceParams::from_s(spec.s, Exponent::finite(2.0), SpaceVariant::besov), fam).value;
        const double hs = hardy_sobolev_norm(f, SpaceParams::from_s(spec.s, Exponent::finite(2.0)), fam).value;
        if (hs > kTiny) cross = std::max(cross, std::abs(b / hs - 1.0));
    }
    rep.metrics["cross_check_p2"] = cross;

    const double lb = spec.budgets.lipschitz;
    const bool ok = rep.verdict == Verdict::pass && lip_lo >= 1.0 / lb && lip_hi <= lb &&
                    cross <= spec.budgets.cross_check;
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

EquivalenceReport run_parabolic_equivalence(const ExperimentSpec& spec)
{
    EquivalenceReport rep;
    rep.name = spec.name;
    rep.kind = "parabolic";
    const auto member =
        region_membership(spec.profile, SpaceParams::from_beta(spec.beta, spec.p), Region::wellposed_hc);
    if (!member.member) {
        rep.verdict = Verdict::out_of_theory;
        rep.label = "out-of-region: " + member.reason;
        return rep;
    }
    rep.label = "in-theory";
    const ParabolicBands base = parabolic_ratios(spec, spec.grid);
    rep.base = BandSummary::of(base.grad);
    const bool with_value = spec.beta > -1.0 && spec.beta < -0.5;
    if (with_value) rep.extra["value_tent"] = BandSummary::of(base.value);
    bool ok = !rep.base.ratios.empty() && rep.base.band <= spec.budgets.band;
    if (spec.refine) {
        const ParabolicBands ref = parabolic_ratios(spec, refine_grid(spec.grid));
        rep.refined = BandSummary::of(ref.grad);
        rep.stability = drift(rep.base, rep.refined);
        ok = ok && rep.stability <= spec.budgets.stability;
        if (with_value) {
            rep.extra_refined["value_tent"] = BandSummary::of(ref.value);
            rep.metrics["value_tent_stability"] = drift(rep.extra["value_tent"], rep.extra_refined["value_tent"]);
        }
    }
    if (spec.sensitivity)
        rep.sensitivity = sensitivity_records(spec.grid, rep.base.band, [&](const GridSpec& g) {
            return BandSummary::of(parabolic_ratios(spec, g).grad).band;
        });
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
    return rep;
}

DecayProfile run_molecular_decay(const ExperimentSpec& spec)
{
    DecayProfile out;
    out.name = spec.name;
    if (!(spec.beta > -0.5)) {
        out.verdict = Verdict::out_of_theory;
        out.label = "out-of-theory: molecular decay is stated for beta > -1/2";
        return out;
    }
    out.label = "in-theory";
    const MolecularRun run = molecular_profiles(spec, spec.grid);
    out.radius = molecular_radius(spec, spec.grid);
    out.route_region1 = run.route1;
    out.route_main = run.route_main;
    out.profile = run.profile;
    for (int j = spec.j_min; j <= spec.j_max; ++j) out.j.push_back(j);

    bool ok = true;
    for (const auto& prof : out.profile) {
        bool mono = true;
        for (std::size_t i = 1; i < prof.size(); ++i)
            if (!(prof[i] < prof[i - 1])) mono = false;
        out.monotone.push_back(mono);
        ok = ok && mono;
    }
    const auto& p1 = out.profile[0];
    out.region1_log_convex = p1.size() >= 3;
    for (std::size_t i = 1; i + 1 < p1.size(); ++i) {
        if (!(p1[i - 1] > 0.0 && p1[i] > 0.0 && p1[i + 1] > 0.0)) {
            out.region1_log_convex = false;
            break;
        }
        const double second = -std::log(p1[i + 1]) + 2.0 * std::log(p1[i]) - std::log(p1[i - 1]);
        if (second < 0.0) out.region1_log_convex = false;
    }
    {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < p1.size(); ++i)
            if (p1[i] > 0.0) {
                xs.push_back(std::exp2(2.0 * out.j[i]));
                ys.push_back(std::log(p1[i]));
            }
        if (xs.size() >= 2) out.region1_gaussian_rate = fit_line(xs, ys).slope;
    }
    for (int region = 1; region <= 2; ++region) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < out.j.size(); ++i)
            if (out.profile[region][i] > 0.0) {
                xs.push_back(out.j[i]);
                ys.push_back(std::log2(out.profile[region][i]));
            }
        out.power_rates.push_back(xs.size() >= 2 ? fit_line(xs, ys).slope : kNaN);
    }
    if (spec.sensitivity) {
        const double base = p1.empty() ? kNaN : p1.front();
        out.sensitivity = sensitivity_records(spec.grid, base, [&](const GridSpec& g) {
            return molecular_profiles(spec, g).profile[0].front();
        });
    }
    out.verdict = ok ? Verdict::pass : Verdict::fail;
    return out;
}

EmbeddingTable run_embedding_sweep(const ExperimentSpec& spec)
{
    require(spec.chain.size() == 3, "embedding.triple", "an embedding chain needs three (beta, p) pairs");
    const auto& c = spec.chain;
    if (!(c[0].second < c[1].second && c[1].second < c[2].second))
        fail("embedding.triple", "the chain needs p0 < p1 < p2 strictly");
    const int n = spec.grid.n;
    validate_embedding_line(n, norm_spec(c[0].first, c[0].second, TentKind::tent),
                            norm_spec(c[1].first, c[1].second, TentKind::z));
    validate_embedding_line(n, norm_spec(c[1].first, c[1].second, TentKind::z),
                            norm_spec(c[2].first, c[2].second, TentKind::tent));

    EmbeddingTable t;
    t.name = spec.name;
    t.label = "in-theory";
    t.rows = embedding_rows(spec, spec.grid);
    summarize(t);
    const bool ok = t.max_hop1 <= spec.budgets.embedding && t.max_hop2 <= spec.budgets.embedding &&
                    t.atom_spread_hop1 <= spec.budgets.scale_stability &&
                    t.atom_spread_hop2 <= spec.budgets.scale_stability;
    if (spec.sensitivity)
        t.sensitivity = sensitivity_records(spec.grid, std::max(t.max_hop1, t.max_hop2), [&](const GridSpec& g) {
            EmbeddingTable tt;
            tt.rows = embedding_rows(spec, g);
            summarize(tt);
            return std::max(tt.max_hop1, tt.max_hop2);
        });
    t.verdict = ok ? Verdict::pass : Verdict::fail;
    return t;
}

GlobalRecord run_global_estimate(const ExperimentSpec& spec)
{
    const int n = spec.grid.n;
    const double lhs_line = 2.0 * spec.beta - n * spec.p.reciprocal();
    const double rhs_line = 2.0 * spec.gamma - n * spec.q.reciprocal();
    if (std::abs(lhs_line - rhs_line) > kLineTolerance)
        fail("global.line", "(beta, p) and (gamma, q) must satisfy 2 beta - n/p = 2 gamma - n/q");
    if (spec.gamma < spec.beta) fail("global.line", "gamma >= beta is required");

    GlobalRecord rec;
    rec.name = spec.name;
    std::string reason;
    if (!(spec.gamma > -0.5)) reason = "gamma <= -1/2: p_flat(gamma) undefined";
    else if (!(spec.beta > -1.0 && spec.beta < 0.0)) reason = "beta outside (-1, 0)";
    else {
        const auto m = region_membership(spec.profile, SpaceParams::from_beta(spec.beta, spec.p),
                                         SpaceParams::from_beta(spec.gamma, spec.q));
        if (!m.member) reason = m.reason;
    }
    rec.label = reason.empty() ? "in-theory" : "out-of-theory: " + reason;

    auto evaluate = [&](const GridSpec& g, std::vector<double>& constants, std::vector<double>& remainders) {
        const Semigroup sg(DiscreteGenerator(make_preset(spec.preset, g, spec.preset_params)));
        const LPFamily fam = LPFamily::for_grid(g);
        constants.assign(spec.samples, kNaN);
        remainders.assign(spec.samples, kNaN);
        for (int i = 0; i < spec.samples; ++i) {
            const std::uint64_t sd = sample_seed(spec.seed, i);
            const SpatialField u0 = family_member(spec.family, g, sd, spec.family_params);
            const SpaceTimeBumps Fb = SpaceTimeBumps::random(g, sd ^ 0x9e3779b97f4a7c15ull, n);
            const SpaceTimeBumps fb = SpaceTimeBumps::random(g, sd ^ 0x7f4a7c159e3779b9ull, 1);
            CauchyProblem prob;
            prob.u0 = u0;
            prob.F = TimeSource::from_function(g, n, [Fb, g, n](double s) { return Fb.at(g, n, s); });
            prob.f = TimeSource::from_function(g, 1, [fb, g](double s) { return fb.at(g, 1, s); });
            const SpaceTimeField u = solve(sg, prob);
            const double lhs =
                tent_norm(gradient_field(sg.generator(), u), norm_spec(spec.beta + 0.5, spec.p, TentKind::tent));
            const double rhs =
                hardy_sobolev_norm(u0, SpaceParams::from_s(2.0 * spec.beta + 1.0, spec.p), fam).value +
                tent_norm(prob.F->on_ladder(), norm_spec(spec.beta + 0.5, spec.p, TentKind::tent)) +
                tent_norm(prob.f->on_ladder(), norm_spec(spec.gamma, spec.q, TentKind::tent));
            constants[i] = rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : kNaN);
            remainders[i] = tent_norm(u - propagate(sg, u0), norm_spec(spec.beta + 1.0, spec.p, TentKind::tent));
        }
    };
    evaluate(spec.grid, rec.constants, rec.remainder_tent);
    rec.max_constant = 0.0;
    for (double c : rec.constants)
        if (std::isfinite(c)) rec.max_constant = std::max(rec.max_constant, c);
    rec.remainder_finite = std::all_of(rec.remainder_tent.begin(), rec.remainder_tent.end(),
                                       [](double v) { return std::isfinite(v); });
    if (spec.sensitivity)
        rec.sensitivity = sensitivity_records(spec.grid, rec.max_constant, [&](const GridSpec& g) {
            std::vector<double> cs, rs;
            evaluate(g, cs, rs);
            double m = 0.0;
            for (double c : cs)
                if (std::isfinite(c)) m = std::max(m, c);
            return m;
        });
    if (!reason.empty())
        rec.verdict = Verdict::out_of_theory;
    else
        rec.verdict =
            rec.max_constant <= spec.budgets.constant && rec.remainder_finite ? Verdict::pass : Verdict::fail;
    return rec;
}

std::string report_json(const EquivalenceReport& r, const ExperimentSpec& spec)
{
    json j = envelope(r.kind, spec, r.verdict, r.label);
    j["base"] = band_json(r.base);
    j["refined"] = band_json(r.refined);
    j["stability"] = num(r.stability);
    json extra = json::object();
    for (const auto& [k, b] : r.extra) {
        json e = {{"base", band_json(b)}};
        const auto it = r.extra_refined.find(k);
        if (it != r.extra_refined.end()) e["refined"] = band_json(it->second);
        extra[k] = e;
    }
    j["extra"] = extra;
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = num(v);
    j["metrics"] = metrics;
    j["sensitivity"] = sensitivity_json(r.sensitivity);
    return j.dump(2) + "\n";
}

std::string report_json(const DecayProfile& r, const ExperimentSpec& spec)
{
    json j = envelope("molecular", spec, r.verdict, r.label);
    j["j"] = r.j;
    json prof = json::array();
    for (const auto& p : r.profile) prof.push_back(num_list(p));
    j["profile"] = prof;
    j["monotone"] = r.monotone;
    j["region1_log_convex"] = r.region1_log_convex;
    j["region1_gaussian_rate"] = num(r.region1_gaussian_rate);
    j["power_rates"] = num_list(r.power_rates);
    j["radius"] = r.radius;
    j["routes"] = {{"region1", r.route_region1}, {"main", r.route_main}};
    j["sensitivity"] = sensitivity_json(r.sensitivity);
    return j.dump(2) + "\n";
}

std::string report_json(const EmbeddingTable& r, const ExperimentSpec& spec)
{
    json j = envelope("embeddings", spec, r.verdict, r.label);
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"input", row.input},
                        {"index", row.index},
                        {"radius", row.radius},
                        {"hop1", num(row.hop1)},
                        {"hop2", num(row.hop2)}});
    j["rows"] = rows;
    j["max_hop1"] = num(r.max_hop1);
    j["max_hop2"] = num(r.max_hop2);
    j["atom_spread_hop1"] = num(r.atom_spread_hop1);
    j["atom_spread_hop2"] = num(r.atom_spread_hop2);
    j["sensitivity"] = sensitivity_json(r.sensitivity);
    return j.dump(2) + "\n";
}

std::string report_json(const GlobalRecord& r, const ExperimentSpec& spec)
{
    json j = envelope("global", spec, r.verdict, r.label);
    j["constants"] = num_list(r.constants);
    j["max_constant"] = num(r.max_constant);
    j["remainder_tent"] = num_list(r.remainder_tent);
    j["remainder_finite"] = r.remainder_finite;
    j["sensitivity"] = sensitivity_json(r.sensitivity);
    return j.dump(2) + "\n";
}

std::string decay_csv(const DecayProfile& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "j,region1,region2,region3\n";
    for (std::size_t i = 0; i < r.j.size(); ++i)
        os << r.j[i] << ',' << r.profile[0][i] << ',' << r.profile[1][i] << ',' << r.profile[2][i] << '\n';
    return os.str();
}

std::string embedding_csv(const EmbeddingTable& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "input,index,radius,hop1,hop2\n";
    for (const auto& row : r.rows)
        os << row.input << ',' << row.index << ',' << row.radius << ',' << row.hop1 << ',' << row.hop2 << '\n';
    return os.str();
}

std::string band_csv(const EquivalenceReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "resolution,sample,ratio\n";
    for (std::size_t i = 0; i < r.base.ratios.size(); ++i) os << "base," << i << ',' << r.base.ratios[i] << '\n';
    for (std::size_t i = 0; i < r.refined.ratios.size(); ++i)
        os << "refined," << i << ',' << r.refined.ratios[i] << '\n';
    return os.str();
}

} // namespace tentkit
