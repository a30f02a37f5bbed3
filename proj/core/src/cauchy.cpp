#include "tentkit/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

// piecewise-linear interpolation of node samples; clamps outside
SpatialField interpolate(const std::vector<double>& nodes, const std::vector<SpatialField>& values, double s)
{
    if (s <= nodes.front()) return values.front();
    if (s >= nodes.back()) return values.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    const std::size_t lo = hi - 1;
    const double w = (s - nodes[lo]) / (nodes[hi] - nodes[lo]);
    if (w == 0.0) return values[lo];
    SpatialField out = values[lo];
    out *= (1.0 - w);
    out.axpy(w, values[hi]);
    return out;
}

double l2_dt_sq(const SpaceTimeField& F) { return weighted_l2_sq(F, 0.0); }

double relative_residual(const SpaceTimeField& lhs, const SpaceTimeField& rhs)
{
    const double den = l2_dt_sq(lhs);
    const double num = l2_dt_sq(lhs - rhs);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
    return std::sqrt(num / den);
}

TimeSource divergence_source(const Semigroup& sg, const TimeSource& F)
{
    const GridSpec& g = sg.grid();
    if (F.is_zero()) return TimeSource::zero(g, 1);
    require(F.components() == g.n, "operator.shape", "divergence-form source must have n components");
    const DiscreteGenerator* gen = &sg.generator();
    return TimeSource::from_function(g, 1, [gen, F](double s) { return gen->divergence(F.at(s)); });
}

} // namespace

IntegrationLadder IntegrationLadder::for_grid(const GridSpec& grid, double depth)
{
    IntegrationLadder lad;
    int sub = 0;
    if (depth > 0.0 && depth < 1.0) sub = static_cast<int>(std::ceil(std::log(1.0 / depth) / grid.log_step()));
    lad.nodes.push_back(0.0);
    for (int m = sub; m >= 1; --m) lad.nodes.push_back(grid.t_min * std::exp(-m * grid.log_step()));
    lad.grid_offset = static_cast<int>(lad.nodes.size());
    for (double t : grid.times()) lad.nodes.push_back(t);
    return lad;
}

TimeSource TimeSource::zero(const GridSpec& grid, int components)
{
    TimeSource s;
    s.grid_ = grid;
    s.comps_ = components;
    s.zero_ = true;
    return s;
}

TimeSource TimeSource::from_function(const GridSpec& grid, int components, Fn fn)
{
    TimeSource s;
    s.grid_ = grid;
    s.comps_ = components;
    s.zero_ = false;
    s.fn_ = std::move(fn);
    return s;
}

TimeSource TimeSource::from_field(const SpaceTimeField& F, std::optional<SpatialField> at_zero)
{
    const GridSpec& g = F.grid();
    std::vector<double> nodes;
    std::vector<SpatialField> values;
    if (at_zero) {
        require(at_zero->grid().same_space(g) && at_zero->components() == F.components(), "grid.mismatch",
                "initial source slice does not match the field");
        nodes.push_back(0.0);
        values.push_back(*at_zero);
    }
    for (int k = 0; k < g.levels; ++k) {
        nodes.push_back(g.time(k));
        values.push_back(F.level(k));
    }
    return from_nodes(g, std::move(nodes), std::move(values));
}

TimeSource TimeSource::from_nodes(const GridSpec& grid, std::vector<double> nodes, std::vector<SpatialField> values)
{
    require(!nodes.empty() && nodes.size() == values.size(), "grid.mismatch", "node samples incomplete");
    require(std::is_sorted(nodes.begin(), nodes.end()), "grid.mismatch", "nodes must be increasing");
    const int comps = values.front().components();
    auto shared_nodes = std::make_shared<const std::vector<double>>(std::move(nodes));
    auto shared_values = std::make_shared<const std::vector<SpatialField>>(std::move(values));
    return from_function(grid, comps, [shared_nodes, shared_values](double s) {
        return interpolate(*shared_nodes, *shared_values, s);
    });
}

SpatialField TimeSource::at(double s) const
{
    if (zero_) return SpatialField(grid_, comps_);
    SpatialField v = fn_(s);
    require(v.grid().same_space(grid_) && v.components() == comps_, "grid.mismatch",
            "source returned a field of the wrong shape");
    return v;
}

SpaceTimeField TimeSource::on_ladder() const
{
    SpaceTimeField F(grid_, comps_);
    if (zero_) return F;
    for (int k = 0; k < grid_.levels; ++k) F.set_level(k, at(grid_.time(k)));
    return F;
}

std::vector<SpatialField> integrate_nodes(const Semigroup& sg, const IntegrationLadder& ladder, const TimeSource& g,
                                          const SpatialField* init)
{
    const GridSpec& grid = sg.grid();
    const int comps = init ? init->components() : g.components();
    require(g.is_zero() || g.components() == comps, "operator.shape", "source and initial value differ in shape");
    std::vector<SpatialField> out;
    const std::size_t count = ladder.nodes.size();
    out.reserve(count);
    out.push_back(init ? *init : SpatialField(grid, comps));
    if (g.is_zero()) {
        const SpatialField zero(grid, comps);
        for (std::size_t i = 1; i < count; ++i)
            out.push_back(sg.slab_step(out.back(), zero, zero, ladder.nodes[i] - ladder.nodes[i - 1]));
        return out;
    }
    std::vector<SpatialField> gv;
    gv.reserve(count);
    for (double t : ladder.nodes) gv.push_back(g.at(t));
    // g on each slab is the quadratic through its two end nodes and the
    // previous node (the next one on the first slab)
    for (std::size_t i = 1; i < count; ++i) {
        const double t0 = ladder.nodes[i - 1], dt = ladder.nodes[i] - t0;
        if (count < 3) {
            out.push_back(sg.slab_step(out.back(), gv[i - 1], gv[i], dt));
            continue;
        }
        const std::size_t x = i >= 2 ? i - 2 : i + 1;
        const double theta = (ladder.nodes[x] - t0) / dt;
        SpatialField c = gv[x] - gv[i - 1];
        c -= theta * (gv[i] - gv[i - 1]);
        c *= 1.0 / (theta * (theta - 1.0));
        out.push_back(sg.slab_step(out.back(), gv[i - 1], gv[i], dt, &c));
    }
    return out;
}

SpaceTimeField restrict_to_grid(const GridSpec& grid, const IntegrationLadder& ladder,
                                const std::vector<SpatialField>& values)
{
    SpaceTimeField F(grid, values.front().components());
    for (int k = 0; k < grid.levels; ++k) F.set_level(k, values[ladder.grid_offset + k]);
    return F;
}

SpaceTimeField gradient_field(const DiscreteGenerator& gen, const SpaceTimeField& u)
{
    const GridSpec& g = gen.grid();
    SpaceTimeField out(g, g.n);
    for (int k = 0; k < g.levels; ++k) out.set_level(k, gen.gradient(u.level(k)));
    return out;
}

SpaceTimeField propagate(const Semigroup& sg, const SpatialField& u0)
{
    const GridSpec& g = sg.grid();
    SpaceTimeField out(g, u0.components());
    for (int k = 0; k < g.levels; ++k) out.set_level(k, sg.apply(u0, g.time(k)));
    return out;
}

SpaceTimeField lions_op(const Semigroup& sg, const TimeSource& F, double depth)
{
    const GridSpec& g = sg.grid();
    if (F.is_zero()) return SpaceTimeField(g, 1);
    const auto lad = IntegrationLadder::for_grid(g, depth);
    return restrict_to_grid(g, lad, integrate_nodes(sg, lad, divergence_source(sg, F)));
}

SpaceTimeField lions_grad_op(const Semigroup& sg, const TimeSource& F, double depth)
{
    return gradient_field(sg.generator(), lions_op(sg, F, depth));
}

SpaceTimeField source_op(const Semigroup& sg, const TimeSource& f, double depth)
{
    const GridSpec& g = sg.grid();
    if (f.is_zero()) return SpaceTimeField(g, 1);
    require(f.components() == 1, "operator.shape", "scalar source expected");
    const auto lad = IntegrationLadder::for_grid(g, depth);
    return restrict_to_grid(g, lad, integrate_nodes(sg, lad, f));
}

SpaceTimeField solve(const Semigroup& sg, const CauchyProblem& problem, double depth)
{
    const GridSpec& g = sg.grid();
    SpaceTimeField u(g, 1);
    if (problem.u0) u += propagate(sg, *problem.u0);
    if (problem.F) u += lions_op(sg, *problem.F, depth);
    if (problem.f) u += source_op(sg, *problem.f, depth);
    return u;
}

double l2_estimate_constant(const Semigroup& sg, const SpaceTimeField& u, const CauchyProblem& problem)
{
    double sup = 0.0;
    for (int k = 0; k < u.levels(); ++k) sup = std::max(sup, u.level(k).l2_norm());
    const double grad = std::sqrt(weighted_l2_sq(gradient_field(sg.generator(), u), 0.0));
    double data = problem.u0 ? problem.u0->l2_norm() : 0.0;
    if (problem.F && !problem.F->is_zero()) data += std::sqrt(weighted_l2_sq(problem.F->on_ladder(), 0.0));
    if (data == 0.0) return 0.0;
    return (sup + grad) / data;
}

double DuhamelRecord::max_residual() const
{
    double m = 0.0;
    for (const auto& r : {lions, semigroup_via_L, semigroup_via_delta})
        if (r) m = std::max(m, *r);
    return m;
}

DuhamelRecord duhamel_identities(const Semigroup& sg_L, const Semigroup& sg_delta,
                                 const std::optional<SpatialField>& u0, const std::optional<TimeSource>& F,
                                 double depth)
{
    const GridSpec& g = sg_L.grid();
    require(g == sg_delta.grid(), "grid.mismatch", "generators live on different grids");
    require(sg_delta.generator().is_identity(), "cauchy.reference", "second generator must have A = I");
    const DiscreteGenerator& gen = sg_L.generator();
    const auto lad = IntegrationLadder::for_grid(g, depth);
    DuhamelRecord rec;

    if (F && !F->is_zero()) {
        const auto uL = integrate_nodes(sg_L, lad, divergence_source(sg_L, *F));
        std::vector<SpatialField> g_tilde;
        g_tilde.reserve(uL.size());
        for (std::size_t i = 0; i < uL.size(); ++i) {
            SpatialField Ft = F->at(lad.nodes[i]);
            Ft += gen.apply_face_minus_identity(gen.gradient(uL[i]));
            g_tilde.push_back(gen.divergence(Ft));
        }
        const auto uD = integrate_nodes(sg_delta, lad, TimeSource::from_nodes(g, lad.nodes, std::move(g_tilde)));
        rec.lions = relative_residual(restrict_to_grid(g, lad, uL), restrict_to_grid(g, lad, uD));
    }

    if (u0) {
        const SpaceTimeField EL = propagate(sg_L, *u0);
        const SpaceTimeField ED = propagate(sg_delta, *u0);
        {
            const SpatialField v0 = *u0;
            const Semigroup* delta = &sg_delta;
            const DiscreteGenerator* gp = &gen;
            const TimeSource src = TimeSource::from_function(g, 1, [delta, gp, v0](double s) {
                return gp->divergence(gp->apply_face_minus_identity(gp->gradient(delta->apply(v0, s))));
            });
            const SpaceTimeField rhs = ED + restrict_to_grid(g, lad, integrate_nodes(sg_L, lad, src));
            rec.semigroup_via_L = relative_residual(EL, rhs);
        }
        {
            std::vector<SpatialField> src;
            src.reserve(lad.nodes.size());
            for (double s : lad.nodes)
                src.push_back(gen.divergence(gen.apply_face_minus_identity(gen.gradient(sg_L.apply(*u0, s)))));
            const auto R = integrate_nodes(sg_delta, lad, TimeSource::from_nodes(g, lad.nodes, std::move(src)));
            rec.semigroup_via_delta = relative_residual(EL, ED + restrict_to_grid(g, lad, R));
        }
    }
    return rec;
}

std::string trace_theory_label(double beta, Exponent p, TraceMode mode)
{
    const double pv = p.value();
    if (!(beta > -1.0)) return "unverified-by-theory";
    switch (mode) {
    case TraceMode::pairing: return "S' (pairing against smooth tests)";
    case TraceMode::Lp:
        if (beta >= -0.5 && pv >= 1.0 && pv <= 2.0) return "L^p (beta >= -1/2, 1 <= p <= 2)";
        return "unverified-by-theory";
    case TraceMode::slice_div:
        if (pv > 2.0) return "E^{-1,q}_delta (2 < p, q >= p)";
        return "unverified-by-theory";
    }
    return "unverified-by-theory";
}

TraceRecord trace_convergence(const SpaceTimeField& u, const std::optional<SpatialField>& target, TraceMode mode,
                              Exponent p, double delta, double beta)
{
    const GridSpec& g = u.grid();
    TraceRecord rec;
    rec.mode = mode;
    rec.theory = trace_theory_label(beta, p, mode);
    if (delta <= 0.0) delta = 16.0 * g.h() * g.h();

    std::vector<SpatialField> bank;
    if (mode == TraceMode::pairing)
        for (const auto& tf : default_testbank(g)) {
            SpatialField chi(g, u.components());
            for (int comp = 0; comp < u.components(); ++comp)
                for (int c = 0; c < g.cells(); ++c) chi(c, comp) = tf.space_part(g, c);
            bank.push_back(std::move(chi));
        }

    for (int k = g.levels - 1; k >= 0; --k) {
        SpatialField d = u.level(k);
        if (target) d -= *target;
        double v = 0.0;
        switch (mode) {
        case TraceMode::pairing:
            for (const auto& chi : bank) v = std::max(v, std::abs(pair(d, chi)));
            break;
        case TraceMode::Lp: v = d.lp_norm(p.value()); break;
        case TraceMode::slice_div: v = slice_norm(d, p, delta, SliceOrder::div).value; break;
        }
        rec.times.push_back(g.time(k));
        rec.values.push_back(v);
    }

    rec.decreasing = true;
    for (std::size_t i = 1; i < rec.values.size(); ++i)
        if (rec.values[i] > rec.values[i - 1] * (1.0 + 1e-12)) rec.decreasing = false;
    rec.final_over_initial = rec.values.front() > 0.0 ? rec.values.back() / rec.values.front() : 0.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rec.values.size(); ++i)
        if (rec.values[i] > 0.0) {
            xs.push_back(std::log(rec.times[i]));
            ys.push_back(std::log(rec.values[i]));
        }
    if (xs.size() >= 2) rec.fitted_rate = fit_line(xs, ys).slope;
    return rec;
}

EndpointRecord endpoint_divergence_semigroup(const Semigroup& sg, const SpatialField& f, Exponent p)
{
    const GridSpec& g = sg.grid();
    require(f.components() == g.n, "operator.shape", "endpoint operator takes an n-component field");
    EndpointRecord rec;
    const SpatialField div = sg.generator().divergence(f);
    rec.field = propagate(sg, div);
    TentNormSpec spec;
    spec.beta = 0.0;
    spec.p = p;
    rec.tent = tent_norm(rec.field, spec);
    rec.f_norm = f.lp_norm(p.value());
    if (p == Exponent::finite(2.0) && rec.f_norm > 0.0) rec.ratio = rec.tent / rec.f_norm;
    return rec;
}

} // namespace tentkit
