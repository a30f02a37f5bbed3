#include "tentkit/exponents.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_double(std::string_view text)
{
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        fail("exponent.parse", "not a number: '" + std::string(text) + "'");
    return v;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void check_s(double s)
{
    if (!(s >= -1.0 && s <= 1.0))
        fail("exponent.out_of_domain", "s must lie in [-1, 1], got " + fmt(s));
}

void check_beta(double beta)
{
    if (!(beta > -1.0) || !std::isfinite(beta))
        fail("exponent.out_of_domain", "beta must exceed -1, got " + fmt(beta));
}

Exponent positive_from_reciprocal(double r, const char* what)
{
    if (!(r > 0.0))
        fail("exponent.nonpositive", std::string(what) + " leaves (0, inf]: reciprocal " + fmt(r));
    return Exponent::from_reciprocal(r);
}

// 1/p~(beta) extended continuously to beta = -1.
double p_tilde_reciprocal_closed(const ExponentProfile& pr, double beta)
{
    const double inv_pm = pr.p_minus_L.reciprocal();
    const double n = pr.n;
    if (pr.p_minus_L >= Exponent::finite(1.0)) {
        if (beta >= -0.5) return inv_pm + (2.0 * beta + 1.0) / n;
        return p_minus_s_reciprocal(pr, 2.0 * beta + 1.0);
    }
    const double bl = beta_L(pr);
    if (beta >= bl) return inv_pm + (2.0 * beta + 1.0) / n;
    // (bL+1) q / ((bL+1) q + beta - bL), written through 1/q so q = inf is exact
    return 1.0 + (beta - bl) * pr.q_plus_Lstar.reciprocal() / (bl + 1.0);
}

} // namespace

Exponent Exponent::finite(double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        fail("exponent.invalid", "finite exponent must be a positive real, got " + fmt(value));
    return Exponent(1.0 / value);
}

Exponent Exponent::from_reciprocal(double reciprocal)
{
    if (!(reciprocal >= 0.0) || !std::isfinite(reciprocal))
        fail("exponent.invalid", "reciprocal must be finite and >= 0, got " + fmt(reciprocal));
    return Exponent(reciprocal);
}

Exponent Exponent::parse(std::string_view text)
{
    text = trim(text);
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = parse_double(trim(text.substr(0, slash)));
        const double den = parse_double(trim(text.substr(slash + 1)));
        if (den == 0.0) fail("exponent.parse", "zero denominator in '" + std::string(text) + "'");
        return finite(num / den);
    }
    return finite(parse_double(text));
}

double Exponent::value() const
{
    return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / reciprocal_;
}

std::string Exponent::str() const
{
    return is_infinite() ? std::string("inf") : fmt(value());
}

Exponent holder_conjugate(Exponent p)
{
    if (p.reciprocal() > 1.0) fail("exponent.out_of_domain", "Holder conjugate needs p >= 1, got " + p.str());
    return Exponent::from_reciprocal(1.0 - p.reciprocal());
}

namespace {

void check_profile_domain(int n, Exponent pm, Exponent qp, const char* which)
{
    if (n < 1) fail("profile.invalid", "dimension must be positive");
    const double floor_inv = (n + 1.0) / n; // 1/p_- <= (n+1)/n
    if (pm.reciprocal() > floor_inv * (1.0 + 1e-15))
        fail("profile.invalid", std::string(which) + ": p_- below n/(n+1)");
    if (!(qp > Exponent::finite(2.0))) fail("profile.invalid", std::string(which) + ": q_+ must exceed 2");
}

} // namespace

ExponentProfile ExponentProfile::hypothetical(int n, Exponent pm, Exponent qp, Exponent pms, Exponent qps)
{
    check_profile_domain(n, pm, qp, "L");
    check_profile_domain(n, pms, qps, "L*");
    return ExponentProfile{n, pm, qp, pms, qps};
}

ExponentProfile ExponentProfile::make(int n, Exponent pm, Exponent qp, Exponent pms, Exponent qps)
{
    ExponentProfile p = hypothetical(n, pm, qp, pms, qps);
    if (!p.satisfies_strict_invariant())
        fail("profile.invalid", "p_- must be < 2n/(n+2) for L and L*");
    return p;
}

bool ExponentProfile::satisfies_strict_invariant() const
{
    const double ceiling_inv = (n + 2.0) / (2.0 * n);
    return p_minus_L.reciprocal() > ceiling_inv && p_minus_Lstar.reciprocal() > ceiling_inv;
}

ExponentProfile ExponentProfile::laplacian(int n)
{
    const Exponent pm = Exponent::from_reciprocal((n + 1.0) / n);
    return make(n, pm, Exponent::infinity(), pm, Exponent::infinity());
}

ExponentProfile ExponentProfile::adjoint() const
{
    return ExponentProfile{n, p_minus_Lstar, q_plus_Lstar, p_minus_L, q_plus_L};
}

double p_minus_s_reciprocal(const ExponentProfile& pr, double s)
{
    check_s(s);
    const double inv_pm = pr.p_minus_L.reciprocal();
    if (s >= 0.0) return inv_pm + s / pr.n;
    const double inv_conj = 1.0 - pr.q_plus_Lstar.reciprocal(); // 1/q_+(L*)'
    return (1.0 + s) * inv_pm - s * inv_conj;
}

Exponent p_minus_s(const ExponentProfile& profile, double s)
{
    return positive_from_reciprocal(p_minus_s_reciprocal(profile, s), "p_-(s,L)");
}

Exponent p_plus_s(const ExponentProfile& profile, double s)
{
    check_s(s);
    const Exponent inner = p_minus_s(profile.adjoint(), -s);
    const Exponent clipped = inner >= Exponent::finite(1.0) ? inner : Exponent::finite(1.0);
    return holder_conjugate(clipped);
}

double beta_L(const ExponentProfile& profile)
{
    return -0.5 - 0.5 * profile.n * (profile.p_minus_L.reciprocal() - 1.0);
}

Exponent p_L_beta(const ExponentProfile& profile, double beta)
{
    check_beta(beta);
    return positive_from_reciprocal(profile.p_minus_L.reciprocal() + (2.0 * beta + 1.0) / profile.n, "p_L(beta)");
}

Exponent p_tilde(const ExponentProfile& profile, double beta)
{
    check_beta(beta);
    return positive_from_reciprocal(p_tilde_reciprocal_closed(profile, beta), "p~_L(beta)");
}

Exponent p_flat(const ExponentProfile& profile, double gamma)
{
    if (!(gamma > -0.5) || !std::isfinite(gamma))
        fail("exponent.out_of_domain", "gamma must exceed -1/2, got " + fmt(gamma));
    const double inv_m = std::min(profile.p_minus_L.reciprocal(), 1.0); // 1/max{p_-,1}
    return positive_from_reciprocal(inv_m + (2.0 * gamma + 1.0) / profile.n, "p_flat(gamma)");
}

SpaceParams SpaceParams::from_s(double s, Exponent p, SpaceVariant variant)
{
    if (!std::isfinite(s)) fail("params.invalid", "regularity must be finite");
    return SpaceParams(s, p, variant);
}

SpaceParams SpaceParams::from_beta(double beta, Exponent p, SpaceVariant variant)
{
    if (!std::isfinite(beta)) fail("params.invalid", "beta must be finite");
    return SpaceParams(2.0 * beta + 1.0, p, variant);
}

std::string to_string(Region region)
{
    switch (region) {
    case Region::wellposed_hc: return "wellposed_hc";
    case Region::identification: return "identification";
    case Region::lions: return "lions";
    case Region::source_pair: return "source_pair";
    }
    return "?";
}

Region region_from_string(std::string_view name)
{
    if (name == "wellposed_hc") return Region::wellposed_hc;
    if (name == "identification") return Region::identification;
    if (name == "lions") return Region::lions;
    if (name == "source_pair") return Region::source_pair;
    fail("config.unknown_region", "unknown region '" + std::string(name) + "'");
}

MembershipRecord region_membership(const ExponentProfile& profile, const SpaceParams& params, Region region)
{
    MembershipRecord rec;
    const double beta = params.beta();
    const Exponent p = params.p();
    switch (region) {
    case Region::wellposed_hc:
    case Region::lions: {
        const bool hc = region == Region::wellposed_hc;
        if (!(beta > -1.0)) {
            rec.reason = "beta <= -1 is outside the theory";
            return rec;
        }
        if (hc && !(beta < 0.0)) {
            rec.reason = "homogeneous problem needs -1 < beta < 0";
            return rec;
        }
        const Exponent pt = p_tilde(profile, beta);
        rec.lower = pt;
        rec.member = pt < p; // open below, closed at p = inf
        rec.reason = rec.member ? "p~_L(beta) < p <= inf" : "p <= p~_L(beta) = " + pt.str();
        return rec;
    }
    case Region::identification: {
        const double s = params.s();
        if (!(s >= -1.0 && s <= 1.0)) {
            rec.reason = "s = " + fmt(s) + " outside [-1, 1]; p_+- are not defined there";
            return rec;
        }
        const Exponent lo = p_minus_s(profile, s);
        const Exponent hi = p_plus_s(profile, s);
        rec.lower = lo;
        rec.upper = hi;
        rec.member = lo < p && p < hi;
        rec.reason = rec.member ? "p_-(s,L) < p < p_+(s,L)"
                                : "p outside (" + lo.str() + ", " + hi.str() + ")";
        return rec;
    }
    case Region::source_pair:
        return region_membership(profile, params, params);
    }
    return rec;
}

MembershipRecord region_membership(const ExponentProfile& profile, const SpaceParams& solution,
                                   const SpaceParams& source)
{
    MembershipRecord rec;
    const double beta = solution.beta();
    const double gamma = source.beta();
    const double n = profile.n;
    const double lhs = 2.0 * beta - n * solution.p().reciprocal();
    const double rhs = 2.0 * gamma - n * source.p().reciprocal();
    const bool ordered = gamma >= beta;
    const bool on_line = std::abs(lhs - rhs) <= kLineTolerance;
    rec.member = ordered && on_line;
    if (rec.member)
        rec.reason = "gamma >= beta and 2beta - n/p = 2gamma - n/q";
    else if (!ordered)
        rec.reason = "gamma < beta";
    else
        rec.reason = "off the line: |(2beta - n/p) - (2gamma - n/q)| = " + fmt(std::abs(lhs - rhs));
    return rec;
}

std::vector<PolylinePoint> region_boundary_polyline(const ExponentProfile& profile, Region region, int resolution)
{
    if (resolution < 2) fail("polyline.resolution", "resolution must be >= 2");
    std::vector<PolylinePoint> out;

    auto sample = [&](double lo, double hi, const std::vector<double>& breaks, auto&& curve) {
        std::vector<double> betas;
        for (int i = 0; i < resolution; ++i) {
            const double t = static_cast<double>(i) / (resolution - 1);
            betas.push_back(i == resolution - 1 ? hi : lo + t * (hi - lo));
        }
        for (double b : breaks)
            if (b > lo && b < hi) betas.push_back(b);
        std::sort(betas.begin(), betas.end());
        betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
        for (double b : betas) out.push_back({curve(b), b});
    };

    const std::vector<double> breaks{-0.5, beta_L(profile)};
    switch (region) {
    case Region::wellposed_hc:
    case Region::lions: {
        const double hi = region == Region::wellposed_hc ? 0.0 : 1.0;
        sample(-1.0, hi, breaks, [&](double b) { return p_tilde_reciprocal_closed(profile, b); });
        out.push_back({0.0, hi});
        out.push_back({0.0, -1.0});
        return out;
    }
    case Region::identification: {
        sample(-1.0, 0.0, breaks, [&](double b) { return p_minus_s_reciprocal(profile, 2.0 * b + 1.0); });
        std::vector<PolylinePoint> upper;
        std::swap(upper, out);
        sample(-1.0, 0.0, breaks, [&](double b) { return p_plus_s(profile, 2.0 * b + 1.0).reciprocal(); });
        // lower curve bottom-to-top, then upper curve top-to-bottom: a closed outline
        std::reverse(out.begin(), out.end());
        upper.insert(upper.end(), out.begin(), out.end());
        return upper;
    }
    case Region::source_pair: {
        // The admissible source exponents for a given (beta, p) form a ray on
        // the line 2gamma - n/q = const; plot the p_flat curve bounding them.
        sample(-0.5 + 1.0 / (4.0 * resolution), 1.0, {}, [&](double g) { return p_flat(profile, g).reciprocal(); });
        return out;
    }
    }
    return out;
}

std::string polyline_csv(const std::vector<PolylinePoint>& points)
{
    std::ostringstream os;
    os << std::setprecision(17) << "inv_p,beta\n";
    for (const auto& p : points) os << p.inv_p << ',' << p.beta << '\n';
    return os.str();
}

} // namespace tentkit
