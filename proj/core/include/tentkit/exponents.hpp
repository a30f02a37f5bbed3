#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tentkit {

// An integrability exponent in (0, inf]. Infinity is a state of its own,
// not a large float; arithmetic goes through the reciprocal, where inf is 0.
class Exponent {
public:
    static Exponent finite(double value);
    static Exponent infinity() { return Exponent(0.0); }
    static Exponent from_reciprocal(double reciprocal);
    // Accepts a decimal number, a ratio "a/b", or "inf"/"infinity".
    static Exponent parse(std::string_view text);

    bool is_infinite() const { return reciprocal_ == 0.0; }
    double reciprocal() const { return reciprocal_; }
    // +inf (IEEE) for the infinite exponent; handy for printing and JSON.
    double value() const;
    std::string str() const;

    // Ordering of exponents: p < q iff 1/p > 1/q.
    friend bool operator==(Exponent a, Exponent b) { return a.reciprocal_ == b.reciprocal_; }
    friend bool operator<(Exponent a, Exponent b) { return a.reciprocal_ > b.reciprocal_; }
    friend bool operator<=(Exponent a, Exponent b) { return a.reciprocal_ >= b.reciprocal_; }
    friend bool operator>(Exponent a, Exponent b) { return b < a; }
    friend bool operator>=(Exponent a, Exponent b) { return b <= a; }

private:
    explicit Exponent(double reciprocal) : reciprocal_(reciprocal) {}
    double reciprocal_;
};

Exponent holder_conjugate(Exponent p);

// The four critical numbers of L plus the dimension.
struct ExponentProfile {
    int n = 1;
    Exponent p_minus_L = Exponent::finite(0.5);
    Exponent q_plus_L = Exponent::infinity();
    Exponent p_minus_Lstar = Exponent::finite(0.5);
    Exponent q_plus_Lstar = Exponent::infinity();

    // Full invariant: n/(n+1) <= p_- < 2n/(n+2), q_+ > 2, for L and L*.
    static ExponentProfile make(int n, Exponent p_minus_L, Exponent q_plus_L,
                                Exponent p_minus_Lstar, Exponent q_plus_Lstar);
    // Arithmetic domain only: p_- >= n/(n+1) and q_+ > 2. Used to evaluate
    // the formulas on profiles that no operator in dimension n realises.
    static ExponentProfile hypothetical(int n, Exponent p_minus_L, Exponent q_plus_L,
                                        Exponent p_minus_Lstar, Exponent q_plus_Lstar);
    static ExponentProfile laplacian(int n);

    ExponentProfile adjoint() const;
    bool satisfies_strict_invariant() const;
};

double p_minus_s_reciprocal(const ExponentProfile& profile, double s);
Exponent p_minus_s(const ExponentProfile& profile, double s);
Exponent p_plus_s(const ExponentProfile& profile, double s);
double beta_L(const ExponentProfile& profile);
Exponent p_L_beta(const ExponentProfile& profile, double beta);
Exponent p_tilde(const ExponentProfile& profile, double beta);
Exponent p_flat(const ExponentProfile& profile, double gamma);

enum class SpaceVariant { hardy_sobolev, besov, tent, zspace };

// Regularity/integrability pair. Only s is stored, so s = 2 beta + 1 holds
// by construction.
class SpaceParams {
public:
    static SpaceParams from_s(double s, Exponent p, SpaceVariant variant = SpaceVariant::hardy_sobolev);
    static SpaceParams from_beta(double beta, Exponent p, SpaceVariant variant = SpaceVariant::tent);

    double s() const { return s_; }
    double beta() const { return (s_ - 1.0) / 2.0; }
    Exponent p() const { return p_; }
    SpaceVariant variant() const { return variant_; }

private:
    SpaceParams(double s, Exponent p, SpaceVariant v) : s_(s), p_(p), variant_(v) {}
    double s_;
    Exponent p_;
    SpaceVariant variant_;
};

enum class Region { wellposed_hc, identification, lions, source_pair };

std::string to_string(Region region);
Region region_from_string(std::string_view name);

struct MembershipRecord {
    bool member = false;
    std::string reason;
    // The critical exponent the test compared against, when there is one.
    std::optional<Exponent> lower;
    std::optional<Exponent> upper;
};

MembershipRecord region_membership(const ExponentProfile& profile, const SpaceParams& params, Region region);
// The two-parameter form for the source pair (beta, p) and (gamma, q).
MembershipRecord region_membership(const ExponentProfile& profile, const SpaceParams& solution,
                                   const SpaceParams& source);

inline constexpr double kLineTolerance = 1e-12;

struct PolylinePoint {
    double inv_p;
    double beta;
};

// Boundary of a region in (1/p, beta) coordinates. For wellposed_hc and
// lions: the lower curve 1/p = 1/p~(beta) sampled on `resolution` points
// (breakpoints at -1/2 and beta(L) inserted exactly), followed by the
// closing p = inf edge. For identification: the two curves
// 1/p_-(2beta+1) and 1/p_+(2beta+1) over -1 <= beta <= 0.
std::vector<PolylinePoint> region_boundary_polyline(const ExponentProfile& profile, Region region,
                                                    int resolution);
std::string polyline_csv(const std::vector<PolylinePoint>& points);

} // namespace tentkit
