#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tentkit/exponents.hpp"
#include "tentkit/grid.hpp"

namespace tentkit {

enum class TentKind { tent, z };

struct TentNormSpec {
    double beta = 0.0;
    Exponent p = Exponent::finite(2.0);
    double aperture = 1.0;         // cone B(x, aperture * sqrt t)
    double carleson_deficit = 0.0; // the [p,1] exponent of the p = inf Carleson variant
    TentKind kind = TentKind::tent;

    void validate() const;
};

// ( sum_x h^n ( sum_k w_k mean_{B(x, a sqrt t_k)} |t_k^-beta F_k|^2 )^{p/2} )^{1/p},
// w_k the interpolant dt-weights of the ladder. For aperture a > 1 the sum
// over B(x, a sqrt t_k) is still divided by |B(x, sqrt t_k)|, so the norm is
// nondecreasing in a. p = inf is routed to
// carleson_norm; kind = z is routed to z_norm.
double tent_norm(const SpaceTimeField& F, const TentNormSpec& spec);

// sup over centers and radii h 2^m (up to the first radius that covers the
// torus) of |B|^{-deficit} ( int_{t_min}^{min(r^2, t_max)} mean_B |t^-beta F|^2 dt )^{1/2},
// with |B| the discrete measure (cell count times h^n).
double carleson_norm(const SpaceTimeField& F, const TentNormSpec& spec);

// Z-space: inner plain ds integral over (t/2, t) of ball means at radius
// a sqrt t, outer measure dt/t; p = inf takes the sup over (t, x).
double z_norm(const SpaceTimeField& F, const TentNormSpec& spec);

// Direct weighted space-time quadrature sum_k w_k t_k^{-2 beta} h^n sum |F|^2,
// the p = 2 reference value (squared norm).
double weighted_l2_sq(const SpaceTimeField& F, double beta);

enum class SliceOrder { plain, grad, div };

struct SliceResult {
    double value = 0.0;
    bool upper_bound = false; // div: Fourier-projection representative, not the infimum
};

// ||(mean_{B(., sqrt delta)} |g|^2)^{1/2}||_p with g = f, the forward
// difference gradient of f, or (div) the representative G with
// div_h G = f obtained by Fourier projection.
SliceResult slice_norm(const SpatialField& f, Exponent p, double delta, SliceOrder order);

// Representative G with div_h G = f - mean(f), built in Fourier space.
SpatialField divergence_preimage(const SpatialField& f);

enum class AtomShape { flat, random };

struct TentAtom {
    SpaceTimeField field;
    int center = 0;
    double radius = 0.0;
    double beta = 0.0;
    Exponent p = Exponent::finite(1.0);
    int ball_cells = 0;
    double ball_measure = 0.0; // discrete |B|
};

// Atom supported in [0, r^2] x B(center, r) (ladder nodes t_k <= r^2, cells
// strictly inside the ball) with ||a||_{L^2_beta} = |B|^{-(1/p - 1/2)}
// under the ladder quadrature.
TentAtom make_atom(const GridSpec& grid, int center, double radius, double beta, Exponent p, AtomShape shape,
                   std::uint64_t seed = 0, int components = 1);
bool atom_support_ok(const TentAtom& atom);
double atom_l2_beta(const TentAtom& atom);

struct ApertureRatio {
    double ratio = 0.0;
    bool defined = false;
};
ApertureRatio aperture_ratio(const SpaceTimeField& F, const TentNormSpec& spec, double aperture2);

struct EmbeddingRecord {
    double from_norm = 0.0;
    double to_norm = 0.0;
    double ratio = 0.0;
    double budget = 0.0;
    bool pass = false;
};

// Requires from == to, or beta0 > beta1, p0 < p1 and 2 beta0 - n/p0 = 2 beta1 - n/p1.
EmbeddingRecord embedding_check(const SpaceTimeField& F, const TentNormSpec& from, const TentNormSpec& to,
                                double budget = 32.0);
void validate_embedding_line(int n, const TentNormSpec& from, const TentNormSpec& to);

std::string norm_csv_header();
std::string norm_csv_row(const TentNormSpec& spec, double value, const GridSpec& grid);

} // namespace tentkit
