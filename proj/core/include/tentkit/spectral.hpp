#pragma once

#include <string>

#include "tentkit/exponents.hpp"
#include "tentkit/grid.hpp"

namespace tentkit {

// Dyadic Littlewood-Paley family chi_j(xi) = theta(2^-j |xi|) - theta(2^{1-j} |xi|).
// theta is 1 on [0, 1.3], 0 on [1.7, inf) and smooth in between (built
// from exp(-1/x)), so chi is supported in 0.65 <= |xi| <= 1.7, inside the
// annulus 1/2 <= |xi| <= 4, and the sum over j telescopes to exactly 1.
struct LPFamily {
    static constexpr double kInner = 1.3;
    static constexpr double kOuter = 1.7;
    int j_min = 0;
    int j_max = 0;

    // Smallest band covering every nonzero frequency of the grid.
    static LPFamily for_grid(const GridSpec& grid);

    static double theta(double r);
    static double chi(double r) { return theta(r) - theta(2.0 * r); }
    double symbol(int j, double modulus) const;
    bool contains(int j) const { return j >= j_min && j <= j_max; }
};

struct NormMeta {
    int j_min = 0;
    int j_max = 0;
    double partition_residual = 0.0; // max |sum_j chi_j - 1| over nonzero grid frequencies
    bool surrogate = false;          // p = inf Hardy-Sobolev uses sup of the square function
    std::string note;
};

struct NormResult {
    double value = 0.0;
    NormMeta meta;
};

SpatialField lp_block(const SpatialField& f, int j, const LPFamily& fam);

// ||(sum_j |2^{js} Delta_j f|^2)^{1/2}||_p. For p = inf the supremum of the
// square function is returned and flagged as a surrogate.
NormResult hardy_sobolev_norm(const SpatialField& f, const SpaceParams& params, const LPFamily& fam);
// (sum_j (2^{js} ||Delta_j f||_p)^p)^{1/p}; sup over j when p = inf.
NormResult besov_norm(const SpatialField& f, const SpaceParams& params, const LPFamily& fam);

struct FractionalResult {
    SpatialField field;
    bool warning = false; // negative order applied to data with a mean
    std::string note;
};

// Multiplier |xi|^order, zero frequency mapped to 0. order in [-2, 2].
FractionalResult fractional_laplacian(const SpatialField& f, double order);

// Which heat symbol to use: the continuum e^{-t|xi|^2} or the symbol of the
// standard finite-difference Laplacian (so that results agree with the
// assembled generator at A = I).
enum class HeatSymbol { continuous, discrete };

SpatialField heat_multiplier(const SpatialField& f, double t, HeatSymbol kind = HeatSymbol::continuous);
// e^{t Delta} f at every ladder time.
SpaceTimeField heat_extension(const SpatialField& f, HeatSymbol kind = HeatSymbol::continuous);
// Gradient of the heat extension: multiplier i xi (continuous) or the
// forward-difference symbol (discrete). Scalar input, n-component output.
SpaceTimeField gradient_heat_extension(const SpatialField& f, HeatSymbol kind = HeatSymbol::continuous);

// Spectral gradient i xi f (Nyquist slots zeroed).
SpatialField spectral_gradient(const SpatialField& f);

} // namespace tentkit
