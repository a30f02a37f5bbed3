#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tentkit/semigroup.hpp"

namespace tentkit {

struct DecaySample {
    double distance = 0.0; // torus distance between the two cell sets
    double t = 0.0;
    double norm = 0.0;     // ||1_E e^{-tL} 1_F||_{2->2}
};

// log norm ~ intercept - c dist^2 / t
struct DecayRecord {
    std::vector<DecaySample> samples;
    double fitted_c = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    double mean_norm = 0.0;
};

// Random ball pairs E, F with torus distance in [separation, 2 separation].
// Needs separation >= 2h and room for the pair on the torus.
DecayRecord offdiagonal_probe(const Semigroup& sg, double t, double separation, int trials, std::uint64_t seed);

// Empirical p -> p bounds of e^{-tL} and sqrt(t) grad e^{-tL} over random
// indicator and spike fields. Indicative only: a finite torus cannot certify
// p_+-(L), and only p > 1 is probed (Hardy-space endpoints have no grid
// analogue).
struct ExponentEstimate {
    std::vector<double> p_grid;
    std::vector<double> semigroup_sup; // sup over t and fields, per p
    std::vector<double> gradient_sup;
    double threshold = 0.0;
    // widest run of consecutive grid points around p = 2 below threshold
    double p_lo = 0.0, p_hi = 0.0;
    double q_lo = 0.0, q_hi = 0.0;
    bool p_covers_grid = false;
    bool q_covers_grid = false;
    std::string label = "EMPIRICAL";
    std::string note;
};

ExponentEstimate estimate_exponents(const Semigroup& sg, const std::vector<double>& p_grid,
                                    const std::vector<double>& times, int trials, std::uint64_t seed,
                                    double threshold = 10.0);

} // namespace tentkit
