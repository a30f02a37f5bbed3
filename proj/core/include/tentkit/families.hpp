#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tentkit/funcspaces.hpp"

namespace tentkit {

enum class Family { bandlimited, gaussian, atoms, spikes };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

// Random functions on the continuum torus, sampled at cell centers, so one
// seed gives the same function on every resolution (spikes excepted).
struct FamilyParams {
    int k_lo = 4;  // band-limited: lowest |k| (mode index, xi = 2 pi k / period)
    int k_hi = 64; // highest |k|
    int modes = 24;
};

// Real trigonometric polynomial sum a_m cos(2 pi k_m . x / P + phase_m), mean zero.
SpatialField bandlimited_field(const GridSpec& grid, std::uint64_t seed, const FamilyParams& params = {});
// Periodised Gaussians with random centers and widths, mean removed.
SpatialField gaussian_field(const GridSpec& grid, std::uint64_t seed);
// Indicator of a random ball, normalised to unit L^1 mass, mean removed.
SpatialField atom_field(const GridSpec& grid, std::uint64_t seed);
// Signed single-cell spikes of height 1/h^n.
SpatialField spike_field(const GridSpec& grid, std::uint64_t seed);

SpatialField family_member(Family family, const GridSpec& grid, std::uint64_t seed, const FamilyParams& params = {});

// Vector field with n components, each an independent family member.
SpatialField vector_member(Family family, const GridSpec& grid, std::uint64_t seed, const FamilyParams& params = {});

// Smooth space-time field: bumps exp(-(log(t/t_m))^2 / w) exp(-|x - x_m|^2 / t_m)
// with centers log-uniform in the ladder interior.
struct SpaceTimeBumps {
    struct Bump {
        double amplitude, t, x, y, width;
        int comp;
    };
    std::vector<Bump> bumps;
    double period = 1.0;
    int n = 1;

    static SpaceTimeBumps random(const GridSpec& grid, std::uint64_t seed, int components = 1, int count = 0);
    cplx operator()(double t, double x, double y, int comp) const;
    SpaceTimeField sample(const GridSpec& grid, int components) const;
    SpatialField at(const GridSpec& grid, int components, double t) const;
};

} // namespace tentkit
