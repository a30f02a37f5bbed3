#pragma once

#include <span>
#include <vector>

#include "tentkit/grid.hpp"

namespace tentkit {

// Unnormalised forward DFT and normalised inverse on the grid's torus.
std::vector<cplx> dft_forward(const GridSpec& grid, std::span<const cplx> values);
std::vector<cplx> dft_inverse(const GridSpec& grid, std::span<const cplx> coeffs);

// Angular wavenumbers xi = 2 pi k / period per DFT slot, k in [-N/2, N/2).
struct Wavenumbers {
    std::vector<double> xi1, xi2; // xi2 is all zero for n = 1
    std::vector<bool> nyquist1, nyquist2;
    std::vector<double> modulus;
};
const Wavenumbers& wavenumbers(const GridSpec& grid);

// Applies a per-slot symbol to every component.
SpatialField apply_symbol(const SpatialField& f, std::span<const cplx> symbol);
SpatialField apply_symbol(const SpatialField& f, std::span<const double> symbol);

// Forward-difference gradient symbol (e^{i xi h} - 1)/h along each axis;
// the discrete Laplacian symbol is its squared modulus summed over axes.
std::vector<cplx> forward_difference_symbol(const GridSpec& grid, int axis);
std::vector<double> discrete_laplacian_symbol(const GridSpec& grid);

} // namespace tentkit
