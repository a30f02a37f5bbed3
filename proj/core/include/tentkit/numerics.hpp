#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tentkit {

using cplx = std::complex<double>;

// Pairwise (tree) summation. The reduction order depends only on the length,
// so results are reproducible bit for bit.
double pairwise_sum(std::span<const double> values);

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the double mappings below are done by
// hand because the <random> distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    double uniform();                     // [0, 1)
    double uniform(double lo, double hi); // [lo, hi)
    double normal();                      // standard normal, Box-Muller
    int integer(int lo, int hi);          // inclusive range

    // Derive an independent stream, e.g. one per sample in a family.
    Rng split(std::uint64_t stream);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Least-squares line y = a + b x; returns {a, b, rms residual}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace tentkit
