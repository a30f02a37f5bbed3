#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tentkit/grid.hpp"

namespace tentkit {

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

// Per-cell complex n x n matrices A(x) with certified ellipticity
// constants: lambda0 = min over cells of the smallest eigenvalue of the
// Hermitian part, lambda1 = max over cells of the largest singular value.
class CoefficientField {
public:
    CoefficientField(const GridSpec& grid, std::vector<Mat> matrices, std::string label = "custom");

    static CoefficientField identity(const GridSpec& grid);
    // Scalar a(x) I with a = 1 or `contrast` on alternating blocks of side
    // `block` (physical length).
    static CoefficientField checkerboard(const GridSpec& grid, double block, double contrast);
    // Scalar a(x) I, a log-uniform in [1, contrast] on blocks of side `block`.
    static CoefficientField random_contrast(const GridSpec& grid, double block, double contrast, std::uint64_t seed);
    // A = I + i kappa S, S real symmetric with ||S|| <= 1 per block; needs kappa < 1.
    static CoefficientField complex_perturbation(const GridSpec& grid, double block, double kappa,
                                                 std::uint64_t seed);

    const GridSpec& grid() const { return grid_; }
    const std::string& label() const { return label_; }
    const Mat& at(int cell) const { return mats_[cell]; }
    const std::vector<Mat>& matrices() const { return mats_; }
    double lambda0() const { return lambda0_; }
    double lambda1() const { return lambda1_; }

    bool is_hermitian() const;
    bool is_real() const;
    bool is_identity() const;

    // Re<A xi, xi> and |<A xi, eta>| over `directions` unit vectors per cell
    // (angles k pi / directions in n = 2; +-1 in n = 1).
    struct Probe {
        double min_real_form = 0.0;
        double max_bilinear = 0.0;
    };
    Probe probe(int directions = 16) const;

    // Coefficient file: TKF1 header with time_levels = 0 and component count
    // 2 n^2, then per cell the n^2 row-major entries as (re, im) pairs.
    void write(std::ostream& out) const;
    static CoefficientField read(std::istream& in, const GridSpec& grid);

private:
    GridSpec grid_;
    std::vector<Mat> mats_;
    std::string label_;
    double lambda0_ = 0.0;
    double lambda1_ = 0.0;
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> parameters; // name, schema
};

std::vector<PresetInfo> coefficient_presets();
std::vector<PresetInfo> test_families();

struct PresetParams {
    double block = 0.0; // 0: one eighth of the period
    double contrast = 4.0;
    double kappa = 0.5;
    std::uint64_t seed = 1;
};
CoefficientField make_preset(const std::string& name, const GridSpec& grid, const PresetParams& params);

} // namespace tentkit
