#include "tentkit/coefficients.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "tentkit/error.hpp"
#include "tentkit/field_io.hpp"

namespace tentkit {

namespace {

int block_index(const GridSpec& g, int cell, double block, int& bx, int& by)
{
    const auto x = g.center(cell);
    // cell centers sit at i*h; shift by h/2 so block edges fall between cells
    bx = static_cast<int>(std::floor((x[0] + g.h() / 2.0) / block));
    by = g.n == 2 ? static_cast<int>(std::floor((x[1] + g.h() / 2.0) / block)) : 0;
    const int per_axis = static_cast<int>(std::ceil(g.period / block));
    return bx + per_axis * by;
}

double resolve_block(const GridSpec& g, double block)
{
    if (block <= 0.0) return g.period / 8.0;
    if (block < g.h()) fail("preset.invalid", "block side below one cell width");
    return block;
}

Mat scalar_matrix(int n, cplx a) { return Mat::Identity(n, n) * a; }

} // namespace

CoefficientField::CoefficientField(const GridSpec& grid, std::vector<Mat> matrices, std::string label)
    : grid_(grid), mats_(std::move(matrices)), label_(std::move(label))
{
    if (static_cast<int>(mats_.size()) != grid.cells()) fail("coefficients.shape", "one matrix per cell required");
    double l0 = std::numeric_limits<double>::infinity();
    double l1 = 0.0;
    for (const auto& A : mats_) {
        if (A.rows() != grid.n || A.cols() != grid.n) fail("coefficients.shape", "matrices must be n x n");
        if (!A.allFinite()) fail("coefficients.nonfinite", "coefficient entries must be finite");
        const Mat H = (A + A.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
        l0 = std::min(l0, es.eigenvalues().minCoeff());
        Eigen::JacobiSVD<Mat> svd(A);
        l1 = std::max(l1, svd.singularValues()(0));
    }
    lambda0_ = l0;
    lambda1_ = l1;
    if (!(lambda0_ > 0.0)) fail("coefficients.ellipticity", "Hermitian part is not positive definite in some cell");
}

CoefficientField CoefficientField::identity(const GridSpec& g)
{
    return CoefficientField(g, std::vector<Mat>(g.cells(), Mat::Identity(g.n, g.n)), "identity");
}

CoefficientField CoefficientField::checkerboard(const GridSpec& g, double block, double contrast)
{
    block = resolve_block(g, block);
    if (!(contrast >= 1.0)) fail("preset.invalid", "contrast must be >= 1");
    std::vector<Mat> m;
    for (int c = 0; c < g.cells(); ++c) {
        int bx, by;
        block_index(g, c, block, bx, by);
        m.push_back(scalar_matrix(g.n, ((bx + by) % 2 == 0) ? 1.0 : contrast));
    }
    return CoefficientField(g, std::move(m), "checkerboard");
}

CoefficientField CoefficientField::random_contrast(const GridSpec& g, double block, double contrast,
                                                   std::uint64_t seed)
{
    block = resolve_block(g, block);
    if (!(contrast >= 1.0 && contrast <= 100.0)) fail("preset.invalid", "contrast must lie in [1, 100]");
    const int per_axis = static_cast<int>(std::ceil(g.period / block));
    Rng rng(seed);
    std::vector<double> values(static_cast<std::size_t>(per_axis) * (g.n == 2 ? per_axis : 1));
    for (double& v : values) v = std::exp(rng.uniform() * std::log(contrast));
    std::vector<Mat> m;
    for (int c = 0; c < g.cells(); ++c) {
        int bx, by;
        m.push_back(scalar_matrix(g.n, values[block_index(g, c, block, bx, by)]));
    }
    return CoefficientField(g, std::move(m), "random-contrast");
}

CoefficientField CoefficientField::complex_perturbation(const GridSpec& g, double block, double kappa,
                                                        std::uint64_t seed)
{
    block = resolve_block(g, block);
    if (!(kappa >= 0.0 && kappa < 1.0)) fail("preset.invalid", "kappa must lie in [0, 1)");
    const int per_axis = static_cast<int>(std::ceil(g.period / block));
    Rng rng(seed);
    std::vector<Mat> S(static_cast<std::size_t>(per_axis) * (g.n == 2 ? per_axis : 1));
    for (auto& s : S) {
        Eigen::MatrixXd r(g.n, g.n);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) r(i, j) = rng.uniform(-1.0, 1.0);
        Eigen::MatrixXd sym = (r + r.transpose()) / 2.0;
        const double nrm = Eigen::JacobiSVD<Eigen::MatrixXd>(sym).singularValues()(0);
        if (nrm > 1.0) sym /= nrm;
        s = sym.cast<cplx>();
    }
    std::vector<Mat> m;
    for (int c = 0; c < g.cells(); ++c) {
        int bx, by;
        m.push_back(Mat::Identity(g.n, g.n) + cplx(0.0, kappa) * S[block_index(g, c, block, bx, by)]);
    }
    return CoefficientField(g, std::move(m), "complex-perturbation");
}

bool CoefficientField::is_hermitian() const
{
    for (const auto& A : mats_)
        if (A != A.adjoint()) return false;
    return true;
}

bool CoefficientField::is_real() const
{
    for (const auto& A : mats_)
        if (A.imag().cwiseAbs().maxCoeff() != 0.0) return false;
    return true;
}

bool CoefficientField::is_identity() const
{
    const Mat I = Mat::Identity(grid_.n, grid_.n);
    for (const auto& A : mats_)
        if (A != I) return false;
    return true;
}

CoefficientField::Probe CoefficientField::probe(int directions) const
{
    const int n = grid_.n;
    std::vector<Eigen::VectorXcd> dirs;
    if (n == 1) {
        dirs.push_back(Eigen::VectorXcd::Constant(1, 1.0));
        dirs.push_back(Eigen::VectorXcd::Constant(1, -1.0));
    } else {
        for (int k = 0; k < directions; ++k) {
            const double a = k * std::numbers::pi / directions;
            Eigen::VectorXcd v(2);
            v << std::cos(a), std::sin(a);
            dirs.push_back(v);
        }
    }
    Probe p;
    p.min_real_form = std::numeric_limits<double>::infinity();
    for (const auto& A : mats_)
        for (const auto& xi : dirs) {
            p.min_real_form = std::min(p.min_real_form, xi.dot(A * xi).real());
            for (const auto& eta : dirs) p.max_bilinear = std::max(p.max_bilinear, std::abs(eta.dot(A * xi)));
        }
    return p;
}

void CoefficientField::write(std::ostream& out) const
{
    const int n = grid_.n;
    write_tkf1_header(out, {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(grid_.points), 0u,
                            static_cast<std::uint32_t>(2 * n * n)});
    for (const auto& A : mats_)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                write_f64_le(out, A(i, j).real());
                write_f64_le(out, A(i, j).imag());
            }
}

CoefficientField CoefficientField::read(std::istream& in, const GridSpec& grid)
{
    const auto h = read_tkf1_header(in);
    const int n = grid.n;
    if (h.n != static_cast<std::uint32_t>(n) || h.points != static_cast<std::uint32_t>(grid.points))
        fail("io.grid_mismatch", "coefficient file grid shape does not match");
    if (h.time_levels != 0u || h.components != static_cast<std::uint32_t>(2 * n * n))
        fail("io.format", "not a coefficient file (time_levels must be 0, components 2n^2)");
    std::vector<Mat> mats(grid.cells(), Mat(n, n));
    for (auto& A : mats)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double re = read_f64_le(in);
                A(i, j) = cplx(re, read_f64_le(in));
            }
    return CoefficientField(grid, std::move(mats), "file");
}

std::vector<PresetInfo> coefficient_presets()
{
    return {
        {"identity", "A = I (the Laplacian)", {}},
        {"checkerboard",
         "scalar a(x) I alternating between 1 and the contrast on square blocks",
         {{"block", "positive real, block side (default period/8)"}, {"contrast", "real >= 1 (default 4)"}}},
        {"random-contrast",
         "scalar a(x) I, log-uniform in [1, contrast] per block",
         {{"block", "positive real (default period/8)"},
          {"contrast", "real in [1, 100] (default 4)"},
          {"seed", "unsigned integer"}}},
        {"complex-perturbation",
         "A = I + i kappa S with S real symmetric, ||S|| <= 1, per block",
         {{"block", "positive real (default period/8)"},
          {"kappa", "real in [0, 1) (default 0.5)"},
          {"seed", "unsigned integer"}}},
    };
}

std::vector<PresetInfo> test_families()
{
    return {
        {"bandlimited", "random trigonometric polynomial on a frequency annulus, mean zero",
         {{"seed", "unsigned integer"}, {"k_lo", "lowest mode index"}, {"k_hi", "highest mode index"}}},
        {"gaussian", "sum of periodised Gaussians with random centers and widths, mean removed",
         {{"seed", "unsigned integer"}}},
        {"atoms", "tent-space atoms on random balls", {{"seed", "unsigned integer"}}},
        {"spikes", "single-cell spikes at random positions", {{"seed", "unsigned integer"}}},
    };
}

CoefficientField make_preset(const std::string& name, const GridSpec& grid, const PresetParams& p)
{
    if (name == "identity") return CoefficientField::identity(grid);
    if (name == "checkerboard") return CoefficientField::checkerboard(grid, p.block, p.contrast);
    if (name == "random-contrast") return CoefficientField::random_contrast(grid, p.block, p.contrast, p.seed);
    if (name == "complex-perturbation") return CoefficientField::complex_perturbation(grid, p.block, p.kappa, p.seed);
    fail("config.unknown_preset", "unknown coefficient preset '" + name + "'");
}

} // namespace tentkit
