#include "tentkit/generator.hpp"

#include <algorithm>
#include <cmath>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

// cell index of x + e_axis (periodic)
int shift(const GridSpec& g, int cell, int axis, int by = 1)
{
    const int i = cell % g.points;
    const int j = cell / g.points;
    if (axis == 0) return g.cell_index(g.wrap(i + by), j);
    return g.cell_index(i, g.wrap(j + by));
}

} // namespace

DiscreteGenerator::DiscreteGenerator(const CoefficientField& coefficients)
    : grid_(coefficients.grid()), coeff_(coefficients)
{
    const GridSpec& g = grid_;
    const int n = g.n;
    const int cells = g.cells();
    face_.resize(cells);
    for (int c = 0; c < cells; ++c) {
        Mat sum = coeff_.at(c);
        if (n == 1) {
            sum += coeff_.at(shift(g, c, 0));
            face_[c] = sum / 2.0;
        } else {
            const int cx = shift(g, c, 0);
            sum += coeff_.at(cx);
            sum += coeff_.at(shift(g, c, 1));
            sum += coeff_.at(shift(g, cx, 1));
            face_[c] = sum / 4.0;
        }
    }

    const double inv_h2 = 1.0 / (g.h() * g.h());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(cells) * 4 * n * n);
    for (int x = 0; x < cells; ++x) {
        for (int a = 0; a < n; ++a) {
            const int pa[2] = {x, shift(g, x, a)};
            for (int b = 0; b < n; ++b) {
                const cplx w = face_[x](a, b) * inv_h2;
                if (w == 0.0) continue;
                const int qb[2] = {x, shift(g, x, b)};
                for (int s = 0; s < 2; ++s)
                    for (int r = 0; r < 2; ++r) trip.emplace_back(pa[s], qb[r], (s == r ? 1.0 : -1.0) * w);
            }
        }
    }
    L_.resize(cells, cells);
    L_.setFromTriplets(trip.begin(), trip.end());
    L_.prune(cplx(0.0));

    identity_ = coeff_.is_identity();
    real_ = coeff_.is_real();
    bool face_hermitian = true;
    for (const auto& F : face_)
        if (F != F.adjoint()) face_hermitian = false;
    if (face_hermitian) {
        // Summation order in the triplet reduction is not mirror-symmetric;
        // averaging with the adjoint makes L == L^H bit for bit.
        SparseMat adj = L_.adjoint();
        L_ = (L_ + adj) * cplx(0.5);
        L_.prune(cplx(0.0));
    }
    hermitian_ = face_hermitian;

    m_matrix_ = real_;
    norm_inf_ = 0.0;
    for (int r = 0; r < cells; ++r) {
        double row = 0.0;
        for (SparseMat::InnerIterator it(L_, r); it; ++it) {
            row += std::abs(it.value());
            if (it.value().imag() != 0.0) m_matrix_ = false;
            if (it.col() != r && it.value().real() > 0.0) m_matrix_ = false;
        }
        norm_inf_ = std::max(norm_inf_, row);
    }
}

SpatialField DiscreteGenerator::gradient(const SpatialField& u) const
{
    require(u.components() == 1, "operator.shape", "gradient expects a scalar field");
    const GridSpec& g = grid_;
    SpatialField out(g, g.n);
    const double inv_h = 1.0 / g.h();
    for (int a = 0; a < g.n; ++a)
        for (int c = 0; c < g.cells(); ++c) out(c, a) = (u(shift(g, c, a)) - u(c)) * inv_h;
    return out;
}

SpatialField DiscreteGenerator::divergence(const SpatialField& F) const
{
    const GridSpec& g = grid_;
    require(F.components() == g.n, "operator.shape", "divergence expects an n-component field");
    SpatialField out(g, 1);
    const double inv_h = 1.0 / g.h();
    for (int c = 0; c < g.cells(); ++c) {
        cplx acc = 0.0;
        for (int a = 0; a < g.n; ++a) acc += F(c, a) - F(shift(g, c, a, -1), a);
        out(c) = acc * inv_h;
    }
    return out;
}

SpatialField DiscreteGenerator::apply_face(const SpatialField& V) const
{
    const GridSpec& g = grid_;
    require(V.components() == g.n, "operator.shape", "face coefficient acts on n-component fields");
    SpatialField out(g, g.n);
    for (int c = 0; c < g.cells(); ++c)
        for (int a = 0; a < g.n; ++a) {
            cplx acc = 0.0;
            for (int b = 0; b < g.n; ++b) acc += face_[c](a, b) * V(c, b);
            out(c, a) = acc;
        }
    return out;
}

SpatialField DiscreteGenerator::apply_face_minus_identity(const SpatialField& V) const
{
    SpatialField out = apply_face(V);
    out -= V;
    return out;
}

SpatialField DiscreteGenerator::apply(const SpatialField& u) const
{
    // matrix-free flux form: G 1 = 0 exactly, hence L 1 = 0 exactly
    SpatialField out(grid_, u.components());
    for (int k = 0; k < u.components(); ++k) {
        SpatialField uk(grid_, 1);
        std::copy(u.component(k).begin(), u.component(k).end(), uk.component(0).begin());
        const SpatialField div = divergence(apply_face(gradient(uk)));
        for (int c = 0; c < grid_.cells(); ++c) out(c, k) = -div(c);
    }
    return out;
}

Mat DiscreteGenerator::dense() const { return Mat(L_); }

} // namespace tentkit
