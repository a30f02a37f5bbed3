#pragma once

#include <Eigen/Sparse>

#include "tentkit/coefficients.hpp"

namespace tentkit {

using SparseMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// L = G^H Â G: G the forward-difference gradient, Â(x) the mean of A over
// the 2^n cells {x + e, e in {0,1}^n} (the faces / dual vertex at x + h/2).
// The discrete divergence is div_h = -G^H, the exact negative adjoint of G
// under pair(), so (Lu)(x) = -div_h(Â G u)(x).
class DiscreteGenerator {
public:
    explicit DiscreteGenerator(const CoefficientField& coefficients);

    const GridSpec& grid() const { return grid_; }
    const CoefficientField& coefficients() const { return coeff_; }

    // scalar -> n-component vector field
    SpatialField gradient(const SpatialField& u) const;
    // n-component vector field -> scalar
    SpatialField divergence(const SpatialField& F) const;
    // Â V pointwise at the dual points
    SpatialField apply_face(const SpatialField& V) const;
    // (Â - I) V
    SpatialField apply_face_minus_identity(const SpatialField& V) const;
    // L u on every component independently (vector input allowed)
    SpatialField apply(const SpatialField& u) const;

    const SparseMat& matrix() const { return L_; }
    Mat dense() const;
    const Mat& face_matrix(int cell) const { return face_[cell]; }

    bool is_hermitian() const { return hermitian_; }
    bool is_real() const { return real_; }
    bool is_identity() const { return identity_; }
    // Real, off-diagonal entries <= 0: e^{-tL} is entrywise non-negative.
    bool is_real_m_matrix() const { return m_matrix_; }
    // max_i sum_j |L_ij|
    double norm_inf() const { return norm_inf_; }

private:
    GridSpec grid_;
    CoefficientField coeff_;
    std::vector<Mat> face_;
    SparseMat L_;
    bool hermitian_ = false, real_ = false, identity_ = false, m_matrix_ = false;
    double norm_inf_ = 0.0;
};

} // namespace tentkit
