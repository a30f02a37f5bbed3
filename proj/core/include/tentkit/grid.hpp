#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "tentkit/numerics.hpp"

namespace tentkit {

// Periodic grid on [0, period)^n with a geometric time ladder
// t_k = t_min * rho^k, k = 0..levels-1, the last node pinned to t_max.
struct GridSpec {
    int n = 1;
    double period = 1.0;
    int points = 64;
    double t_min = 1.0 / 4096.0;
    double t_max = 1.0;
    int levels = 16;

    // Validates n in {1,2}, power-of-two points, h^2 <= t_min < t_max, levels >= 8.
    static GridSpec make(int n, double period, int points, double t_min, double t_max, int levels);

    double h() const { return period / points; }
    int cells() const { return n == 1 ? points : points * points; }
    double cell_volume() const;
    double rho() const;
    double log_step() const; // log(rho)
    double time(int k) const;
    std::vector<double> times() const;

    std::array<double, 2> center(int cell) const;
    int cell_index(int i, int j = 0) const;
    // Smallest non-negative representative of i modulo points.
    int wrap(int i) const { return ((i % points) + points) % points; }

    GridSpec with_points(int new_points) const;
    GridSpec with_times(double new_t_min, double new_t_max, int new_levels) const;

    bool same_space(const GridSpec& other) const;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

double torus_distance(const GridSpec& grid, int cell_a, int cell_b);

// ---- fields ---------------------------------------------------------------

// Complex samples, layout [component][cell].
class SpatialField {
public:
    SpatialField() = default;
    SpatialField(const GridSpec& grid, int components = 1);

    static SpatialField constant(const GridSpec& grid, cplx value, int components = 1);
    // f(x) evaluated at cell centers for every component.
    static SpatialField sample(const GridSpec& grid, const std::function<cplx(double x, double y)>& f);

    const GridSpec& grid() const { return grid_; }
    int components() const { return comps_; }
    int cells() const { return grid_.cells(); }

    cplx& operator()(int cell, int comp = 0) { return data_[static_cast<std::size_t>(comp) * cells() + cell]; }
    cplx operator()(int cell, int comp = 0) const { return data_[static_cast<std::size_t>(comp) * cells() + cell]; }
    std::span<cplx> component(int comp);
    std::span<const cplx> component(int comp) const;
    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    SpatialField& operator+=(const SpatialField& other);
    SpatialField& operator-=(const SpatialField& other);
    SpatialField& operator*=(cplx factor);
    // this += a * x
    SpatialField& axpy(cplx a, const SpatialField& x);

    cplx mean(int comp = 0) const;
    double l2_norm() const; // (h^n sum |f|^2)^{1/2} over all components
    double lp_norm(double p) const;
    double max_abs() const;
    bool all_finite() const;

private:
    GridSpec grid_{};
    int comps_ = 1;
    std::vector<cplx> data_;
};

SpatialField operator+(SpatialField a, const SpatialField& b);
SpatialField operator-(SpatialField a, const SpatialField& b);
SpatialField operator*(cplx s, SpatialField a);

// Samples on ladder x grid, layout [level][component][cell].
class SpaceTimeField {
public:
    SpaceTimeField() = default;
    SpaceTimeField(const GridSpec& grid, int components = 1);

    static SpaceTimeField sample(const GridSpec& grid, int components,
                                 const std::function<cplx(double t, double x, double y, int comp)>& f);

    const GridSpec& grid() const { return grid_; }
    int components() const { return comps_; }
    int levels() const { return grid_.levels; }
    int cells() const { return grid_.cells(); }

    cplx& operator()(int level, int cell, int comp = 0) { return data_[index(level, cell, comp)]; }
    cplx operator()(int level, int cell, int comp = 0) const { return data_[index(level, cell, comp)]; }

    SpatialField level(int k) const;
    void set_level(int k, const SpatialField& f);
    std::span<cplx> slice(int k, int comp);
    std::span<const cplx> slice(int k, int comp) const;
    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    SpaceTimeField& operator+=(const SpaceTimeField& other);
    SpaceTimeField& operator-=(const SpaceTimeField& other);
    SpaceTimeField& operator*=(cplx factor);

    bool all_finite() const;
    double max_abs() const;

private:
    std::size_t index(int level, int cell, int comp) const
    {
        return (static_cast<std::size_t>(level) * comps_ + comp) * cells() + cell;
    }
    GridSpec grid_{};
    int comps_ = 1;
    std::vector<cplx> data_;
};

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b);

// Sum over components of |F|^2 on one level: a real cell array.
std::vector<double> abs_sq(const SpatialField& f);
std::vector<double> abs_sq(const SpaceTimeField& F, int level);

// ---- time quadrature ------------------------------------------------------

// Weights w_k with sum_k w_k g(t_k) = integral over [a, b] of the piecewise
// linear interpolant of g, [a, b] clipped to [t_0, t_max].
std::vector<double> dt_weights(const GridSpec& grid, double a, double b);
std::vector<double> dt_weights(const GridSpec& grid);
// Trapezoid rule in lambda = log t for the measure dt/t.
std::vector<double> dt_over_t_weights(const GridSpec& grid);
// Trapezoid rule in lambda for the measure dt (weights t_k * dlambda).
std::vector<double> log_trapezoid_dt_weights(const GridSpec& grid);

// ---- balls ----------------------------------------------------------------

// Cells whose centers lie at torus distance strictly less than `radius`
// from the origin cell, listed as offsets in lexicographic (dy, dx) order.
// A radius >= (period/2) sqrt(n) covers the whole torus.
struct BallStencil {
    std::vector<std::array<int, 2>> offsets;
    bool covers_torus = false;
    int count() const { return static_cast<int>(offsets.size()); }
};

BallStencil ball_stencil(const GridSpec& grid, double radius);
int ball_cell_count(const GridSpec& grid, double radius);
std::vector<int> ball_cells(const GridSpec& grid, int center, double radius);

cplx ball_average(const SpatialField& f, int center, double radius, int comp = 0);
// Mean of `values` over B(x, radius) for every center x; summed-area
// tables make this O(cells) (n = 1) or O(cells * rows) (n = 2). Meant for
// non-negative data such as |F|^2; results are clamped at 0.
std::vector<double> ball_means(const GridSpec& grid, std::span<const double> values, double radius);

// ---- Whitney cubes --------------------------------------------------------

struct WhitneyCube {
    double t = 0.0;
    int center = 0;
};

// Mean of |F|^2 over (t, 2t) x B(x, sqrt t): time weights are the
// interpolant weights of the clipped interval, normalised to sum to one.
double whitney_average_sq(const SpaceTimeField& F, const WhitneyCube& cube);

// ---- pairing --------------------------------------------------------------

cplx pair(const SpatialField& a, const SpatialField& b);

} // namespace tentkit
