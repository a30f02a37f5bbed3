#include "tentkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check_same_shape(const GridSpec& a, int ca, const GridSpec& b, int cb)
{
    if (!a.same_space(b) || ca != cb) fail("grid.mismatch", "fields live on different grids or shapes");
}

// Torus offset in (-N/2, N/2] as a magnitude.
int torus_offset(int d, int N)
{
    d = ((d % N) + N) % N;
    return std::min(d, N - d);
}

// Largest m >= 0 with m^2 < x, or -1 if x <= 0.
int strict_floor_sqrt(double x)
{
    if (!(x > 0.0)) return -1;
    long m = static_cast<long>(std::floor(std::sqrt(x)));
    while (static_cast<double>(m) * m >= x) --m;
    while (static_cast<double>(m + 1) * (m + 1) < x) ++m;
    return static_cast<int>(m);
}

struct RowWindow {
    int dy;          // row offset, already reduced to a distinct residue
    int half_width;  // columns |dx| <= half_width, or -1 for the full row
};

// Rows of the ball of squared radius r2 (in units of h^2), each as a
// symmetric column window; full-torus windows are flagged with -1.
std::vector<RowWindow> ball_rows(const GridSpec& g, double r2)
{
    const int N = g.points;
    std::vector<RowWindow> rows;
    auto width_for = [&](double rem) {
        const int m = strict_floor_sqrt(rem);
        if (m < 0) return -2; // empty
        return 2 * m + 1 >= N ? -1 : m;
    };
    if (g.n == 1) {
        const int w = width_for(r2);
        rows.push_back({0, w});
        return rows;
    }
    // distinct row residues d in (-N/2, N/2], ordered -..+ for lexicographic order
    for (int d = -N / 2 + 1; d <= N / 2; ++d) {
        const double rem = r2 - static_cast<double>(d) * d;
        const int w = width_for(rem);
        if (w == -2) continue;
        rows.push_back({d, w});
    }
    return rows;
}

bool covers(const GridSpec& g, double r2)
{
    const double half = g.points / 2.0;
    return r2 >= half * half * g.n;
}

} // namespace

GridSpec GridSpec::make(int n, double period, int points, double t_min, double t_max, int levels)
{
    std::ostringstream why;
    if (n != 1 && n != 2) fail("grid.invalid", "dimension must be 1 or 2");
    if (!(period > 0.0) || !std::isfinite(period)) fail("grid.invalid", "period must be positive");
    if (!is_power_of_two(points) || points < 4) fail("grid.invalid", "points_per_axis must be a power of two >= 4");
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
        fail("grid.invalid", "need 0 < t_min < t_max");
    if (levels < 8) fail("grid.invalid", "time_levels must be >= 8");
    const double h = period / points;
    if (h * h > t_min * (1.0 + 1e-12)) {
        why << "h^2 = " << h * h << " exceeds t_min = " << t_min;
        fail("grid.invalid", why.str());
    }
    return GridSpec{n, period, points, t_min, t_max, levels};
}

double GridSpec::cell_volume() const { return n == 1 ? h() : h() * h(); }

double GridSpec::log_step() const { return std::log(t_max / t_min) / (levels - 1); }

double GridSpec::rho() const { return std::exp(log_step()); }

double GridSpec::time(int k) const
{
    if (k <= 0) return t_min;
    if (k >= levels - 1) return t_max;
    return t_min * std::exp(k * log_step());
}

std::vector<double> GridSpec::times() const
{
    std::vector<double> t(levels);
    for (int k = 0; k < levels; ++k) t[k] = time(k);
    return t;
}

std::array<double, 2> GridSpec::center(int cell) const
{
    const double hh = h();
    if (n == 1) return {cell * hh, 0.0};
    return {(cell % points) * hh, (cell / points) * hh};
}

int GridSpec::cell_index(int i, int j) const
{
    return n == 1 ? wrap(i) : wrap(i) + points * wrap(j);
}

GridSpec GridSpec::with_points(int new_points) const
{
    return make(n, period, new_points, t_min, t_max, levels);
}

GridSpec GridSpec::with_times(double new_t_min, double new_t_max, int new_levels) const
{
    return make(n, period, points, new_t_min, new_t_max, new_levels);
}

bool GridSpec::same_space(const GridSpec& o) const
{
    return n == o.n && points == o.points && period == o.period && t_min == o.t_min && t_max == o.t_max &&
           levels == o.levels;
}

double torus_distance(const GridSpec& g, int a, int b)
{
    const int N = g.points;
    if (g.n == 1) return torus_offset(a - b, N) * g.h();
    const double dx = torus_offset(a % N - b % N, N);
    const double dy = torus_offset(a / N - b / N, N);
    return std::sqrt(dx * dx + dy * dy) * g.h();
}

// ---- SpatialField ---------------------------------------------------------

SpatialField::SpatialField(const GridSpec& grid, int components)
    : grid_(grid), comps_(components), data_(static_cast<std::size_t>(components) * grid.cells())
{
    if (components < 1) fail("field.invalid", "component count must be >= 1");
}

SpatialField SpatialField::constant(const GridSpec& grid, cplx value, int components)
{
    SpatialField f(grid, components);
    std::fill(f.data_.begin(), f.data_.end(), value);
    return f;
}

SpatialField SpatialField::sample(const GridSpec& grid, const std::function<cplx(double, double)>& fn)
{
    SpatialField f(grid, 1);
    for (int c = 0; c < grid.cells(); ++c) {
        const auto x = grid.center(c);
        f(c) = fn(x[0], x[1]);
    }
    return f;
}

std::span<cplx> SpatialField::component(int comp)
{
    return {data_.data() + static_cast<std::size_t>(comp) * cells(), static_cast<std::size_t>(cells())};
}

std::span<const cplx> SpatialField::component(int comp) const
{
    return {data_.data() + static_cast<std::size_t>(comp) * cells(), static_cast<std::size_t>(cells())};
}

SpatialField& SpatialField::operator+=(const SpatialField& o)
{
    check_same_shape(grid_, comps_, o.grid_, o.comps_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SpatialField& SpatialField::operator-=(const SpatialField& o)
{
    check_same_shape(grid_, comps_, o.grid_, o.comps_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

SpatialField& SpatialField::operator*=(cplx s)
{
    for (auto& v : data_) v *= s;
    return *this;
}

SpatialField& SpatialField::axpy(cplx a, const SpatialField& x)
{
    check_same_shape(grid_, comps_, x.grid_, x.comps_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
    return *this;
}

cplx SpatialField::mean(int comp) const
{
    std::vector<double> re(cells()), im(cells());
    auto c = component(comp);
    for (int i = 0; i < cells(); ++i) {
        re[i] = c[i].real();
        im[i] = c[i].imag();
    }
    return cplx(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(cells());
}

double SpatialField::l2_norm() const
{
    std::vector<double> sq(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) sq[i] = std::norm(data_[i]);
    return std::sqrt(grid_.cell_volume() * pairwise_sum(sq));
}

double SpatialField::lp_norm(double p) const
{
    const auto a = abs_sq(*this);
    if (std::isinf(p)) {
        double m = 0;
        for (double v : a) m = std::max(m, v);
        return std::sqrt(m);
    }
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = std::pow(a[i], p / 2.0);
    return std::pow(grid_.cell_volume() * pairwise_sum(v), 1.0 / p);
}

double SpatialField::max_abs() const
{
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool SpatialField::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

SpatialField operator+(SpatialField a, const SpatialField& b) { return a += b; }
SpatialField operator-(SpatialField a, const SpatialField& b) { return a -= b; }
SpatialField operator*(cplx s, SpatialField a) { return a *= s; }

// ---- SpaceTimeField -------------------------------------------------------

SpaceTimeField::SpaceTimeField(const GridSpec& grid, int components)
    : grid_(grid), comps_(components),
      data_(static_cast<std::size_t>(components) * grid.cells() * grid.levels)
{
    if (components < 1) fail("field.invalid", "component count must be >= 1");
}

SpaceTimeField SpaceTimeField::sample(const GridSpec& grid, int components,
                                      const std::function<cplx(double, double, double, int)>& fn)
{
    SpaceTimeField F(grid, components);
    for (int k = 0; k < grid.levels; ++k) {
        const double t = grid.time(k);
        for (int c = 0; c < components; ++c)
            for (int cell = 0; cell < grid.cells(); ++cell) {
                const auto x = grid.center(cell);
                F(k, cell, c) = fn(t, x[0], x[1], c);
            }
    }
    return F;
}

SpatialField SpaceTimeField::level(int k) const
{
    SpatialField f(grid_, comps_);
    const auto begin = data_.begin() + static_cast<std::ptrdiff_t>(index(k, 0, 0));
    std::copy(begin, begin + static_cast<std::ptrdiff_t>(comps_) * cells(), f.data().begin());
    return f;
}

void SpaceTimeField::set_level(int k, const SpatialField& f)
{
    check_same_shape(grid_, comps_, f.grid(), f.components());
    std::copy(f.data().begin(), f.data().end(), data_.begin() + static_cast<std::ptrdiff_t>(index(k, 0, 0)));
}

std::span<cplx> SpaceTimeField::slice(int k, int comp)
{
    return {data_.data() + index(k, 0, comp), static_cast<std::size_t>(cells())};
}

std::span<const cplx> SpaceTimeField::slice(int k, int comp) const
{
    return {data_.data() + index(k, 0, comp), static_cast<std::size_t>(cells())};
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o)
{
    check_same_shape(grid_, comps_, o.grid_, o.comps_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& o)
{
    check_same_shape(grid_, comps_, o.grid_, o.comps_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx s)
{
    for (auto& v : data_) v *= s;
    return *this;
}

bool SpaceTimeField::all_finite() const
{
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double SpaceTimeField::max_abs() const
{
    double m = 0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }

std::vector<double> abs_sq(const SpatialField& f)
{
    std::vector<double> out(f.cells(), 0.0);
    for (int c = 0; c < f.components(); ++c) {
        auto s = f.component(c);
        for (int i = 0; i < f.cells(); ++i) out[i] += std::norm(s[i]);
    }
    return out;
}

std::vector<double> abs_sq(const SpaceTimeField& F, int level)
{
    std::vector<double> out(F.cells(), 0.0);
    for (int c = 0; c < F.components(); ++c) {
        auto s = F.slice(level, c);
        for (int i = 0; i < F.cells(); ++i) out[i] += std::norm(s[i]);
    }
    return out;
}

// ---- time quadrature ------------------------------------------------------

std::vector<double> dt_weights(const GridSpec& g, double a, double b)
{
    const auto t = g.times();
    std::vector<double> w(t.size(), 0.0);
    a = std::max(a, t.front());
    b = std::min(b, t.back());
    if (!(b > a)) return w;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double lo = std::max(a, t[k]);
        const double hi = std::min(b, t[k + 1]);
        if (!(hi > lo)) continue;
        const double d = t[k + 1] - t[k];
        w[k] += ((t[k + 1] - lo) * (t[k + 1] - lo) - (t[k + 1] - hi) * (t[k + 1] - hi)) / (2.0 * d);
        w[k + 1] += ((hi - t[k]) * (hi - t[k]) - (lo - t[k]) * (lo - t[k])) / (2.0 * d);
    }
    return w;
}

std::vector<double> dt_weights(const GridSpec& g) { return dt_weights(g, g.t_min, g.t_max); }

std::vector<double> dt_over_t_weights(const GridSpec& g)
{
    std::vector<double> w(g.levels, g.log_step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

std::vector<double> log_trapezoid_dt_weights(const GridSpec& g)
{
    auto w = dt_over_t_weights(g);
    for (int k = 0; k < g.levels; ++k) w[k] *= g.time(k);
    return w;
}

// ---- balls ----------------------------------------------------------------

BallStencil ball_stencil(const GridSpec& g, double radius)
{
    BallStencil st;
    const double r2 = (radius / g.h()) * (radius / g.h());
    const int N = g.points;
    st.covers_torus = covers(g, r2);
    if (st.covers_torus) {
        for (int j = 0; j < (g.n == 1 ? 1 : N); ++j)
            for (int i = 0; i < N; ++i) st.offsets.push_back({i, j});
        return st;
    }
    for (const auto& row : ball_rows(g, r2)) {
        if (row.half_width == -1) {
            for (int d = -N / 2 + 1; d <= N / 2; ++d) st.offsets.push_back({d, row.dy});
        } else {
            for (int d = -row.half_width; d <= row.half_width; ++d) st.offsets.push_back({d, row.dy});
        }
    }
    return st;
}

int ball_cell_count(const GridSpec& g, double radius) { return ball_stencil(g, radius).count(); }

std::vector<int> ball_cells(const GridSpec& g, int center, double radius)
{
    const auto st = ball_stencil(g, radius);
    std::vector<int> cells;
    cells.reserve(st.offsets.size());
    const int N = g.points;
    const int ci = g.n == 1 ? center : center % N;
    const int cj = g.n == 1 ? 0 : center / N;
    for (const auto& o : st.offsets) cells.push_back(g.cell_index(ci + o[0], cj + o[1]));
    std::sort(cells.begin(), cells.end());
    return cells;
}

cplx ball_average(const SpatialField& f, int center, double radius, int comp)
{
    const GridSpec& g = f.grid();
    if (!(radius >= g.h() / 2.0)) fail("grid.radius", "ball radius below half a cell width");
    const auto cells = ball_cells(g, center, radius);
    std::vector<double> re, im;
    re.reserve(cells.size());
    im.reserve(cells.size());
    for (int c : cells) {
        re.push_back(f(c, comp).real());
        im.push_back(f(c, comp).imag());
    }
    return cplx(pairwise_sum(re), pairwise_sum(im)) / static_cast<double>(cells.size());
}

std::vector<double> ball_means(const GridSpec& g, std::span<const double> v, double radius)
{
    const int N = g.points;
    const double r2 = (radius / g.h()) * (radius / g.h());
    std::vector<double> out(v.size(), 0.0);
    if (covers(g, r2)) {
        const double m = pairwise_sum(v) / static_cast<double>(v.size());
        std::fill(out.begin(), out.end(), m);
        return out;
    }
    const auto rows = ball_rows(g, r2);
    const int nrows = g.n == 1 ? 1 : N;
    // circular prefix sums per row over three periods
    std::vector<long double> pre(static_cast<std::size_t>(nrows) * (3 * N + 1));
    std::vector<long double> total(nrows);
    for (int j = 0; j < nrows; ++j) {
        long double* p = &pre[static_cast<std::size_t>(j) * (3 * N + 1)];
        p[0] = 0;
        for (int i = 0; i < 3 * N; ++i) p[i + 1] = p[i] + v[static_cast<std::size_t>(j) * N + (i % N)];
        total[j] = p[N];
    }
    long count = 0;
    for (const auto& r : rows) count += r.half_width == -1 ? N : 2 * r.half_width + 1;
    for (int j = 0; j < nrows; ++j) {
        for (int i = 0; i < N; ++i) {
            long double s = 0;
            for (const auto& r : rows) {
                const int row = g.n == 1 ? 0 : ((j + r.dy) % N + N) % N;
                if (r.half_width == -1) {
                    s += total[row];
                } else {
                    const long double* p = &pre[static_cast<std::size_t>(row) * (3 * N + 1)];
                    s += p[i + N + r.half_width + 1] - p[i + N - r.half_width];
                }
            }
            out[static_cast<std::size_t>(j) * N + i] = std::max(0.0, static_cast<double>(s / count));
        }
    }
    return out;
}

// ---- Whitney --------------------------------------------------------------

double whitney_average_sq(const SpaceTimeField& F, const WhitneyCube& cube)
{
    const GridSpec& g = F.grid();
    const double t = std::clamp(cube.t, g.t_min, g.t_max);
    auto w = dt_weights(g, t, 2.0 * t);
    double wsum = 0;
    for (double x : w) wsum += x;
    if (!(wsum > 0)) {
        // t at the top of the ladder: fall back to the last level alone
        std::fill(w.begin(), w.end(), 0.0);
        w.back() = 1.0;
        wsum = 1.0;
    }
    const auto cells = ball_cells(g, cube.center, std::sqrt(t));
    double acc = 0;
    for (int k = 0; k < g.levels; ++k) {
        if (w[k] == 0.0) continue;
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (int c : cells) {
            double s = 0;
            for (int comp = 0; comp < F.components(); ++comp) s += std::norm(F(k, c, comp));
            vals.push_back(s);
        }
        acc += w[k] * pairwise_sum(vals) / static_cast<double>(cells.size());
    }
    return acc / wsum;
}

// ---- pairing --------------------------------------------------------------

cplx pair(const SpatialField& a, const SpatialField& b)
{
    check_same_shape(a.grid(), a.components(), b.grid(), b.components());
    std::vector<double> re(a.data().size()), im(a.data().size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        const cplx z = a.data()[i] * std::conj(b.data()[i]);
        re[i] = z.real();
        im[i] = z.imag();
    }
    return a.grid().cell_volume() * cplx(pairwise_sum(re), pairwise_sum(im));
}

} // namespace tentkit
