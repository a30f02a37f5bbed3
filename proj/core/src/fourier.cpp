#include "tentkit/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

fftw_plan plan_for(int n, int N, int sign)
{
    static std::map<std::tuple<int, int, int>, Plan> cache;
    std::lock_guard lock(plan_mutex());
    auto key = std::make_tuple(n, N, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.get();
    const int cells = n == 1 ? N : N * N;
    auto* in = fftw_alloc_complex(cells);
    auto* out = fftw_alloc_complex(cells);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = n == 1 ? fftw_plan_dft_1d(N, in, out, sign, flags) : fftw_plan_dft_2d(N, N, in, out, sign, flags);
    fftw_free(in);
    fftw_free(out);
    if (!p) fail("fft.plan", "FFTW could not create a plan");
    cache.emplace(key, Plan(p));
    return p;
}

std::vector<cplx> run(const GridSpec& g, std::span<const cplx> v, int sign)
{
    if (static_cast<int>(v.size()) != g.cells()) fail("fft.size", "value count does not match grid");
    // layout: cell = i + N j with i fastest, i.e. row-major [j][i]; FFTW 2-D
    // plans take the last index as fastest, which is i here.
    std::vector<cplx> in(v.begin(), v.end());
    std::vector<cplx> out(v.size());
    fftw_execute_dft(plan_for(g.n, g.points, sign), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace

std::vector<cplx> dft_forward(const GridSpec& g, std::span<const cplx> values)
{
    return run(g, values, FFTW_FORWARD);
}

std::vector<cplx> dft_inverse(const GridSpec& g, std::span<const cplx> coeffs)
{
    auto out = run(g, coeffs, FFTW_BACKWARD);
    const double s = 1.0 / g.cells();
    for (auto& v : out) v *= s;
    return out;
}

const Wavenumbers& wavenumbers(const GridSpec& g)
{
    static std::mutex m;
    static std::map<std::tuple<int, int, double>, Wavenumbers> cache;
    std::lock_guard lock(m);
    auto key = std::make_tuple(g.n, g.points, g.period);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int N = g.points;
    const double base = 2.0 * std::numbers::pi / g.period;
    Wavenumbers w;
    const int cells = g.cells();
    w.xi1.resize(cells);
    w.xi2.assign(cells, 0.0);
    w.nyquist1.assign(cells, false);
    w.nyquist2.assign(cells, false);
    w.modulus.resize(cells);
    auto k_of = [N](int i) { return i < N / 2 ? i : i - N; };
    for (int c = 0; c < cells; ++c) {
        const int i = c % N;
        const int j = g.n == 1 ? 0 : c / N;
        w.xi1[c] = base * k_of(i);
        w.nyquist1[c] = i == N / 2;
        if (g.n == 2) {
            w.xi2[c] = base * k_of(j);
            w.nyquist2[c] = j == N / 2;
        }
        w.modulus[c] = std::hypot(w.xi1[c], w.xi2[c]);
    }
    return cache.emplace(key, std::move(w)).first->second;
}

SpatialField apply_symbol(const SpatialField& f, std::span<const cplx> symbol)
{
    SpatialField out(f.grid(), f.components());
    for (int c = 0; c < f.components(); ++c) {
        auto hat = dft_forward(f.grid(), f.component(c));
        for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= symbol[i];
        auto back = dft_inverse(f.grid(), hat);
        std::copy(back.begin(), back.end(), out.component(c).begin());
    }
    return out;
}

SpatialField apply_symbol(const SpatialField& f, std::span<const double> symbol)
{
    std::vector<cplx> s(symbol.begin(), symbol.end());
    return apply_symbol(f, s);
}

std::vector<cplx> forward_difference_symbol(const GridSpec& g, int axis)
{
    const auto& w = wavenumbers(g);
    const double h = g.h();
    std::vector<cplx> s(g.cells());
    for (int c = 0; c < g.cells(); ++c) {
        const double xi = axis == 0 ? w.xi1[c] : w.xi2[c];
        s[c] = (std::exp(cplx(0.0, xi * h)) - 1.0) / h;
    }
    return s;
}

std::vector<double> discrete_laplacian_symbol(const GridSpec& g)
{
    const auto& w = wavenumbers(g);
    const double h = g.h();
    std::vector<double> s(g.cells());
    for (int c = 0; c < g.cells(); ++c) {
        const double a = std::sin(w.xi1[c] * h / 2.0);
        const double b = std::sin(w.xi2[c] * h / 2.0);
        s[c] = 4.0 / (h * h) * (a * a + b * b);
    }
    return s;
}

} // namespace tentkit
