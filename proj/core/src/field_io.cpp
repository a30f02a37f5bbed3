#include "tentkit/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

void put_u32(std::ostream& out, std::uint32_t v)
{
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in)
{
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) fail("io.truncated", "TKF1 header truncated");
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void check_header(const Tkf1Header& h, const GridSpec& g, std::uint32_t levels)
{
    if (h.n != static_cast<std::uint32_t>(g.n) || h.points != static_cast<std::uint32_t>(g.points))
        fail("io.grid_mismatch", "TKF1 grid shape does not match the supplied grid");
    if (h.time_levels != levels) fail("io.grid_mismatch", "TKF1 time_levels does not match");
    if (h.components == 0) fail("io.format", "TKF1 component count is zero");
}

} // namespace

void write_f64_le(std::ostream& out, double v)
{
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64_le(std::istream& in)
{
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) fail("io.truncated", "TKF1 payload truncated");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

void write_tkf1_header(std::ostream& out, const Tkf1Header& h)
{
    out.write("TKF1", 4);
    put_u32(out, h.n);
    put_u32(out, h.points);
    put_u32(out, h.time_levels);
    put_u32(out, h.components);
}

Tkf1Header read_tkf1_header(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "TKF1", 4) != 0) fail("io.format", "missing TKF1 magic");
    Tkf1Header h;
    h.n = get_u32(in);
    h.points = get_u32(in);
    h.time_levels = get_u32(in);
    h.components = get_u32(in);
    return h;
}

void write_tkf1(std::ostream& out, const SpatialField& f)
{
    const GridSpec& g = f.grid();
    write_tkf1_header(out, {static_cast<std::uint32_t>(g.n), static_cast<std::uint32_t>(g.points), 1u,
                            static_cast<std::uint32_t>(f.components())});
    for (const cplx& v : f.data()) {
        write_f64_le(out, v.real());
        write_f64_le(out, v.imag());
    }
}

void write_tkf1(std::ostream& out, const SpaceTimeField& F)
{
    const GridSpec& g = F.grid();
    write_tkf1_header(out, {static_cast<std::uint32_t>(g.n), static_cast<std::uint32_t>(g.points),
                            static_cast<std::uint32_t>(g.levels), static_cast<std::uint32_t>(F.components())});
    for (const cplx& v : F.data()) {
        write_f64_le(out, v.real());
        write_f64_le(out, v.imag());
    }
}

SpatialField read_tkf1_spatial(std::istream& in, const GridSpec& grid)
{
    const auto h = read_tkf1_header(in);
    check_header(h, grid, 1u);
    SpatialField f(grid, static_cast<int>(h.components));
    for (auto& v : f.data()) {
        const double re = read_f64_le(in);
        v = cplx(re, read_f64_le(in));
    }
    return f;
}

SpaceTimeField read_tkf1_spacetime(std::istream& in, const GridSpec& grid)
{
    const auto h = read_tkf1_header(in);
    check_header(h, grid, static_cast<std::uint32_t>(grid.levels));
    SpaceTimeField F(grid, static_cast<int>(h.components));
    for (auto& v : F.data()) {
        const double re = read_f64_le(in);
        v = cplx(re, read_f64_le(in));
    }
    return F;
}

void save_tkf1(const std::string& path, const SpatialField& f)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("io.open", "cannot write '" + path + "'");
    write_tkf1(out, f);
}

void save_tkf1(const std::string& path, const SpaceTimeField& F)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("io.open", "cannot write '" + path + "'");
    write_tkf1(out, F);
}

namespace {

void csv_rows(std::ostream& os, const GridSpec& g, int level, double t, int comps,
              const std::function<cplx(int, int)>& at)
{
    for (int c = 0; c < comps; ++c)
        for (int cell = 0; cell < g.cells(); ++cell) {
            const auto x = g.center(cell);
            const cplx v = at(cell, c);
            os << level << ',' << t << ',' << cell << ',' << x[0] << ',' << x[1] << ',' << c << ',' << v.real()
               << ',' << v.imag() << '\n';
        }
}

} // namespace

std::string to_csv(const SpatialField& f)
{
    std::ostringstream os;
    os << std::setprecision(17) << "level,t,cell,x,y,comp,re,im\n";
    csv_rows(os, f.grid(), 0, 0.0, f.components(), [&](int cell, int c) { return f(cell, c); });
    return os.str();
}

std::string to_csv(const SpaceTimeField& F)
{
    std::ostringstream os;
    os << std::setprecision(17) << "level,t,cell,x,y,comp,re,im\n";
    for (int k = 0; k < F.levels(); ++k)
        csv_rows(os, F.grid(), k, F.grid().time(k), F.components(),
                 [&](int cell, int c) { return F(k, cell, c); });
    return os.str();
}

} // namespace tentkit
