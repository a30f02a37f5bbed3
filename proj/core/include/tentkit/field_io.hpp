#pragma once

#include <iosfwd>
#include <string>

#include "tentkit/grid.hpp"

namespace tentkit {

// TKF1 binary layout: "TKF1", then n, points_per_axis, time_levels and
// component count as little-endian u32, then float64 (re, im) pairs in
// [level][component][cell] order. Spatial fields use time_levels = 1.
// Period and ladder end points are not stored; the reader supplies the grid
// and the header is checked against it.
void write_tkf1(std::ostream& out, const SpatialField& f);
void write_tkf1(std::ostream& out, const SpaceTimeField& F);
SpatialField read_tkf1_spatial(std::istream& in, const GridSpec& grid);
SpaceTimeField read_tkf1_spacetime(std::istream& in, const GridSpec& grid);

struct Tkf1Header {
    std::uint32_t n = 0, points = 0, time_levels = 0, components = 0;
};
Tkf1Header read_tkf1_header(std::istream& in);
void write_tkf1_header(std::ostream& out, const Tkf1Header& h);
void write_f64_le(std::ostream& out, double v);
double read_f64_le(std::istream& in);

void save_tkf1(const std::string& path, const SpatialField& f);
void save_tkf1(const std::string& path, const SpaceTimeField& F);

// CSV with header "level,t,cell,x,y,comp,re,im" (spatial fields: level 0, t 0).
std::string to_csv(const SpatialField& f);
std::string to_csv(const SpaceTimeField& F);

} // namespace tentkit
