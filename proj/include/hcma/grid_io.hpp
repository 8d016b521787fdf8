#pragma once

#include <iosfwd>
#include <string>

#include "hcma/grid.hpp"

namespace hcma {

// CSV layout: first line "# " followed by a one-line JSON header
// {n, nt, nx, ny, ox, oy, h, omega11, symmetric, topology}, then a
// "t,x,y,value" row per node. Doubles use shortest round-trip formatting.
void write_grid_csv(std::ostream& os, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is);

void save_grid_csv(const std::string& path, const GridFunction& f);
GridFunction load_grid_csv(const std::string& path);

// JSON object {"header": {...}, "values": [...]} as text.
std::string grid_to_json(const GridFunction& f);
GridFunction grid_from_json(const std::string& text);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// Write to a sibling temporary file, then rename over path.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace hcma
