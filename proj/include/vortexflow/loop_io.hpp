#pragma once

#include <iosfwd>
#include <string>

#include "vortexflow/loop_point.hpp"

namespace vortexflow {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// Columnar text: a header line "theta re_x1 im_x1 ... re_xn im_xn eta" followed
// by one row per grid node. Reading back reproduces x and eta bit for bit.
void write_loop(std::ostream& os, const LoopPoint& y);
LoopPoint read_loop(std::istream& is);

void save_loop(const std::string& path, const LoopPoint& y);
LoopPoint load_loop(const std::string& path);

}  // namespace vortexflow
