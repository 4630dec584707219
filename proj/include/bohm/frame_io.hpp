// Text serialization of spinor frames and shared number formatting.
//
// Frame layout:
//
//   # config_hash=<16 hex digits>            (optional)
//   # bohm-frame v1
//   # x_min=<d> x_max=<d> n_points=<n> time=<d>
//   x,up_re,up_im,down_re,down_im
//   <one row per node>
//
// Doubles are written with 17 significant digits so a write/read cycle is
// bit-exact.

#ifndef BOHM_FRAME_IO_HPP_
#define BOHM_FRAME_IO_HPP_

#include "bohm/wavefield.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace bohm {

/// "%.17g" formatting.
std::string format_double(double value);
double parse_double(std::string_view text);

void write_frame(std::ostream& out, const SpinorField& field, std::string_view config_hash = {});
SpinorField read_frame(std::istream& in);

}  // namespace bohm

#endif  // BOHM_FRAME_IO_HPP_
