#ifndef VCRP_PGM_HPP
#define VCRP_PGM_HPP

#include <string>

#include "vcrp/types.hpp"

namespace vcrp {

// Binary 8-bit PGM (P5). Reading keeps samples as reals; writing clamps and
// rounds to [0,255].
PixelPlane read_pgm(const std::string& path);
void write_pgm(const PixelPlane& plane, const std::string& path);

}  // namespace vcrp

#endif
