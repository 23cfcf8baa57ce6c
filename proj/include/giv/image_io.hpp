#pragma once

#include <string>

#include "giv/imaging.hpp"

namespace giv {

/// Layout: the 8 bytes "GIVIMG1\n", a little-endian uint64 header length, the
/// JSON header (lattice, window, index box, provenance), then the values as
/// little-endian float64 with axis 0 varying fastest.
void write_image(const std::string& path, const GreyImage& image);
GreyImage read_image(const std::string& path);

/// 8-bit binary PGM of a 2D image (the middle slice along the last axis for
/// 3D), first row = largest second coordinate.
void write_pgm(const std::string& path, const GreyImage& image);

}  // namespace giv
