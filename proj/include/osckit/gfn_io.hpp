#pragma once

// GFN1 binary container for grid functions:
//   "GFN1" | u8 rank | rank x u32le dims | prod(dims) x f64le values (row-major)

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "osckit/grid.hpp"

namespace osckit {

std::vector<std::uint8_t> encode_gfn1(const GridFunction& f);

// Throws FormatError naming the byte offset of the first problem.
GridFunction decode_gfn1(std::span<const std::uint8_t> bytes);

void write_gfn1(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_gfn1(const std::filesystem::path& path);

}  // namespace osckit
