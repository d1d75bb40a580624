#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpcalc/grid.hpp"

namespace lpcalc {

/// Binary grid-function container:
///   "LPGF" | u32 version (=1) | u32 n | u32 N | f64 L | N^n x (f64 re, f64 im)
/// All fields little-endian.
inline constexpr std::uint32_t kLpgfVersion = 1;

std::vector<std::uint8_t> encode_lpgf(const GridFunction& f);
GridFunction decode_lpgf(const std::vector<std::uint8_t>& bytes);

void write_lpgf(const GridFunction& f, const std::filesystem::path& path);
GridFunction read_lpgf(const std::filesystem::path& path);

/// One row per sample: x-coordinates, then re, im.
void write_csv(const GridFunction& f, std::ostream& out);

}  // namespace lpcalc
