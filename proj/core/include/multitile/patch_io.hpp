#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "multitile/flow.hpp"

namespace multitile {

/// Binary patch format ("MTP1", little endian):
///   header: magic, scheme hash u64, root u16 (1-based), dimension u8,
///           scheme name (varint length + bytes), time factor, frame offset
///   body:   tile count varint, then per tile: type u16 (1-based), scale,
///           offset x, offset y, path (varint count + varint indices)
/// Rationals are numerator then denominator; big integers are a sign byte,
/// a varint byte count and the magnitude bytes least significant first.
void write_patch(std::ostream& out, const Patch& patch);
Patch read_patch(std::istream& in);
void save_patch(const std::filesystem::path& path, const Patch& patch);
Patch load_patch(const std::filesystem::path& path);
std::string encode_patch(const Patch& patch);

/// CSV with header `type,scale_num,scale_den,offset_x,offset_y,depth`.
/// Types are 1-based ids; offsets are exact "p/q" strings.
void write_patch_csv(std::ostream& out, const Patch& patch);

}  // namespace multitile
