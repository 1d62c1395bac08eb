#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "hjr/solver.hpp"

namespace hjr {

/**
 * HJRF binary field file, all integers and floats little-endian:
 *
 *   "HJRF"  u32 version (=1)  u32 dim_count
 *   per dim:  u64 count  f64 min  f64 max  u8 periodic
 *   u64 tau_count
 *   per tau:  f64 tau  then product(count) f64 values, last dimension fastest
 *
 * The payload length must match the header exactly.
 */
inline constexpr std::uint32_t kFieldFileVersion = 1;

[[nodiscard]] std::string encode_field_file(const SolveResult& result);

/// Throws FormatError on bad magic, unsupported version, truncation,
/// trailing bytes or an invalid grid header. Stats are left empty.
[[nodiscard]] SolveResult decode_field_file(std::string_view bytes);

void write_field_file(const SolveResult& result, const std::filesystem::path& path);
[[nodiscard]] SolveResult read_field_file(const std::filesystem::path& path);

}  // namespace hjr
