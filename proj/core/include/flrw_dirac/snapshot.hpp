#pragma once

#include <cstdint>
#include <string>

#include "flrw_dirac/field.hpp"

namespace flrw {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Binary layout: "FDRC", u32 version, u32 dim, u32 n, f64 L, f64 time,
/// then 4*n^dim complex values as (re, im) f64 pairs, component-major.
/// All fields little-endian.
void write_snapshot(const std::string& path, const SpinorField& f);
SpinorField read_snapshot(const std::string& path);

}  // namespace flrw
