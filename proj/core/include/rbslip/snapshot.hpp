#pragma once

#include "rbslip/params.hpp"
#include "rbslip/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rbslip {

/// Binary state file, little-endian:
///   "RBNS", u32 version = 1, u32 nx, u32 nz,
///   f64 gamma, ra, pr, ls, time (pr and ls may be +inf),
///   f64 T[nx*nz], omega[nx*nz], psi[nx*nz] (index i * nz + j).
/// The velocity is rebuilt from psi on reading.
struct Snapshot {
  FlowState state;
  PhysParams params;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 4 + 3 * 4 + 5 * 8;

std::vector<std::uint8_t> encode_snapshot(const FlowState& state, const PhysParams& params);
/// Throws FormatError on bad magic, unsupported version, bad shape or a
/// size mismatch (naming expected and actual byte counts).
Snapshot decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const std::filesystem::path& path, const FlowState& state,
                    const PhysParams& params);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace rbslip
