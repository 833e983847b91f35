#include "rbslip/snapshot.hpp"

#include "rbslip/error.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace rbslip {

namespace {

template <class T>
void put(std::vector<std::uint8_t>& out, std::size_t& pos, T v) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  std::memcpy(out.data() + pos, b, sizeof(T));
  pos += sizeof(T);
}

template <class T>
T get(std::span<const std::uint8_t> in, std::size_t& pos) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FlowState& state, const PhysParams& params) {
  const Domain& d = state.temperature.domain();
  const std::size_t n = static_cast<std::size_t>(d.nx()) * d.nz();
  std::vector<std::uint8_t> out(kSnapshotHeaderBytes + 3 * n * sizeof(double));
  std::memcpy(out.data(), "RBNS", 4);
  std::size_t pos = 4;
  put<std::uint32_t>(out, pos, kSnapshotVersion);
  put<std::uint32_t>(out, pos, static_cast<std::uint32_t>(d.nx()));
  put<std::uint32_t>(out, pos, static_cast<std::uint32_t>(d.nz()));
  for (double v : {d.gamma(), params.ra, params.pr, params.ls, state.time}) put<double>(out, pos, v);
  for (const ScalarField* f : {&state.temperature, &state.vorticity, &state.streamfunction})
    for (double v : f->values()) put<double>(out, pos, v);
  return out;
}

Snapshot decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "RBNS", 4) != 0)
    throw FormatError("bad magic: not an RBNS snapshot");
  if (bytes.size() < kSnapshotHeaderBytes)
    throw FormatError("truncated snapshot: expected at least " + std::to_string(kSnapshotHeaderBytes) +
                      " bytes, got " + std::to_string(bytes.size()));
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion)
    throw FormatError("unsupported version " + std::to_string(version) + " (expected " +
                      std::to_string(kSnapshotVersion) + ")");
  const auto nx = get<std::uint32_t>(bytes, pos);
  const auto nz = get<std::uint32_t>(bytes, pos);
  if (nx < 8 || nx % 2 != 0 || nz < 9 || nx > (1u << 16) || nz > (1u << 16))
    throw FormatError("invalid snapshot shape nx = " + std::to_string(nx) + ", nz = " + std::to_string(nz));
  PhysParams p;
  p.gamma = get<double>(bytes, pos);
  p.ra = get<double>(bytes, pos);
  p.pr = get<double>(bytes, pos);
  p.ls = get<double>(bytes, pos);
  const double time = get<double>(bytes, pos);
  const std::size_t n = static_cast<std::size_t>(nx) * nz;
  const std::size_t expected = kSnapshotHeaderBytes + 3 * n * sizeof(double);
  if (bytes.size() != expected)
    throw FormatError(std::string(bytes.size() < expected ? "truncated snapshot" : "oversized snapshot") +
                      ": expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("invalid snapshot parameters: ") + e.what());
  }
  const DomainPtr dom = Domain::create(p.gamma, static_cast<int>(nx), static_cast<int>(nz));
  auto field = [&] {
    std::vector<double> v(n);
    for (double& x : v) x = get<double>(bytes, pos);
    return ScalarField(dom, std::move(v));
  };
  ScalarField t = field();
  ScalarField w = field();
  ScalarField psi = field();
  return {FlowState::from_fields(std::move(t), std::move(w), std::move(psi), time), p};
}

void write_snapshot(const std::filesystem::path& path, const FlowState& state, const PhysParams& params) {
  const auto bytes = encode_snapshot(state, params);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open snapshot " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace rbslip
