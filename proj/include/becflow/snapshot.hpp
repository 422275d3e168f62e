#pragma once

#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/grid.hpp"

namespace becflow {

/// One stored wavefunction state. Layout (little-endian):
///   magic "GPE1", u32 version, u64 num_points,
///   f64 z_min, f64 z_max, f64 time, f64 beta,
///   num_points interleaved (re, im) f64 pairs.
struct Snapshot {
    std::uint32_t version = 1;
    std::uint64_t num_points = 0;
    double z_min = 0.0;
    double z_max = 0.0;
    double time = 0.0;
    double beta = 0.0;
    std::vector<std::complex<double>> values;
};

namespace snapshot_detail {

inline constexpr char magic[4] = {'G', 'P', 'E', '1'};

template <typename T>
void write_le(std::ostream& out, T value) {
    // Host is little-endian on every platform this project targets.
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    return value;
}

} // namespace snapshot_detail

inline void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_snapshot: cannot open " + path.string());
    out.write(snapshot_detail::magic, 4);
    snapshot_detail::write_le(out, snap.version);
    snapshot_detail::write_le(out, static_cast<std::uint64_t>(snap.values.size()));
    snapshot_detail::write_le(out, snap.z_min);
    snapshot_detail::write_le(out, snap.z_max);
    snapshot_detail::write_le(out, snap.time);
    snapshot_detail::write_le(out, snap.beta);
    for (const auto& v : snap.values) {
        snapshot_detail::write_le(out, v.real());
        snapshot_detail::write_le(out, v.imag());
    }
    if (!out) throw io_error("write_snapshot: write failed for " + path.string());
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_snapshot: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, snapshot_detail::magic, 4) != 0)
        throw io_error("read_snapshot: bad magic in " + path.string());
    Snapshot snap;
    snap.version = snapshot_detail::read_le<std::uint32_t>(in);
    if (snap.version != 1)
        throw io_error("read_snapshot: unsupported version " + std::to_string(snap.version));
    snap.num_points = snapshot_detail::read_le<std::uint64_t>(in);
    snap.z_min = snapshot_detail::read_le<double>(in);
    snap.z_max = snapshot_detail::read_le<double>(in);
    snap.time = snapshot_detail::read_le<double>(in);
    snap.beta = snapshot_detail::read_le<double>(in);
    snap.values.resize(snap.num_points);
    for (auto& v : snap.values) {
        const double re = snapshot_detail::read_le<double>(in);
        const double im = snapshot_detail::read_le<double>(in);
        v = {re, im};
    }
    if (!in) throw io_error("read_snapshot: truncated file " + path.string());
    return snap;
}

} // namespace becflow
