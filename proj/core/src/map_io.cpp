#include "textanchor/map_io.hpp"

#include <array>
#include <cmath>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "textanchor/error.hpp"

namespace textanchor {

namespace {

constexpr std::uint32_t kMaxGridSide = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void put_f32(std::ostream& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

void put_u8(std::ostream& out, std::uint8_t v) { out.put(static_cast<char>(v)); }

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw ParseError(0, 0, "truncated map file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f32(std::istream& in) { return static_cast<double>(std::bit_cast<float>(get_u32(in))); }

std::uint8_t get_u8(std::istream& in) {
  const int c = in.get();
  if (c == std::char_traits<char>::eof()) throw ParseError(0, 0, "truncated map file");
  return static_cast<std::uint8_t>(c);
}

void write_header(std::ostream& out, const char (&magic)[4], const LevelSpec& level) {
  out.write(magic, 4);
  put_u32(out, static_cast<std::uint32_t>(level.stride));
  put_u32(out, static_cast<std::uint32_t>(level.grid_w));
  put_u32(out, static_cast<std::uint32_t>(level.grid_h));
  put_f32(out, level.k);
}

LevelSpec read_header_body(std::istream& in) {
  LevelSpec level;
  const std::uint32_t stride = get_u32(in);
  const std::uint32_t grid_w = get_u32(in);
  const std::uint32_t grid_h = get_u32(in);
  if (stride == 0 || stride > kMaxGridSide || grid_w == 0 || grid_w > kMaxGridSide || grid_h == 0 ||
      grid_h > kMaxGridSide) {
    throw ParseError(0, 0, "map header has an invalid stride or grid size");
  }
  level.stride = static_cast<int>(stride);
  level.grid_w = static_cast<int>(grid_w);
  level.grid_h = static_cast<int>(grid_h);
  level.k = get_f32(in);
  if (!(level.k > 0.0) || !std::isfinite(level.k)) throw ParseError(0, 0, "map header has an invalid k");
  return level;
}

void write_grid(std::ostream& out, const Grid<double>& grid) {
  for (double v : grid.values()) put_f32(out, v);
}

void read_grid(std::istream& in, Grid<double>& grid) {
  for (double& v : grid.values()) v = get_f32(in);
}

TargetMaps read_target_body(std::istream& in) {
  TargetMaps maps(read_header_body(in));
  for (auto& c : maps.location.values()) {
    const std::uint8_t b = get_u8(in);
    if (b != 0 && b != 1 && b != 255) throw ParseError(0, 0, "unknown location class byte in map file");
    c = static_cast<LocationClass>(b);
  }
  read_grid(in, maps.orientation);
  read_grid(in, maps.shape_dw);
  read_grid(in, maps.shape_dh);
  for (auto& v : maps.shape_valid.values()) v = get_u8(in) != 0 ? 1 : 0;
  return maps;
}

PredictionMaps read_prediction_body(std::istream& in) {
  PredictionMaps maps(read_header_body(in));
  read_grid(in, maps.location_prob);
  read_grid(in, maps.orientation);
  read_grid(in, maps.shape_dw);
  read_grid(in, maps.shape_dh);
  try {
    validate(maps);
  } catch (const InvalidInput& e) {
    throw ParseError(0, 0, e.what());
  }
  return maps;
}

std::array<char, 4> read_magic(std::istream& in) {
  std::array<char, 4> m{};
  if (!in.read(m.data(), 4)) throw ParseError(0, 0, "truncated map file");
  return m;
}

bool is(const std::array<char, 4>& m, const char (&magic)[4]) { return std::memcmp(m.data(), magic, 4) == 0; }

}  // namespace

void write_target_maps(std::ostream& out, const TargetMaps& maps) {
  write_header(out, kTargetMagic, maps.level);
  for (auto c : maps.location.values()) put_u8(out, static_cast<std::uint8_t>(c));
  write_grid(out, maps.orientation);
  write_grid(out, maps.shape_dw);
  write_grid(out, maps.shape_dh);
  for (auto v : maps.shape_valid.values()) put_u8(out, v);
}

void write_prediction_maps(std::ostream& out, const PredictionMaps& maps) {
  write_header(out, kPredictionMagic, maps.level);
  write_grid(out, maps.location_prob);
  write_grid(out, maps.orientation);
  write_grid(out, maps.shape_dw);
  write_grid(out, maps.shape_dh);
}

TargetMaps read_target_maps(std::istream& in) {
  if (!is(read_magic(in), kTargetMagic)) throw ParseError(0, 0, "not a target map file");
  return read_target_body(in);
}

PredictionMaps read_prediction_maps(std::istream& in) {
  if (!is(read_magic(in), kPredictionMagic)) throw ParseError(0, 0, "not a prediction map file");
  return read_prediction_body(in);
}

std::variant<TargetMaps, PredictionMaps> read_level_maps(std::istream& in) {
  const auto m = read_magic(in);
  if (is(m, kTargetMagic)) return read_target_body(in);
  if (is(m, kPredictionMagic)) return read_prediction_body(in);
  throw ParseError(0, 0, "unrecognized map file magic");
}

void save_target_maps(const std::filesystem::path& path, const TargetMaps& maps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_target_maps(out, maps);
  if (!out) throw Error("write failed: " + path.string());
}

void save_prediction_maps(const std::filesystem::path& path, const PredictionMaps& maps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_prediction_maps(out, maps);
  if (!out) throw Error("write failed: " + path.string());
}

std::variant<TargetMaps, PredictionMaps> load_level_maps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_level_maps(in);
  } catch (const ParseError& e) {
    throw ParseError(0, 0, path.string() + ": " + e.what());
  }
}

}  // namespace textanchor
