#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "textanchor/decode.hpp"
#include "textanchor/targets.hpp"

namespace textanchor {

// Binary layout shared by target and prediction maps, all little-endian:
//
//   char[4]  magic        "TXTM" (targets) or "TXPM" (predictions)
//   u32      stride
//   u32      grid_w
//   u32      grid_h
//   f32      k
//
// followed by row-major grids of grid_w * grid_h entries each.
//   targets:     u8 location {0 negative, 1 positive, 255 ignore},
//                f32 orientation, f32 shape_dw, f32 shape_dh, u8 shape_valid
//   predictions: f32 location_prob, f32 orientation, f32 shape_dw, f32 shape_dh

inline constexpr char kTargetMagic[4] = {'T', 'X', 'T', 'M'};
inline constexpr char kPredictionMagic[4] = {'T', 'X', 'P', 'M'};

void write_target_maps(std::ostream& out, const TargetMaps& maps);
void write_prediction_maps(std::ostream& out, const PredictionMaps& maps);

TargetMaps read_target_maps(std::istream& in);
PredictionMaps read_prediction_maps(std::istream& in);

/// Reads either layout, dispatching on the magic.
std::variant<TargetMaps, PredictionMaps> read_level_maps(std::istream& in);

void save_target_maps(const std::filesystem::path& path, const TargetMaps& maps);
void save_prediction_maps(const std::filesystem::path& path, const PredictionMaps& maps);
std::variant<TargetMaps, PredictionMaps> load_level_maps(const std::filesystem::path& path);

}  // namespace textanchor
