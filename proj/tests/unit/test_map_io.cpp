#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "textanchor/error.hpp"
#include "textanchor/map_io.hpp"

using namespace textanchor;

namespace {

TargetMaps sample_targets() {
  const std::vector<LevelSpec> levels = {LevelSpec{4, 5.0, 10, 7, true}};
  const std::vector<RotatedBox> gts = {RotatedBox(16, 14, 20, 8, 0.3), RotatedBox(30, 20, 12, 6, -0.9)};
  return generate_targets(gts, levels, {}, {}).levels[0];
}

template <typename T>
T read_le(const std::string& bytes, std::size_t offset) {
  T v;
  std::memcpy(&v, bytes.data() + offset, sizeof(T));
  return v;
}

}  // namespace

TEST(MapIo, TargetHeaderLayout) {
  const TargetMaps maps = sample_targets();
  std::ostringstream out;
  write_target_maps(out, maps);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.substr(0, 4), "TXTM");
  EXPECT_EQ(read_le<std::uint32_t>(bytes, 4), 4u);
  EXPECT_EQ(read_le<std::uint32_t>(bytes, 8), 10u);
  EXPECT_EQ(read_le<std::uint32_t>(bytes, 12), 7u);
  EXPECT_EQ(read_le<float>(bytes, 16), 5.0f);
  EXPECT_EQ(bytes.size(), 20u + 70u * (1 + 4 + 4 + 4 + 1));
  for (std::size_t c = 0; c < 70; ++c) {
    const auto b = static_cast<unsigned char>(bytes[20 + c]);
    EXPECT_TRUE(b == 0 || b == 1 || b == 255);
  }
}

TEST(MapIo, TargetRoundTripAtFloatPrecision) {
  const TargetMaps maps = sample_targets();
  std::stringstream buf;
  write_target_maps(buf, maps);
  const TargetMaps back = read_target_maps(buf);
  EXPECT_EQ(back.level.stride, maps.level.stride);
  EXPECT_EQ(back.level.grid_w, maps.level.grid_w);
  EXPECT_EQ(back.location, maps.location);
  EXPECT_EQ(back.shape_valid, maps.shape_valid);
  for (int j = 0; j < 7; ++j) {
    for (int i = 0; i < 10; ++i) {
      const double o = maps.orientation.at(i, j);
      if (std::isnan(o)) {
        EXPECT_TRUE(std::isnan(back.orientation.at(i, j)));
      } else {
        EXPECT_EQ(back.orientation.at(i, j), static_cast<double>(static_cast<float>(o)));
      }
      if (maps.shape_valid.at(i, j)) {
        EXPECT_NEAR(back.shape_dw.at(i, j), maps.shape_dw.at(i, j), 1e-6);
        EXPECT_NEAR(back.shape_dh.at(i, j), maps.shape_dh.at(i, j), 1e-6);
      }
    }
  }
}

TEST(MapIo, PredictionRoundTripAndDispatch) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PredictionMaps p(LevelSpec{8, 5.0, 5, 3, false});
  for (double& v : p.location_prob.values()) v = u(rng);
  for (double& v : p.orientation.values()) v = u(rng);
  for (double& v : p.shape_dw.values()) v = u(rng) - 0.5;
  std::stringstream buf;
  write_prediction_maps(buf, p);
  const auto any = read_level_maps(buf);
  ASSERT_TRUE(std::holds_alternative<PredictionMaps>(any));
  const auto& back = std::get<PredictionMaps>(any);
  for (std::size_t c = 0; c < 15; ++c) {
    EXPECT_NEAR(back.location_prob.values()[c], p.location_prob.values()[c], 1e-7);
    EXPECT_NEAR(back.orientation.values()[c], p.orientation.values()[c], 1e-7);
    EXPECT_NEAR(back.shape_dw.values()[c], p.shape_dw.values()[c], 1e-7);
  }
}

TEST(MapIo, RejectsBadMagicTruncationAndBadClasses) {
  std::istringstream junk("NOPE0000000000000000");
  EXPECT_THROW(read_level_maps(junk), ParseError);

  std::ostringstream out;
  write_target_maps(out, sample_targets());
  const std::string bytes = out.str();

  std::istringstream cut(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_target_maps(cut), ParseError);

  std::string bad_class = bytes;
  bad_class[20] = 7;
  std::istringstream bc(bad_class);
  EXPECT_THROW(read_target_maps(bc), ParseError);

  std::istringstream wrong_kind(bytes);
  EXPECT_THROW(read_prediction_maps(wrong_kind), ParseError);
}

TEST(MapIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "textanchor_map_io_test.bin";
  const TargetMaps maps = sample_targets();
  save_target_maps(path, maps);
  const auto any = load_level_maps(path);
  ASSERT_TRUE(std::holds_alternative<TargetMaps>(any));
  EXPECT_EQ(std::get<TargetMaps>(any).location, maps.location);
  std::filesystem::remove(path);
  EXPECT_THROW(load_level_maps(path), std::exception);
}
