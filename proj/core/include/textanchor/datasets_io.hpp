#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "textanchor/decode.hpp"
#include "textanchor/error.hpp"
#include "textanchor/geom.hpp"

namespace textanchor::io {

/// Axis-aligned rectangle as stored in horizontal-text ground truth.
struct AxisRect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  /// Center/size box; tall rectangles get theta = -pi/2 to keep w >= h.
  RotatedBox to_rotated_box() const;
};

using Geometry = std::variant<Quad, RotatedBox, AxisRect>;

struct AnnotationRecord {
  Geometry geometry;
  std::optional<std::string> transcription;
  bool dont_care = false;
  bool difficult = false;
};

/// Any geometry variant as a rotated box (quads go through the angle label
/// generation, which is lossy for non-rectangular quads).
RotatedBox to_rotated_box(const Geometry& g);

enum class GtFormat { Icdar13, Icdar15, Msra };

GtFormat parse_format(std::string_view tag);
std::string to_string(GtFormat f);

// Line parsers. `line_no` is only used in error messages. Each returns a
// record or throws ParseError (tokenization, arity, non-numeric fields) or
// InvalidGeometry (well-formed numbers describing an impossible shape).

/// "x1,y1,x2,y2,x3,y3,x4,y4[,transcription]"; "###" marks don't-care.
AnnotationRecord parse_icdar15(std::string_view line, std::size_t line_no = 0);

/// "index difficult x y w h theta" with (x, y) the top-left of the unrotated
/// rectangle and theta (radians) a rotation about its center.
AnnotationRecord parse_msra(std::string_view line, std::size_t line_no = 0);

/// "x_min, y_min, x_max, y_max[, transcription]" or the same separated by
/// spaces.
AnnotationRecord parse_icdar13(std::string_view line, std::size_t line_no = 0);

AnnotationRecord parse_line(GtFormat format, std::string_view line, std::size_t line_no = 0);

// Writers produce one line without a terminator. Geometry variants other
// than the format's native one are converted through RotatedBox.
std::string write_icdar15(const AnnotationRecord& r);
std::string write_msra(const AnnotationRecord& r, std::size_t index = 0);
std::string write_icdar13(const AnnotationRecord& r);
std::string write_line(GtFormat format, const AnnotationRecord& r, std::size_t index = 0);

/// One problem found while reading a file; reading continues past it.
struct LineError {
  enum class Kind { Parse, Geometry };
  Kind kind = Kind::Parse;
  std::size_t line = 0;
  std::size_t field = 0;  // 0 for geometry errors
  std::string message;
};

template <typename T>
struct ReadResult {
  std::vector<T> records;
  std::vector<LineError> errors;
};

/// Parses every non-blank line (LF or CRLF, optional UTF-8 BOM).
ReadResult<AnnotationRecord> read_annotations(std::istream& in, GtFormat format);
ReadResult<AnnotationRecord> read_annotation_file(const std::filesystem::path& path, GtFormat format);

struct DetectionRecord {
  std::string image_id;
  Proposal proposal;
};

/// "image_id cx cy w h theta score", six decimals, theta in radians.
std::string format_detection(const DetectionRecord& r);
DetectionRecord parse_detection(std::string_view line, std::size_t line_no = 0);

void write_detections(std::ostream& out, const std::vector<DetectionRecord>& records);
ReadResult<DetectionRecord> read_detections(std::istream& in);
ReadResult<DetectionRecord> read_detection_file(const std::filesystem::path& path);

/// Image id for a ground-truth file name: extension and a leading "gt_" are
/// stripped ("gt_img_12.txt" -> "img_12").
std::string image_id_from_path(const std::filesystem::path& path);

}  // namespace textanchor::io
