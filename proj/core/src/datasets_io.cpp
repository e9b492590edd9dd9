#include "textanchor/datasets_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "textanchor/polyiou.hpp"

namespace textanchor::io {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::string_view kDontCare = "###";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view clean_line(std::string_view line) {
  if (line.substr(0, kBom.size()) == kBom) line.remove_prefix(kBom.size());
  return trim(line);
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double number_field(std::string_view token, std::size_t line_no, std::size_t field) {
  const auto v = to_number(token);
  if (!v) throw ParseError(line_no, field, "expected a number, got '" + std::string(token) + "'");
  return *v;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::string join(const std::vector<std::string_view>& parts, std::size_t from, std::string_view sep) {
  std::string out;
  for (std::size_t i = from; i < parts.size(); ++i) {
    if (i > from) out += sep;
    out += parts[i];
  }
  return out;
}

void set_transcription(AnnotationRecord& r, std::string text) {
  r.dont_care = text == kDontCare;
  r.transcription = std::move(text);
}

std::string transcription_or_default(const AnnotationRecord& r) {
  if (r.transcription) return *r.transcription;
  return r.dont_care ? std::string(kDontCare) : std::string();
}

AxisRect bounding_rect(const RotatedBox& b) {
  AxisRect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : box_corners(b)) {
    r.x_min = std::min(r.x_min, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.x_max = std::max(r.x_max, p.x);
    r.y_max = std::max(r.y_max, p.y);
  }
  return r;
}

RotatedBox checked_box(std::size_t line_no, double cx, double cy, double w, double h, double theta) {
  try {
    return RotatedBox::normalized(cx, cy, w, h, theta);
  } catch (const InvalidInput& e) {
    throw InvalidGeometry(line_no, e.what());
  }
}

template <typename T, typename Parse>
ReadResult<T> read_lines(std::istream& in, Parse parse) {
  ReadResult<T> result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view cleaned = clean_line(line);
    if (cleaned.empty()) continue;
    try {
      result.records.push_back(parse(cleaned, line_no));
    } catch (const ParseError& e) {
      result.errors.push_back({LineError::Kind::Parse, line_no, e.field(), e.what()});
    } catch (const InvalidGeometry& e) {
      result.errors.push_back({LineError::Kind::Geometry, line_no, 0, e.what()});
    } catch (const InvalidInput& e) {
      result.errors.push_back({LineError::Kind::Geometry, line_no, 0, fmt::format("line {}: {}", line_no, e.what())});
    }
  }
  return result;
}

}  // namespace

RotatedBox AxisRect::to_rotated_box() const {
  return RotatedBox::normalized((x_min + x_max) / 2.0, (y_min + y_max) / 2.0, x_max - x_min, y_max - y_min, 0.0);
}

RotatedBox to_rotated_box(const Geometry& g) {
  return std::visit(
      [](const auto& v) -> RotatedBox {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quad>) {
          return quad_to_rotated_box(v);
        } else if constexpr (std::is_same_v<T, RotatedBox>) {
          return v;
        } else {
          return v.to_rotated_box();
        }
      },
      g);
}

GtFormat parse_format(std::string_view tag) {
  if (tag == "icdar13") return GtFormat::Icdar13;
  if (tag == "icdar15") return GtFormat::Icdar15;
  if (tag == "msra") return GtFormat::Msra;
  throw InvalidInput("unknown ground-truth format '" + std::string(tag) + "' (expected icdar13, icdar15 or msra)");
}

std::string to_string(GtFormat f) {
  switch (f) {
    case GtFormat::Icdar13:
      return "icdar13";
    case GtFormat::Icdar15:
      return "icdar15";
    case GtFormat::Msra:
      break;
  }
  return "msra";
}

AnnotationRecord parse_icdar15(std::string_view line, std::size_t line_no) {
  const auto fields = split_on(clean_line(line), ',');
  std::array<double, 8> coords{};
  for (std::size_t f = 0; f < 8; ++f) {
    if (f >= fields.size() || fields[f].empty()) {
      throw ParseError(line_no, f + 1, "expected 8 comma-separated coordinates");
    }
    coords[f] = number_field(fields[f], line_no, f + 1);
  }
  std::array<Point2, 4> pts;
  for (std::size_t v = 0; v < 4; ++v) pts[v] = Point2{coords[2 * v], coords[2 * v + 1]};

  std::optional<Quad> quad;
  try {
    quad.emplace(pts);
  } catch (const InvalidInput& e) {
    throw InvalidGeometry(line_no, e.what());
  }
  AnnotationRecord r{*quad, std::nullopt, false, false};
  if (fields.size() > 8) set_transcription(r, join(fields, 8, ","));
  return r;
}

AnnotationRecord parse_msra(std::string_view line, std::size_t line_no) {
  const auto tokens = split_ws(clean_line(line));
  if (tokens.size() < 7) throw ParseError(line_no, tokens.size() + 1, "expected 7 whitespace-separated fields");
  if (tokens.size() > 7) throw ParseError(line_no, 8, "unexpected extra field");
  std::array<double, 7> v{};
  for (std::size_t f = 0; f < 7; ++f) v[f] = number_field(tokens[f], line_no, f + 1);
  const double x = v[2];
  const double y = v[3];
  const double w = v[4];
  const double h = v[5];
  if (!(w > 0.0) || !(h > 0.0)) throw InvalidGeometry(line_no, "MSRA box needs positive width and height");

  AnnotationRecord r{checked_box(line_no, x + w / 2.0, y + h / 2.0, w, h, v[6]), std::nullopt, false, false};
  r.difficult = v[1] != 0.0;
  return r;
}

AnnotationRecord parse_icdar13(std::string_view line, std::size_t line_no) {
  const std::string_view cleaned = clean_line(line);
  const auto comma = split_on(cleaned, ',');
  const auto space = split_ws(cleaned);
  auto numeric_prefix = [](const std::vector<std::string_view>& t) {
    std::size_t n = 0;
    while (n < t.size() && n < 4 && to_number(t[n])) ++n;
    return n;
  };

  // Comma and space releases both exist; use whichever yields four numbers.
  const bool use_comma = numeric_prefix(comma) == 4 || (numeric_prefix(space) < 4 && comma.size() > 1);
  const auto& tokens = use_comma ? comma : space;
  std::array<double, 4> v{};
  for (std::size_t f = 0; f < 4; ++f) {
    if (f >= tokens.size() || tokens[f].empty()) throw ParseError(line_no, f + 1, "expected 4 coordinates");
    v[f] = number_field(tokens[f], line_no, f + 1);
  }
  const AxisRect rect{v[0], v[1], v[2], v[3]};
  if (!(rect.x_max > rect.x_min) || !(rect.y_max > rect.y_min)) {
    throw InvalidGeometry(line_no, "rectangle needs x_max > x_min and y_max > y_min");
  }
  AnnotationRecord r{rect, std::nullopt, false, false};
  if (tokens.size() > 4) set_transcription(r, unquote(join(tokens, 4, use_comma ? "," : " ")));
  return r;
}

AnnotationRecord parse_line(GtFormat format, std::string_view line, std::size_t line_no) {
  switch (format) {
    case GtFormat::Icdar13:
      return parse_icdar13(line, line_no);
    case GtFormat::Icdar15:
      return parse_icdar15(line, line_no);
    case GtFormat::Msra:
      break;
  }
  return parse_msra(line, line_no);
}

std::string write_icdar15(const AnnotationRecord& r) {
  const Quad q = std::holds_alternative<Quad>(r.geometry) ? std::get<Quad>(r.geometry)
                                                           : rotated_box_to_quad(to_rotated_box(r.geometry));
  std::string out;
  for (const auto& p : q.vertices()) out += fmt::format("{},{},", p.x, p.y);
  out.pop_back();
  const std::string text = transcription_or_default(r);
  if (!text.empty() || r.transcription) out += "," + text;
  return out;
}

std::string write_msra(const AnnotationRecord& r, std::size_t index) {
  const RotatedBox b = to_rotated_box(r.geometry);
  return fmt::format("{} {} {} {} {} {} {}", index, r.difficult ? 1 : 0, b.cx() - b.w() / 2.0,
                     b.cy() - b.h() / 2.0, b.w(), b.h(), b.theta());
}

std::string write_icdar13(const AnnotationRecord& r) {
  const AxisRect rect = std::holds_alternative<AxisRect>(r.geometry)
                            ? std::get<AxisRect>(r.geometry)
                            : bounding_rect(to_rotated_box(r.geometry));
  std::string out = fmt::format("{}, {}, {}, {}", rect.x_min, rect.y_min, rect.x_max, rect.y_max);
  const std::string text = transcription_or_default(r);
  if (!text.empty() || r.transcription) out += ", \"" + text + "\"";
  return out;
}

std::string write_line(GtFormat format, const AnnotationRecord& r, std::size_t index) {
  switch (format) {
    case GtFormat::Icdar13:
      return write_icdar13(r);
    case GtFormat::Icdar15:
      return write_icdar15(r);
    case GtFormat::Msra:
      break;
  }
  return write_msra(r, index);
}

ReadResult<AnnotationRecord> read_annotations(std::istream& in, GtFormat format) {
  return read_lines<AnnotationRecord>(
      in, [format](std::string_view line, std::size_t n) { return parse_line(format, line, n); });
}

ReadResult<AnnotationRecord> read_annotation_file(const std::filesystem::path& path, GtFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_annotations(in, format);
}

std::string format_detection(const DetectionRecord& r) {
  const RotatedBox& b = r.proposal.box;
  return fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f} {:.6f} {:.6f}", r.image_id, b.cx(), b.cy(), b.w(), b.h(),
                     b.theta(), r.proposal.score);
}

DetectionRecord parse_detection(std::string_view line, std::size_t line_no) {
  const auto tokens = split_ws(clean_line(line));
  if (tokens.size() < 7) throw ParseError(line_no, tokens.size() + 1, "expected 'image_id cx cy w h theta score'");
  if (tokens.size() > 7) throw ParseError(line_no, 8, "unexpected extra field");
  std::array<double, 6> v{};
  for (std::size_t f = 0; f < 6; ++f) v[f] = number_field(tokens[f + 1], line_no, f + 2);
  if (!(v[2] > 0.0) || !(v[3] > 0.0)) throw InvalidGeometry(line_no, "detection needs positive width and height");
  return {std::string(tokens[0]), {checked_box(line_no, v[0], v[1], v[2], v[3], v[4]), v[5]}};
}

void write_detections(std::ostream& out, const std::vector<DetectionRecord>& records) {
  for (const auto& r : records) out << format_detection(r) << '\n';
}

ReadResult<DetectionRecord> read_detections(std::istream& in) {
  return read_lines<DetectionRecord>(in, [](std::string_view line, std::size_t n) { return parse_detection(line, n); });
}

ReadResult<DetectionRecord> read_detection_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_detections(in);
}

std::string image_id_from_path(const std::filesystem::path& path) {
  std::string stem = path.stem().string();
  if (stem.rfind("gt_", 0) == 0) stem.erase(0, 3);
  return stem;
}

}  // namespace textanchor::io
