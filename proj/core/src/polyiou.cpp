#include "textanchor/polyiou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <tuple>

#include "textanchor/error.hpp"

namespace textanchor {

namespace {

// Plain coordinate pair for the hot paths; skips Point2's finiteness check.
struct Vec {
  double x;
  double y;
};

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double shoelace(const Vec* v, std::size_t n) {
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = v[i];
    const Vec& b = v[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

// Clips `in` (n vertices) against the half-plane left of p->q. Returns the
// number of vertices written to `out`, never more than `capacity`.
std::size_t clip_half_plane(const Vec* in, std::size_t n, const Vec& p, const Vec& q, Vec* out,
                            std::size_t capacity) {
  const double len = std::hypot(q.x - p.x, q.y - p.y);
  std::size_t count = 0;
  if (n == 0 || len == 0.0) return 0;

  Vec prev = in[n - 1];
  double prev_d = cross(p, q, prev) / len;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& cur = in[i];
    const double cur_d = cross(p, q, cur) / len;
    const bool cur_in = cur_d >= -kClipTolerance;
    const bool prev_in = prev_d >= -kClipTolerance;
    if (cur_in != prev_in) {
      const double t = prev_d / (prev_d - cur_d);
      if (count < capacity) out[count++] = {prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)};
    }
    if (cur_in && count < capacity) out[count++] = cur;
    prev = cur;
    prev_d = cur_d;
  }
  return count;
}

// Merges vertices closer than the tolerance and drops collinear ones, in place.
std::size_t tidy_ring(Vec* v, std::size_t n) {
  bool changed = true;
  while (changed && n >= 3) {
    changed = false;
    for (std::size_t i = 0; i < n && n >= 3; ++i) {
      const Vec& prev = v[(i + n - 1) % n];
      const Vec& cur = v[i];
      const Vec& next = v[(i + 1) % n];
      const double base = std::hypot(next.x - prev.x, next.y - prev.y);
      const bool duplicate = std::hypot(cur.x - prev.x, cur.y - prev.y) < kClipTolerance;
      const bool collinear = base < kClipTolerance || std::abs(cross(prev, next, cur)) / base < kClipTolerance;
      if (duplicate || collinear) {
        std::copy(v + i + 1, v + n, v + i);
        --n;
        changed = true;
        break;
      }
    }
  }
  return n < 3 ? 0 : n;
}

// Sutherland-Hodgman over a counter-clockwise convex clip ring. `buf_a` and
// `buf_b` must each hold `capacity` >= n + m vertices. Returns the vertex
// count of the result, which is left in `buf_a`.
std::size_t clip_rings(const Vec* subject, std::size_t n, const Vec* clip, std::size_t m, Vec* buf_a, Vec* buf_b,
                       std::size_t capacity) {
  std::copy(subject, subject + n, buf_a);
  std::size_t count = n;
  for (std::size_t e = 0; e < m && count > 0; ++e) {
    count = clip_half_plane(buf_a, count, clip[e], clip[(e + 1) % m], buf_b, capacity);
    std::copy(buf_b, buf_b + count, buf_a);
  }
  return tidy_ring(buf_a, count);
}

std::array<Vec, 4> corners(const RotatedBox& b) {
  const double c = std::cos(b.theta());
  const double s = std::sin(b.theta());
  const double hw = b.w() / 2.0;
  const double hh = b.h() / 2.0;
  return {{{b.cx() - c * hw + s * hh, b.cy() - s * hw - c * hh},
           {b.cx() + c * hw + s * hh, b.cy() + s * hw - c * hh},
           {b.cx() + c * hw - s * hh, b.cy() + s * hw + c * hh},
           {b.cx() - c * hw - s * hh, b.cy() - s * hw + c * hh}}};
}

bool circles_disjoint(const RotatedBox& a, const RotatedBox& b) {
  const double ra = std::hypot(a.w(), a.h()) / 2.0;
  const double rb = std::hypot(b.w(), b.h()) / 2.0;
  return std::hypot(a.cx() - b.cx(), a.cy() - b.cy()) > ra + rb + kClipTolerance;
}

auto as_tuple(const RotatedBox& b) { return std::make_tuple(b.cx(), b.cy(), b.w(), b.h(), b.theta()); }

std::vector<Vec> to_vecs(std::span<const Point2> points) {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.x, p.y});
  return out;
}

std::vector<Point2> to_points(const Vec* v, std::size_t n) {
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(v[i].x, v[i].y);
  return out;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) {
  std::vector<Vec> ring = to_vecs(vertices);
  std::size_t n = tidy_ring(ring.data(), ring.size());
  if (n < 3) throw InvalidInput("convex polygon needs at least 3 non-collinear vertices");
  ring.resize(n);
  if (shoelace(ring.data(), n) < 0.0) std::reverse(ring.begin(), ring.end());

  for (std::size_t i = 0; i < n; ++i) {
    if (cross(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]) <= 0.0) {
      throw InvalidInput("polygon is not convex");
    }
  }
  // Turning consistently left can still wind around twice.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& a = ring[(i + n - 1) % n];
    const Vec& b = ring[i];
    const Vec& c = ring[(i + 1) % n];
    const double in_angle = std::atan2(b.y - a.y, b.x - a.x);
    const double out_angle = std::atan2(c.y - b.y, c.x - b.x);
    double turn = out_angle - in_angle;
    while (turn <= -kPi) turn += 2.0 * kPi;
    while (turn > kPi) turn -= 2.0 * kPi;
    turning += turn;
  }
  if (turning > 3.0 * kPi) throw InvalidInput("polygon is self-intersecting");
  vertices_ = to_points(ring.data(), n);
}

ConvexPolygon ConvexPolygon::from_box(const RotatedBox& box) {
  const auto c = corners(box);
  return ConvexPolygon(Trusted{}, to_points(c.data(), c.size()));
}

double ConvexPolygon::area() const noexcept { return polygon_area(vertices_); }

double polygon_area(std::span<const Point2> ring) {
  const std::vector<Vec> v = to_vecs(ring);
  return std::abs(shoelace(v.data(), v.size()));
}

double polygon_area(const ConvexPolygon& p) { return p.area(); }

std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  const std::vector<Vec> s = to_vecs(subject.vertices());
  const std::vector<Vec> c = to_vecs(clip.vertices());
  const std::size_t capacity = 2 * (s.size() + c.size());
  std::vector<Vec> buf_a(capacity);
  std::vector<Vec> buf_b(capacity);
  const std::size_t n = clip_rings(s.data(), s.size(), c.data(), c.size(), buf_a.data(), buf_b.data(), capacity);
  if (n < 3) return std::nullopt;
  return ConvexPolygon(ConvexPolygon::Trusted{}, to_points(buf_a.data(), n));
}

double intersection_area(const RotatedBox& a, const RotatedBox& b) {
  if (circles_disjoint(a, b)) return 0.0;
  // Fixed argument order makes the floating-point result independent of
  // which box the caller passed first.
  const bool swap = as_tuple(b) < as_tuple(a);
  const auto subject = corners(swap ? b : a);
  const auto clip = corners(swap ? a : b);
  std::array<Vec, 16> buf_a;
  std::array<Vec, 16> buf_b;
  const std::size_t n = clip_rings(subject.data(), 4, clip.data(), 4, buf_a.data(), buf_b.data(), buf_a.size());
  return std::max(0.0, shoelace(buf_a.data(), n));
}

double iou(const RotatedBox& a, const RotatedBox& b) {
  if (!(a.area() > 0.0) || !(b.area() > 0.0)) throw InvalidInput("iou of a zero-area box");
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

bool contains(const RotatedBox& box, const Point2& p, double tolerance) {
  const double c = std::cos(box.theta());
  const double s = std::sin(box.theta());
  const double dx = p.x - box.cx();
  const double dy = p.y - box.cy();
  const double u = dx * c + dy * s;
  const double v = -dx * s + dy * c;
  return std::abs(u) <= box.w() / 2.0 + tolerance && std::abs(v) <= box.h() / 2.0 + tolerance;
}

double iou_oracle(const RotatedBox& a, const RotatedBox& b, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 10000) throw InvalidInput("iou_oracle needs at least 10^4 samples");

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& box : {a, b}) {
    for (const auto& p : corners(box)) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }

  struct Frame {
    double cx, cy, c, s, hw, hh;
    bool inside(double x, double y) const {
      const double dx = x - cx;
      const double dy = y - cy;
      return std::abs(dx * c + dy * s) <= hw && std::abs(-dx * s + dy * c) <= hh;
    }
  };
  const Frame fa{a.cx(), a.cy(), std::cos(a.theta()), std::sin(a.theta()), a.w() / 2.0, a.h() / 2.0};
  const Frame fb{b.cx(), b.cy(), std::cos(b.theta()), std::sin(b.theta()), b.w() / 2.0, b.h() / 2.0};

  // One engine draw per sample: the high and low 32 bits give x and y.
  std::mt19937_64 rng(seed);
  constexpr double kUnit = 1.0 / 4294967296.0;
  const double span_x = (max_x - min_x) * kUnit;
  const double span_y = (max_y - min_y) * kUnit;
  std::uint64_t both = 0;
  std::uint64_t either = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t bits = rng();
    const double x = min_x + (static_cast<double>(bits >> 32) + 0.5) * span_x;
    const double y = min_y + (static_cast<double>(bits & 0xffffffffu) + 0.5) * span_y;
    const bool in_a = fa.inside(x, y);
    const bool in_b = fb.inside(x, y);
    both += static_cast<std::uint64_t>(in_a && in_b);
    either += static_cast<std::uint64_t>(in_a || in_b);
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

std::vector<double> iou_matrix(std::span<const RotatedBox> a, std::span<const RotatedBox> b, unsigned threads) {
  std::vector<double> out(a.size() * b.size());
  auto rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = iou(a[i], b[j]);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(a.size(), 1));
  if (workers == 1) {
    rows(0, a.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (a.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < a.size(); begin += chunk) {
      pool.emplace_back(rows, begin, std::min(a.size(), begin + chunk));
    }
  }
  return out;
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Vec> pts = to_vecs(points);
  std::sort(pts.begin(), pts.end(), [](const Vec& p, const Vec& q) { return std::tie(p.x, p.y) < std::tie(q.x, q.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec& p, const Vec& q) { return p.x == q.x && p.y == q.y; }),
            pts.end());
  if (pts.size() < 3) return to_points(pts.data(), pts.size());

  // Andrew's monotone chain.
  std::vector<Vec> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec& p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  return to_points(hull.data(), k - 1);
}

RotatedBox min_area_rect(std::span<const Point2> points) {
  const std::vector<Point2> hull = convex_hull(points);
  if (hull.size() < 3 || polygon_area(hull) <= kClipTolerance) {
    throw InvalidInput("min_area_rect needs at least 3 non-collinear points");
  }

  struct Candidate {
    double area, cx, cy, w, h, theta;
  };
  std::optional<Candidate> best;
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = hull[i];
    const Point2& q = hull[(i + 1) % n];
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    const double ux = (q.x - p.x) / len;
    const double uy = (q.y - p.y) / len;

    double u_min = std::numeric_limits<double>::infinity();
    double u_max = -u_min;
    double v_min = u_min;
    double v_max = -u_min;
    for (const auto& r : hull) {
      const double u = (r.x - p.x) * ux + (r.y - p.y) * uy;
      const double v = -(r.x - p.x) * uy + (r.y - p.y) * ux;
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
    const double um = (u_min + u_max) / 2.0;
    const double vm = (v_min + v_max) / 2.0;
    double w = u_max - u_min;
    double h = v_max - v_min;
    double theta = std::atan2(uy, ux);
    if (h > w) {
      std::swap(w, h);
      theta += kHalfPi;
    }
    theta = canonicalize_angle(theta);
    const Candidate cand{w * h, p.x + um * ux - vm * uy, p.y + um * uy + vm * ux, w, h, theta};

    // Equal areas (e.g. the four sides of an axis-aligned rectangle) resolve
    // to the smallest |theta| so the result is stable.
    const double tie = 1e-12 * cand.area;
    if (!best || cand.area < best->area - tie ||
        (cand.area <= best->area + tie && std::abs(cand.theta) < std::abs(best->theta))) {
      best = cand;
    }
  }
  return {best->cx, best->cy, best->w, best->h, best->theta};
}

}  // namespace textanchor
