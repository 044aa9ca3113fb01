#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gvfls/contour.hpp"
#include "gvfls/grid.hpp"

namespace gvfls {

enum class ShapeKind { disk, rectangle, u_shape };

inline ShapeKind parse_shape_kind(const std::string& s) {
  if (s == "disk") return ShapeKind::disk;
  if (s == "rectangle") return ShapeKind::rectangle;
  if (s == "u_shape") return ShapeKind::u_shape;
  throw ValidationError("unknown shape kind '" + s + "' (expected disk, rectangle or u_shape)");
}

inline const char* to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::disk: return "disk";
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::u_shape: return "u_shape";
  }
  return "?";
}

/// Synthetic ground-truth shape in grid-frame coordinates (pixel index * spacing).
/// Negative geometry values are placeholders resolved against the grid by `resolved`.
struct SyntheticShape {
  ShapeKind kind = ShapeKind::disk;
  double cx = -1.0, cy = -1.0;  ///< centre; <0 selects the grid centre
  double radius = 30.0;         ///< disk
  double box_w = 80.0, box_h = 80.0;  ///< rectangle and U outer box
  double arm_width = 20.0;      ///< U
  double depth = 50.0;          ///< U concavity depth, opening toward -y
  double foreground = 1.0;
  double background = 0.0;
  double noise = 0.0;           ///< uniform noise amplitude added after ground truth
  std::uint64_t seed = 1;
  double margin = 3.0;          ///< required clearance to the frame, in pixels

  SyntheticShape resolved(const GridSpec& g) const {
    SyntheticShape s = *this;
    if (s.cx < 0.0) s.cx = 0.5 * double(g.width - 1) * g.spacing;
    if (s.cy < 0.0) s.cy = 0.5 * double(g.height - 1) * g.spacing;
    return s;
  }
};

struct SyntheticImage {
  ScalarField image;
  ContourSet truth;
};

namespace detail {

inline Polyline shape_outline(const SyntheticShape& s) {
  Polyline p;
  p.closed = true;
  if (s.kind == ShapeKind::disk) {
    for (int i = 0; i < 360; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 360.0;
      p.points.push_back({s.cx + s.radius * std::cos(a), s.cy + s.radius * std::sin(a)});
    }
    return p;
  }
  const double x0 = s.cx - 0.5 * s.box_w, x1 = s.cx + 0.5 * s.box_w;
  const double y0 = s.cy - 0.5 * s.box_h, y1 = s.cy + 0.5 * s.box_h;
  if (s.kind == ShapeKind::rectangle) {
    p.points = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    return p;
  }
  const double a = s.arm_width, d = s.depth;
  p.points = {{x0, y0}, {x0 + a, y0}, {x0 + a, y0 + d}, {x1 - a, y0 + d},
              {x1 - a, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return p;
}

inline bool shape_contains(const SyntheticShape& s, double x, double y) {
  if (s.kind == ShapeKind::disk) return std::hypot(x - s.cx, y - s.cy) < s.radius;
  const double x0 = s.cx - 0.5 * s.box_w, x1 = s.cx + 0.5 * s.box_w;
  const double y0 = s.cy - 0.5 * s.box_h, y1 = s.cy + 0.5 * s.box_h;
  const bool in_box = x > x0 && x < x1 && y > y0 && y < y1;
  if (s.kind == ShapeKind::rectangle || !in_box) return in_box;
  const bool in_gap = x > x0 + s.arm_width && x < x1 - s.arm_width && y < y0 + s.depth;
  return !in_gap;
}

}  // namespace detail

/// Binary image (pixel foreground iff its centre lies strictly inside) plus the
/// exact outline. Noise, if any, is added after the outline is fixed.
inline SyntheticImage synthesize(const SyntheticShape& shape_in, const GridSpec& grid) {
  grid.validate();
  const auto s = shape_in.resolved(grid);
  if (s.kind == ShapeKind::disk && !(s.radius > 0.0)) throw ValidationError("disk radius must be positive");
  if (s.kind != ShapeKind::disk && !(s.box_w > 0.0 && s.box_h > 0.0))
    throw ValidationError("box dimensions must be positive");
  if (s.kind == ShapeKind::u_shape &&
      !(s.arm_width > 0.0 && 2.0 * s.arm_width < s.box_w && s.depth > 0.0 && s.depth < s.box_h))
    throw ValidationError("u_shape needs 0 < 2*arm_width < box_w and 0 < depth < box_h");
  if (s.noise < 0.0) throw ValidationError("noise amplitude must be nonnegative");

  const auto outline = detail::shape_outline(s);
  const double hx = s.kind == ShapeKind::disk ? s.radius : 0.5 * s.box_w;
  const double hy = s.kind == ShapeKind::disk ? s.radius : 0.5 * s.box_h;
  const double lo = s.margin * grid.spacing;
  const double xmax = double(grid.width - 1) * grid.spacing - lo, ymax = double(grid.height - 1) * grid.spacing - lo;
  if (s.cx - hx < lo || s.cx + hx > xmax || s.cy - hy < lo || s.cy + hy > ymax)
    throw ValidationError("shape does not fit inside the grid with a margin of " + std::to_string(s.margin) +
                          " pixels");

  SyntheticImage out{ScalarField(grid), ContourSet{{outline}}};
  for (std::size_t y = 0; y < grid.height; ++y)
    for (std::size_t x = 0; x < grid.width; ++x)
      out.image(x, y) = detail::shape_contains(s, double(x) * grid.spacing, double(y) * grid.spacing) ? s.foreground
                                                                                                        : s.background;
  if (s.noise > 0.0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> dist(-s.noise, s.noise);
    for (double& v : out.image.values()) v += dist(rng);
  }
  return out;
}

/// Default fixtures used by tests, the acceptance suite and the CLI examples.
inline SyntheticShape disk_fixture() {
  SyntheticShape s;
  s.kind = ShapeKind::disk;
  s.radius = 30.0;
  return s;
}

inline SyntheticShape u_shape_fixture() {
  SyntheticShape s;
  s.kind = ShapeKind::u_shape;
  s.box_w = s.box_h = 80.0;
  s.arm_width = 20.0;
  s.depth = 50.0;
  return s;
}

}  // namespace gvfls
