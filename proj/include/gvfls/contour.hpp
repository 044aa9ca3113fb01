#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gvfls/grid.hpp"
#include "gvfls/io.hpp"

namespace gvfls {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<Point> points;
  bool closed = false;
};

/// Zero level set as polylines in grid-frame coordinates (pixel index * spacing).
struct ContourSet {
  std::vector<Polyline> polylines;

  bool empty() const { return polylines.empty(); }
  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& p : polylines) n += p.points.size();
    return n;
  }
};

namespace detail {

// Each crossing lives on a unique grid edge: horizontal edge (x,y)-(x+1,y) has
// id 2*(y*w+x), vertical edge (x,y)-(x,y+1) has id 2*(y*w+x)+1.
struct CrossingGraph {
  std::unordered_map<std::uint64_t, Point> where;
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> links;

  void link(std::uint64_t a, std::uint64_t b) {
    links[a].push_back(b);
    links[b].push_back(a);
  }
};

// Edges of cell (x,y): 0 top, 1 right, 2 bottom, 3 left.
struct CellLinks {
  int count = 0;
  std::array<std::pair<int, int>, 2> pairs{};
};

/// Marching-squares case table. Samples with phi < 0 are inside; saddles are
/// resolved by the sign of the cell average.
inline CellLinks cell_links(const ScalarField& phi, std::size_t x, std::size_t y) {
  const bool c0 = phi(x, y) < 0.0, c1 = phi(x + 1, y) < 0.0, c2 = phi(x + 1, y + 1) < 0.0, c3 = phi(x, y + 1) < 0.0;
  const int code = c0 | c1 << 1 | c2 << 2 | c3 << 3;
  CellLinks l;
  auto add = [&](int a, int b) { l.pairs[l.count++] = {a, b}; };
  switch (code) {
    case 1: case 14: add(3, 0); break;
    case 2: case 13: add(0, 1); break;
    case 4: case 11: add(1, 2); break;
    case 8: case 7: add(2, 3); break;
    case 3: case 12: add(3, 1); break;
    case 6: case 9: add(0, 2); break;
    case 5: case 10: {
      const double centre = 0.25 * (phi(x, y) + phi(x + 1, y) + phi(x + 1, y + 1) + phi(x, y + 1));
      // Corners 0 and 2 share a class; join them through the centre when it agrees.
      if ((centre < 0.0) == c0) {
        add(0, 1);
        add(2, 3);
      } else {
        add(3, 0);
        add(1, 2);
      }
      break;
    }
    default: break;
  }
  return l;
}

/// Grid-edge endpoints (in samples) of edge e of cell (x,y).
inline std::array<std::size_t, 4> cell_edge(std::size_t x, std::size_t y, int e) {
  switch (e) {
    case 0: return {x, y, x + 1, y};
    case 1: return {x + 1, y, x + 1, y + 1};
    case 2: return {x, y + 1, x + 1, y + 1};
    default: return {x, y, x, y + 1};
  }
}

inline Point edge_crossing(const ScalarField& phi, const std::array<std::size_t, 4>& e) {
  const double a = phi(e[0], e[1]), b = phi(e[2], e[3]);
  const double t = a / (a - b);
  const double h = phi.grid().spacing;
  return {(double(e[0]) + t * (double(e[2]) - double(e[0]))) * h, (double(e[1]) + t * (double(e[3]) - double(e[1]))) * h};
}

}  // namespace detail

/// Marching squares with linear interpolation on cell edges.
inline ContourSet extract_zero_level(const ScalarField& phi) {
  const auto& g = phi.grid();
  const std::size_t w = g.width;
  detail::CrossingGraph graph;

  auto crossing = [&](std::size_t x, std::size_t y, int edge) -> std::uint64_t {
    const auto e = detail::cell_edge(x, y, edge);
    const std::uint64_t id = 2 * std::uint64_t(e[1] * w + e[0]) + (e[3] != e[1] ? 1 : 0);
    if (!graph.where.count(id)) graph.where[id] = detail::edge_crossing(phi, e);
    return id;
  };

  for (std::size_t y = 0; y + 1 < g.height; ++y) {
    for (std::size_t x = 0; x + 1 < w; ++x) {
      const auto l = detail::cell_links(phi, x, y);
      for (int k = 0; k < l.count; ++k) graph.link(crossing(x, y, l.pairs[k].first), crossing(x, y, l.pairs[k].second));
    }
  }

  std::vector<std::uint64_t> ids;
  ids.reserve(graph.links.size());
  for (const auto& [id, _] : graph.links) ids.push_back(id);
  std::sort(ids.begin(), ids.end());

  std::unordered_map<std::uint64_t, bool> used;
  ContourSet out;
  auto walk = [&](std::uint64_t start) {
    Polyline line;
    std::uint64_t cur = start;
    while (true) {
      used[cur] = true;
      line.points.push_back(graph.where[cur]);
      bool found = false;
      for (auto n : graph.links[cur]) {
        if (!used[n]) {
          cur = n;
          found = true;
          break;
        }
      }
      if (!found) break;
    }
    const auto& tail = graph.links[cur];
    line.closed = line.points.size() >= 3 && std::find(tail.begin(), tail.end(), start) != tail.end();
    out.polylines.push_back(std::move(line));
  };
  // Open chains start at frame crossings (degree 1); the rest are loops.
  for (auto id : ids)
    if (!used[id] && graph.links[id].size() == 1) walk(id);
  for (auto id : ids)
    if (!used[id]) walk(id);
  return out;
}

/// One line per vertex: contour_id,vertex_id,x,y,closed.
inline void write_contours_csv(const ContourSet& contours, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::open_failed, path);
  out << "contour_id,vertex_id,x,y,closed\n";
  char buf[128];
  for (std::size_t c = 0; c < contours.polylines.size(); ++c) {
    const auto& line = contours.polylines[c];
    for (std::size_t v = 0; v < line.points.size(); ++v) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.9g,%.9g,%d\n", c, v, line.points[v].x, line.points[v].y,
                    line.closed ? 1 : 0);
      out << buf;
    }
  }
  if (!out) throw IoError(IoErrorKind::write_failed, path);
}

inline ContourSet read_contours_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrorKind::open_failed, path);
  std::string line;
  std::getline(in, line);
  ContourSet out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t c = 0, v = 0;
    double x = 0, y = 0;
    int closed = 0;
    char comma = 0;
    if (!(ss >> c >> comma >> v >> comma >> x >> comma >> y >> comma >> closed))
      throw IoError(IoErrorKind::malformed_header, path, "bad contour row: " + line);
    if (c >= out.polylines.size()) out.polylines.resize(c + 1);
    out.polylines[c].points.push_back({x, y});
    out.polylines[c].closed = closed != 0;
  }
  return out;
}

namespace detail {

inline double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

template <class Fn>
void for_each_segment(const ContourSet& c, Fn&& fn) {
  for (const auto& line : c.polylines) {
    const auto& pts = line.points;
    if (pts.size() == 1) fn(pts[0], pts[0]);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) fn(pts[i], pts[i + 1]);
    if (line.closed && pts.size() > 2) fn(pts.back(), pts.front());
  }
}

}  // namespace detail

/// Distance from p to the nearest point of any polyline in c.
inline double distance_to_contours(Point p, const ContourSet& c) {
  double best = INFINITY;
  detail::for_each_segment(c, [&](Point a, Point b) { best = std::min(best, detail::point_segment_distance(p, a, b)); });
  return best;
}

/// max over points of a (segments sampled every `step`) of the distance to b.
inline double directed_hausdorff(const ContourSet& a, const ContourSet& b, double step = 0.1) {
  double worst = 0.0;
  detail::for_each_segment(a, [&](Point p, Point q) {
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= n; ++i) {
      const double t = double(i) / n;
      worst = std::max(worst, distance_to_contours({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)}, b));
    }
  });
  return worst;
}

inline double hausdorff_distance(const ContourSet& a, const ContourSet& b, double step = 0.1) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : INFINITY;
  return std::max(directed_hausdorff(a, b, step), directed_hausdorff(b, a, step));
}

/// Mean distance of all vertices to (cx, cy); the radius estimate used by the
/// circle-evolution oracles.
inline double mean_radius(const ContourSet& c, double cx, double cy) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& line : c.polylines)
    for (const auto& p : line.points) {
      s += std::hypot(p.x - cx, p.y - cy);
      ++n;
    }
  return n ? s / double(n) : 0.0;
}

}  // namespace gvfls
