#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "gvfls/grid.hpp"

namespace gvfls {

/// Exact Euclidean distance transform on pixel centers, in pixel units, with the
/// index of the nearest site for every pixel.
struct FeatureTransform {
  std::vector<double> squared;        ///< squared distance to the nearest site
  std::vector<std::uint32_t> nearest;  ///< row-major index of that site
};

namespace detail {

inline constexpr std::uint32_t kNoSite = std::numeric_limits<std::uint32_t>::max();

/// Lower envelope of parabolas (y - q)^2 + f(q) over one column
/// (Felzenszwalb & Huttenlocher). Writes the minimum value and its argmin.
inline void envelope_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& arg,
                        std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    while (k >= 0) {
      const double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -INFINITY : ((f[q] + double(q) * q) - (f[v[k - 1]] + double(v[k - 1]) * v[k - 1])) /
                                     (2.0 * (q - v[k - 1]));
    z[k + 1] = INFINITY;
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) {
      d[q] = INFINITY;
      arg[q] = -1;
    }
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dy = q - v[j];
    d[q] = dy * dy + f[v[j]];
    arg[q] = v[j];
  }
}

}  // namespace detail

/// Two-pass exact EDT: per-row nearest-site intervals, then a per-column lower
/// envelope. `is_site(i)` selects the sites by row-major index.
template <class SitePredicate>
FeatureTransform feature_transform(std::size_t width, std::size_t height, SitePredicate is_site) {
  const std::size_t n = width * height;
  std::vector<double> row_sq(n, INFINITY);
  std::vector<std::uint32_t> row_site(n, detail::kNoSite);

  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t base = y * width;
    std::ptrdiff_t last = -1;
    for (std::size_t x = 0; x < width; ++x) {
      if (is_site(base + x)) last = static_cast<std::ptrdiff_t>(x);
      if (last >= 0) {
        const double dx = double(x) - double(last);
        row_sq[base + x] = dx * dx;
        row_site[base + x] = static_cast<std::uint32_t>(base + last);
      }
    }
    last = -1;
    for (std::size_t xr = width; xr-- > 0;) {
      if (is_site(base + xr)) last = static_cast<std::ptrdiff_t>(xr);
      if (last >= 0) {
        const double dx = double(last) - double(xr);
        // Ties keep the left site so the result is independent of scan order.
        if (dx * dx < row_sq[base + xr]) {
          row_sq[base + xr] = dx * dx;
          row_site[base + xr] = static_cast<std::uint32_t>(base + last);
        }
      }
    }
  }

  FeatureTransform out{std::vector<double>(n, INFINITY), std::vector<std::uint32_t>(n, detail::kNoSite)};
  std::vector<double> col(height), d(height), z(height + 1);
  std::vector<int> arg(height), v(height);
  for (std::size_t x = 0; x < width; ++x) {
    for (std::size_t y = 0; y < height; ++y) col[y] = row_sq[y * width + x];
    detail::envelope_1d(col, d, arg, v, z);
    for (std::size_t y = 0; y < height; ++y) {
      if (arg[y] < 0) continue;
      out.squared[y * width + x] = d[y];
      out.nearest[y * width + x] = row_site[static_cast<std::size_t>(arg[y]) * width + x];
    }
  }
  return out;
}

/// Exact signed distance |x - center| - radius (grid coordinates are pixel
/// indices scaled by spacing).
inline ScalarField signed_distance_circle(const GridSpec& grid, double cx, double cy, double radius) {
  grid.validate();
  if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
  ScalarField phi(grid);
  for (std::size_t y = 0; y < grid.height; ++y)
    for (std::size_t x = 0; x < grid.width; ++x)
      phi(x, y) = std::hypot(double(x) * grid.spacing - cx, double(y) * grid.spacing - cy) - radius;
  return phi;
}

/// Signed distance of a binary mask (1 inside, 0 outside). The interface sits on
/// pixel boundaries: a pixel is at (distance to the nearest pixel of the other
/// class - 0.5) * spacing, negative inside.
inline ScalarField signed_distance_from_mask(const ScalarField& mask) {
  const auto& g = mask.grid();
  g.validate();
  std::size_t inside = 0;
  for (double m : mask.values()) {
    if (m != 0.0 && m != 1.0) throw ValidationError("mask values must be 0 or 1");
    inside += m == 1.0;
  }
  if (inside == 0) throw ValidationError("mask has no inside pixel");
  if (inside == g.size()) throw ValidationError("mask has no outside pixel");

  const auto& m = mask.values();
  const auto to_inside = feature_transform(g.width, g.height, [&](std::size_t i) { return m[i] == 1.0; });
  const auto to_outside = feature_transform(g.width, g.height, [&](std::size_t i) { return m[i] == 0.0; });
  ScalarField phi(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    phi.values()[i] = m[i] == 1.0 ? -(std::sqrt(to_outside.squared[i]) - 0.5) * g.spacing
                                  : (std::sqrt(to_inside.squared[i]) - 0.5) * g.spacing;
  }
  return phi;
}

}  // namespace gvfls
