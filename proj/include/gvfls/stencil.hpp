#pragma once

#include <cstddef>

#include "gvfls/grid.hpp"
#include "gvfls/parallel.hpp"

namespace gvfls {

/// Centered first differences; the mirror ghost cells give a half-weight
/// one-sided difference on the frame.
inline VectorField gradient_centered(const ScalarField& field) {
  field.grid().validate();
  const auto& g = field.grid();
  VectorField out(g);
  const double inv2h = 1.0 / (2.0 * g.spacing);
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      out.u(x, y) = (field.ghost(xx + 1, yy) - field.ghost(xx - 1, yy)) * inv2h;
      out.v(x, y) = (field.ghost(xx, yy + 1) - field.ghost(xx, yy - 1)) * inv2h;
    }
  });
  return out;
}

/// 5-point Laplacian with mirror ghost cells (discrete homogeneous Neumann).
inline ScalarField divergence_free_laplacian(const ScalarField& field) {
  field.grid().validate();
  const auto& g = field.grid();
  ScalarField out(g);
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      out(x, y) = (field.ghost(xx + 1, yy) + field.ghost(xx - 1, yy) + field.ghost(xx, yy + 1) +
                   field.ghost(xx, yy - 1) - 4.0 * field(x, y)) *
                  inv_h2;
    }
  });
  return out;
}

/// Forward differences with the same ghost convention; zero across the far
/// frame edge. Their squared sum is the quadratic form of the 5-point Laplacian.
inline VectorField gradient_forward(const ScalarField& field) {
  const auto& g = field.grid();
  VectorField out(g);
  const double inv_h = 1.0 / g.spacing;
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      out.u(x, y) = (field.ghost(xx + 1, yy) - field(x, y)) * inv_h;
      out.v(x, y) = (field.ghost(xx, yy + 1) - field(x, y)) * inv_h;
    }
  });
  return out;
}

}  // namespace gvfls
