#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gvfls/grid.hpp"
#include "gvfls/parallel.hpp"
#include "gvfls/stencil.hpp"

namespace gvfls {

/// Smallest detector scale for which h(b) >= 0, i.e. 1/sqrt(2*pi).
inline constexpr double kMinSigma = 0.3989422804014327;

struct EdgeParams {
  double sigma = 1.0;
  int truncation_radius = 0;  ///< 0 selects ceil(3 * sigma / spacing).

  int radius_for(double spacing) const {
    return truncation_radius > 0 ? truncation_radius : static_cast<int>(std::ceil(3.0 * sigma / spacing));
  }

  void validate(double spacing) const {
    if (!(sigma >= kMinSigma) || !std::isfinite(sigma))
      throw ValidationError("edge.sigma = " + std::to_string(sigma) +
                            " violates the edge-detector nonnegativity constraint (H1): sigma >= 1/sqrt(2*pi) = 0.39894");
    const int minimum = static_cast<int>(std::ceil(3.0 * sigma / spacing));
    if (truncation_radius != 0 && truncation_radius < minimum)
      throw ValidationError("edge.truncation_radius must be >= ceil(3*sigma/spacing) = " + std::to_string(minimum));
  }
};

struct EdgeMaps {
  ScalarField f;        ///< edge detector h(|grad I_sigma|^2)
  ScalarField g_tilde;  ///< boundary indicator 1 - f
  VectorField grad_f;
  ScalarField coeff;    ///< f * |grad f|^2, the GVF reaction coefficient

  const GridSpec& grid() const { return f.grid(); }
};

/// Truncated Gaussian sampled at integer offsets and renormalized to unit sum.
inline std::vector<double> gaussian_kernel(double sigma, int radius, double spacing) {
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int n = -radius; n <= radius; ++n) {
    const double x = n * spacing;
    k[n + radius] = std::exp(-x * x / (2.0 * sigma * sigma));
    total += k[n + radius];
  }
  for (double& w : k) w /= total;
  return k;
}

inline ScalarField gaussian_smooth(const ScalarField& image, const EdgeParams& params) {
  const auto& g = image.grid();
  g.validate();
  params.validate(g.spacing);
  const int r = params.radius_for(g.spacing);
  const auto k = gaussian_kernel(params.sigma, r, g.spacing);

  // Horizontal pass then vertical pass; ghost() mirrors beyond the frame.
  ScalarField tmp(g), out(g);
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      double s = 0.0;
      for (int n = -r; n <= r; ++n) s += k[n + r] * image.ghost(static_cast<std::ptrdiff_t>(x) + n, yy);
      tmp(x, y) = s;
    }
  });
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      double s = 0.0;
      for (int n = -r; n <= r; ++n) s += k[n + r] * tmp.ghost(static_cast<std::ptrdiff_t>(x), yy + n);
      out(x, y) = s;
    }
  });
  return out;
}

/// Deriche-Faugeras detector h(b) = 1 - exp(-b / (2 sigma^2)) / (sqrt(2 pi) sigma).
inline double detector_h(double b, double sigma) {
  if (!(b >= 0.0)) throw ValidationError("detector_h: b must be nonnegative");
  if (!(sigma >= kMinSigma)) throw ValidationError("detector_h: sigma must be >= 1/sqrt(2*pi)");
  return 1.0 - std::exp(-b / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

/// Complementary indicator g(b) = 1 - h(b).
inline double detector_g(double b, double sigma) {
  if (!(b >= 0.0)) throw ValidationError("detector_g: b must be nonnegative");
  return std::exp(-b / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

inline EdgeMaps build_edge_maps(const ScalarField& image, const EdgeParams& params) {
  const auto smoothed = gaussian_smooth(image, params);
  const auto grad = gradient_centered(smoothed);
  const auto& g = image.grid();

  EdgeMaps maps;
  maps.f = ScalarField(g);
  maps.g_tilde = ScalarField(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double b = grad.u.values()[i] * grad.u.values()[i] + grad.v.values()[i] * grad.v.values()[i];
    maps.f.values()[i] = detector_h(b, params.sigma);
    maps.g_tilde.values()[i] = 1.0 - maps.f.values()[i];
  }
  maps.grad_f = gradient_centered(maps.f);
  maps.coeff = ScalarField(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double fx = maps.grad_f.u.values()[i], fy = maps.grad_f.v.values()[i];
    maps.coeff.values()[i] = maps.f.values()[i] * (fx * fx + fy * fy);
  }
  return maps;
}

/// Largest |sqrt(g~(x)) - sqrt(g~(y))| / |x - y| over 4-adjacent pixel pairs.
inline double sqrt_g_lipschitz_estimate(const ScalarField& g_tilde) {
  const auto& g = g_tilde.grid();
  double worst = 0.0;
  for (std::size_t y = 0; y < g.height; ++y)
    for (std::size_t x = 0; x < g.width; ++x) {
      const double s = std::sqrt(g_tilde(x, y));
      if (x + 1 < g.width) worst = std::max(worst, std::abs(std::sqrt(g_tilde(x + 1, y)) - s) / g.spacing);
      if (y + 1 < g.height) worst = std::max(worst, std::abs(std::sqrt(g_tilde(x, y + 1)) - s) / g.spacing);
    }
  return worst;
}

}  // namespace gvfls
