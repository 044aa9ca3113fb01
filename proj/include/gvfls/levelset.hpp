#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gvfls/contour.hpp"
#include "gvfls/edge_map.hpp"
#include "gvfls/grid.hpp"
#include "gvfls/parallel.hpp"

namespace gvfls {

inline constexpr double kSqrt2 = 1.4142135623730951;

struct LevelSetParams {
  double beta = 0.25;
  double balloon_h0 = 0.0;
  double dt = 0.0;  ///< 0 selects 0.4 of the combined CFL bound
  int max_steps = 5000;
  double steady_tol = 1e-3;
  double curvature_eps = 0.0;  ///< 0 selects 1e-6 * spacing
  int reinit_every = 20;
  int steady_window = 10;  ///< consecutive quiet steps required for convergence

  /// Combined parabolic/hyperbolic limit spacing^2 / (g_max (4 beta + spacing (1 + sqrt 2))).
  double cfl_bound(double spacing, double g_max) const {
    if (!(g_max > 0.0)) return std::numeric_limits<double>::infinity();
    return spacing * spacing / (g_max * (4.0 * beta + spacing * (1.0 + kSqrt2)));
  }

  double effective_dt(double spacing, double g_max) const {
    if (dt > 0.0) return dt;
    const double bound = cfl_bound(spacing, g_max);
    return std::isfinite(bound) ? 0.4 * bound : spacing;
  }

  double effective_eps(double spacing) const { return curvature_eps > 0.0 ? curvature_eps : 1e-6 * spacing; }

  void validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("levelset.beta must be >= 0");
    if (!(std::abs(balloon_h0) <= 1.0)) throw ValidationError("levelset.balloon_h0 must lie in [-1, 1]");
    if (dt < 0.0 || !std::isfinite(dt)) throw ValidationError("levelset.dt must be positive (or 0 for automatic)");
    if (max_steps <= 0) throw ValidationError("levelset.max_steps must be positive");
    if (!(steady_tol > 0.0)) throw ValidationError("levelset.steady_tol must be positive");
    if (curvature_eps < 0.0) throw ValidationError("levelset.curvature_eps must be positive (or 0 for automatic)");
    if (reinit_every <= 0) throw ValidationError("levelset.reinit_every must be positive");
    if (steady_window <= 0) throw ValidationError("levelset.steady_window must be positive");
  }

  void check_cfl(double spacing, double g_max) const {
    const double bound = cfl_bound(spacing, g_max);
    if (effective_dt(spacing, g_max) > bound)
      throw ValidationError("levelset.dt = " + std::to_string(dt) + " violates the CFL bound " +
                            std::to_string(bound));
  }
};

struct LevelSetState {
  ScalarField phi;
  int step = 0;
  double last_update_norm = 0.0;
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct Derivatives {
  double x, y, xx, yy, xy;
};

inline Derivatives central_derivatives(const ScalarField& phi, std::ptrdiff_t x, std::ptrdiff_t y, double h) {
  const double c = phi.ghost(x, y);
  const double e = phi.ghost(x + 1, y), w = phi.ghost(x - 1, y);
  const double n = phi.ghost(x, y - 1), s = phi.ghost(x, y + 1);
  const double ne = phi.ghost(x + 1, y - 1), nw = phi.ghost(x - 1, y - 1);
  const double se = phi.ghost(x + 1, y + 1), sw = phi.ghost(x - 1, y + 1);
  const double ih = 1.0 / h, ih2 = ih * ih;
  return {(e - w) * 0.5 * ih, (s - n) * 0.5 * ih, (e - 2.0 * c + w) * ih2, (s - 2.0 * c + n) * ih2,
          (se - sw - ne + nw) * 0.25 * ih2};
}

/// (phi_xx phi_y^2 - 2 phi_x phi_y phi_xy + phi_yy phi_x^2), the curvature numerator.
inline double curvature_numerator(const Derivatives& d) {
  return d.xx * d.y * d.y - 2.0 * d.x * d.y * d.xy + d.yy * d.x * d.x;
}

}  // namespace detail

/// Mean curvature div(grad phi / |grad phi|) with denominator (|grad phi|^2 + eps^2)^{3/2}.
inline ScalarField curvature(const ScalarField& phi, double eps) {
  if (!(eps > 0.0)) throw ValidationError("curvature: eps must be positive");
  const auto& g = phi.grid();
  g.validate();
  ScalarField kappa(g);
  for_rows(g.height, [&](std::size_t y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto d = detail::central_derivatives(phi, std::ptrdiff_t(x), std::ptrdiff_t(y), g.spacing);
      const double q = d.x * d.x + d.y * d.y + eps * eps;
      kappa(x, y) = detail::curvature_numerator(d) / (q * std::sqrt(q));
    }
  });
  return kappa;
}

/// One explicit step of
///   phi_t = g~ ((beta kappa - H) |grad phi| - (1 - |H|) <V^, grad phi>)
/// with central differences for the curvature product, Godunov upwinding for the
/// balloon term and per-component upwinding for the advection term.
inline LevelSetState evolve_step(const LevelSetState& state, const EdgeMaps& maps, const VectorField& v_hat,
                                 const LevelSetParams& params) {
  const auto& phi = state.phi;
  require_same_grid(phi.grid(), maps.grid(), "level set vs edge maps");
  require_same_grid(phi.grid(), v_hat.grid(), "level set vs normalized GVF");
  params.validate();
  const auto& g = phi.grid();
  g.validate();
  const double h = g.spacing;
  const double g_max = maps.g_tilde.max();
  params.check_cfl(h, g_max);
  const double dt = params.effective_dt(h, g_max);
  const double eps = params.effective_eps(h);
  const double H = params.balloon_h0;
  const double advect_w = 1.0 - std::abs(H);

  LevelSetState next{ScalarField(g), state.step + 1, 0.0};
  std::vector<double> row_change(g.height, 0.0), row_bound(g.height, 0.0);
  for_rows(g.height, [&](std::size_t yu) {
    const auto y = static_cast<std::ptrdiff_t>(yu);
    double worst_change = 0.0, worst_bound = 0.0;
    for (std::size_t xu = 0; xu < g.width; ++xu) {
      const auto x = static_cast<std::ptrdiff_t>(xu);
      const double c = phi(xu, yu);
      const double gt = maps.g_tilde(xu, yu);
      if (gt == 0.0) {
        next.phi(xu, yu) = c;
        continue;
      }
      const auto d = detail::central_derivatives(phi, x, y, h);
      const double grad_c = std::sqrt(d.x * d.x + d.y * d.y);
      const double q = grad_c * grad_c + eps * eps;
      const double kappa = detail::curvature_numerator(d) / (q * std::sqrt(q));
      const double curv_term = params.beta * kappa * grad_c;

      const double dxm = (c - phi.ghost(x - 1, y)) / h, dxp = (phi.ghost(x + 1, y) - c) / h;
      const double dym = (c - phi.ghost(x, y - 1)) / h, dyp = (phi.ghost(x, y + 1) - c) / h;

      // Normal speed g~ H; outward motion when H > 0.
      double grad_g = 0.0;
      if (H > 0.0) {
        grad_g = std::sqrt(std::pow(std::max(dxm, 0.0), 2) + std::pow(std::min(dxp, 0.0), 2) +
                           std::pow(std::max(dym, 0.0), 2) + std::pow(std::min(dyp, 0.0), 2));
      } else if (H < 0.0) {
        grad_g = std::sqrt(std::pow(std::min(dxm, 0.0), 2) + std::pow(std::max(dxp, 0.0), 2) +
                           std::pow(std::min(dym, 0.0), 2) + std::pow(std::max(dyp, 0.0), 2));
      }

      const double vx = v_hat.u(xu, yu), vy = v_hat.v(xu, yu);
      const double adv = vx * (vx > 0.0 ? dxm : dxp) + vy * (vy > 0.0 ? dym : dyp);

      const double rate = gt * (curv_term - H * grad_g - advect_w * adv);
      const double updated = c + dt * rate;
      next.phi(xu, yu) = updated;

      const double dmax = std::max({std::abs(dxm), std::abs(dxp), std::abs(dym), std::abs(dyp)});
      const double bound = dt * gt *
                           (params.beta * std::abs(kappa) * grad_c + std::abs(H) * 2.0 * dmax +
                            advect_w * (std::abs(vx) + std::abs(vy)) * dmax);
      worst_change = std::max(worst_change, std::abs(updated - c));
      worst_bound = std::max(worst_bound, bound);
      if (!std::isfinite(updated)) worst_change = std::numeric_limits<double>::infinity();
    }
    row_change[yu] = worst_change;
    row_bound[yu] = worst_bound;
  });
  double change = 0.0, bound = 0.0;
  for (std::size_t r = 0; r < g.height; ++r) {
    change = std::max(change, row_change[r]);
    bound = std::max(bound, row_bound[r]);
  }
  if (!(change <= bound * (1.0 + 1e-12) + 1e-300))
    throw CflError("level-set update " + std::to_string(change) + " exceeds the stability bound " +
                   std::to_string(bound));
  next.last_update_norm = change;
  return next;
}

/// Per band pixel: signed distance to the interface and the foot point on it.
struct InterfaceBand {
  std::vector<double> distance;  // NaN away from the interface
  std::vector<double> foot_x, foot_y;
};

/// Pixels touching the interface (a 4-neighbour of the other sign). Distance is
/// |phi| / |grad phi| with a centered gradient; where that gradient collapses
/// (ridges, kinks) the one-sided slopes across the crossings are used. The foot
/// point is reached by stepping that distance against the gradient.
inline InterfaceBand interface_band_with_feet(const ScalarField& phi) {
  const auto& g = phi.grid();
  const double h = g.spacing;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  InterfaceBand b{std::vector<double>(g.size(), nan), std::vector<double>(g.size(), nan),
                  std::vector<double>(g.size(), nan)};
  for (std::size_t y = 0; y < g.height; ++y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const double c = phi(x, y);
      const bool in = c < 0.0;
      double sx = 0.0, sy = 0.0;
      bool cross_x = false, cross_y = false;
      // Signed slope toward the neighbour, keeping the steepest crossing.
      auto probe = [&](std::size_t nx, std::size_t ny, double dir, double& slope, bool& crossed) {
        const double n = phi(nx, ny);
        if ((n < 0.0) != in) {
          const double s = dir * (n - c) / h;
          if (!crossed || std::abs(s) > std::abs(slope)) slope = s;
          crossed = true;
        }
      };
      if (x > 0) probe(x - 1, y, -1.0, sx, cross_x);
      if (x + 1 < g.width) probe(x + 1, y, 1.0, sx, cross_x);
      if (y > 0) probe(x, y - 1, -1.0, sy, cross_y);
      if (y + 1 < g.height) probe(x, y + 1, 1.0, sy, cross_y);
      if (!cross_x && !cross_y) continue;
      const auto xx = static_cast<std::ptrdiff_t>(x), yy = static_cast<std::ptrdiff_t>(y);
      const double cx = (phi.ghost(xx + 1, yy) - phi.ghost(xx - 1, yy)) / (2.0 * h);
      const double cy = (phi.ghost(xx, yy + 1) - phi.ghost(xx, yy - 1)) / (2.0 * h);
      if (!cross_x) sx = cx;
      if (!cross_y) sy = cy;
      const double one_sided = std::hypot(sx, sy), centered = std::hypot(cx, cy);
      const bool use_centered = centered >= 0.5 * one_sided;
      const double gx = use_centered ? cx : sx, gy = use_centered ? cy : sy;
      const double slope = use_centered ? centered : one_sided;
      const std::size_t i = y * g.width + x;
      const double d = c == 0.0 ? 0.0 : c / slope;
      b.distance[i] = d;
      b.foot_x[i] = double(x) * h - (c == 0.0 ? 0.0 : d * gx / slope);
      b.foot_y[i] = double(y) * h - (c == 0.0 ? 0.0 : d * gy / slope);
    }
  }
  return b;
}

/// Signed distance from every pixel touching the interface to the interface;
/// NaN away from it.
inline std::vector<double> interface_band(const ScalarField& phi) { return interface_band_with_feet(phi).distance; }

/// Rebuilds a signed distance with the same zero level set. Pixels touching the
/// interface keep their interpolated offsets. Every other pixel takes its
/// distance to the marching-squares interface: the nearest interface cell is
/// propagated through alternating raster sweeps, then refined over the 3x3
/// cells around it.
inline ScalarField reinitialize(const ScalarField& phi) {
  const auto& g = phi.grid();
  g.validate();
  const double h = g.spacing;
  std::size_t inside = 0;
  for (double v : phi.values()) inside += v < 0.0;
  if (inside == 0 || inside == g.size()) throw ValidationError("reinitialize: level set has no sign change");

  const auto band = interface_band(phi);
  const std::size_t cw = g.width - 1, ch = g.height - 1;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // Interface segments per cell.
  std::vector<std::array<Point, 4>> segs(cw * ch);
  std::vector<int> nseg(cw * ch, 0);
  for (std::size_t y = 0; y < ch; ++y)
    for (std::size_t x = 0; x < cw; ++x) {
      const auto l = detail::cell_links(phi, x, y);
      for (int k = 0; k < l.count; ++k) {
        segs[y * cw + x][2 * k] = detail::edge_crossing(phi, detail::cell_edge(x, y, l.pairs[k].first));
        segs[y * cw + x][2 * k + 1] = detail::edge_crossing(phi, detail::cell_edge(x, y, l.pairs[k].second));
      }
      nseg[y * cw + x] = l.count;
    }
  auto cell_distance = [&](Point p, std::size_t c) {
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < nseg[c]; ++k) d = std::min(d, detail::point_segment_distance(p, segs[c][2 * k], segs[c][2 * k + 1]));
    return d;
  };

  const auto w = static_cast<std::ptrdiff_t>(g.width), ht = static_cast<std::ptrdiff_t>(g.height);
  std::vector<double> dist(g.size(), std::numeric_limits<double>::infinity());
  std::vector<std::size_t> src(g.size(), kNone);
  auto point = [&](std::ptrdiff_t x, std::ptrdiff_t y) { return Point{double(x) * h, double(y) * h}; };
  auto offer = [&](std::ptrdiff_t x, std::ptrdiff_t y, std::size_t c) {
    const auto i = static_cast<std::size_t>(y * w + x);
    if (c == kNone || c == src[i]) return false;
    const double d = cell_distance(point(x, y), c);
    if (d >= dist[i]) return false;
    dist[i] = d;
    src[i] = c;
    return true;
  };
  // Seeds: band pixels and the cells they touch.
  for (std::ptrdiff_t y = 0; y < ht; ++y)
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      if (std::isnan(band[static_cast<std::size_t>(y * w + x)])) continue;
      for (std::ptrdiff_t cy = std::max<std::ptrdiff_t>(0, y - 1); cy <= std::min(ht - 2, y); ++cy)
        for (std::ptrdiff_t cx = std::max<std::ptrdiff_t>(0, x - 1); cx <= std::min(w - 2, x); ++cx) {
          const auto c = static_cast<std::size_t>(cy) * cw + static_cast<std::size_t>(cx);
          if (nseg[c] > 0) offer(x, y, c);
        }
    }
  auto pull = [&](std::ptrdiff_t x, std::ptrdiff_t y, std::ptrdiff_t nx, std::ptrdiff_t ny) {
    if (nx < 0 || ny < 0 || nx >= w || ny >= ht) return false;
    return offer(x, y, src[static_cast<std::size_t>(ny * w + nx)]);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::ptrdiff_t y = 0; y < ht; ++y) {
      for (std::ptrdiff_t x = 0; x < w; ++x)
        for (auto [dx, dy] : {std::pair{-1, -1}, {0, -1}, {1, -1}, {-1, 0}}) changed |= pull(x, y, x + dx, y + dy);
      for (std::ptrdiff_t x = w - 1; x >= 0; --x) changed |= pull(x, y, x + 1, y);
    }
    for (std::ptrdiff_t y = ht - 1; y >= 0; --y) {
      for (std::ptrdiff_t x = w - 1; x >= 0; --x)
        for (auto [dx, dy] : {std::pair{1, 1}, {0, 1}, {-1, 1}, {1, 0}}) changed |= pull(x, y, x + dx, y + dy);
      for (std::ptrdiff_t x = 0; x < w; ++x) changed |= pull(x, y, x - 1, y);
    }
  }

  ScalarField out(g);
  const auto& p = phi.values();
  for_rows(g.height, [&](std::size_t y) {
    for (std::size_t x = 0; x < g.width; ++x) {
      const std::size_t i = y * g.width + x;
      if (!std::isnan(band[i])) {
        out.values()[i] = band[i];
        continue;
      }
      double d = dist[i];
      const std::size_t c = src[i], cx = c % cw, cy = c / cw;
      for (std::size_t ny = cy > 0 ? cy - 1 : 0; ny <= std::min(ch - 1, cy + 1); ++ny)
        for (std::size_t nx = cx > 0 ? cx - 1 : 0; nx <= std::min(cw - 1, cx + 1); ++nx)
          d = std::min(d, cell_distance(point(std::ptrdiff_t(x), std::ptrdiff_t(y)), ny * cw + nx));
      out.values()[i] = p[i] < 0.0 ? -d : d;
    }
  });
  return out;
}

}  // namespace gvfls
