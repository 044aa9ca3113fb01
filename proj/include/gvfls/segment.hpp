#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gvfls/contour.hpp"
#include "gvfls/edge_map.hpp"
#include "gvfls/gvf.hpp"
#include "gvfls/levelset.hpp"

namespace gvfls {

struct SegmentResult {
  ContourSet contours;
  LevelSetState state;
  GvfResult gvf;
  EdgeMaps maps;
  bool converged = false;
  double interface_rate = 0.0;  ///< last measured interface speed, spacing units per time
};

/// Interface speed between two level sets: largest change of the interface
/// offsets per unit time, in spacing units. Infinite when the set of pixels
/// touching the interface changed.
inline double interface_rate(const std::vector<double>& before, const std::vector<double>& after, double dt,
                             double spacing) {
  double worst = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    const bool a = std::isnan(before[i]), b = std::isnan(after[i]);
    if (a != b) return std::numeric_limits<double>::infinity();
    if (a) continue;
    if ((before[i] < 0.0) != (after[i] < 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(after[i] - before[i]));
  }
  return worst / (dt * spacing);
}

using StepObserver = std::function<void(const LevelSetState&)>;

/// Level-set loop with reinitialization, given precomputed edge maps and GVF.
inline SegmentResult evolve_to_steady(LevelSetState state, EdgeMaps maps, GvfResult gvf,
                                      const LevelSetParams& params, const StepObserver& observe = {}) {
  params.validate();
  const double h = maps.grid().spacing;
  const double dt = params.effective_dt(h, maps.g_tilde.max());
  SegmentResult res;
  // The interface is compared across whole reinitialization cycles: within a
  // cycle upwinding steepens phi at a converging front and the zero crossing
  // oscillates inside one cell, repeating identically from cycle to cycle.
  auto band = interface_band(state.phi);
  int quiet = 0;
  double rate = std::numeric_limits<double>::infinity();
  while (state.step < params.max_steps) {
    state = evolve_step(state, maps, gvf.V_hat, params);
    const bool has_inside = std::any_of(state.phi.values().begin(), state.phi.values().end(),
                                        [](double v) { return v < 0.0; });
    if (!has_inside) {
      // The contour vanished; nothing left to evolve.
      res.converged = true;
      rate = 0.0;
      if (observe) observe(state);
      break;
    }
    if (state.step % params.reinit_every == 0) {
      state.phi = reinitialize(state.phi);
      auto next_band = interface_band(state.phi);
      rate = interface_rate(band, next_band, dt * params.reinit_every, h);
      band = std::move(next_band);
      quiet = rate <= params.steady_tol ? quiet + 1 : 0;
    }
    if (observe) observe(state);
    if (quiet >= params.steady_window) {
      res.converged = true;
      break;
    }
  }
  res.interface_rate = rate;
  res.contours = extract_zero_level(state.phi);
  res.state = std::move(state);
  res.gvf = std::move(gvf);
  res.maps = std::move(maps);
  return res;
}

/// Full pipeline: edge maps, GVF, normalization, level-set evolution, zero-level extraction.
inline SegmentResult segment(const ScalarField& image, const LevelSetState& init, const EdgeParams& edge,
                             const GvfParams& gvf_params, const LevelSetParams& ls_params,
                             const StepObserver& observe = {}) {
  require_same_grid(image.grid(), init.phi.grid(), "image vs initial level set");
  edge.validate(image.spacing());
  gvf_params.validate();
  ls_params.validate();
  auto maps = build_edge_maps(image, edge);
  auto gvf = solve_gvf(maps, gvf_params);
  auto res = evolve_to_steady(init, std::move(maps), std::move(gvf), ls_params, observe);
  res.converged = res.converged && res.gvf.converged;
  return res;
}

}  // namespace gvfls
