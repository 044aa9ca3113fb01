#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gvfls/edge_map.hpp"
#include "gvfls/grid.hpp"
#include "gvfls/parallel.hpp"
#include "gvfls/stencil.hpp"

namespace gvfls {

struct GvfParams {
  double mu = 1.5e-3;
  double dt = 0.0;  ///< 0 selects the CFL bound of the explicit scheme.
  int max_steps = 20000;
  double steady_tol = 1e-8;
  double normalize_eps = 1e-8;
  int energy_stride = 1;  ///< record E every this many steps; 0 disables the trace

  /// Explicit-scheme stability bound spacing^2 / (4 mu + spacing^2 max(coeff)).
  static double cfl_bound(double mu, double spacing, double max_coeff) {
    return spacing * spacing / (4.0 * mu + spacing * spacing * max_coeff);
  }

  double effective_dt(double spacing, double max_coeff) const {
    return dt > 0.0 ? dt : cfl_bound(mu, spacing, max_coeff);
  }

  void validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ValidationError("gvf.mu must be > 0");
    if (dt < 0.0 || !std::isfinite(dt)) throw ValidationError("gvf.dt must be positive (or 0 for automatic)");
    if (max_steps <= 0) throw ValidationError("gvf.max_steps must be positive");
    if (!(steady_tol > 0.0)) throw ValidationError("gvf.steady_tol must be positive");
    if (!(normalize_eps > 0.0)) throw ValidationError("gvf.normalize_eps must be positive");
    if (energy_stride < 0) throw ValidationError("gvf.energy_stride must be nonnegative");
  }

  void check_cfl(double spacing, double max_coeff) const {
    const double bound = cfl_bound(mu, spacing, max_coeff);
    if (effective_dt(spacing, max_coeff) > bound)
      throw ValidationError("gvf.dt = " + std::to_string(dt) + " violates the CFL bound " + std::to_string(bound));
  }
};

struct EnergySample {
  int step = 0;
  double energy = 0.0;
};

struct GvfResult {
  VectorField V;
  VectorField V_hat;
  int steps_taken = 0;
  bool converged = false;
  double dt = 0.0;
  double final_residual = 0.0;  ///< max-norm of the discrete Euler residual
  std::vector<EnergySample> energy_trace;
};

/// One explicit Euler step of a single GVF component:
/// w + dt * (mu * lap(w) - coeff * (w - target)).
inline ScalarField gvf_component_step(const ScalarField& w, const ScalarField& target, const ScalarField& coeff,
                                      double mu, double dt) {
  const auto& g = w.grid();
  ScalarField out(g);
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  for_rows(g.height, [&](std::size_t y) {
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      const double c = w(x, y);
      const double lap =
          (w.ghost(xx + 1, yy) + w.ghost(xx - 1, yy) + w.ghost(xx, yy + 1) + w.ghost(xx, yy - 1) - 4.0 * c) * inv_h2;
      out(x, y) = c + dt * (mu * lap - coeff(x, y) * (c - target(x, y)));
    }
  });
  return out;
}

inline VectorField gvf_step(const VectorField& V, const EdgeMaps& maps, const GvfParams& params) {
  require_same_grid(V.grid(), maps.grid(), "gvf_step field vs edge maps");
  maps.grid().validate();
  params.validate();
  const double spacing = maps.grid().spacing;
  const double cmax = maps.coeff.max();
  params.check_cfl(spacing, cmax);
  const double dt = params.effective_dt(spacing, cmax);
  return VectorField(gvf_component_step(V.u, maps.grad_f.u, maps.coeff, params.mu, dt),
                     gvf_component_step(V.v, maps.grad_f.v, maps.coeff, params.mu, dt));
}

/// Pointwise residual -mu lap(w) + coeff (w - target) of the steady equations.
inline ScalarField euler_residual(const ScalarField& w, const ScalarField& target, const ScalarField& coeff,
                                  double mu) {
  const auto lap = divergence_free_laplacian(w);
  ScalarField r(w.grid());
  for (std::size_t i = 0; i < r.size(); ++i)
    r.values()[i] = -mu * lap.values()[i] + coeff.values()[i] * (w.values()[i] - target.values()[i]);
  return r;
}

inline double euler_residual_norm(const VectorField& V, const EdgeMaps& maps, double mu) {
  return std::max(euler_residual(V.u, maps.grad_f.u, maps.coeff, mu).max_abs(),
                  euler_residual(V.v, maps.grad_f.v, maps.coeff, mu).max_abs());
}

/// Riemann sum (weight spacing^2) of mu |DV|^2 + coeff |V - grad f|^2. DV uses
/// forward differences, whose quadratic form is exactly the 5-point Laplacian
/// driving gvf_step; the explicit step is then a gradient step on this sum.
inline double gvf_energy(const VectorField& V, const EdgeMaps& maps, double mu) {
  require_same_grid(V.grid(), maps.grid(), "gvf_energy field vs edge maps");
  const auto& g = V.grid();
  const double h = g.spacing;
  const double inv_h = 1.0 / h;
  return h * h * sum_rows(g.height, [&](std::size_t y) {
    double s = 0.0;
    const auto yy = static_cast<std::ptrdiff_t>(y);
    for (std::size_t x = 0; x < g.width; ++x) {
      const auto xx = static_cast<std::ptrdiff_t>(x);
      const double ux = (V.u.ghost(xx + 1, yy) - V.u(x, y)) * inv_h;
      const double uy = (V.u.ghost(xx, yy + 1) - V.u(x, y)) * inv_h;
      const double vx = (V.v.ghost(xx + 1, yy) - V.v(x, y)) * inv_h;
      const double vy = (V.v.ghost(xx, yy + 1) - V.v(x, y)) * inv_h;
      const double du = V.u(x, y) - maps.grad_f.u(x, y);
      const double dv = V.v(x, y) - maps.grad_f.v(x, y);
      s += mu * (ux * ux + uy * uy + vx * vx + vy * vy) + maps.coeff(x, y) * (du * du + dv * dv);
    }
    return s;
  });
}

/// Unit-length V where |V| >= eps, zero elsewhere.
inline VectorField normalize(const VectorField& V, double eps) {
  if (!(eps > 0.0)) throw ValidationError("normalize: eps must be positive");
  VectorField out(V.grid());
  for (std::size_t i = 0; i < V.u.size(); ++i) {
    const double a = V.u.values()[i], b = V.v.values()[i];
    const double n = std::hypot(a, b);
    if (n >= eps) {
      out.u.values()[i] = a / n;
      out.v.values()[i] = b / n;
    }
  }
  return out;
}

inline GvfResult solve_gvf(const EdgeMaps& maps, const GvfParams& params) {
  maps.grid().validate();
  params.validate();
  const double spacing = maps.grid().spacing;
  const double cmax = maps.coeff.max();
  params.check_cfl(spacing, cmax);

  GvfResult res;
  res.dt = params.effective_dt(spacing, cmax);
  res.V = maps.grad_f;
  if (params.energy_stride > 0) res.energy_trace.push_back({0, gvf_energy(res.V, maps, params.mu)});

  for (int step = 1; step <= params.max_steps; ++step) {
    VectorField next(gvf_component_step(res.V.u, maps.grad_f.u, maps.coeff, params.mu, res.dt),
                     gvf_component_step(res.V.v, maps.grad_f.v, maps.coeff, params.mu, res.dt));
    double change = 0.0;
    for (std::size_t i = 0; i < next.u.size(); ++i) {
      change = std::max(change, std::abs(next.u.values()[i] - res.V.u.values()[i]));
      change = std::max(change, std::abs(next.v.values()[i] - res.V.v.values()[i]));
    }
    const double scale = 1.0 + std::max(res.V.u.max_abs(), res.V.v.max_abs());
    res.V = std::move(next);
    res.steps_taken = step;
    const bool done = change / (res.dt * scale) <= params.steady_tol;
    if (params.energy_stride > 0 && (step % params.energy_stride == 0 || done || step == params.max_steps))
      res.energy_trace.push_back({step, gvf_energy(res.V, maps, params.mu)});
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.final_residual = euler_residual_norm(res.V, maps, params.mu);
  res.V_hat = normalize(res.V, params.normalize_eps);
  return res;
}

}  // namespace gvfls
