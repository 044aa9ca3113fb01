#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gvfls/viscosity.hpp"

namespace gvfls {

/// Outcome of one randomized identity or inequality suite.
struct SuiteReport {
  std::string name;
  long draws = 0;
  long failures = 0;
  double worst = 0.0;  ///< largest observed violation measure (<= tolerance means pass)

  bool passed() const { return failures == 0; }
};

namespace detail {

class DrawSource {
 public:
  explicit DrawSource(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Magnitude 10^e with e uniform in [lo_exp, hi_exp], direction uniform.
  Vec2 log_uniform_vector(double lo_exp, double hi_exp) {
    const double mag = std::pow(10.0, uniform(lo_exp, hi_exp));
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    return {mag * std::cos(a), mag * std::sin(a)};
  }

  Vec2 unit_disk() {
    const double r = std::sqrt(uniform(0.0, 1.0));
    const double a = uniform(0.0, 2.0 * std::numbers::pi);
    return {r * std::cos(a), r * std::sin(a)};
  }

  SymMatrix2 symmetric(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }

  /// a u(x)u + b w(x)w with a, b >= 0: positive semidefinite by construction.
  SymMatrix2 psd(double scale) {
    const Vec2 u = unit_disk(), w = unit_disk();
    const double a = uniform(0.0, scale), b = uniform(0.0, scale);
    return {a * u.x * u.x + b * w.x * w.x, a * u.x * u.y + b * w.x * w.y, a * u.y * u.y + b * w.y * w.y};
  }

  HamiltonianSample sample() {
    return {uniform(0.0, 1.0), uniform(-1.0, 1.0), unit_disk(), uniform(0.0, 5.0)};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace detail

/// F(p, X) <= F(p, Y) for X = Y + D, D positive semidefinite.
inline SuiteReport properness_suite(std::uint64_t seed, long draws) {
  detail::DrawSource src(seed);
  SuiteReport rep{"properness", draws, 0, -INFINITY};
  for (long i = 0; i < draws; ++i) {
    const auto s = src.sample();
    const Vec2 p = src.log_uniform_vector(-3.0, 3.0);
    const SymMatrix2 Y = src.symmetric(10.0);
    const SymMatrix2 X = Y + src.psd(10.0);
    const double slack = hamiltonian(s, p, X) - hamiltonian(s, p, Y);
    rep.worst = std::max(rep.worst, slack);
    if (!check_properness(s, p, X, Y)) ++rep.failures;
  }
  return rep;
}

/// |p/|p| - q/|q|| <= |p - q| / min(|p|, |q|) on magnitudes spanning 1e-300 .. 1e3.
inline SuiteReport direction_lemma_suite(std::uint64_t seed, long draws) {
  detail::DrawSource src(seed);
  SuiteReport rep{"direction_lemma", draws, 0, -INFINITY};
  for (long i = 0; i < draws; ++i) {
    Vec2 p = src.log_uniform_vector(-300.0, 3.0);
    Vec2 q;
    switch (i % 4) {
      case 0: q = src.log_uniform_vector(-300.0, 3.0); break;
      case 1: {  // near-parallel pairs at the same scale
        const double s = src.uniform(0.5, 2.0), a = src.uniform(-1e-6, 1e-6);
        q = {s * (p.x * std::cos(a) - p.y * std::sin(a)), s * (p.x * std::sin(a) + p.y * std::cos(a))};
        break;
      }
      case 2: q = p * -src.uniform(1e-3, 1e3); break;  // antiparallel
      default: {  // both tiny
        p = src.log_uniform_vector(-300.0, -290.0);
        q = src.log_uniform_vector(-300.0, -290.0);
      }
    }
    if (q.x == 0.0 && q.y == 0.0) q = {1e-300, 0.0};
    const auto r = direction_lemma(p, q);
    rep.worst = std::max(rep.worst, r.lhs - r.rhs);
    if (!r.holds) ++rep.failures;
  }
  return rep;
}

/// Projector identities for A(p) = I - p(x)p/|p|^2: symmetric (structural),
/// idempotent, trace one, A p = 0, scale invariant.
inline SuiteReport projection_suite(std::uint64_t seed, long draws) {
  detail::DrawSource src(seed);
  SuiteReport rep{"projection_identities", draws, 0, 0.0};
  for (long i = 0; i < draws; ++i) {
    const Vec2 p = src.log_uniform_vector(-6.0, 6.0);
    const double lambda = std::pow(10.0, src.uniform(-6.0, 6.0));
    const auto A = projection_matrix(p);
    const auto A2 = A.times(A);
    const auto Ap = A.apply(p);
    const auto As = projection_matrix(p * lambda);
    double err = 0.0;
    err = std::max(err, std::abs(A2.m12 - A2.m21));
    err = std::max({err, std::abs(A2.m11 - A.a11), std::abs(A2.m12 - A.a12), std::abs(A2.m22 - A.a22)});
    err = std::max(err, std::abs(A.trace() - 1.0));
    err = std::max(err, Ap.norm() / p.norm());
    err = std::max({err, std::abs(As.a11 - A.a11), std::abs(As.a12 - A.a12), std::abs(As.a22 - A.a22)});
    err = std::max({err, std::abs(A.min_eigenvalue()), std::abs(A.max_eigenvalue() - 1.0)});
    rep.worst = std::max(rep.worst, err);
    if (!(err <= kInequalityTol)) ++rep.failures;
  }
  return rep;
}

}  // namespace gvfls
