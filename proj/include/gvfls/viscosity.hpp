#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "gvfls/grid.hpp"

namespace gvfls {

/// Absolute slack on every inequality check below.
inline constexpr double kInequalityTol = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMatrix2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  static SymMatrix2 identity() { return {1.0, 0.0, 1.0}; }
  double trace() const { return a11 + a22; }
  Vec2 apply(Vec2 p) const { return {a11 * p.x + a12 * p.y, a12 * p.x + a22 * p.y}; }

  SymMatrix2 operator+(const SymMatrix2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
  SymMatrix2 operator-(const SymMatrix2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
  SymMatrix2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }

  /// Product of two symmetric matrices; symmetric only when they commute, so
  /// this returns the full entries.
  struct Full {
    double m11, m12, m21, m22;
  };
  Full times(const SymMatrix2& o) const {
    return {a11 * o.a11 + a12 * o.a12, a11 * o.a12 + a12 * o.a22, a12 * o.a11 + a22 * o.a12,
            a12 * o.a12 + a22 * o.a22};
  }

  /// Smallest eigenvalue, closed form.
  double min_eigenvalue() const {
    const double mean = 0.5 * (a11 + a22);
    const double r = std::hypot(0.5 * (a11 - a22), a12);
    return mean - r;
  }

  double max_eigenvalue() const {
    const double mean = 0.5 * (a11 + a22);
    const double r = std::hypot(0.5 * (a11 - a22), a12);
    return mean + r;
  }
};

/// Trace of the product of two symmetric matrices.
inline double trace_product(const SymMatrix2& a, const SymMatrix2& b) {
  return a.a11 * b.a11 + 2.0 * a.a12 * b.a12 + a.a22 * b.a22;
}

struct HamiltonianSample {
  double g_val = 0.0;  ///< g~(x) in [0, 1]
  double H_val = 0.0;  ///< balloon force in [-1, 1]
  Vec2 vhat;           ///< normalized GVF, |vhat| <= 1
  double beta = 0.0;

  void validate() const {
    if (!(g_val >= 0.0 && g_val <= 1.0)) throw ValidationError("hamiltonian sample: g must lie in [0,1]");
    if (!(std::abs(H_val) <= 1.0)) throw ValidationError("hamiltonian sample: H must lie in [-1,1]");
    if (!(vhat.norm() <= 1.0 + kInequalityTol)) throw ValidationError("hamiltonian sample: |vhat| must be <= 1");
    if (!(beta >= 0.0)) throw ValidationError("hamiltonian sample: beta must be >= 0");
  }
};

inline void require_nonzero(Vec2 p, const char* what) {
  if (!(p.x != 0.0 || p.y != 0.0)) throw ValidationError(std::string(what) + ": vector must be nonzero");
}

/// Orthogonal projector I - p (x) p / |p|^2 onto the line normal to p.
inline SymMatrix2 projection_matrix(Vec2 p) {
  require_nonzero(p, "projection_matrix");
  // Scale first so |p|^2 cannot underflow or overflow.
  const double s = std::max(std::abs(p.x), std::abs(p.y));
  const double x = p.x / s, y = p.y / s;
  const double n2 = x * x + y * y;
  return {1.0 - x * x / n2, -x * y / n2, 1.0 - y * y / n2};
}

/// F(x, p, X) = -Tr(A(x,p) X) + g H |p| + g (1 - |H|) <vhat, p>, with A(x,p) = beta g (I - p(x)p/|p|^2).
inline double hamiltonian(const HamiltonianSample& s, Vec2 p, const SymMatrix2& X) {
  require_nonzero(p, "hamiltonian");
  const SymMatrix2 A = projection_matrix(p) * (s.beta * s.g_val);
  return -trace_product(A, X) + s.g_val * s.H_val * p.norm() + s.g_val * (1.0 - std::abs(s.H_val)) * dot(s.vhat, p);
}

/// Loewner order Y <= X, i.e. X - Y positive semidefinite (up to the tolerance).
inline bool loewner_leq(const SymMatrix2& Y, const SymMatrix2& X) {
  return (X - Y).min_eigenvalue() >= -kInequalityTol;
}

/// Degenerate ellipticity: F(p, X) <= F(p, Y) whenever Y <= X.
inline bool check_properness(const HamiltonianSample& s, Vec2 p, const SymMatrix2& X, const SymMatrix2& Y) {
  if (!loewner_leq(Y, X)) throw ValidationError("check_properness: requires Y <= X in the Loewner order");
  return hamiltonian(s, p, X) <= hamiltonian(s, p, Y) + kInequalityTol;
}

/// rho(p, q) = min(|p - q| / min(|p|, |q|), 1).
inline double rho(Vec2 p, Vec2 q) {
  require_nonzero(p, "rho");
  require_nonzero(q, "rho");
  return std::min((p - q).norm() / std::min(p.norm(), q.norm()), 1.0);
}

struct DirectionLemmaSlack {
  double lhs = 0.0;  ///< |p/|p| - q/|q||
  double rhs = 0.0;  ///< |p - q| / min(|p|, |q|)
  bool holds = false;
};

/// |p/|p| - q/|q|| <= |p - q| / min(|p|, |q|), with the unclamped quotient.
/// Each side is evaluated after rescaling by powers of two so tiny or huge
/// magnitudes stay exact; a quotient that overflows is +inf and holds.
inline DirectionLemmaSlack direction_lemma(Vec2 p, Vec2 q) {
  require_nonzero(p, "direction_lemma");
  require_nonzero(q, "direction_lemma");
  const auto exponent = [](Vec2 v) { return std::ilogb(std::max(std::abs(v.x), std::abs(v.y))); };
  const auto scaled = [](Vec2 v, int e) { return Vec2{std::scalbn(v.x, -e), std::scalbn(v.y, -e)}; };
  const auto unit = [&](Vec2 v) {
    v = scaled(v, exponent(v));
    const double n = v.norm();
    return Vec2{v.x / n, v.y / n};
  };
  const int e = std::min(exponent(p), exponent(q));
  const Vec2 ps = scaled(p, e), qs = scaled(q, e);
  DirectionLemmaSlack out;
  out.lhs = (unit(p) - unit(q)).norm();
  out.rhs = (ps - qs).norm() / std::min(ps.norm(), qs.norm());
  out.holds = out.lhs <= out.rhs + kInequalityTol;
  return out;
}

inline bool check_direction_lemma(Vec2 p, Vec2 q) { return direction_lemma(p, q).holds; }

}  // namespace gvfls
