#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gvfls {

/// Raised when a parameter, grid or field violates its invariants.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform square grid shared by every field. Any nonempty grid can hold data;
/// the numerical operators need one interior ring, hence validate()'s 3x3 minimum.
struct GridSpec {
  std::size_t width = 0;
  std::size_t height = 0;
  double spacing = 1.0;

  std::size_t size() const { return width * height; }

  void validate_storage() const {
    if (width == 0 || height == 0) throw ValidationError("grid must be nonempty");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
      throw ValidationError("grid spacing must be positive and finite");
  }

  void validate() const {
    if (width < 3 || height < 3)
      throw ValidationError("grid must be at least 3x3, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    if (!(spacing > 0.0) || !std::isfinite(spacing))
      throw ValidationError("grid spacing must be positive and finite");
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Real-valued function sampled at pixel centers, row-major (index = y * width + x).
class ScalarField {
 public:
  ScalarField() = default;

  explicit ScalarField(GridSpec grid, double fill = 0.0) : grid_(grid), values_(grid.size(), fill) {
    grid_.validate_storage();
  }

  ScalarField(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate_storage();
    if (values_.size() != grid_.size())
      throw ValidationError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                            std::to_string(grid_.size()));
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t width() const { return grid_.width; }
  std::size_t height() const { return grid_.height; }
  double spacing() const { return grid_.spacing; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t x, std::size_t y) { return values_[y * grid_.width + x]; }
  double operator()(std::size_t x, std::size_t y) const { return values_[y * grid_.width + x]; }

  /// Access with mirror ghost cells: one sample outside the frame repeats the
  /// edge sample, so the outward normal difference is zero on all sides.
  double ghost(std::ptrdiff_t x, std::ptrdiff_t y) const {
    const auto w = static_cast<std::ptrdiff_t>(grid_.width);
    const auto h = static_cast<std::ptrdiff_t>(grid_.height);
    x = x < 0 ? -x - 1 : (x >= w ? 2 * w - x - 1 : x);
    y = y < 0 ? -y - 1 : (y >= h ? 2 * h - y - 1 : y);
    return values_[static_cast<std::size_t>(y * w + x)];
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double max() const;
  double min() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  GridSpec grid_{};
  std::vector<double> values_;
};

inline double ScalarField::max() const {
  double m = -INFINITY;
  for (double v : values_) m = v > m ? v : m;
  return m;
}

inline double ScalarField::min() const {
  double m = INFINITY;
  for (double v : values_) m = v < m ? v : m;
  return m;
}

inline double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::abs(v) > m ? std::abs(v) : m;
  return m;
}

inline bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Pair of scalar fields on the same grid: GVF, gradients, normalized GVF.
struct VectorField {
  ScalarField u;
  ScalarField v;

  VectorField() = default;
  explicit VectorField(GridSpec grid) : u(grid), v(grid) {}
  VectorField(ScalarField u_, ScalarField v_) : u(std::move(u_)), v(std::move(v_)) {
    if (!(u.grid() == v.grid())) throw ValidationError("vector field components on different grids");
  }

  const GridSpec& grid() const { return u.grid(); }

  /// Largest pointwise Euclidean magnitude.
  double max_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::hypot(u.values()[i], v.values()[i]));
    return m;
  }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw ValidationError(std::string("grid mismatch: ") + what);
}

}  // namespace gvfls
