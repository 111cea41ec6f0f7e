#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace qdev::spatial {

/// Uniform n-dimensional box grid; node (i_0, ..., i_{n-1}) sits at
/// origin + spacing * i, and the last index varies fastest.
struct BoxGrid {
  std::vector<std::size_t> shape;
  double spacing = 1.0;
  std::vector<double> origin;

  std::size_t dimension() const { return shape.size(); }
  std::size_t size() const;
  /// Throws ArgumentError on empty shape, spacing <= 0 or origin/shape mismatch.
  void validate() const;
};

/// Uniform radial grid r_j = r0 + spacing * j, j < count.
struct RadialGrid {
  double r0 = 0.0;
  double spacing = 1.0;
  std::size_t count = 0;

  double radius(std::size_t j) const { return r0 + spacing * static_cast<double>(j); }
  double r_max() const { return radius(count - 1); }
  void validate() const;
};

using Grid = std::variant<BoxGrid, RadialGrid>;

/// Complex samples of a function on a box or radial grid.
struct SpatialField {
  Grid grid;
  std::vector<std::complex<double>> values;

  /// Throws ArgumentError if the grid is invalid, sizes disagree or a value
  /// is not finite.
  void validate() const;

  bool is_box() const { return std::holds_alternative<BoxGrid>(grid); }
  bool is_radial() const { return std::holds_alternative<RadialGrid>(grid); }
  const BoxGrid& box() const { return std::get<BoxGrid>(grid); }
  const RadialGrid& radial() const { return std::get<RadialGrid>(grid); }
};

/// Multi-index of a flat box-grid offset.
std::vector<std::size_t> unravel(const BoxGrid& grid, std::size_t offset);
/// True when no index sits on the grid boundary.
bool is_interior(const BoxGrid& grid, std::size_t offset);

}  // namespace qdev::spatial
