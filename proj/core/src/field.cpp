#include "qdev/spatial/field.hpp"

#include <cmath>

#include "qdev/errors.hpp"

namespace qdev::spatial {

std::size_t BoxGrid::size() const {
  std::size_t s = 1;
  for (auto e : shape) s *= e;
  return shape.empty() ? 0 : s;
}

void BoxGrid::validate() const {
  if (shape.empty()) throw ArgumentError("BoxGrid: empty shape");
  for (auto e : shape) {
    if (e == 0) throw ArgumentError("BoxGrid: zero extent");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ArgumentError("BoxGrid: spacing must be positive");
  if (origin.size() != shape.size()) throw ArgumentError("BoxGrid: origin/shape dimension mismatch");
}

void RadialGrid::validate() const {
  if (count < 2) throw ArgumentError("RadialGrid: at least two nodes required");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ArgumentError("RadialGrid: spacing must be positive");
  if (!(r0 >= 0.0)) throw ArgumentError("RadialGrid: r0 must be >= 0");
}

void SpatialField::validate() const {
  const std::size_t expected = std::visit(
      [](const auto& g) -> std::size_t {
        g.validate();
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, BoxGrid>) {
          return g.size();
        } else {
          return g.count;
        }
      },
      grid);
  if (values.size() != expected) throw ArgumentError("SpatialField: value count does not match grid");
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ArgumentError("SpatialField: non-finite value");
    }
  }
}

std::vector<std::size_t> unravel(const BoxGrid& grid, std::size_t offset) {
  std::vector<std::size_t> idx(grid.dimension());
  for (std::size_t d = grid.dimension(); d-- > 0;) {
    idx[d] = offset % grid.shape[d];
    offset /= grid.shape[d];
  }
  return idx;
}

bool is_interior(const BoxGrid& grid, std::size_t offset) {
  for (std::size_t d = grid.dimension(); d-- > 0;) {
    const std::size_t i = offset % grid.shape[d];
    if (i == 0 || i + 1 == grid.shape[d]) return false;
    offset /= grid.shape[d];
  }
  return true;
}

}  // namespace qdev::spatial
