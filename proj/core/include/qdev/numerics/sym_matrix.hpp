#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qdev::numerics {

/// Real symmetric matrix holding only its lower triangle.
///
/// Two layouts are supported: packed dense storage, and band storage for a
/// fixed half-bandwidth. Entries outside the band read as zero and may not be
/// written.
class SymMatrix {
 public:
  static SymMatrix dense(std::size_t order);
  static SymMatrix banded(std::size_t order, std::size_t bandwidth);

  std::size_t order() const { return order_; }
  std::optional<std::size_t> bandwidth() const { return bandwidth_; }
  bool is_tridiagonal() const { return bandwidth_ && *bandwidth_ <= 1; }

  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);

  std::vector<double> multiply(std::span<const double> x) const;
  /// x^T A y
  double form(std::span<const double> x, std::span<const double> y) const;

  bool all_finite() const;
  /// Row-major full copy; used by the dense solver and tests.
  std::vector<double> to_dense() const;

 private:
  SymMatrix(std::size_t order, std::optional<std::size_t> bandwidth);
  std::size_t slot(std::size_t i, std::size_t j) const;
  bool in_pattern(std::size_t i, std::size_t j) const;

  std::size_t order_ = 0;
  std::optional<std::size_t> bandwidth_;
  std::vector<double> data_;
};

}  // namespace qdev::numerics
