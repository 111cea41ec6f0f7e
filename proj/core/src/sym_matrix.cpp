#include "qdev/numerics/sym_matrix.hpp"

#include <cmath>
#include <utility>

#include "qdev/errors.hpp"

namespace qdev::numerics {

SymMatrix::SymMatrix(std::size_t order, std::optional<std::size_t> bandwidth)
    : order_(order), bandwidth_(bandwidth) {
  if (order == 0) throw ArgumentError("SymMatrix: order must be positive");
  if (bandwidth_) {
    data_.assign(order * (*bandwidth_ + 1), 0.0);
  } else {
    data_.assign(order * (order + 1) / 2, 0.0);
  }
}

SymMatrix SymMatrix::dense(std::size_t order) { return SymMatrix(order, std::nullopt); }

SymMatrix SymMatrix::banded(std::size_t order, std::size_t bandwidth) {
  return SymMatrix(order, bandwidth);
}

bool SymMatrix::in_pattern(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  return !bandwidth_ || i - j <= *bandwidth_;
}

std::size_t SymMatrix::slot(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (bandwidth_) {
    const std::size_t b = *bandwidth_;
    return i * (b + 1) + (b - (i - j));
  }
  return i * (i + 1) / 2 + j;
}

double SymMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= order_ || j >= order_) throw ArgumentError("SymMatrix: index out of range");
  if (!in_pattern(i, j)) return 0.0;
  return data_[slot(i, j)];
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i >= order_ || j >= order_) throw ArgumentError("SymMatrix: index out of range");
  if (!in_pattern(i, j)) throw ArgumentError("SymMatrix: entry outside band");
  data_[slot(i, j)] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  if (i >= order_ || j >= order_) throw ArgumentError("SymMatrix: index out of range");
  if (!in_pattern(i, j)) throw ArgumentError("SymMatrix: entry outside band");
  data_[slot(i, j)] += value;
}

std::vector<double> SymMatrix::multiply(std::span<const double> x) const {
  if (x.size() != order_) throw ArgumentError("SymMatrix::multiply: size mismatch");
  std::vector<double> y(order_, 0.0);
  for (std::size_t i = 0; i < order_; ++i) {
    const std::size_t j0 = bandwidth_ && i > *bandwidth_ ? i - *bandwidth_ : 0;
    for (std::size_t j = j0; j < i; ++j) {
      const double a = data_[slot(i, j)];
      y[i] += a * x[j];
      y[j] += a * x[i];
    }
    y[i] += data_[slot(i, i)] * x[i];
  }
  return y;
}

double SymMatrix::form(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != order_ || y.size() != order_) {
    throw ArgumentError("SymMatrix::form: size mismatch");
  }
  const auto ay = multiply(y);
  double s = 0.0;
  for (std::size_t i = 0; i < order_; ++i) s += x[i] * ay[i];
  return s;
}

bool SymMatrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<double> SymMatrix::to_dense() const {
  std::vector<double> out(order_ * order_, 0.0);
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (!in_pattern(i, j)) continue;
      const double a = data_[slot(i, j)];
      out[i * order_ + j] = a;
      out[j * order_ + i] = a;
    }
  }
  return out;
}

}  // namespace qdev::numerics
