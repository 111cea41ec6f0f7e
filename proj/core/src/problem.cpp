#include "qdev/temporal/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdev/errors.hpp"

namespace qdev::temporal {

TemporalProblem::TemporalProblem(int n, double lambda_abs) : n_(n), lambda_abs_(lambda_abs) {
  if (n < 3) throw ArgumentError("TemporalProblem: dimension must be >= 3, got " + std::to_string(n));
  if (!(lambda_abs > 0.0) || !std::isfinite(lambda_abs)) {
    throw ArgumentError("TemporalProblem: |Lambda| must be positive and finite");
  }
  a_ = static_cast<double>(n) * n / (32.0 * (n - 1));
  p_ = 2.0 - 4.0 / n;
}

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < kMinElements + 1) {
    throw ArgumentError("Mesh1D: at least " + std::to_string(kMinElements) + " elements required");
  }
  if (nodes_.front() != 0.0) throw ArgumentError("Mesh1D: first node must be 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw ArgumentError("Mesh1D: nodes must be finite and strictly increasing");
    }
  }
}

Mesh1D Mesh1D::graded(double t_max, std::size_t elements, double ratio, double graded_fraction) {
  if (!(t_max > 0.0)) throw ArgumentError("Mesh1D::graded: T_max must be positive");
  if (!(ratio >= 1.0)) throw ArgumentError("Mesh1D::graded: ratio must be >= 1");
  if (!(graded_fraction >= 0.0 && graded_fraction < 1.0)) {
    throw ArgumentError("Mesh1D::graded: graded fraction must lie in [0, 1)");
  }
  if (elements < kMinElements) {
    throw ArgumentError("Mesh1D: at least " + std::to_string(kMinElements) + " elements required");
  }
  auto graded = static_cast<std::size_t>(std::llround(graded_fraction * elements));
  if (ratio > 1.0) {
    // Smallest element stays >= kMinGradedWidth of the tail spacing; narrower
    // elements only carry round-off in the nodal values next to t = 0.
    const auto cap = static_cast<std::size_t>(std::floor(std::log(1.0 / kMinGradedWidth) / std::log(ratio)));
    graded = std::min(graded, cap);
  }
  // Element widths h * ratio^-(graded - j) for j < graded, then h.
  std::vector<double> widths(elements);
  double total = 0.0;
  for (std::size_t j = 0; j < graded; ++j) {
    widths[j] = std::pow(ratio, -static_cast<double>(graded - j));
  }
  for (std::size_t j = graded; j < elements; ++j) widths[j] = 1.0;
  for (double w : widths) total += w;
  std::vector<double> nodes(elements + 1);
  nodes[0] = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < elements; ++j) {
    acc += widths[j];
    nodes[j + 1] = t_max * (acc / total);
  }
  nodes[elements] = t_max;
  return Mesh1D(std::move(nodes));
}

Mesh1D Mesh1D::uniform(double t_max, std::size_t elements) {
  if (!(t_max > 0.0)) throw ArgumentError("Mesh1D::uniform: T_max must be positive");
  if (elements < kMinElements) {
    throw ArgumentError("Mesh1D: at least " + std::to_string(kMinElements) + " elements required");
  }
  std::vector<double> nodes(elements + 1);
  for (std::size_t j = 0; j <= elements; ++j) {
    nodes[j] = t_max * static_cast<double>(j) / static_cast<double>(elements);
  }
  nodes[elements] = t_max;
  return Mesh1D(std::move(nodes));
}

Mesh1D Mesh1D::refined() const {
  std::vector<double> nodes;
  nodes.reserve(2 * nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    nodes.push_back(nodes_[i]);
    nodes.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  nodes.push_back(nodes_.back());
  return Mesh1D(std::move(nodes));
}

Mesh1D Mesh1D::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ArgumentError("Mesh1D::scaled: factor must be positive");
  }
  std::vector<double> nodes(nodes_);
  for (auto& t : nodes) t *= factor;
  return Mesh1D(std::move(nodes));
}

}  // namespace qdev::temporal
