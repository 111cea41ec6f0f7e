#include "qdev/numerics/eigen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "qdev/errors.hpp"

namespace qdev::numerics {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void check_inputs(const SymMatrix& B, const SymMatrix& K, std::size_t m) {
  if (B.order() != K.order()) throw ArgumentError("generalized eig: order mismatch");
  if (m > B.order()) {
    throw ArgumentError("generalized eig: requested " + std::to_string(m) +
                        " eigenpairs of an order-" + std::to_string(B.order()) + " pencil");
  }
  if (!B.all_finite() || !K.all_finite()) {
    throw ArgumentError("generalized eig: non-finite matrix entry");
  }
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigSolution solve_dense(const SymMatrix& B, const SymMatrix& K, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(B.order());
  if (B.order() > kMaxDenseOrder) {
    throw ArgumentError("generalized eig: dense path limited to order " +
                        std::to_string(kMaxDenseOrder));
  }
  const auto b_full = B.to_dense();
  const auto k_full = K.to_dense();
  const Eigen::MatrixXd bm = Eigen::Map<const RowMatrix>(b_full.data(), n, n);
  const Eigen::MatrixXd km = Eigen::Map<const RowMatrix>(k_full.data(), n, n);

  if (Eigen::LLT<Eigen::MatrixXd>(bm).info() != Eigen::Success) {
    throw DefinitenessError("generalized eig: B is not positive definite");
  }
  if (Eigen::LLT<Eigen::MatrixXd>(km).info() != Eigen::Success) {
    throw DefinitenessError("generalized eig: K is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      bm, km, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) {
    throw DefinitenessError("generalized eig: reduction failed");
  }

  EigSolution out;
  out.order = B.order();
  out.values.resize(m);
  out.vectors.resize(B.order() * m);
  for (std::size_t j = 0; j < m; ++j) {
    out.values[j] = es.eigenvalues()(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < B.order(); ++i) {
      out.vectors[j * B.order() + i] =
          es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

// Tridiagonal pencil stored as diagonals and sub-diagonals.
struct Pencil {
  std::vector<double> bd, be, kd, ke;  // be[i], ke[i] couple rows i and i + 1

  explicit Pencil(const SymMatrix& B, const SymMatrix& K) {
    const std::size_t n = B.order();
    bd.resize(n);
    kd.resize(n);
    be.resize(n > 0 ? n - 1 : 0);
    ke.resize(be.size());
    for (std::size_t i = 0; i < n; ++i) {
      bd[i] = B(i, i);
      kd[i] = K(i, i);
      if (i + 1 < n) {
        be[i] = B(i + 1, i);
        ke[i] = K(i + 1, i);
      }
    }
  }

  std::size_t size() const { return bd.size(); }

  // Negative pivots of the LDL^T factorization of B - sigma K.
  std::size_t count_below(double sigma) const {
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t negatives = 0;
    double q = bd[0] - sigma * kd[0];
    for (std::size_t i = 0;; ++i) {
      if (std::abs(q) < tiny) q = -tiny;
      if (q < 0.0) ++negatives;
      if (i + 1 == size()) break;
      const double c = be[i] - sigma * ke[i];
      q = (bd[i + 1] - sigma * kd[i + 1]) - c * (c / q);
    }
    return negatives;
  }

  bool positive_definite(const std::vector<double>& d, const std::vector<double>& e) const {
    double q = d[0];
    for (std::size_t i = 0;; ++i) {
      if (!(q > 0.0)) return false;
      if (i + 1 == size()) return true;
      q = d[i + 1] - e[i] * (e[i] / q);
    }
  }

  std::vector<double> apply_k(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = kd[i] * x[i];
      if (i > 0) s += ke[i - 1] * x[i - 1];
      if (i + 1 < n) s += ke[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }

  double k_dot(std::span<const double> x, std::span<const double> y) const {
    const auto ky = apply_k(y);
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += x[i] * ky[i];
    return s;
  }
};

// Solves T x = rhs for the tridiagonal T = B - sigma K with partial pivoting,
// overwriting rhs with x. Zero pivots are replaced by a tiny perturbation,
// which is the intended behavior during inverse iteration.
void solve_shifted(const Pencil& p, double sigma, std::vector<double>& rhs) {
  const std::size_t n = p.size();
  std::vector<double> dl(n > 0 ? n - 1 : 0), d(n), du(dl.size()), du2(n > 1 ? n - 2 : 0, 0.0);
  std::vector<std::uint8_t> swapped(dl.size(), 0);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = p.bd[i] - sigma * p.kd[i];
    scale = std::max(scale, std::abs(p.bd[i]) + std::abs(sigma * p.kd[i]));
    if (i + 1 < n) {
      dl[i] = p.be[i] - sigma * p.ke[i];
      du[i] = dl[i];
    }
  }
  const double pivmin = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  // LU with row interchanges, LAPACK dgttrf layout.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (std::abs(d[i]) < pivmin) d[i] = std::copysign(pivmin, d[i] == 0.0 ? 1.0 : d[i]);
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double t = du[i];
      du[i] = d[i + 1];
      d[i + 1] = t - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (std::abs(d[n - 1]) < pivmin) d[n - 1] = std::copysign(pivmin, d[n - 1] == 0.0 ? 1.0 : d[n - 1]);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      const double t = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = t - dl[i] * rhs[i];
    } else {
      rhs[i + 1] -= dl[i] * rhs[i];
    }
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) {
    rhs[ii] = (rhs[ii] - du[ii] * rhs[ii + 1] - du2[ii] * rhs[ii + 2]) / d[ii];
  }
}

double bisect_eigenvalue(const Pencil& p, std::size_t index, double lo, double hi) {
  // Invariant: count_below(lo) <= index < count_below(hi).
  for (int iter = 0; iter < 256; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      break;
    }
    if (p.count_below(mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EigSolution solve_tridiagonal(const SymMatrix& B, const SymMatrix& K, std::size_t m) {
  if (!B.is_tridiagonal() || !K.is_tridiagonal()) {
    throw ArgumentError("generalized eig: tridiagonal path needs bandwidth <= 1");
  }
  const Pencil p(B, K);
  const std::size_t n = p.size();
  if (!p.positive_definite(p.bd, p.be)) {
    throw DefinitenessError("generalized eig: B is not positive definite");
  }
  if (!p.positive_definite(p.kd, p.ke)) {
    throw DefinitenessError("generalized eig: K is not positive definite");
  }

  EigSolution out;
  out.order = n;
  out.values.resize(m);
  out.vectors.assign(n * m, 0.0);
  if (m == 0) return out;

  // B positive definite => every eigenvalue is positive.
  double upper = 1.0;
  while (p.count_below(upper) < m) {
    upper *= 2.0;
    if (!std::isfinite(upper)) throw ConsistencyError("generalized eig: no upper bracket");
  }
  for (std::size_t j = 0; j < m; ++j) {
    out.values[j] = bisect_eigenvalue(p, j, 0.0, upper);
  }

  // Deterministic start vector (64-bit LCG), then inverse iteration with
  // K-Gram-Schmidt against earlier members of the same cluster.
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  auto next_uniform = [&state] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  };
  for (std::size_t j = 0; j < m; ++j) {
    const double lambda = out.values[j];
    std::vector<double> x(n);
    for (auto& v : x) v = next_uniform();
    std::size_t cluster_begin = j;
    while (cluster_begin > 0 &&
           std::abs(out.values[cluster_begin - 1] - lambda) <= 1e-3 * std::abs(lambda)) {
      --cluster_begin;
    }
    for (int it = 0; it < 4; ++it) {
      auto rhs = p.apply_k(x);
      solve_shifted(p, lambda, rhs);
      x = std::move(rhs);
      for (std::size_t c = cluster_begin; c < j; ++c) {
        const auto prev = out.vector(c);
        const double proj = p.k_dot(prev, x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * prev[i];
      }
      const double nrm = std::sqrt(p.k_dot(x, x));
      if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw ConsistencyError("generalized eig: inverse iteration broke down");
      }
      for (auto& v : x) v /= nrm;
    }
    std::copy(x.begin(), x.end(), out.vector(j).begin());
  }
  return out;
}

}  // namespace

double pair_residual(const SymMatrix& B, const SymMatrix& K, double lambda,
                     std::span<const double> v) {
  const auto bv = B.multiply(v);
  const auto kv = K.multiply(v);
  std::vector<double> r(bv.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = bv[i] - lambda * kv[i];
  const double denom = norm2(bv) + std::abs(lambda) * norm2(kv);
  return denom > 0.0 ? norm2(r) / denom : norm2(r);
}

std::size_t sturm_count(const SymMatrix& B, const SymMatrix& K, double sigma) {
  if (B.order() != K.order()) throw ArgumentError("sturm_count: order mismatch");
  if (!B.is_tridiagonal() || !K.is_tridiagonal()) {
    throw ArgumentError("sturm_count: tridiagonal matrices required");
  }
  return Pencil(B, K).count_below(sigma);
}

EigSolution solve_sym_generalized_eig(const SymMatrix& B, const SymMatrix& K, std::size_t m,
                                      EigMethod method) {
  check_inputs(B, K, m);
  if (method == EigMethod::automatic) {
    method = B.is_tridiagonal() && K.is_tridiagonal() ? EigMethod::tridiagonal : EigMethod::dense;
  }
  EigSolution out = method == EigMethod::tridiagonal ? solve_tridiagonal(B, K, m)
                                                     : solve_dense(B, K, m);
  for (std::size_t j = 0; j < out.count(); ++j) {
    out.b_norm_check = std::max(out.b_norm_check, pair_residual(B, K, out.values[j], out.vector(j)));
  }
  return out;
}

}  // namespace qdev::numerics
