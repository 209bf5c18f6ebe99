// Copyright 2026 The relaysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relaysim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {
namespace {

void require_same_length(const ComplexVector& a, const ComplexVector& b, const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  require_same_length(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  require_same_length(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& v : data_) acc += std::norm(v);
  return std::sqrt(acc);
}

Complex herm_inner(const ComplexVector& a, const ComplexVector& b) {
  require_same_length(a, b, "herm_inner");
  Complex acc = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) acc += std::conj(a[m]) * b[m];
  return acc;
}

double squared_norm(const ComplexVector& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return acc;
}

double norm(const ComplexVector& a) { return std::sqrt(squared_norm(a)); }

ComplexVector normalize(const ComplexVector& a) {
  const double n = norm(a);
  if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateInputError("normalize: zero or non-finite vector");
  return a * Complex(1.0 / n);
}

ComplexVector matvec(const ComplexMatrix& h, const ComplexVector& x) {
  if (h.cols() != x.size()) throw DimensionError("matvec: shape mismatch");
  ComplexVector y(h.rows());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < h.cols(); ++c) acc += h(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

ComplexVector matvec_herm(const ComplexMatrix& h, const ComplexVector& x) {
  if (h.rows() != x.size()) throw DimensionError("matvec_herm: shape mismatch");
  ComplexVector y(h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t c = 0; c < h.cols(); ++c) y[c] += std::conj(h(r, c)) * x[r];
  }
  return y;
}

ComplexVector rank1_mmse_direction(const ComplexVector& g, double rho, const ComplexVector& h) {
  require_same_length(g, h, "rank1_mmse_direction");
  if (rho < 0.0) throw PreconditionError("rank1_mmse_direction: rho must be non-negative");
  const Complex coeff = rho * herm_inner(g, h) / (1.0 + rho * squared_norm(g));
  ComplexVector out = h;
  for (std::size_t m = 0; m < out.size(); ++m) out[m] -= coeff * g[m];
  return out;
}

std::pair<ComplexVector, bool> try_project_orthogonal(const ComplexVector& h,
                                                      const ComplexVector& g) {
  require_same_length(g, h, "project_orthogonal");
  const double gg = squared_norm(g);
  if (!(gg > 0.0)) return {h, false};
  const Complex coeff = herm_inner(g, h) / gg;
  ComplexVector out = h;
  for (std::size_t m = 0; m < out.size(); ++m) out[m] -= coeff * g[m];
  return {std::move(out), true};
}

ComplexVector project_orthogonal(const ComplexVector& h, const ComplexVector& g) {
  auto [out, ok] = try_project_orthogonal(h, g);
  if (!ok) throw DegenerateInputError("project_orthogonal: zero direction");
  return out;
}

ComplexVector unit_orthogonal_to(const ComplexVector& g) {
  if (g.size() < 2) throw DimensionError("unit_orthogonal_to: dimension must be >= 2");
  std::size_t best = 0;
  for (std::size_t m = 1; m < g.size(); ++m) {
    if (std::abs(g[m]) < std::abs(g[best])) best = m;
  }
  ComplexVector e(g.size());
  e[best] = 1.0;
  auto [proj, ok] = try_project_orthogonal(e, g);
  // A second pass cleans up the rounding left by the first.
  if (ok) proj = try_project_orthogonal(proj, g).first;
  return normalize(proj);
}

std::pair<ComplexVector, ComplexVector> random_orthonormal_pair(std::size_t dim, Rng& rng) {
  if (dim < 2) throw DimensionError("random_orthonormal_pair: dim must be >= 2");
  for (;;) {
    ComplexVector u(dim);
    ComplexVector q(dim);
    for (auto& v : u) v = rng.complex_normal(1.0);
    for (auto& v : q) v = rng.complex_normal(1.0);
    if (!(norm(u) > 0.0)) continue;
    u = normalize(u);
    for (int pass = 0; pass < 2; ++pass) q = try_project_orthogonal(q, u).first;
    // Gaussian draws are collinear with probability zero; redraw if rounding
    // says otherwise.
    if (!(norm(q) > 1e-8)) continue;
    return {std::move(u), normalize(q)};
  }
}

LuDecomposition::LuDecomposition(const ComplexMatrix& a) : n_(a.rows()), perm_(a.rows()) {
  if (a.rows() != a.cols()) throw DimensionError("LuDecomposition: matrix must be square");
  lu_.resize(n_ * n_);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) lu_[r * n_ + c] = a(r, c);
  for (std::size_t k = 0; k < n_; ++k) perm_[k] = k;

  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n_; ++r) {
      if (std::abs(lu_[r * n_ + k]) > std::abs(lu_[piv * n_ + k])) piv = r;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n_; ++c) std::swap(lu_[k * n_ + c], lu_[piv * n_ + c]);
      std::swap(perm_[k], perm_[piv]);
    }
    const Complex pivot = lu_[k * n_ + k];
    max_pivot = std::max(max_pivot, std::abs(pivot));
    min_pivot = std::min(min_pivot, std::abs(pivot));
    if (pivot == Complex(0.0)) continue;
    for (std::size_t r = k + 1; r < n_; ++r) {
      const Complex f = lu_[r * n_ + k] / pivot;
      lu_[r * n_ + k] = f;
      for (std::size_t c = k + 1; c < n_; ++c) lu_[r * n_ + c] -= f * lu_[k * n_ + c];
    }
  }
  pivot_condition_ = (min_pivot > 0.0) ? max_pivot / min_pivot
                                       : std::numeric_limits<double>::infinity();
}

bool LuDecomposition::singular() const noexcept { return !std::isfinite(pivot_condition_); }

ComplexVector LuDecomposition::solve(const ComplexVector& b) const {
  if (b.size() != n_) throw DimensionError("LuDecomposition::solve: shape mismatch");
  if (singular()) throw DegenerateInputError("LuDecomposition::solve: singular matrix");
  ComplexVector x(n_);
  for (std::size_t r = 0; r < n_; ++r) {
    Complex acc = b[perm_[r]];
    for (std::size_t c = 0; c < r; ++c) acc -= lu_[r * n_ + c] * x[c];
    x[r] = acc;
  }
  for (std::size_t r = n_; r-- > 0;) {
    Complex acc = x[r];
    for (std::size_t c = r + 1; c < n_; ++c) acc -= lu_[r * n_ + c] * x[c];
    x[r] = acc / lu_[r * n_ + r];
  }
  return x;
}

}  // namespace relaysim
