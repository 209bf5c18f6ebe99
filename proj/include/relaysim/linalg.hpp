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

#pragma once

// Small dense complex vectors and matrices for per-pair beamformer design.
//
// Everything the beamformers need reduces to inner products, projections and
// rank-1 updates of the identity, so there is no general inverse here. The
// only linear solve (orthonormal-basis transmit steering) goes through a
// partial-pivoting LU on an M x M matrix.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace relaysim {

class Rng;

using Complex = std::complex<double>;

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t size) : data_(size) {}
  ComplexVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator[](std::size_t k) { return data_[k]; }
  const Complex& operator[](std::size_t k) const { return data_[k]; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<const Complex> view() const noexcept { return data_; }
  const std::vector<Complex>& values() const noexcept { return data_; }

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex scale);

  friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
  friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
  friend ComplexVector operator*(Complex s, ComplexVector a) { return a *= s; }
  friend ComplexVector operator*(ComplexVector a, Complex s) { return a *= s; }

  friend bool operator==(const ComplexVector&, const ComplexVector&) = default;

 private:
  std::vector<Complex> data_;
};

// Row-major dense matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  // Rows given as nested initializer lists; all rows must have equal length.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double frobenius_norm() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// a^H b = sum conj(a_m) b_m. Throws DimensionError on length mismatch.
Complex herm_inner(const ComplexVector& a, const ComplexVector& b);

double squared_norm(const ComplexVector& a);
double norm(const ComplexVector& a);

// a / ||a||. Throws DegenerateInputError for the zero vector.
ComplexVector normalize(const ComplexVector& a);

// H x and H^H x.
ComplexVector matvec(const ComplexMatrix& h, const ComplexVector& x);
ComplexVector matvec_herm(const ComplexMatrix& h, const ComplexVector& x);

// (I + rho g g^H)^{-1} h by Sherman-Morrison:
//   h - rho (g^H h) / (1 + rho ||g||^2) g
// Normalizing the result gives the max-SINR receive direction against a
// rank-1 interferer g at strength rho.
ComplexVector rank1_mmse_direction(const ComplexVector& g, double rho, const ComplexVector& h);

// Component of h orthogonal to g: h - (g^H h / g^H g) g. Throws
// DegenerateInputError when g = 0.
ComplexVector project_orthogonal(const ComplexVector& h, const ComplexVector& g);

// Non-throwing variant: returns (h, false) when g = 0.
std::pair<ComplexVector, bool> try_project_orthogonal(const ComplexVector& h,
                                                      const ComplexVector& g);

// Deterministic unit vector orthogonal to g (g need not be unit). Picks the
// canonical basis vector least aligned with g and projects g out of it.
// Requires g.size() >= 2.
ComplexVector unit_orthogonal_to(const ComplexVector& g);

// Two random orthonormal vectors: independent complex-Gaussian draws followed
// by modified Gram-Schmidt with one re-orthogonalization pass.
std::pair<ComplexVector, ComplexVector> random_orthonormal_pair(std::size_t dim, Rng& rng);

// LU factorization with partial pivoting of a square matrix.
class LuDecomposition {
 public:
  explicit LuDecomposition(const ComplexMatrix& a);

  // Largest / smallest |pivot|. Infinite when a pivot is exactly zero. A cheap
  // lower-bound style estimate of the condition number, adequate for flagging
  // numerically singular inter-relay channels.
  double pivot_condition() const noexcept { return pivot_condition_; }
  bool singular() const noexcept;

  ComplexVector solve(const ComplexVector& b) const;

 private:
  std::size_t n_;
  std::vector<Complex> lu_;
  std::vector<std::size_t> perm_;
  double pivot_condition_;
};

}  // namespace relaysim
