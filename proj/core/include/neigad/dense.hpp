// Copyright 2026 The NeiGAD Authors
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

#include <cstdint>
#include <span>
#include <vector>

namespace neigad {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::int64_t rows, std::int64_t cols);
  DenseMatrix(std::int64_t rows, std::int64_t cols, std::vector<double> values);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t size() const { return rows_ * cols_; }

  double& operator()(std::int64_t i, std::int64_t j) { return v_[i * cols_ + j]; }
  double operator()(std::int64_t i, std::int64_t j) const { return v_[i * cols_ + j]; }

  std::span<double> row(std::int64_t i) {
    return std::span<double>(v_.data() + i * cols_, static_cast<std::size_t>(cols_));
  }
  std::span<const double> row(std::int64_t i) const {
    return std::span<const double>(v_.data() + i * cols_, static_cast<std::size_t>(cols_));
  }

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.v_ == b.v_;
  }

 private:
  std::int64_t rows_ = 0;
  std::int64_t cols_ = 0;
  std::vector<double> v_;
};

DenseMatrix identity_matrix(std::int64_t n);

// c = a · b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// c = aᵀ · b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// c = a · bᵀ
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

// a += coeff · b
void add_scaled(DenseMatrix& a, const DenseMatrix& b, double coeff = 1.0);

// ‖a − b‖_F² and ‖a‖_F²
double frobenius_sq_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_sq(const DenseMatrix& a);

}  // namespace neigad
