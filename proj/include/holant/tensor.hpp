// Copyright 2026 The Holant Toolkit Authors
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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "holant/scalar.hpp"

namespace holant {

// Maximum number of entries any dense tensor or matrix may hold.
std::size_t entryCap();
void setEntryCap(std::size_t cap);

// q^n with overflow and cap checks; throws ResourceError.
std::size_t checkedPow(int q, int n);

// Dense tensor over [q]^n, row-major with x1 most significant.
class ConstraintFunction {
 public:
  ConstraintFunction() : ConstraintFunction(1, 0) {}
  ConstraintFunction(int q, int arity);
  ConstraintFunction(int q, int arity, std::vector<GQ> entries);

  int q() const { return q_; }
  int arity() const { return arity_; }
  std::size_t size() const { return entries_.size(); }

  const GQ& operator[](std::size_t i) const { return entries_[i]; }
  GQ& operator[](std::size_t i) { return entries_[i]; }
  const GQ& at(const std::vector<int>& x) const { return entries_[encode(x)]; }
  GQ& at(const std::vector<int>& x) { return entries_[encode(x)]; }
  const std::vector<GQ>& entries() const { return entries_; }

  std::size_t encode(const std::vector<int>& x) const;
  std::vector<int> decode(std::size_t index) const;

  bool isReal() const;
  bool operator==(const ConstraintFunction& o) const {
    return q_ == o.q_ && arity_ == o.arity_ && entries_ == o.entries_;
  }
  bool operator!=(const ConstraintFunction& o) const { return !(*this == o); }

 private:
  int q_;
  int arity_;
  std::vector<GQ> entries_;
};

// Dense matrix over Q(i). When produced by flatten it carries (q, m, d).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const GQ& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  GQ& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const std::vector<GQ>& data() const { return a_; }

  int q = 0;
  int m = -1;
  int d = -1;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const;
  Matrix adjoint() const;
  Matrix conj() const;
  std::string toString() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GQ> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, const GQ& s);
Matrix kronecker(const Matrix& a, const Matrix& b);
// I_q^{⊗k}
Matrix identityPower(int q, int k);
// (I_pre ⊗ X ⊗ I_post) B without forming the Kronecker product; B has
// pre * X.cols() * post rows.
Matrix applyOnSlice(const Matrix& x, std::size_t pre, std::size_t post, const Matrix& b);

Matrix flatten(const ConstraintFunction& f, int m, int d);
ConstraintFunction unflatten(const Matrix& mat, int q, int m, int d);

ConstraintFunction rotate(const ConstraintFunction& f, int r);
ConstraintFunction reflect(const ConstraintFunction& f);
ConstraintFunction conjugate(const ConstraintFunction& f);
ConstraintFunction dagger(const ConstraintFunction& f);
ConstraintFunction equality(int q, int n);
ConstraintFunction allOnes(int q, int n);
ConstraintFunction directSum(const ConstraintFunction& f, const ConstraintFunction& g);
ConstraintFunction arityReduce(const ConstraintFunction& f);
// Relabel the domain: result(π x1, .., π xn) = f(x1..xn).
ConstraintFunction permuteDomain(const ConstraintFunction& f, const std::vector<int>& perm);

// Exact rank and reduced row echelon form over Q(i).
struct RowEchelon {
  std::vector<std::vector<GQ>> rows;  // reduced, pivot entries 1
  std::vector<std::size_t> pivots;
};
// Attempts to add v; returns true iff v was independent of the current rows.
bool rrefInsert(RowEchelon& basis, std::vector<GQ> v);
bool rrefContains(const RowEchelon& basis, std::vector<GQ> v);

}  // namespace holant
