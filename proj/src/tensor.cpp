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

#include "holant/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "holant/errors.hpp"

namespace holant {

namespace {
std::atomic<std::size_t> g_cap{std::size_t{1} << 20};
}

std::size_t entryCap() { return g_cap.load(); }
void setEntryCap(std::size_t cap) { g_cap.store(cap); }

std::size_t checkedPow(int q, int n) {
  if (q < 1 || n < 0) throw ArityError("invalid domain size or arity");
  std::size_t cap = entryCap();
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > cap / static_cast<std::size_t>(q)) {
      throw ResourceError("tensor of size " + std::to_string(q) + "^" + std::to_string(n) +
                          " exceeds entry cap " + std::to_string(cap));
    }
    r *= static_cast<std::size_t>(q);
  }
  return r;
}

ConstraintFunction::ConstraintFunction(int q, int arity)
    : q_(q), arity_(arity), entries_(checkedPow(q, arity)) {}

ConstraintFunction::ConstraintFunction(int q, int arity, std::vector<GQ> entries)
    : q_(q), arity_(arity), entries_(std::move(entries)) {
  if (entries_.size() != checkedPow(q, arity)) {
    throw ArityError("entry count " + std::to_string(entries_.size()) + " does not match q^n");
  }
}

std::size_t ConstraintFunction::encode(const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != arity_) throw ArityError("tuple length mismatch");
  std::size_t idx = 0;
  for (int v : x) {
    if (v < 0 || v >= q_) throw ArityError("tuple entry out of domain");
    idx = idx * q_ + v;
  }
  return idx;
}

std::vector<int> ConstraintFunction::decode(std::size_t index) const {
  std::vector<int> x(arity_);
  for (int i = arity_ - 1; i >= 0; --i) {
    x[i] = static_cast<int>(index % q_);
    index /= q_;
  }
  return x;
}

bool ConstraintFunction::isReal() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const GQ& v) { return v.isReal(); });
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (cols != 0 && rows > entryCap() / cols) throw ResourceError("matrix exceeds entry cap");
  a_.resize(rows * cols);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = 1;
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  if (m >= 0) {
    r.q = q;
    r.m = d;
    r.d = m;
  }
  return r;
}

Matrix Matrix::conj() const {
  Matrix r = *this;
  for (auto& v : r.a_) v = v.conj();
  return r;
}

Matrix Matrix::adjoint() const { return transpose().conj(); }

std::string Matrix::toString() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j);
  }
  os << "]";
  return os.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw CompositionError("matrix product shape mismatch");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const GQ& x = a(i, k);
      if (x.isZero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j).addProduct(x, b(k, j));
    }
  }
  if (a.m >= 0 && b.d >= 0) {
    r.q = a.q;
    r.m = a.m;
    r.d = b.d;
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw CompositionError("matrix sum shape mismatch");
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + scale(b, GQ(-1)); }

Matrix scale(const Matrix& a, const GQ& s) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) *= s;
  return r;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const GQ& x = a(i, j);
      if (x.isZero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
    }
  if (a.m >= 0 && b.m >= 0) {
    r.q = a.q ? a.q : b.q;
    r.m = a.m + b.m;
    r.d = a.d + b.d;
  }
  return r;
}

Matrix applyOnSlice(const Matrix& x, std::size_t pre, std::size_t post, const Matrix& b) {
  const std::size_t xr = x.rows(), xc = x.cols(), c = b.cols();
  if (b.rows() != pre * xc * post) throw CompositionError("slice product shape mismatch");
  Matrix r(pre * xr * post, c);
  const std::size_t block = post * c;
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t i = 0; i < xr; ++i)
      for (std::size_t j = 0; j < xc; ++j) {
        const GQ& v = x(i, j);
        if (v.isZero()) continue;
        const GQ* src = &b.data()[(p * xc + j) * block];
        GQ* dst = &r((p * xr + i) * post, 0);
        for (std::size_t s = 0; s < block; ++s)
          if (!src[s].isZero()) dst[s].addProduct(v, src[s]);
      }
  return r;
}

Matrix identityPower(int q, int k) {
  Matrix r = Matrix::identity(checkedPow(q, k));
  r.q = q;
  r.m = k;
  r.d = k;
  return r;
}

Matrix flatten(const ConstraintFunction& f, int m, int d) {
  if (m < 0 || d < 0 || m + d != f.arity()) {
    throw ArityError("flatten split (" + std::to_string(m) + "," + std::to_string(d) +
                     ") does not match arity " + std::to_string(f.arity()));
  }
  const int q = f.q();
  std::size_t cols = checkedPow(q, d);
  Matrix r(checkedPow(q, m), cols);
  r.q = q;
  r.m = m;
  r.d = d;
  std::vector<int> x(f.arity(), 0);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    std::size_t row = 0, col = 0;
    for (int i = 0; i < m; ++i) row = row * q + x[i];
    for (int i = m + d - 1; i >= m; --i) col = col * q + x[i];
    r(row, col) = f[idx];
    for (int i = f.arity() - 1; i >= 0; --i) {
      if (++x[i] < q) break;
      x[i] = 0;
    }
  }
  return r;
}

ConstraintFunction unflatten(const Matrix& mat, int q, int m, int d) {
  if (mat.rows() != checkedPow(q, m) || mat.cols() != checkedPow(q, d)) {
    throw ArityError("unflatten shape mismatch");
  }
  ConstraintFunction f(q, m + d);
  std::vector<int> x(m + d, 0);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    std::size_t row = 0, col = 0;
    for (int i = 0; i < m; ++i) row = row * q + x[i];
    for (int i = m + d - 1; i >= m; --i) col = col * q + x[i];
    f[idx] = mat(row, col);
    for (int i = m + d - 1; i >= 0; --i) {
      if (++x[i] < q) break;
      x[i] = 0;
    }
  }
  return f;
}

namespace {

// result(x) = f(x[src[0]], .., x[src[n-1]])
ConstraintFunction permuteArgs(const ConstraintFunction& f, const std::vector<int>& src) {
  ConstraintFunction r(f.q(), f.arity());
  const int n = f.arity();
  std::vector<int> x(n, 0), y(n);
  for (std::size_t idx = 0; idx < r.size(); ++idx) {
    for (int i = 0; i < n; ++i) y[i] = x[src[i]];
    r[idx] = f.at(y);
    for (int i = n - 1; i >= 0; --i) {
      if (++x[i] < f.q()) break;
      x[i] = 0;
    }
  }
  return r;
}

}  // namespace

ConstraintFunction rotate(const ConstraintFunction& f, int r) {
  const int n = f.arity();
  if (n == 0 ? r != 0 : (r < 0 || r >= n)) throw ArityError("rotation out of range");
  if (r == 0) return f;
  // result_{x1..xn} = F_{x_{r+1}..x_n x_1..x_r}; argument j of F reads x_{(j+r) mod n}
  std::vector<int> src(n);
  for (int j = 0; j < n; ++j) src[j] = (j + r) % n;
  return permuteArgs(f, src);
}

ConstraintFunction reflect(const ConstraintFunction& f) {
  const int n = f.arity();
  std::vector<int> src(n);
  for (int j = 0; j < n; ++j) src[j] = n - 1 - j;
  return permuteArgs(f, src);
}

ConstraintFunction conjugate(const ConstraintFunction& f) {
  ConstraintFunction r = f;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i].conj();
  return r;
}

ConstraintFunction dagger(const ConstraintFunction& f) { return conjugate(reflect(f)); }

ConstraintFunction equality(int q, int n) {
  ConstraintFunction r(q, n);
  if (n == 0) {
    r[0] = 1;
    return r;
  }
  std::size_t step = 0;
  for (int i = 0; i < n; ++i) step = step * q + 1;
  for (int x = 0; x < q; ++x) r[x * step] = 1;
  return r;
}

ConstraintFunction allOnes(int q, int n) {
  ConstraintFunction r(q, n);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1;
  return r;
}

ConstraintFunction directSum(const ConstraintFunction& f, const ConstraintFunction& g) {
  if (f.arity() != g.arity()) throw ArityError("directSum arity mismatch");
  const int n = f.arity();
  const int qf = f.q(), qs = f.q() + g.q();
  if (n == 0) throw ArityError("directSum needs arity at least 1");
  if (n == 1) {
    ConstraintFunction r(qs, 2);
    for (int x = 0; x < qf; ++x) r.at({x, x}) = f[x];
    for (int x = 0; x < g.q(); ++x) r.at({qf + x, qf + x}) = g[x];
    return r;
  }
  ConstraintFunction r(qs, n);
  for (std::size_t i = 0; i < f.size(); ++i) r.at(f.decode(i)) = f[i];
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto x = g.decode(i);
    for (int& v : x) v += qf;
    r.at(x) = g[i];
  }
  return r;
}

ConstraintFunction arityReduce(const ConstraintFunction& f) {
  if (f.arity() < 2) throw ArityError("arityReduce needs arity at least 2");
  ConstraintFunction r(f.q(), f.arity() - 1);
  const std::size_t block = r.size();
  for (int x1 = 0; x1 < f.q(); ++x1)
    for (std::size_t j = 0; j < block; ++j) r[j] += f[x1 * block + j];
  return r;
}

ConstraintFunction permuteDomain(const ConstraintFunction& f, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != f.q()) throw ArityError("permutation size mismatch");
  ConstraintFunction r(f.q(), f.arity());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = f.decode(i);
    for (int& v : x) v = perm[v];
    r.at(x) = f[i];
  }
  return r;
}

namespace {

void reduceAgainst(const RowEchelon& b, std::vector<GQ>& v) {
  for (std::size_t k = 0; k < b.rows.size(); ++k) {
    GQ c = v[b.pivots[k]];
    if (c.isZero()) continue;
    const auto& row = b.rows[k];
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!row[j].isZero()) v[j] -= c * row[j];
  }
}

}  // namespace

bool rrefInsert(RowEchelon& b, std::vector<GQ> v) {
  if (!b.rows.empty() && b.rows[0].size() != v.size()) throw ArityError("rref length mismatch");
  reduceAgainst(b, v);
  std::size_t p = 0;
  while (p < v.size() && v[p].isZero()) ++p;
  if (p == v.size()) return false;
  GQ inv = GQ(1) / v[p];
  for (auto& x : v) x *= inv;
  for (auto& row : b.rows) {
    GQ c = row[p];
    if (c.isZero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!v[j].isZero()) row[j] -= c * v[j];
  }
  auto pos = std::lower_bound(b.pivots.begin(), b.pivots.end(), p) - b.pivots.begin();
  b.pivots.insert(b.pivots.begin() + pos, p);
  b.rows.insert(b.rows.begin() + pos, std::move(v));
  return true;
}

bool rrefContains(const RowEchelon& b, std::vector<GQ> v) {
  reduceAgainst(b, v);
  return std::all_of(v.begin(), v.end(), [](const GQ& x) { return x.isZero(); });
}

}  // namespace holant
