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

#include "holant/contract.hpp"

#include <algorithm>
#include <set>

#include "holant/errors.hpp"
#include "holant/tensor.hpp"

namespace holant {

Factor makeFactor(int q, const std::vector<int>& args, const std::vector<GQ>& entries) {
  Factor f;
  std::vector<int> pos(args.size());
  for (std::size_t j = 0; j < args.size(); ++j) {
    auto it = std::find(f.vars.begin(), f.vars.end(), args[j]);
    pos[j] = static_cast<int>(it - f.vars.begin());
    if (it == f.vars.end()) f.vars.push_back(args[j]);
  }
  const int k = static_cast<int>(f.vars.size());
  f.table.resize(checkedPow(q, k));
  std::vector<int> a(k, 0);
  for (std::size_t idx = 0; idx < f.table.size(); ++idx) {
    std::size_t src = 0;
    for (std::size_t j = 0; j < args.size(); ++j) src = src * q + a[pos[j]];
    f.table[idx] = entries[src];
    for (int i = k - 1; i >= 0; --i) {
      if (++a[i] < q) break;
      a[i] = 0;
    }
  }
  return f;
}

namespace {

// Product of the given factors over the union of their variables; when
// elim >= 0 that variable is summed out.
Factor multiply(int q, const std::vector<const Factor*>& fs, int elim) {
  std::vector<int> u;
  for (const Factor* f : fs)
    for (int v : f->vars)
      if (v != elim && std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
  if (elim >= 0) u.push_back(elim);
  const int k = static_cast<int>(u.size());
  const std::size_t total = checkedPow(q, k);

  // stride of each union variable inside each factor's table
  std::vector<std::vector<std::size_t>> stride(fs.size(), std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::size_t s = 1;
    for (int j = static_cast<int>(fs[i]->vars.size()) - 1; j >= 0; --j) {
      int p = static_cast<int>(std::find(u.begin(), u.end(), fs[i]->vars[j]) - u.begin());
      stride[i][p] = s;
      s *= q;
    }
  }

  Factor r;
  r.vars.assign(u.begin(), u.end() - (elim >= 0 ? 1 : 0));
  r.table.resize(elim >= 0 ? total / q : total);
  std::vector<int> a(k, 0);
  std::vector<std::size_t> idx(fs.size(), 0);
  GQ prod;
  for (std::size_t flat = 0; flat < total; ++flat) {
    bool zero = false;
    for (std::size_t i = 0; i < fs.size() && !zero; ++i) zero = fs[i]->table[idx[i]].isZero();
    if (!zero) {
      prod = fs.empty() ? GQ(1) : fs[0]->table[idx[0]];
      for (std::size_t i = 1; i < fs.size(); ++i) prod *= fs[i]->table[idx[i]];
      r.table[elim >= 0 ? flat / q : flat] += prod;
    }
    for (int j = k - 1; j >= 0; --j) {
      for (std::size_t i = 0; i < fs.size(); ++i) idx[i] += stride[i][j];
      if (++a[j] < q) break;
      for (std::size_t i = 0; i < fs.size(); ++i) idx[i] -= stride[i][j] * q;
      a[j] = 0;
    }
  }
  return r;
}

}  // namespace

std::vector<GQ> contract(int q, int numVars, std::vector<Factor> factors, const std::vector<int>& outputs) {
  std::set<int> outSet(outputs.begin(), outputs.end());
  if (outSet.size() != outputs.size()) throw InternalError("contract outputs must be distinct");
  std::set<int> used(outputs.begin(), outputs.end());
  std::set<int> elim;
  for (const auto& f : factors)
    for (int v : f.vars) {
      used.insert(v);
      if (!outSet.count(v)) elim.insert(v);
    }
  const int freeVars = numVars - static_cast<int>(used.size());
  const std::size_t cap = entryCap();

  while (!elim.empty()) {
    int best = -1;
    std::size_t bestSize = 0;
    for (int v : elim) {
      std::set<int> u;
      for (const auto& f : factors)
        if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end()) u.insert(f.vars.begin(), f.vars.end());
      std::size_t size = 1;
      bool over = false;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (size > cap / q) {
          over = true;
          break;
        }
        size *= q;
      }
      if (over) size = cap + 1;
      if (best < 0 || size < bestSize) {
        best = v;
        bestSize = size;
      }
    }
    if (bestSize > cap) throw ResourceError("contraction intermediate exceeds entry cap");
    std::vector<const Factor*> touching;
    std::vector<Factor> rest;
    for (const auto& f : factors)
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end()) touching.push_back(&f);
    Factor nf = multiply(q, touching, best);
    for (auto& f : factors)
      if (std::find(f.vars.begin(), f.vars.end(), best) == f.vars.end()) rest.push_back(std::move(f));
    rest.push_back(std::move(nf));
    factors = std::move(rest);
    elim.erase(best);
  }

  std::vector<const Factor*> all;
  for (const auto& f : factors) all.push_back(&f);
  Factor fin = multiply(q, all, -1);

  // reorder onto outputs; outputs absent from every factor are unconstrained
  const std::size_t outSize = checkedPow(q, static_cast<int>(outputs.size()));
  std::vector<GQ> out(outSize);
  std::vector<std::size_t> st(fin.vars.size());
  for (std::size_t j = 0; j < fin.vars.size(); ++j) {
    std::size_t p = std::find(outputs.begin(), outputs.end(), fin.vars[j]) - outputs.begin();
    std::size_t s = 1;
    for (std::size_t t = p + 1; t < outputs.size(); ++t) s *= q;
    st[j] = s;
  }
  GQ mult = 1;
  for (int i = 0; i < freeVars; ++i) mult *= GQ(q);
  for (std::size_t flat = 0; flat < outSize; ++flat) {
    std::size_t src = 0;
    for (std::size_t j = 0; j < fin.vars.size(); ++j) src = src * q + (flat / st[j]) % q;
    out[flat] = fin.table[src] * mult;
  }
  return out;
}

}  // namespace holant
