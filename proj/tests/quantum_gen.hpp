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

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "holant/csp.hpp"
#include "holant/decomposer.hpp"
#include "holant/quantum.hpp"
#include "test_util.hpp"

// Generators for quantum permutation matrices, intertwining triples and
// planar closed grids.
namespace holant::testing {

// (U A)_{ij} = Σ_k u_ik A_kj and (A U)_{ij} = Σ_k A_ik u_kj for scalar A.
inline bool commutesWith(const ExactQPM& u, const ConstraintFunction& a) {
  for (int i = 0; i < u.q; ++i)
    for (int j = 0; j < u.q; ++j) {
      Op<GQ> l(u.dim), r(u.dim);
      for (int k = 0; k < u.q; ++k) {
        l.addScaled(u.at(i, k), a.at({k, j}));
        r.addScaled(u.at(k, j), a.at({i, k}));
      }
      if (!(l == r)) return false;
    }
  return true;
}

inline std::vector<int> randomPerm(Rng& rng, int q) {
  std::vector<int> p(q);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

// Rank-one rational projector v v^T / |v|^2, occasionally 0 or 1.
inline Op<GQ> randomProjector(Rng& rng) {
  int kind = testing::uniform(rng, 0, 5);
  if (kind == 0) return Op<GQ>(2);
  if (kind == 1) return Op<GQ>::identity(2);
  int a = testing::uniform(rng, -3, 3), b = testing::uniform(rng, 1, 3);
  mpq_class n = a * a + b * b;
  Op<GQ> p(2);
  p(0, 0) = GQ(mpq_class(a * a) / n);
  p(0, 1) = p(1, 0) = GQ(mpq_class(a * b) / n);
  p(1, 1) = GQ(mpq_class(b * b) / n);
  return p;
}

// Direct sum of 2x2 blocks [[P,1-P],[1-P,P]] (and a 1 for odd q), rows and
// columns shuffled.
inline ExactQPM randomQPM(Rng& rng, int q) {
  ExactQPM base;
  base.q = q;
  base.dim = 2;
  base.u.assign(static_cast<std::size_t>(q) * q, Op<GQ>(2));
  const Op<GQ> one = Op<GQ>::identity(2);
  for (int b = 0; b + 1 < q; b += 2) {
    Op<GQ> p = randomProjector(rng);
    base.at(b, b) = base.at(b + 1, b + 1) = p;
    base.at(b, b + 1) = base.at(b + 1, b) = one - p;
  }
  if (q % 2) base.at(q - 1, q - 1) = one;
  auto s = randomPerm(rng, q), t = randomPerm(rng, q);
  ExactQPM u = base;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) u.at(i, j) = base.at(s[i], t[j]);
  return u;
}

inline ConstraintFunction symmetric01(int q, int mask) {
  ConstraintFunction a(q, 2);
  int bit = 0;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j, ++bit)
      if (mask >> bit & 1) a.at({i, j}) = a.at({j, i}) = 1;
  return a;
}

// 0-1 symmetric 4x4 matrices commuting with the block unitary, by exhaustion.
inline std::vector<ConstraintFunction> commutingSignatures(const ExactQPM& u) {
  std::vector<ConstraintFunction> hits;
  for (int mask = 0; mask < 1024; ++mask) {
    auto a = symmetric01(4, mask);
    if (commutesWith(u, a)) hits.push_back(a);
  }
  return hits;
}

// Random (U, F, G) with n ≤ 3, q ≤ 4, dim ≤ 2: roughly half intertwined.
struct Triple {
  ExactQPM u;
  ConstraintFunction f, g;
};

inline Triple randomTriple(Rng& rng) {
  int q = testing::uniform(rng, 1, 4), n = testing::uniform(rng, 1, 3);
  Triple t;
  int kind = testing::uniform(rng, 0, 3);
  if (kind == 0) {  // classical, g = permuted f
    auto perm = randomPerm(rng, q);
    t.u = liftPermutation(inverse(perm));
    t.f = testing::randomFunction(rng, q, n, true);
    t.g = permuteDomain(t.f, perm);
  } else if (kind == 1) {  // combination of equality and all-ones
    t.u = q >= 2 ? randomQPM(rng, q) : liftPermutation({0});
    t.f = ConstraintFunction(q, n);
    GQ a = testing::randomScalar(rng, true), b = testing::randomScalar(rng, true);
    auto e = equality(q, n), j = allOnes(q, n);
    for (std::size_t i = 0; i < t.f.size(); ++i) t.f[i] = a * e[i] + b * j[i];
    t.g = t.f;
  } else {  // random, almost always failing
    t.u = q >= 2 ? randomQPM(rng, q) : liftPermutation({0});
    t.f = testing::randomFunction(rng, q, n, true);
    t.g = kind == 2 ? testing::randomFunction(rng, q, n, true) : t.f;
  }
  return t;
}

inline CSPInstance randomInstance(Rng& rng, const SignatureSet& fs, int maxV, int maxC) {
  std::vector<std::string> names;
  for (const auto& [name, f] : fs.all()) names.push_back(name);
  CSPInstance k;
  k.numVariables = testing::uniform(rng, 1, maxV);
  int nc = testing::uniform(rng, 1, maxC);
  for (int c = 0; c < nc; ++c) {
    std::string fn = names[testing::uniform(rng, 0, static_cast<int>(names.size()) - 1)];
    std::vector<int> args(fs.get(fn)->arity());
    for (int& v : args) v = testing::uniform(rng, 0, k.numVariables - 1);
    k.constraints.push_back({fn, args});
  }
  return k;
}

inline std::vector<Gadget> planarGrids(Rng& rng, const SignatureSet& fs, int count, int maxV, int maxC, int maxWidth = 6) {
  std::vector<Gadget> out;
  while (static_cast<int>(out.size()) < count) {
    auto k = randomInstance(rng, fs, maxV, maxC);
    auto pr = isPlanarInstance(k, fs);
    if (!pr.planar) continue;
    // keep the row vectors of the sandwich small: q^width operator entries
    int width = 0;
    for (const auto& f : factorSequence(decompose(*pr.grid))) width = std::max(width, f.r + f.d + f.t);
    if (width <= maxWidth) out.push_back(*pr.grid);
  }
  return out;
}

inline std::map<std::string, std::string> identityMap(const SignatureSet& fs) {
  std::map<std::string, std::string> m;
  for (const auto& [name, f] : fs.all()) m[name] = name;
  return m;
}

}  // namespace holant::testing
