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


#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "holant/csp.hpp"
#include "holant/errors.hpp"
#include "holant/quantum.hpp"
#include "quantum_gen.hpp"
#include "test_util.hpp"

namespace holant {
namespace {

using testing::Rng;
using namespace testing;  // NOLINT
using Cx = std::complex<double>;

// ---- oracles ----

template <class T>
OperatorMatrix<T> mul(const OperatorMatrix<T>& a, const OperatorMatrix<T>& b) {
  OperatorMatrix<T> r(a.rows, b.cols, a.dim);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j)
      for (std::size_t k = 0; k < a.cols; ++k) r(i, j).addProduct(a(i, k), b(k, j));
  return r;
}

template <class T>
OperatorMatrix<T> adjointOf(const OperatorMatrix<T>& a) {
  OperatorMatrix<T> r(a.cols, a.rows, a.dim);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r(j, i) = a(i, j).adjoint();
  return r;
}

template <class T>
bool sameOM(const OperatorMatrix<T>& a, const OperatorMatrix<T>& b) {
  return a.rows == b.rows && a.cols == b.cols && a.e == b.e;
}

// ---- QPM relations ----

TEST(Qpm, BlockMagicUnitaryIsExactAndNoncommutative) {
  ExactQPM u = blockMagicUnitary();
  auto rep = validateQPM(u);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.maxViolation, 0.0);
  const Op<GQ>& p = u.at(0, 0);
  const Op<GQ>& q = u.at(2, 2);
  EXPECT_FALSE(p * q == q * p);
  EXPECT_TRUE(validateQPM(convertQPM<Cx>(u)).ok);
}

TEST(Qpm, ClassicalPermutationsPass) {
  Rng rng(3);
  for (int q = 1; q <= 5; ++q) {
    auto u = liftPermutation(randomPerm(rng, q));
    EXPECT_TRUE(validateQPM(u).ok);
  }
  EXPECT_THROW(liftPermutation({0, 0}), ArityError);
}

TEST(Qpm, PerturbationIsReported) {
  auto u = convertQPM<Cx>(blockMagicUnitary());
  auto bad = perturb(u, 0, 1, Cx(2 * kDefaultEpsilon, 0));
  auto rep = validateQPM(bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_GT(rep.maxViolation, kDefaultEpsilon);
  EXPECT_FALSE(rep.failures.empty());
  // below tolerance passes in floating mode, fails exactly
  EXPECT_TRUE(validateQPM(perturb(u, 0, 1, Cx(1e-12, 0))).ok);
  EXPECT_FALSE(validateQPM(perturb(blockMagicUnitary(), 0, 1, GQ(mpq_class(1, 1000000)))).ok);
}

TEST(Qpm, RandomBlockFamiliesPass) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto u = randomQPM(rng, testing::uniform(rng, 2, 5));
    auto rep = validateQPM(u);
    EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures[0]);
  }
}

// ---- tensor powers ----

TEST(TensorPower, ZeroPowerAndClassicalKronecker) {
  auto u = blockMagicUnitary();
  auto t0 = tensorPower(u, 0);
  ASSERT_EQ(t0.rows, 1u);
  EXPECT_EQ(t0(0, 0), Op<GQ>::identity(2));

  Rng rng(9);
  auto perm = randomPerm(rng, 3);
  auto c = liftPermutation(perm);
  Matrix pm(3, 3);
  for (int x = 0; x < 3; ++x) pm(x, perm[x]) = 1;
  Matrix kron = kronecker(kronecker(pm, pm), pm);
  auto t3 = tensorPower(c, 3);
  for (std::size_t i = 0; i < 27; ++i)
    for (std::size_t j = 0; j < 27; ++j) ASSERT_EQ(t3(i, j)(0, 0), kron(i, j));
}

TEST(TensorPower, DigitwiseProductsMatchExplicitPower) {
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    auto u = randomQPM(rng, testing::uniform(rng, 2, 3));
    for (int k = 0; k <= 3; ++k) {
      auto tp = tensorPower(u, k);
      auto id = OperatorMatrix<GQ>::lift(identityPower(u.q, k), u.dim);
      EXPECT_TRUE(sameOM(leftPower(u, k, id), tp));
      EXPECT_TRUE(sameOM(rightPower(id, u, k), tp));
      auto tpd = adjointOf(tp);
      EXPECT_TRUE(sameOM(leftPower(u, k, id, true), tpd));
      EXPECT_TRUE(sameOM(rightPower(id, u, k, true), tpd));
      // unitarity of the power
      EXPECT_TRUE(sameOM(mul(tp, tpd), id));
      EXPECT_TRUE(sameOM(mul(tpd, tp), id));
    }
  }
}

TEST(TensorPower, ProductOrderMatters) {
  // u_{x1y1} u_{x2y2} differs from the reversed product for the block unitary
  auto u = blockMagicUnitary();
  auto t2 = tensorPower(u, 2);
  bool differs = false;
  for (int x1 = 0; x1 < 4; ++x1)
    for (int y1 = 0; y1 < 4; ++y1)
      for (int x2 = 0; x2 < 4; ++x2)
        for (int y2 = 0; y2 < 4; ++y2) {
          const auto& e = t2(x1 * 4 + x2, y1 * 4 + y2);
          EXPECT_EQ(e, u.at(x1, y1) * u.at(x2, y2));
          differs = differs || !(e == u.at(x2, y2) * u.at(x1, y1));
        }
  EXPECT_TRUE(differs);
}

TEST(TensorPower, CapIsEnforced) {
  std::size_t old = entryCap();
  setEntryCap(1000);
  EXPECT_THROW(tensorPower(blockMagicUnitary(), 3), ResourceError);
  setEntryCap(old);
}

TEST(TensorPower, SliceApplicationMatchesDenseProduct) {
  Rng rng(17);
  auto u = randomQPM(rng, 2);
  auto row = rightPower(OperatorMatrix<GQ>::lift(flatten(testing::randomFunction(rng, 2, 3), 0, 3), 2), u, 3);
  Matrix x = flatten(testing::randomFunction(rng, 2, 3), 1, 2);
  auto sliced = rightApplyOnSlice(row, x, 2, 2);
  auto dense = mul(row, OperatorMatrix<GQ>::lift(kronecker(kronecker(identityPower(2, 1), x), identityPower(2, 1)), 2));
  EXPECT_TRUE(sameOM(sliced, dense));
}

// ---- intertwining ----

TEST(QuantumIso, EqualityIsFixed) {
  auto u = blockMagicUnitary();
  for (int k = 0; k <= 4; ++k) {
    bool exact = false;
    EXPECT_EQ(equalityFixationResidual(u, k, &exact), 0.0);
    EXPECT_TRUE(exact);
    auto chk = checkQuantumIso(u, equality(4, k), equality(4, k));
    EXPECT_TRUE(chk.pass);
    EXPECT_TRUE(chk.splitsAgree);
  }
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = liftPermutation(randomPerm(rng, testing::uniform(rng, 1, 5)));
    for (int k = 0; k <= 4; ++k) {
      bool exact = false;
      equalityFixationResidual(c, k, &exact);
      EXPECT_TRUE(exact);
    }
  }
}

TEST(QuantumIso, AllOnesAndBruteForceCommutants) {
  auto u = blockMagicUnitary();
  EXPECT_TRUE(checkQuantumIso(u, allOnes(4, 2), allOnes(4, 2)).pass);
  int hits = 0, misses = 0;
  for (int mask = 0; mask < 1024; ++mask) {
    auto a = symmetric01(4, mask);
    auto chk = checkQuantumIso(u, a, a);
    ASSERT_EQ(chk.pass, commutesWith(u, a)) << mask;
    EXPECT_TRUE(chk.splitsAgree);
    (chk.pass ? hits : misses)++;
  }
  EXPECT_GT(hits, 1);
  EXPECT_GT(misses, 0);
  auto ab = symmetric01(4, 0b100);  // single edge {0,2}: (UA)_{02} = P, (AU)_{02} = Q
  EXPECT_FALSE(checkQuantumIso(u, ab, ab).pass);
  EXPECT_THROW(checkQuantumIso(u, equality(4, 2), equality(4, 3)), ArityError);
  EXPECT_THROW(checkQuantumIso(u, equality(3, 2), equality(3, 2)), ArityError);
}

TEST(QuantumIso, ClassicalPermutationTransport) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    int q = testing::uniform(rng, 1, 4), n = testing::uniform(rng, 0, 3);
    auto f = testing::randomFunction(rng, q, n, true);
    auto perm = randomPerm(rng, q);
    // g(perm x) = f(x), so (U f)_x = f(perm^{-1} x) needs U = lift(perm^{-1})
    auto g = permuteDomain(f, perm);
    auto u = liftPermutation(inverse(perm));
    auto chk = checkQuantumIso(u, f, g);
    EXPECT_TRUE(chk.pass);
    EXPECT_TRUE(chk.splitsAgree);
  }
}


TEST(QuantumIso, SplitsAgreeOnRandomTriples) {
  Rng rng(29);
  int passes = 0, fails = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto t = randomTriple(rng);
    auto chk = checkQuantumIso(t.u, t.f, t.g);
    EXPECT_TRUE(chk.splitsAgree) << trial;
    (chk.pass ? passes : fails)++;
    // floating mode gives the same verdicts
    auto fchk = checkQuantumIso(convertQPM<Cx>(t.u), t.f, t.g);
    EXPECT_EQ(fchk.pass, chk.pass);
    EXPECT_TRUE(fchk.splitsAgree);
  }
  EXPECT_GT(passes, 30);
  EXPECT_GT(fails, 30);
}

TEST(QuantumIso, TransportUnderRotationAndDagger) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = randomTriple(rng);
    const int n = t.f.arity();
    for (int m = 0; m <= n; ++m)
      for (int r = 0; r < n; ++r) {
        auto tc = invarianceTransport(t.u, t.f, t.g, m, r, true);
        EXPECT_TRUE(tc.consistent) << trial << " m=" << m << " r=" << r;
      }
  }
  auto u = blockMagicUnitary();
  for (const auto& a : commutingSignatures(u))
    for (int m = 0; m <= 2; ++m)
      for (int r = 0; r < 2; ++r) {
        auto tc = invarianceTransport(u, a, a, m, r, true);
        EXPECT_TRUE(tc.base && tc.rotated && tc.daggered);
      }
  auto tc = invarianceTransport(u, equality(4, 3), equality(4, 3), 1, 0, false);
  EXPECT_TRUE(tc.consistent && tc.base);
}

// ---- quantum Holant ----


TEST(QuantumHolant, BlockUnitaryOnCommutingSignatures) {
  auto u = blockMagicUnitary();
  SignatureSet fs(4);
  fs.add("J", allOnes(4, 2));
  fs.add("E3", equality(4, 3));
  auto hits = commutingSignatures(u);
  ASSERT_GE(hits.size(), 3u);
  // skip the all-zero and all-ones hits, keep a few structured ones
  int added = 0;
  for (const auto& a : hits) {
    bool zero = std::all_of(a.entries().begin(), a.entries().end(), [](const GQ& v) { return v.isZero(); });
    if (zero || a == allOnes(4, 2) || added == 3) continue;
    fs.add("A" + std::to_string(added++), a);
  }
  Rng rng(37);
  auto grids = planarGrids(rng, fs, 50, 4, 5);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    auto res = quantumHolantEvaluate(grids[i], u, fs, fs, identityMap(fs));
    EXPECT_TRUE(res.equal) << i;
    EXPECT_TRUE(res.operatorExact) << i;
    EXPECT_EQ(res.operatorResidual, 0.0);
    EXPECT_EQ(res.scalarF, testing::bruteForceClosed(grids[i]));
  }
  // floating mode: residual within eps per factor
  auto uf = convertQPM<Cx>(u);
  for (std::size_t i = 0; i < 10; ++i) {
    auto res = quantumHolantEvaluate(grids[i], uf, fs, fs, identityMap(fs));
    EXPECT_TRUE(res.equal);
    EXPECT_LE(res.operatorResidual, kDefaultEpsilon * res.factors);
  }
}

TEST(QuantumHolant, ClassicalShadowMatchesPermutedSet) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    int q = testing::uniform(rng, 2, 3);
    SignatureSet fs = testing::randomSignatureSet(rng, q, {1, 2, 3}, trial % 2 == 1);
    auto perm = randomPerm(rng, q);
    SignatureSet gs(q);
    std::map<std::string, std::string> map;
    for (const auto& [name, f] : fs.all()) {
      gs.add(name + "'", permuteDomain(*f, perm));
      map[name] = name + "'";
    }
    auto u = liftPermutation(inverse(perm));
    for (const auto& grid : planarGrids(rng, fs, 3, 4, 4)) {
      auto res = quantumHolantEvaluate(grid, u, fs, gs, map);
      EXPECT_TRUE(res.equal);
      EXPECT_TRUE(res.operatorExact);
      for (double r : res.leafResiduals) EXPECT_EQ(r, 0.0);
    }
  }
}

TEST(QuantumHolant, IdentityUnitaryIsTrivial) {
  SignatureSet fs(2);
  fs.add("G2", ConstraintFunction(2, 2, {1, 2, 2, 3}));
  auto grid = testing::gridGadget(fs, 2, 2);
  auto res = quantumHolantEvaluate(grid, liftPermutation({0, 1}), fs, fs, identityMap(fs));
  EXPECT_TRUE(res.equal);
  EXPECT_EQ(res.scalarF, testing::bruteForceClosed(grid));
}

TEST(QuantumHolant, PreconditionFailuresAreWitnessErrors) {
  auto u = blockMagicUnitary();
  SignatureSet fs(4);
  fs.add("G2", symmetric01(4, 0b100));
  auto grid = testing::gridGadget(fs, 2, 2);
  EXPECT_THROW(quantumHolantEvaluate(grid, u, fs, fs, identityMap(fs)), WitnessError);
  EXPECT_THROW(quantumHolantEvaluate(grid, perturb(u, 0, 0, GQ(1)), fs, fs, identityMap(fs)), WitnessError);
  EXPECT_THROW(quantumHolantEvaluate(grid, u, fs, fs, {}), WitnessError);
}

// ---- isomorphism game ----

bool bruteIsomorphic(const ConstraintFunction& f, const ConstraintFunction& g) {
  if (f.q() != g.q()) return false;
  std::vector<int> p(f.q());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (permuteDomain(f, p) == g) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

TEST(Game, IdentityStrategyWinsForEqualSets) {
  auto a = adjacencyFunction(cycleGraph(4));
  auto game = makeGame(a, a);
  auto s = bijectionStrategy(game, {0, 1, 2, 3});
  EXPECT_TRUE(checkStrategy(game, s, s).perfect);
}

TEST(Game, ConditionThreeViolationLoses) {
  auto game = makeGame(adjacencyFunction(pathGraph(3)), adjacencyFunction(pathGraph(3)));
  // x_A = 0, x_B = 1 (adjacent in F); answers 3+0 and 3+2 (not adjacent in G)
  EXPECT_FALSE(gameReferee(game, 0, 3, 1, 5));
  EXPECT_TRUE(gameReferee(game, 0, 3, 1, 4));
  // (i): answering inside the same side loses
  EXPECT_FALSE(gameReferee(game, 0, 1, 1, 4));
  // (ii): equal questions need equal answers
  EXPECT_FALSE(gameReferee(game, 0, 3, 0, 4));
}

TEST(Game, ExhaustiveSearchMatchesIsomorphism) {
  Rng rng(43);
  int iso = 0, non = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int q = testing::uniform(rng, 1, 4);
    ConstraintFunction f(q, 2);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = testing::uniform(rng, 0, 1);
    ConstraintFunction g = trial % 2 ? permuteDomain(f, randomPerm(rng, q)) : f;
    if (trial % 4 == 0)
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = testing::uniform(rng, 0, 1);
    auto game = makeGame(f, g);
    auto s = findPerfectStrategy(game);
    ASSERT_EQ(s.has_value(), bruteIsomorphic(f, g)) << trial;
    if (s) {
      EXPECT_TRUE(checkStrategy(game, *s, *s).perfect);
      ++iso;
    } else {
      ++non;
    }
  }
  EXPECT_GT(iso, 0);
  EXPECT_GT(non, 0);
  // C4 against the star K_{1,3}: no perfect classical strategy, and every bijection loses
  SimpleGraph star{4, {{0, 1}, {0, 2}, {0, 3}}};
  auto game = makeGame(adjacencyFunction(cycleGraph(4)), adjacencyFunction(star));
  EXPECT_FALSE(findPerfectStrategy(game).has_value());
  std::vector<int> p = {0, 1, 2, 3};
  do {
    auto s = bijectionStrategy(game, p);
    EXPECT_FALSE(checkStrategy(game, s, s).perfect);
  } while (std::next_permutation(p.begin(), p.end()));
  // different domain sizes never admit a perfect strategy
  EXPECT_FALSE(findPerfectStrategy(makeGame(equality(2, 2), equality(3, 2))).has_value());
}

}  // namespace
}  // namespace holant
