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

#include "holant/csp.hpp"
#include "holant/decomposer.hpp"
#include "holant/errors.hpp"
#include "test_util.hpp"

namespace holant {
namespace {

using testing::Rng;

// Oracle: direct sum over all assignments, with optional forced values.
GQ bruteZ(const CSPInstance& k, const SignatureSet& fs, const std::vector<std::pair<int, int>>& forced = {}) {
  const int q = fs.q(), n = k.numVariables;
  std::vector<int> x(n, 0);
  GQ total = 0;
  for (;;) {
    bool ok = true;
    for (auto [v, val] : forced) ok = ok && x[v] == val;
    if (ok) {
      GQ prod = 1;
      for (const auto& c : k.constraints) {
        std::vector<int> a;
        for (int v : c.args) a.push_back(x[v]);
        prod = prod * fs.get(c.fn)->at(a);
      }
      total += prod;
    }
    int i = 0;
    while (i < n && ++x[i] == q) x[i++] = 0;
    if (i == n) break;
  }
  return total;
}

CSPInstance randomInstance(Rng& rng, const SignatureSet& fs, int maxV, int maxC) {
  std::vector<std::string> names;
  for (const auto& [name, f] : fs.all()) names.push_back(name);
  CSPInstance k;
  k.numVariables = testing::uniform(rng, 1, maxV);
  int nc = testing::uniform(rng, 0, maxC);
  for (int c = 0; c < nc; ++c) {
    std::string fn = names[testing::uniform(rng, 0, static_cast<int>(names.size()) - 1)];
    std::vector<int> args(fs.get(fn)->arity());
    for (int& v : args) v = testing::uniform(rng, 0, k.numVariables - 1);
    k.constraints.push_back({fn, args});
  }
  return k;
}

TEST(Csp, GridContractionMatchesBruteForce) {
  Rng rng(61);
  for (int trial = 0; trial < 150; ++trial) {
    int q = testing::uniform(rng, 1, 3);
    SignatureSet fs = testing::randomSignatureSet(rng, q, {1, 2, 3}, trial % 2 == 0);
    CSPInstance k = randomInstance(rng, fs, 6, 6);
    ASSERT_EQ(partitionFunction(k, fs), bruteZ(k, fs)) << canonicalForm(k);
  }
}

TEST(Csp, HomomorphismCounts) {
  EXPECT_EQ(homCount(completeGraph(3), adjacencyFunction(completeGraph(3))), GQ(6));
  EXPECT_EQ(homCount(completeGraph(3), adjacencyFunction(completeGraph(4))), GQ(24));
  EXPECT_EQ(homCount(pathGraph(2), adjacencyFunction(completeGraph(3))), GQ(6));
  EXPECT_EQ(homCount(pathGraph(2), adjacencyFunction(cycleGraph(6))), GQ(12));
  // disjoint union of targets splits for connected K
  SimpleGraph x = cycleGraph(5), y = completeGraph(3);
  auto sum = directSum(adjacencyFunction(x), adjacencyFunction(y));
  for (const auto& k : {cycleGraph(3), pathGraph(4), completeGraph(4)})
    EXPECT_EQ(homCount(k, sum), homCount(k, adjacencyFunction(x)) + homCount(k, adjacencyFunction(y)));
}

TEST(Csp, TriangleOverK3IsSix) {
  SignatureSet fs(3);
  fs.add("A", adjacencyFunction(completeGraph(3)));
  CSPInstance k = edgeInstance(completeGraph(3), "A");
  EXPECT_EQ(partitionFunction(k, fs), GQ(6));
  EXPECT_EQ(bruteZ(k, fs), GQ(6));
  auto pr = isPlanarInstance(k, fs);
  ASSERT_TRUE(pr.planar);
  Decomposition dec = decompose(*pr.grid);
  EXPECT_EQ(replayDecomposition(dec, fs)(0, 0), GQ(6));
}

TEST(Csp, SimpleCases) {
  SignatureSet fs(3);
  fs.add("U", ConstraintFunction(3, 1, {2, 5, -1}));
  fs.add("Z", ConstraintFunction(3, 2));
  CSPInstance k{1, {}, {{"U", {0}}}, {}};
  EXPECT_EQ(partitionFunction(k, fs), GQ(6));
  k.numVariables = 3;
  k.constraints.push_back({"Z", {1, 2}});
  EXPECT_EQ(partitionFunction(k, fs), GQ(0));
  CSPInstance lone{2, {}, {{"U", {0}}}, {}};
  EXPECT_EQ(partitionFunction(lone, fs), GQ(18));
}

TEST(Csp, LabelsAndPins) {
  Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    SignatureSet fs = testing::randomSignatureSet(rng, 3, {1, 2, 3}, true);
    CSPInstance k = randomInstance(rng, fs, 4, 4);
    int v = testing::uniform(rng, 0, k.numVariables - 1);
    k.labels = {v};
    GQ sum = 0;
    Gadget grid = toSignatureGrid(k, fs);
    Matrix col = signatureMatrix(grid);
    for (int x = 0; x < 3; ++x) {
      GQ zx = partitionFunction(k, fs, Pin{{0, x}});
      EXPECT_EQ(zx, bruteZ(k, fs, {{v, x}}));
      EXPECT_EQ(zx, col(x, 0));
      sum += zx;
    }
    EXPECT_EQ(sum, partitionFunction(k, fs));
  }
  SignatureSet fs(2);
  fs.add("J", allOnes(2, 2));
  CSPInstance k{2, {}, {{"J", {0, 1}}}, {0, 0, 1}};
  EXPECT_EQ(partitionFunction(k, fs, Pin{{0, 0}, {1, 1}, {2, 0}}), GQ(0));
  EXPECT_EQ(partitionFunction(k, fs, Pin{{0, 1}, {1, 1}, {2, 0}}), GQ(1));
  EXPECT_THROW(partitionFunction(k, fs, Pin{{0, 1}, {1, 1}}), PinError);
  EXPECT_THROW(partitionFunction(k, fs, Pin{{0, 1}, {1, 1}, {2, 0}, {7, 0}}), PinError);
}

TEST(Csp, DirectSumBridge) {
  Rng rng(71);
  SignatureSet a(2), b(3), s(5);
  auto fa = testing::randomFunction(rng, 2, 2, true);
  auto fb = testing::randomFunction(rng, 3, 2, true);
  a.add("A", fa);
  b.add("A", fb);
  s.add("A", directSum(fa, fb));
  for (const auto& g : {pathGraph(3), cycleGraph(4), completeGraph(3)}) {
    CSPInstance k = edgeInstance(g, "A");
    k.labels = {0};
    for (int x = 0; x < 2; ++x) EXPECT_EQ(partitionFunction(k, s, Pin{{0, x}}), partitionFunction(k, a, Pin{{0, x}}));
    for (int x = 0; x < 3; ++x)
      EXPECT_EQ(partitionFunction(k, s, Pin{{0, x + 2}}), partitionFunction(k, b, Pin{{0, x}}));
  }
}

TEST(Csp, Multiplicativity) {
  Rng rng(73);
  SignatureSet fs = testing::randomSignatureSet(rng, 2, {1, 2, 3}, true);
  for (int trial = 0; trial < 20; ++trial) {
    CSPInstance a = randomInstance(rng, fs, 3, 3), b = randomInstance(rng, fs, 3, 3);
    CSPInstance u = a;
    u.numVariables += b.numVariables;
    for (auto c : b.constraints) {
      for (int& v : c.args) v += a.numVariables;
      u.constraints.push_back(c);
    }
    EXPECT_EQ(partitionFunction(u, fs), partitionFunction(a, fs) * partitionFunction(b, fs));
  }
}

TEST(Csp, PlanarityRespectsArgumentOrder) {
  SignatureSet fs(2);
  fs.add("E", allOnes(2, 2));
  fs.add("U", allOnes(2, 1));
  fs.add("W", allOnes(2, 4));
  // trees and unary-only instances are planar
  CSPInstance tree = edgeInstance(pathGraph(5), "E");
  EXPECT_TRUE(isPlanarInstance(tree, fs).planar);
  CSPInstance un{3, {}, {{"U", {0}}, {"U", {0}}, {"U", {2}}}, {}};
  EXPECT_TRUE(isPlanarInstance(un, fs).planar);
  EXPECT_FALSE(isPlanarInstance(edgeInstance(completeGraph(5), "E"), fs).planar);
  EXPECT_TRUE(isPlanarInstance(edgeInstance(completeGraph(4), "E"), fs).planar);
  // K_{3,3} as variables {0,1,2} vs {3,4,5}
  SimpleGraph k33{6, {}};
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) k33.edges.push_back({i, j});
  EXPECT_FALSE(isPlanarInstance(edgeInstance(k33, "E"), fs).planar);
  // W on a 4-cycle: the order 0,1,2,3 fits inside the cycle, 0,2,1,3 does not
  CSPInstance ok = edgeInstance(cycleGraph(4), "E");
  ok.constraints.push_back({"W", {0, 1, 2, 3}});
  EXPECT_TRUE(isPlanarInstance(ok, fs).planar);
  CSPInstance crossed = edgeInstance(cycleGraph(4), "E");
  crossed.constraints.push_back({"W", {0, 2, 1, 3}});
  EXPECT_TRUE(isPlanarInstance(edgeInstance(cycleGraph(4), "E"), fs).planar);
  EXPECT_FALSE(isPlanarInstance(crossed, fs).planar);
  // reversed order is fine (clockwise)
  CSPInstance rev = edgeInstance(cycleGraph(4), "E");
  rev.constraints.push_back({"W", {3, 2, 1, 0}});
  EXPECT_TRUE(isPlanarInstance(rev, fs).planar);
}

TEST(Csp, EmbeddedGridsAreValidAndDecompose) {
  Rng rng(79);
  int planar = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int q = testing::uniform(rng, 2, 3);
    // dense replay of the expression is the bottleneck: keep q^width small
    SignatureSet fs = q == 2 ? testing::randomSignatureSet(rng, q, {1, 2, 3, 4}, true)
                             : testing::randomSignatureSet(rng, q, {1, 2, 3}, true);
    CSPInstance k = randomInstance(rng, fs, 5, q == 2 ? 5 : 4);
    int nl = testing::uniform(rng, 0, 3);
    for (int i = 0; i < nl; ++i) k.labels.push_back(testing::uniform(rng, 0, k.numVariables - 1));
    auto pr = isPlanarInstance(k, fs);
    if (!pr.planar) continue;
    ++planar;
    ASSERT_TRUE(pr.grid.has_value());
    auto rep = validate(*pr.grid);
    ASSERT_TRUE(rep.ok) << rep.errors.front();
    Matrix want = signatureMatrix(toSignatureGrid(k, fs));
    EXPECT_EQ(signatureMatrix(*pr.grid), want);
    Decomposition dec = decompose(*pr.grid);
    EXPECT_EQ(evalExprSliced(dec.expr, fs), want) << canonicalForm(k);
    if (nl == 0) EXPECT_EQ(replayDecomposition(dec, fs), want);
  }
  EXPECT_GT(planar, 60);
}

TEST(Csp, RewriteInstance) {
  Rng rng(83);
  SignatureSet f = testing::randomSignatureSet(rng, 3, {2, 3}, false);
  std::map<std::string, std::string> id{{"F0", "F0"}, {"F1", "F1"}};
  CSPInstance k = randomInstance(rng, f, 4, 4);
  EXPECT_EQ(canonicalForm(rewriteInstance(k, f, f, id)), canonicalForm(k));
  // relabel the domain by a permutation: Z is unchanged
  std::vector<int> perm = {2, 0, 1};
  SignatureSet g(3);
  for (const auto& [name, fn] : f.all()) g.add("G" + name.substr(1), permuteDomain(*fn, perm));
  std::map<std::string, std::string> fg{{"F0", "G0"}, {"F1", "G1"}}, gf{{"G0", "F0"}, {"G1", "F1"}};
  for (int trial = 0; trial < 20; ++trial) {
    CSPInstance x = randomInstance(rng, f, 4, 4);
    CSPInstance y = rewriteInstance(x, f, g, fg);
    EXPECT_EQ(partitionFunction(x, f), partitionFunction(y, g));
    EXPECT_EQ(canonicalForm(rewriteInstance(y, g, f, gf)), canonicalForm(x));
  }
  SignatureSet h(2);
  h.add("F0", ConstraintFunction(2, 2));
  EXPECT_THROW(rewriteInstance(k, f, h, {{"F0", "F0"}}), CompatibilityError);
  SignatureSet wrongArity(3);
  wrongArity.add("F0", ConstraintFunction(3, 3));
  EXPECT_THROW(checkCompatible(f, wrongArity, {{"F0", "F0"}}), CompatibilityError);
}

TEST(Csp, ConjugatePairingIsChecked) {
  SignatureSet f(2), g(2);
  ConstraintFunction a(2, 1, {GQ(mpq_class(0), mpq_class(1)), GQ(1)});
  f.add("A", a);
  f.add("B", conjugate(a));
  g.add("A", a);
  g.add("B", a);
  EXPECT_THROW(checkCompatible(f, g, {{"A", "A"}, {"B", "B"}}), CompatibilityError);
  EXPECT_NO_THROW(checkCompatible(f, f, {{"A", "A"}, {"B", "B"}}));
}

TEST(Csp, CompareHarness) {
  SignatureSet k3(3), c6(6);
  k3.add("A", adjacencyFunction(completeGraph(3)));
  c6.add("A", adjacencyFunction(cycleGraph(6)));
  CorpusParams p;
  p.count = 30;
  auto same = planarEquivalenceTest(k3, k3, {{"A", "A"}}, p);
  EXPECT_FALSE(same.firstRefutation.has_value());
  EXPECT_GT(same.records.size(), 10u);
  auto diff = planarEquivalenceTest(k3, c6, {{"A", "A"}}, p, 2);
  ASSERT_TRUE(diff.firstRefutation.has_value());
  EXPECT_TRUE(diff.domainSizesDiffer);
  const auto& r = diff.records[*diff.firstRefutation];
  EXPECT_NE(r.zF, r.zG);
  // corpus is deterministic
  auto again = planarEquivalenceTest(k3, c6, {{"A", "A"}}, p, 1);
  ASSERT_EQ(again.records.size(), diff.records.size());
  for (std::size_t i = 0; i < again.records.size(); ++i)
    EXPECT_EQ(canonicalForm(again.records[i].instance), canonicalForm(diff.records[i].instance));
  // permuted copy is indistinguishable
  SignatureSet perm(3);
  perm.add("A", permuteDomain(adjacencyFunction(completeGraph(3)), {1, 2, 0}));
  EXPECT_FALSE(planarEquivalenceTest(k3, perm, {{"A", "A"}}, p).firstRefutation.has_value());
}

}  // namespace
}  // namespace holant
