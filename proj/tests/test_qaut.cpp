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

#include "holant/errors.hpp"
#include "holant/qaut.hpp"
#include "holant/quantum.hpp"
#include "test_util.hpp"

namespace holant {
namespace {

using testing::Rng;

SignatureSet graphSet(const SimpleGraph& g) {
  SignatureSet fs(g.n);
  fs.add("A", adjacencyFunction(g));
  return fs;
}

SimpleGraph randomGraph(Rng& rng, int n) {
  SimpleGraph g{n, {}};
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (testing::uniform(rng, 0, 1)) g.edges.emplace_back(u, v);
  return g;
}

// B(π x, π y) = B(x, y) with π applied to every row and column digit.
bool invariantUnder(const Matrix& b, int q, int m, int d, const std::vector<int>& pi) {
  auto mapIndex = [&](std::size_t idx, int digits) {
    std::size_t out = 0, scale = 1;
    for (int i = 0; i < digits; ++i) {
      out += pi[idx % q] * scale;
      idx /= q;
      scale *= q;
    }
    return out;
  };
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (b(mapIndex(r, m), mapIndex(c, d)) != b(r, c)) return false;
  return true;
}

// ---- intertwiner spans ----

TEST(Intertwiners, EmptySetGivesAllOnesVector) {
  SignatureSet fs(3);
  IntertwinerOptions o;
  o.budget = 4;
  auto b = generateIntertwiners(fs, 1, 0, o);
  ASSERT_EQ(b.dimension(), 1u);
  for (int x = 0; x < 3; ++x) EXPECT_EQ(b.members[0].matrix(x, 0), GQ(1));
}

TEST(Intertwiners, TriangleSpanHasIdentityAllOnesAndAdjacency) {
  auto fs = graphSet(completeGraph(3));
  auto b = generateIntertwiners(fs, 1, 1);
  EXPECT_TRUE(inSpan(b, Matrix::identity(3)));
  EXPECT_TRUE(inSpan(b, flatten(allOnes(3, 2), 1, 1)));
  EXPECT_TRUE(inSpan(b, flatten(*fs.get("A"), 1, 1)));
  // A = J - I, so the span is 2-dimensional
  EXPECT_EQ(b.dimension(), 2u);
  Matrix e01(3, 3);
  e01(0, 1) = 1;
  EXPECT_FALSE(inSpan(b, e01));
}

TEST(Intertwiners, MembersAreSignatureMatricesOfTheirGadgets) {
  Rng rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    int q = testing::uniform(rng, 2, 3);
    auto fs = testing::randomSignatureSet(rng, q, {trial % 2 ? 3 : 2, 1}, trial % 3 == 0);
    for (auto [m, d] : {std::pair{1, 0}, {1, 1}, {2, 0}, {0, 2}}) {
      IntertwinerOptions o;
      o.budget = 4;
      auto b = generateIntertwiners(fs, m, d, o);
      EXPECT_GT(b.dimension(), 0u);
      for (const auto& mem : b.members) {
        EXPECT_LE(mem.size, o.budget);
        Gadget g = buildGadget(mem.expr, fs);
        ASSERT_EQ(signatureMatrix(g, m, d), mem.matrix) << exprToString(mem.expr);
      }
      // exact rank equals member count
      RowEchelon r;
      for (const auto& mem : b.members) EXPECT_TRUE(rrefInsert(r, vectorize(mem.matrix)));
    }
  }
}

TEST(Intertwiners, DimensionIsMonotoneInBudget) {
  Rng rng(73);
  auto fs = testing::randomSignatureSet(rng, 3, {2});
  IntertwinerBasis prev;
  for (int budget = 1; budget <= 7; ++budget) {
    IntertwinerOptions o;
    o.budget = budget;
    auto b = generateIntertwiners(fs, 1, 1, o);
    EXPECT_GE(b.dimension(), prev.dimension());
    for (const auto& mem : prev.members) EXPECT_TRUE(inSpan(b, mem.matrix));
    prev = b;
  }
  EXPECT_GT(prev.dimension(), 2u);
}

TEST(Intertwiners, ClassicalAutomorphismsFixEveryMember) {
  Rng rng(79);
  for (int trial = 0; trial < 12; ++trial) {
    int q = testing::uniform(rng, 3, 5);
    auto fs = graphSet(randomGraph(rng, q));
    auto auts = automorphisms(fs);
    ASSERT_FALSE(auts.empty());
    for (auto [m, d] : {std::pair{1, 0}, {1, 1}, {2, 1}}) {
      IntertwinerOptions o;
      o.budget = 5;
      o.maxDangling = 3;
      for (const auto& mem : generateIntertwiners(fs, m, d, o).members)
        for (const auto& p : auts) ASSERT_TRUE(invariantUnder(mem.matrix, q, m, d, p));
    }
  }
}

// ---- orbits ----

TEST(Orbits, VertexTransitiveGraphsHaveOneClass) {
  for (const auto& g : {cycleGraph(5), completeGraph(4), petersenGraph()}) {
    auto p = orbitCoarsening(graphSet(g));
    EXPECT_EQ(p.classes, 1) << g.n;
    EXPECT_TRUE(p.separations.empty());
  }
}

TEST(Orbits, PathSeparatesEndpointsFromCenter) {
  auto fs = graphSet(pathGraph(3));
  auto p = orbitCoarsening(fs);
  EXPECT_EQ(p.classes, 2);
  EXPECT_EQ(p.classOf[0], p.classOf[2]);
  EXPECT_NE(p.classOf[0], p.classOf[1]);
  ASSERT_EQ(p.separations.size(), 1u);
  const auto& s = p.separations[0];
  EXPECT_TRUE(s.planar);
  EXPECT_NE(s.zx, s.zy);
  EXPECT_EQ(std::string(OrbitPartition::semantics), "separations are sound; merges are inconclusive");
}

TEST(Orbits, SeparationsAreSoundAndReplayed) {
  Rng rng(83);
  for (int trial = 0; trial < 15; ++trial) {
    int q = testing::uniform(rng, 3, 6);
    auto fs = graphSet(randomGraph(rng, q));
    auto p = orbitCoarsening(fs, 6);
    // classical orbits are never split
    for (const auto& pi : automorphisms(fs))
      for (int x = 0; x < q; ++x) ASSERT_EQ(p.classOf[x], p.classOf[pi[x]]);
    for (const auto& s : p.separations) {
      EXPECT_TRUE(s.planar);
      EXPECT_NE(s.zx, s.zy);
      const Matrix& v = p.basis.members[s.member].matrix;
      EXPECT_EQ(s.zx, v(s.x, 0));
      EXPECT_EQ(s.zy, v(s.y, 0));
    }
    // raising the budget never merges
    auto finer = orbitCoarsening(fs, 7);
    for (int x = 0; x < q; ++x)
      for (int y = 0; y < q; ++y)
        if (p.classOf[x] != p.classOf[y]) EXPECT_NE(finer.classOf[x], finer.classOf[y]);
  }
}

TEST(Orbits, LabeledInstanceMatchesGadgetValue) {
  Rng rng(89);
  for (int trial = 0; trial < 40; ++trial) {
    int q = testing::uniform(rng, 2, 3);
    auto fs = testing::randomSignatureSet(rng, q, {1, 2, 3}, trial % 2 == 0);
    auto [e, g] = testing::randomGadget(rng, fs, 1, 0, 8);
    auto [inst, funcs] = gadgetToLabeledInstance(g, fs);
    Matrix v = signatureMatrix(g);
    for (int x = 0; x < q; ++x) ASSERT_EQ(partitionFunction(inst, funcs, Pin{{0, x}}), v(x, 0)) << exprToString(e);
    EXPECT_TRUE(isPlanarInstance(inst, funcs).planar) << exprToString(e);
  }
}

// ---- coherent closure ----

void expectCoherent(const PairColoring& pc) {
  const int q = pc.q;
  // transpose maps classes to classes
  for (int c = 0; c < pc.classCount; ++c) {
    int tc = -1;
    for (int u = 0; u < q; ++u)
      for (int v = 0; v < q; ++v)
        if (pc.at(u, v) == c) {
          if (tc < 0) tc = pc.at(v, u);
          ASSERT_EQ(pc.at(v, u), tc);
        }
  }
  // products of class matrices are constant on classes
  for (int a = 0; a < pc.classCount; ++a)
    for (int b = 0; b < pc.classCount; ++b) {
      Matrix p = pc.classMatrix(a) * pc.classMatrix(b);
      std::map<int, GQ> value;
      for (int u = 0; u < q; ++u)
        for (int v = 0; v < q; ++v) {
          auto [it, fresh] = value.emplace(pc.at(u, v), p(u, v));
          ASSERT_EQ(it->second, p(u, v));
        }
    }
}

TEST(Coherent, KnownClassCounts) {
  auto c5 = coherentClosure(adjacencyFunction(cycleGraph(5)));
  EXPECT_EQ(c5.classCount, 3);
  expectCoherent(c5);
  EXPECT_EQ(coherentClosure(allOnes(4, 2)).classCount, 2);
  EXPECT_EQ(coherentClosure(adjacencyFunction(petersenGraph())).classCount, 3);
  EXPECT_THROW(coherentClosure(equality(3, 3)), ArityError);
}

TEST(Coherent, CoarserThanClassicalOrbitalsAndClosed) {
  Rng rng(97);
  for (int trial = 0; trial < 30; ++trial) {
    int q = testing::uniform(rng, 2, 6);
    ConstraintFunction a(q, 2);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = testing::uniform(rng, 0, 2);
    SignatureSet fs(q);
    fs.add("A", a);
    auto pc = coherentClosure(a);
    expectCoherent(pc);
    auto orb = classicalOrbitals(fs);
    EXPECT_GE(orb.classCount, pc.classCount);
    for (std::size_t i = 0; i < orb.color.size(); ++i)
      for (std::size_t j = 0; j < orb.color.size(); ++j)
        if (orb.color[i] == orb.color[j]) ASSERT_EQ(pc.color[i], pc.color[j]);
    // A is a combination of class matrices
    for (int u = 0; u < q; ++u)
      for (int v = 0; v < q; ++v)
        for (int x = 0; x < q; ++x)
          for (int y = 0; y < q; ++y)
            if (pc.at(u, v) == pc.at(x, y)) ASSERT_EQ(a.at({u, v}), a.at({x, y}));
  }
}

// ---- connectivity and augmentations ----

TEST(Connectivity, Basics) {
  for (int q = 2; q <= 4; ++q) EXPECT_FALSE(isProjectivelyConnected(equality(q, 2)));
  EXPECT_TRUE(isProjectivelyConnected(equality(1, 2)));
  EXPECT_TRUE(isProjectivelyConnected(allOnes(3, 2)));
  EXPECT_TRUE(isProjectivelyConnected(adjacencyFunction(cycleGraph(5))));
  EXPECT_FALSE(isProjectivelyConnected(directSum(allOnes(2, 2), allOnes(3, 2))));
  // marginal of E_3 is I
  EXPECT_FALSE(isProjectivelyConnected(equality(3, 3)));
  EXPECT_TRUE(isProjectivelyConnected(allOnes(2, 3)));
  EXPECT_THROW(isProjectivelyConnected(allOnes(2, 1)), ArityError);
}

TEST(GammaAugment, EqualityExample) {
  SignatureSet fs(2);
  fs.add("E", equality(2, 2));
  auto aug = gammaAugment(fs);
  const auto& f = *aug.f.get("E");
  ASSERT_EQ(f.q(), 3);
  EXPECT_EQ(aug.zero, 2);
  // γ = 1 + Σ|f| + max|f| = 1 + 2 + 1
  EXPECT_EQ(aug.gamma, GQ(4));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      GQ expect = x < 2 && y < 2 ? GQ(x == y) : (x == 2 && y != 2 ? aug.gamma : GQ(0));
      EXPECT_EQ(f.at({x, y}), expect);
    }
  EXPECT_TRUE(isProjectivelyConnected(f));
}

TEST(GammaAugment, ConnectsEveryNonUnaryFunction) {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    int q = testing::uniform(rng, 1, 3);
    auto fs = testing::randomSignatureSet(rng, q, {1, 2, 3, 4}, trial % 2 == 0);
    auto gs = testing::randomSignatureSet(rng, q, {1, 2, 3, 4}, true);
    std::map<std::string, std::string> id;
    for (const auto& [name, f] : fs.all()) id[name] = name;
    auto aug = gammaAugment(fs, &gs, &id);
    mpq_class need = 0;
    for (const auto& [name, fp] : fs.all()) {
      mpq_class s = 0, mx = 0;
      for (const auto& v : fp->entries()) s += v.l1();
      for (const auto& v : gs.get(name)->entries()) mx = std::max(mx, v.l1());
      need = std::max(need, mpq_class(s + mx));
    }
    EXPECT_GT(aug.gamma.re(), need);
    for (const auto& [name, fp] : aug.f.all()) {
      if (fp->arity() >= 2) {
        EXPECT_TRUE(isProjectivelyConnected(*fp));
        EXPECT_TRUE(isProjectivelyConnected(*aug.g->get(name)));
      } else {
        EXPECT_EQ(fp->at({aug.zero}), GQ(0));
      }
    }
  }
}

TEST(GammaAugment, ClassicalIsomorphismIsPreserved) {
  Rng rng(103);
  int iso = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int q = testing::uniform(rng, 2, 4);
    ConstraintFunction a(q, 2);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = testing::uniform(rng, 0, 1);
    std::vector<int> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ConstraintFunction b = permuteDomain(a, perm);
    if (trial % 3 == 0) b[testing::uniform(rng, 0, static_cast<int>(b.size()) - 1)] += 1;
    SignatureSet fs(q), gs(q);
    fs.add("A", a);
    gs.add("A", b);
    std::map<std::string, std::string> id{{"A", "A"}};
    auto aug = gammaAugment(fs, &gs, &id);
    auto before = findIsomorphism(fs, gs, id);
    auto after = findIsomorphism(aug.f, *aug.g, id);
    ASSERT_EQ(before.has_value(), after.has_value()) << trial;
    if (after) {
      ++iso;
      EXPECT_EQ((*after)[aug.zero], aug.zero);
      std::vector<int> restricted(after->begin(), after->end() - 1);
      EXPECT_EQ(permuteDomain(a, restricted), b);
    }
  }
  EXPECT_GT(iso, 0);
}

TEST(AllOnesAugment, AddsJWithWitness) {
  SignatureSet fs(3);
  fs.add("J", equality(3, 2));  // name clash on purpose
  auto aug = allOnesAugment(fs);
  EXPECT_NE(aug.name, "J");
  EXPECT_EQ(*aug.functions.get(aug.name), allOnes(3, 2));
  EXPECT_EQ(signatureMatrix(buildGadget(aug.witness, fs), 1, 1), flatten(allOnes(3, 2), 1, 1));
  auto u = blockMagicUnitary();
  EXPECT_TRUE(checkQuantumIso(u, allOnes(4, 2), allOnes(4, 2)).pass);
}

TEST(AllOnesAugment, CompareVerdictsUnchanged) {
  auto k3 = graphSet(completeGraph(3));
  auto c6 = graphSet(cycleGraph(6));
  SignatureSet perm(3);
  perm.add("A", permuteDomain(adjacencyFunction(completeGraph(3)), {2, 0, 1}));
  CorpusParams p;
  p.count = 40;
  for (const auto* other : {&c6, &perm}) {
    auto before = planarEquivalenceTest(k3, *other, {{"A", "A"}}, p);
    auto fa = allOnesAugment(k3), ga = allOnesAugment(*other);
    auto after = planarEquivalenceTest(fa.functions, ga.functions, {{"A", "A"}, {fa.name, ga.name}}, p);
    EXPECT_EQ(before.firstRefutation.has_value(), after.firstRefutation.has_value());
  }
}

TEST(Symmetry, AutomorphismCounts) {
  EXPECT_EQ(automorphisms(graphSet(cycleGraph(5))).size(), 10u);
  EXPECT_EQ(automorphisms(graphSet(completeGraph(4))).size(), 24u);
  EXPECT_EQ(automorphisms(graphSet(petersenGraph())).size(), 120u);
  EXPECT_EQ(automorphisms(graphSet(pathGraph(3))).size(), 2u);
  EXPECT_FALSE(findIsomorphism(graphSet(cycleGraph(4)), graphSet(SimpleGraph{4, {{0, 1}, {0, 2}, {0, 3}}}),
                               {{"A", "A"}})
                   .has_value());
}

}  // namespace
}  // namespace holant
