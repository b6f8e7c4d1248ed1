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

#include "holant/errors.hpp"
#include "holant/gadget.hpp"
#include "test_util.hpp"

namespace holant {
namespace {

using testing::Rng;

SignatureSet mixedSet(Rng& rng, int q) { return testing::randomSignatureSet(rng, q, {1, 2, 3}, true); }

TEST(Elementary, EqualityGadget) {
  for (int m = 0; m <= 3; ++m)
    for (int d = 0; d <= 3; ++d) {
      Gadget g = elementaryE(2, m, d);
      EXPECT_TRUE(validate(g).ok);
      EXPECT_EQ(signatureMatrix(g), flatten(equality(2, m + d), m, d));
    }
  EXPECT_EQ(signatureMatrix(elementaryE(3, 1, 1)), Matrix::identity(3));
}

TEST(Elementary, RotatedFunctionGadget) {
  Rng rng(1);
  auto f = std::make_shared<const ConstraintFunction>(testing::randomFunction(rng, 2, 5, true));
  Gadget g = elementaryF("F", f, 2, 2, 3);
  ASSERT_TRUE(validate(g).ok);
  EXPECT_EQ(signatureMatrix(g), flatten(rotate(*f, 2), 2, 3));
  for (int r = 0; r < 5; ++r)
    for (int m = 0; m <= 5; ++m)
      EXPECT_EQ(signatureMatrix(elementaryF("F", f, r, m, 5 - m)), flatten(rotate(*f, r), m, 5 - m));
}

TEST(Elementary, ClockwiseIsDaggerOfConjugate) {
  Rng rng(2);
  auto f = std::make_shared<const ConstraintFunction>(testing::randomFunction(rng, 2, 5, true));
  Gadget ccw = elementaryF("F", f, 0, 2, 3);
  Gadget dag = daggerGadget(ccw);
  ASSERT_TRUE(validate(dag).ok);
  EXPECT_EQ(signatureMatrix(dag), flatten(dagger(*f), 3, 2));
  EXPECT_EQ(signatureMatrix(dag), flatten(*f, 2, 3).adjoint());
  // a clockwise vertex carrying conj(F) reads F in mirrored order
  Gadget cw = elementaryF("F", f, 0, 3, 2, Orientation::CW, true);
  EXPECT_EQ(signatureMatrix(cw), signatureMatrix(dag));
  EXPECT_TRUE(cw.vertices[0].cw);
}

TEST(Validate, RejectsBadInputs) {
  Gadget g = elementaryE(2, 2, 2);
  std::swap(g.dangling[1], g.dangling[2]);
  auto rep = validate(g);
  EXPECT_FALSE(rep.ok);

  Gadget h = elementaryE(2, 2, 1);
  h.m = 1;
  EXPECT_FALSE(validate(h).ok);

  Rng rng(4);
  SignatureSet fs = mixedSet(rng, 2);
  Gadget k = elementaryF("F1", fs.get("F1"), 0, 1, 1);
  // attach a dangling edge to the constraint vertex
  k.dangling[0] = k.vertices[0].rot[0];
  EXPECT_FALSE(validate(k).ok);

  // K_{3,3} drawn with arbitrary rotations is never plane
  Gadget bad = emptyGadget(2);
  auto a3 = std::make_shared<const ConstraintFunction>(equality(2, 3));
  bad.functions.push_back({"A", a3});
  std::vector<int> eqs, cons;
  for (int i = 0; i < 3; ++i) eqs.push_back(bad.addVertex({}));
  for (int i = 0; i < 3; ++i) {
    Vertex c;
    c.kind = VertexKind::Constraint;
    c.fn = 0;
    cons.push_back(bad.addVertex(c));
  }
  for (int e : eqs)
    for (int c : cons) bad.link(bad.addHalfEdge(e), bad.addHalfEdge(c));
  EXPECT_FALSE(validate(bad).ok);
  EXPECT_TRUE(validate(bad, false).ok);
}

TEST(Compose, IdentityAndEmptyUnits) {
  Rng rng(3);
  SignatureSet fs = mixedSet(rng, 2);
  for (int trial = 0; trial < 20; ++trial) {
    auto [e, k] = testing::randomGadget(rng, fs, 2, 1, 8);
    Matrix mk = signatureMatrix(k);
    EXPECT_EQ(signatureMatrix(compose(k, identityGadget(2, k.d))), mk);
    EXPECT_EQ(signatureMatrix(compose(identityGadget(2, k.m), k)), mk);
    EXPECT_EQ(signatureMatrix(tensorProduct(k, emptyGadget(2))), mk);
    EXPECT_EQ(signatureMatrix(tensorProduct(emptyGadget(2), k)), mk);
    Gadget kk = daggerGadget(daggerGadget(k));
    EXPECT_EQ(signatureMatrix(kk), mk);
  }
  EXPECT_THROW(compose(elementaryE(2, 1, 2), elementaryE(2, 1, 1)), CompositionError);
}

TEST(Compose, HomomorphismLawsOnRandomPlanarPairs) {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    int q = testing::uniform(rng, 2, 3);
    SignatureSet fs = mixedSet(rng, q);
    int m = testing::uniform(rng, 0, 2), k = testing::uniform(rng, 0, 2), d = testing::uniform(rng, 0, 2);
    auto [e1, g1] = testing::randomGadget(rng, fs, m, k, 8);
    auto [e2, g2] = testing::randomGadget(rng, fs, k, d, 8);
    ASSERT_TRUE(validate(g1).ok) << exprToString(e1);
    ASSERT_TRUE(validate(g2).ok) << exprToString(e2);
    Matrix m1 = signatureMatrix(g1), m2 = signatureMatrix(g2);
    // independent oracle: evaluate the expression with matrix algebra only
    EXPECT_EQ(m1, evalExpr(e1, fs)) << exprToString(e1);
    Gadget c = compose(g1, g2);
    ASSERT_TRUE(validate(c).ok);
    EXPECT_EQ(signatureMatrix(c), m1 * m2);
    Gadget t = tensorProduct(g1, g2);
    ASSERT_TRUE(validate(t).ok);
    EXPECT_EQ(signatureMatrix(t), kronecker(m1, m2));
    Gadget dg = daggerGadget(g1);
    ASSERT_TRUE(validate(dg).ok);
    EXPECT_EQ(signatureMatrix(dg), m1.adjoint());
  }
}

TEST(Compose, TensorAssociativity) {
  Rng rng(8);
  SignatureSet fs = mixedSet(rng, 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = testing::randomGadget(rng, fs, 1, 1, 6).second;
    auto b = testing::randomGadget(rng, fs, 1, 0, 6).second;
    auto c = testing::randomGadget(rng, fs, 0, 1, 6).second;
    EXPECT_EQ(signatureMatrix(tensorProduct(tensorProduct(a, b), c)),
              signatureMatrix(tensorProduct(a, tensorProduct(b, c))));
  }
}

TEST(Compose, EqualityContractionIsSound) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    SignatureSet fs = mixedSet(rng, 2);
    int k = testing::uniform(rng, 1, 3);
    auto g1 = testing::randomGadget(rng, fs, 1, k, 8).second;
    auto g2 = testing::randomGadget(rng, fs, k, 1, 8).second;
    Gadget merged = compose(g1, g2);
    Gadget raw = compose(g1, g2, {false});
    EXPECT_EQ(signatureMatrix(merged), signatureMatrix(raw));
    EXPECT_TRUE(validate(merged).ok);
    EXPECT_LE(merged.vertices.size(), raw.vertices.size());
  }
}

TEST(Compose, FreeLoopIsWorthQ) {
  Gadget circle = compose(elementaryE(3, 0, 1), elementaryE(3, 1, 0));
  EXPECT_EQ(circle.freeLoops, 1);
  EXPECT_TRUE(circle.vertices.empty());
  EXPECT_EQ(signatureMatrix(circle)(0, 0), GQ(3));
  Gadget id = compose(elementaryE(3, 1, 2), elementaryE(3, 2, 1));
  EXPECT_EQ(id.vertices.size(), 1u);
  EXPECT_EQ(signatureMatrix(id), Matrix::identity(3));
}

TEST(Compose, SubdividingAnEdgeWithE2IsTransparent) {
  Rng rng(23);
  SignatureSet fs = mixedSet(rng, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Gadget g = testing::randomGadget(rng, fs, 1, 1, 8, 3).second;
    Matrix before = signatureMatrix(g);
    for (int h = 0; h < static_cast<int>(g.halfEdges.size()); ++h) {
      int t = g.halfEdges[h].twin;
      if (t < 0 || t < h) continue;
      Gadget s = g;
      int v = s.addVertex({});
      int a = s.addHalfEdge(v), b = s.addHalfEdge(v);
      s.link(h, a);
      s.link(b, t);
      EXPECT_EQ(signatureMatrix(s), before);
    }
  }
}

TEST(Pivot, SixAryTwoFourToFiveOne) {
  Rng rng(31);
  SignatureSet fs(2);
  fs.add("F", testing::randomFunction(rng, 2, 6, true));
  ExprPtr e = pivotChainExpr("F", 6, 2, 4, 0, 5, 1);
  // (F^{2,4} ⊗ I^3) ∘ three nested E^{2,0} stages
  EXPECT_EQ(exprToString(e).find("E^{2,0}") != std::string::npos, true);
  Gadget g = buildGadget(e, fs);
  ASSERT_TRUE(validate(g).ok);
  EXPECT_EQ(signatureMatrix(g), flatten(*fs.get("F"), 5, 1));
  EXPECT_EQ(evalExpr(e, fs), flatten(*fs.get("F"), 5, 1));
}

TEST(Pivot, IdentityChain) {
  ExprPtr e = pivotChainExpr("F", 3, 1, 2, 0, 1, 2);
  EXPECT_EQ(exprLeafCount(e), 1);
}

TEST(Pivot, AllRotationsAndSplits) {
  Rng rng(37);
  for (int n = 1; n <= 4; ++n) {
    SignatureSet fs(2);
    fs.add("F", testing::randomFunction(rng, 2, n, true));
    const auto& f = *fs.get("F");
    for (int m1 = 0; m1 <= n; ++m1)
      for (int r = 0; r < n; ++r)
        for (int m2 = 0; m2 <= n; ++m2) {
          Gadget g = pivotChain(fs, "F", m1, n - m1, r, m2, n - m2);
          ASSERT_TRUE(validate(g).ok);
          // the base leaf is F^{m1,d1} itself, so the target tensor is rotate(F, r)
          EXPECT_EQ(signatureMatrix(g), flatten(rotate(f, r), m2, n - m2))
              << "n=" << n << " m1=" << m1 << " r=" << r << " m2=" << m2;
        }
  }
}

TEST(Generators, LoweringPreservesMatricesAndPassesAudit) {
  Rng rng(41);
  SignatureSet fs = mixedSet(rng, 2);
  for (int m = 0; m <= 3; ++m)
    for (int d = 0; d <= 3; ++d) {
      ExprPtr e = expandToGenerators(eExpr(m, d), fs);
      EXPECT_TRUE(auditGenerators(e, fs));
      EXPECT_EQ(evalExpr(e, fs), flatten(equality(2, m + d), m, d));
      EXPECT_EQ(signatureMatrix(buildGadget(e, fs)), flatten(equality(2, m + d), m, d));
    }
  for (int trial = 0; trial < 30; ++trial) {
    int m = testing::uniform(rng, 0, 2), d = testing::uniform(rng, 0, 2);
    ExprPtr e = testing::randomExpr(rng, fs, m, d, 2);
    ExprPtr low = expandToGenerators(e, fs);
    std::vector<std::string> bad;
    EXPECT_TRUE(auditGenerators(low, fs, &bad)) << (bad.empty() ? "" : bad[0]);
    EXPECT_EQ(evalExpr(low, fs), evalExpr(e, fs));
  }
  EXPECT_FALSE(auditGenerators(eExpr(2, 2), fs));
}

TEST(Expr, SlicedEvaluationMatchesDense) {
  Rng rng(43);
  for (int q = 1; q <= 3; ++q) {
    SignatureSet fs = mixedSet(rng, q);
    for (int trial = 0; trial < 40; ++trial) {
      int m = testing::uniform(rng, 0, 3), d = testing::uniform(rng, 0, 3);
      ExprPtr e = testing::randomExpr(rng, fs, m, d, 3);
      ASSERT_EQ(evalExprSliced(e, fs), evalExpr(e, fs)) << exprToString(e);
      Matrix b(checkedPow(q, d), 2);
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = testing::randomScalar(rng, true);
      EXPECT_EQ(applyExpr(e, b, fs), evalExpr(e, fs) * b);
    }
  }
}

TEST(QuantumGadget, LinearCombination) {
  QuantumGadget qg;
  qg.terms.push_back({GQ(2), elementaryE(2, 1, 1)});
  qg.terms.push_back({GQ(-1), compose(elementaryE(2, 1, 0), elementaryE(2, 0, 1))});
  Matrix expect(2, 2);
  expect(0, 0) = 1;
  expect(1, 1) = 1;
  expect(0, 1) = -1;
  expect(1, 0) = -1;
  EXPECT_EQ(qg.signature(), expect);
}

}  // namespace
}  // namespace holant
