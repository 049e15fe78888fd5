#include <gtest/gtest.h>

#include "mpuc/errors.hpp"
#include "mpuc/models.hpp"

using namespace mpuc;

namespace {

ModelParams with_n(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

ModelParams with_d(int d) {
  ModelParams p;
  p.d = d;
  return p;
}

StandardForm random_gauge(const StandardForm& sf, Rng& rng) {
  const CMatrix A = random_unitary(sf.l, rng), B = random_unitary(sf.r, rng);
  StandardForm g = sf;
  g.u = kron(A, B) * sf.u;
  g.v = sf.v * kron(B.adjoint(), A.adjoint());
  return g;
}

}  // namespace

TEST(Classify, SymmetryIsVerified) {
  const SymmetricMpu s = instantiate("bilayer-swap", with_n(4));
  EXPECT_TRUE(verify_symmetry(s));
  EXPECT_LT(symmetry_residual(s).worst, 1e-10);
  // A rep that does not commute with the shift of layers.
  std::vector<CMatrix> m;
  for (int g = 0; g < 2; ++g) {
    CMatrix x = identity(4);
    if (g) {
      x = CMatrix::Zero(4, 4);
      x(0, 0) = x(3, 3) = 1.0;
      x(1, 2) = x(2, 1) = 1.0;
    }
    m.push_back(x);
  }
  const Representation swap_layers = make_representation(cyclic_group(2), m, false);
  EXPECT_THROW(make_symmetric("bad", s.tensor, s.sf, swap_layers), Error);
}

TEST(Classify, ThreeRoutesAgree) {
  for (const SymmetricMpu& s : {instantiate("bilayer-swap", with_n(5)), instantiate("shift", with_n(4)),
                                instantiate("z3-refined"), instantiate("z2-d8")}) {
    const ClassificationReport rep = classify(s);
    for (const auto& e : rep.elements) {
      if (!e.trace_route) continue;
      ASSERT_TRUE(e.edge_route.has_value()) << s.name << " g=" << e.g;
      EXPECT_NEAR(*e.trace_route, *e.edge_route, 1e-7) << s.name << " g=" << e.g;
      if (e.sigma_route) EXPECT_NEAR(*e.trace_route, *e.sigma_route, 1e-7) << s.name << " g=" << e.g;
      EXPECT_LT(e.product_rule_residual, 1e-7) << s.name << " g=" << e.g;
    }
    EXPECT_LT(rep.max_route_gap, 1e-7) << s.name;
  }
}

TEST(Classify, LabelsAreGaugeInvariant) {
  const SymmetricMpu b = instantiate("bilayer-swap", with_n(3));
  const ClassificationReport base = classify(b);
  Rng rng(77);
  for (int t = 0; t < 10; ++t) {
    const SymmetricMpu g = from_standard_form("gauged", random_gauge(b.sf, rng), b.rep);
    const ClassificationReport rep = classify(g);
    EXPECT_NEAR(rep.ind, base.ind, 1e-9);
    for (size_t e = 0; e < rep.elements.size(); ++e) {
      ASSERT_EQ(rep.elements[e].spi.has_value(), base.elements[e].spi.has_value());
      if (rep.elements[e].spi) EXPECT_NEAR(*rep.elements[e].spi, *base.elements[e].spi, 1e-8);
    }
    EXPECT_TRUE(same_invariant(rep.cocycle, base.cocycle));
  }
}

TEST(Classify, VirtualSymmetryFactorizes) {
  const SymmetricMpu s = instantiate("zdzd-spt", with_d(3));
  const VirtualSymmetry vs = extract_xy(s);
  EXPECT_LT(vs.factor_residual, 1e-8);
  EXPECT_LT(vs.v_side_residual, 1e-8);
  EXPECT_LT(cocycle_condition_residual(*vs.x.group, vs.x.factor_set), 1e-8);
  const ZResult z = extract_z(s);
  EXPECT_LT(z.relation_residual, 1e-6);
}

TEST(Classify, CohomologyOfClusterModel) {
  for (int d : {2, 3}) {
    const SymmetricMpu s = instantiate("zdzd-spt", with_d(d));
    const ClassificationReport rep = classify(s);
    const FiniteGroup& G = *s.rep.group;
    const cplx w = rep.cocycle.at(G.from_digits({1, 0}), G.from_digits({0, 1}));
    EXPECT_NEAR(std::abs(w - root_of_unity(-1, d)), 0.0, 1e-8);
    EXPECT_FALSE(rep.class_trivial);
    EXPECT_TRUE(rep.z_matches_x);
  }
  EXPECT_TRUE(classify(instantiate("bilayer-swap", with_n(3))).class_trivial);
}

TEST(Classify, RefinedIndexUndefinedForNontrivialClass) {
  const SymmetricMpu s = instantiate("zdzd-spt", with_d(2));
  const VirtualSymmetry vs = extract_xy(s);
  const Representation blocked = blocked_rep(s.rep, s.sf.k);
  // Vanishing character: no value; defined character with a nontrivial class: error.
  EXPECT_FALSE(refined_spi(vs, blocked, 1).has_value());
  try {
    refined_spi(vs, blocked, 0);
    ADD_FAILURE() << "expected not_defined";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_defined);
  }
}

TEST(Classify, EdgeOperatorsSatisfyProductRule) {
  const SymmetricMpu s = instantiate("bilayer-swap", with_n(3));
  const VirtualSymmetry vs = extract_xy(s);
  const EdgeOperators e = edge_operators(s.sf, vs, blocked_rep(s.rep, s.sf.k), 1);
  EXPECT_LT(e.product_rule_residual, 1e-9);
  EXPECT_NEAR(0.5 * std::log(std::abs(e.L.trace() / e.R.trace())), std::log(0.5), 1e-9);
  EXPECT_LT(string_evolution_check(s, vs, 1, 6, 2), 1e-9);
}

TEST(Classify, InterferometryFit) {
  const SymmetricMpu s = instantiate("bilayer-swap", with_n(3));
  std::vector<double> ks, ys;
  for (int k = 1; k <= 3; ++k) {
    const InterferometryPoint p = interferometry(s, 1, k);
    ks.push_back(k);
    ys.push_back(0.5 * std::log(p.expectation));
  }
  const LinearFit f = fit_line(ks, ys);
  // |chi_1| / dim = |2 + 2w| / 4 on one site; intercept log|cos(pi/3)|.
  EXPECT_NEAR(f.slope, std::log(std::abs(2.0 + 2.0 * root_of_unity(1, 3)) / 4.0), 1e-7);
  EXPECT_NEAR(f.intercept, std::log(0.5), 1e-7);
}

TEST(Classify, FitLineIsExactOnALine) {
  const LinearFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
}

TEST(Classify, QuantizationWitness) {
  // Spectrum {1, 1, w, w^2} of Z3: |2 + w + w^2| = 1.
  CMatrix y = CMatrix::Zero(4, 4);
  y(0, 0) = y(1, 1) = 1.0;
  y(2, 2) = root_of_unity(1, 3);
  y(3, 3) = root_of_unity(2, 3);
  const cplx phase = std::polar(1.0, 0.3);
  const QuantizationWitness w = quantization_witness(phase * y, 3);
  EXPECT_EQ(w.multiplicities, (std::vector<int>{2, 1, 1}));
  EXPECT_LT(w.residual, 1e-12);
}

TEST(Classify, LiebRobinsonBound) {
  const ClassificationReport b = classify(instantiate("bilayer-swap", with_n(3)));
  ASSERT_TRUE(b.lr_bound.has_value());
  // g = 1: |log(1/2)| / log(4 / |2 + 2w|) = log 2 / log 2
  EXPECT_NEAR(*b.lr_bound, 1.0, 1e-7);
  EXPECT_FALSE(classify(instantiate("shift")).lr_bound.has_value());
}

TEST(Classify, HomotopyForTrivialClass) {
  const HomotopyPath h = homotopy_path(instantiate("bilayer-swap", with_n(3)), 6);
  ASSERT_EQ(h.samples.size(), 6u);
  EXPECT_NEAR(h.samples.front().lambda, 0.0, 1e-15);
  EXPECT_NEAR(h.samples.back().lambda, 1.0, 1e-15);
  for (const auto& s : h.samples) EXPECT_LT(s.symmetry_residual, 1e-8);
  EXPECT_LT(h.start_error, 1e-8);
  EXPECT_LT(h.end_error, 1e-8);
}

TEST(Classify, HomotopyObstructions) {
  for (const SymmetricMpu& s : {instantiate("zdzd-spt", with_d(2)), instantiate("shift")}) {
    try {
      homotopy_path(s, 4);
      ADD_FAILURE() << s.name << " not obstructed";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::obstruction) << s.name;
    }
  }
}

TEST(Classify, CharacterDefinedThreshold) {
  EXPECT_FALSE(character_defined(cplx(1e-12, 0.0), 4.0));
  EXPECT_TRUE(character_defined(cplx(0.5, 0.0), 4.0));
}
