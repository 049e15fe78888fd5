#include <gtest/gtest.h>

#include <cmath>

#include "mpuc/errors.hpp"
#include "mpuc/models.hpp"

using namespace mpuc;

TEST(Models, ZooMatchesExpectedLabels) {
  for (const ModelSpec& m : zoo()) {
    const SymmetricMpu s = instantiate(m.name, m.params);
    const ClassificationReport rep = classify(s);
    EXPECT_LT(compare_to_expected(rep, m.expected), 1e-7) << m.name << " (" << m.expected.basis << ")";
    EXPECT_LT(rep.max_route_gap, 1e-7) << m.name;
    EXPECT_LT(rep.symmetry_residual, 1e-9) << m.name;
  }
}

TEST(Models, EveryNameInstantiates) {
  for (const std::string& name : model_names()) {
    EXPECT_NO_THROW(instantiate(name)) << name;
    EXPECT_FALSE(model_usage(name).empty()) << name;
  }
  EXPECT_THROW(instantiate("no-such-model"), Error);
  EXPECT_THROW(expected_labels("no-such-model"), Error);
}

// |1 + w^g| / 2 for the bilayer: the moving layer carries diag(1, w).
TEST(Models, BilayerSpiFromLayerCharacter) {
  for (int n = 2; n <= 7; ++n) {
    ModelParams p;
    p.n = n;
    const ClassificationReport rep = classify(instantiate("bilayer-swap", p));
    for (int g = 0; g < n; ++g) {
      const double a = std::abs(1.0 + std::polar(1.0, 2.0 * kPi * g / n)) / 2.0;
      if (a < 1e-9) {
        EXPECT_FALSE(rep.elements[g].spi.has_value()) << n << " " << g;
      } else {
        ASSERT_TRUE(rep.elements[g].spi.has_value()) << n << " " << g;
        EXPECT_NEAR(*rep.elements[g].spi, std::log(a), 1e-9) << n << " " << g;
      }
    }
  }
}

TEST(Models, ShiftSpiIsLogOfSiteCharacter) {
  for (int d : {2, 3}) {
    ModelParams p;
    p.d = d;
    p.n = 4;
    const SymmetricMpu s = instantiate("shift", p);
    const ClassificationReport rep = classify(s);
    EXPECT_NEAR(std::abs(rep.ind), std::log(double(d)), 1e-12);
    for (int g = 0; g < 4; ++g) {
      // rho = diag(1, .., 1, i^g) on one site
      cplx chi = double(d - 1);
      chi += std::polar(1.0, kPi * g / 2.0);
      if (std::abs(chi) < 1e-9) {
        EXPECT_FALSE(rep.elements[g].spi.has_value());
        continue;
      }
      ASSERT_TRUE(rep.elements[g].spi.has_value());
      EXPECT_NEAR(std::abs(*rep.elements[g].spi), std::log(std::abs(chi)), 1e-9);
    }
  }
}

TEST(Models, Z3RefinedIndexIsCubeOfCyclotomicRatio) {
  const cplx w = std::polar(1.0, 2.0 * kPi / 3.0);
  const cplx ratio = std::pow((1.0 + 2.0 * w * w) / (1.0 + 2.0 * w), 3);
  EXPECT_NEAR(std::abs(ratio + 1.0), 0.0, 1e-12);
  const ClassificationReport rep = classify(instantiate("z3-refined"));
  for (int g : {1, 2}) {
    ASSERT_TRUE(rep.elements[g].rind.has_value());
    EXPECT_NEAR(std::abs(*rep.elements[g].rind - ratio), 0.0, 1e-9);
    // Trivial spi, nontrivial refinement.
    EXPECT_NEAR(*rep.elements[g].spi, 0.0, 1e-9);
  }
}

TEST(Models, Z2D8VirtualCharacters) {
  const SymmetricMpu s = instantiate("z2-d8");
  const VirtualSymmetry vs = extract_xy(s);
  EXPECT_NEAR(std::abs(vs.x.character(1)), 2.0, 1e-9);
  EXPECT_NEAR(std::abs(vs.y.character(1)), 8.0, 1e-9);
  ASSERT_TRUE(spi(vs, 1).has_value());
  EXPECT_NEAR(*spi(vs, 1), 0.5 * std::log(8.0 / 2.0), 1e-9);
}

TEST(Models, CocycleModelCommutatorPhase) {
  for (int p : {1, 2}) {
    ModelParams q;
    q.orders = {3, 3};
    q.p = p;
    const ClassificationReport rep = classify(instantiate("cocycle-mpu", q));
    // generators (1,0) = 3 and (0,1) = 1
    const cplx expected = std::polar(1.0, -2.0 * kPi * p / 3.0);
    EXPECT_NEAR(std::abs(rep.cocycle.at(3, 1) - expected), 0.0, 1e-9);
    EXPECT_FALSE(rep.class_trivial);
  }
  ModelParams triv;
  triv.orders = {2, 2};
  triv.p = 2;
  EXPECT_TRUE(classify(instantiate("cocycle-mpu", triv)).class_trivial);
}

TEST(Models, CoboundaryDoesNotChangeTheClass) {
  ModelParams a, b;
  a.orders = b.orders = {2, 2};
  b.coboundary = true;
  const ClassificationReport ra = classify(instantiate("cocycle-mpu", a));
  const ClassificationReport rb = classify(instantiate("cocycle-mpu", b));
  EXPECT_TRUE(same_invariant(ra.cocycle, rb.cocycle));
  const CocycleAngles ang = cocycle_angles(b);
  EXPECT_EQ(ang.group->order, 4);
}

TEST(Models, GateHelpers) {
  for (int d : {2, 3, 5}) {
    const CMatrix z = clock(d), x = shift_down(d), f = fourier(d);
    const cplx w = root_of_unity(1, d);
    // Z X = w^{-1} X Z with X|j> = |j-1>
    EXPECT_LT(fro(z * x - x * z / w), 1e-12);
    EXPECT_LT(unitarity_residual(f), 1e-12);
    EXPECT_LT(fro(f * z * f.adjoint() - x.adjoint()) * fro(f * z * f.adjoint() - x), 1e-12);
    EXPECT_LT(unitarity_residual(controlled_phase(d, 1)), 1e-12);
  }
}
