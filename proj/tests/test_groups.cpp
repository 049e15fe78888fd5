#include <gtest/gtest.h>

#include "mpuc/errors.hpp"
#include "mpuc/groups.hpp"

using namespace mpuc;

namespace {

CMatrix pauli_x() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

// g = (a, b) -> X^a Z^b: a projective representation of Z2 x Z2.
Representation pauli_rep() {
  const GroupPtr G = product_of_cyclics({2, 2});
  std::vector<CMatrix> m;
  for (int g = 0; g < 4; ++g) {
    const auto d = G->digits(g);
    CMatrix x = identity(2);
    if (d[0]) x = x * pauli_x();
    if (d[1]) x = x * pauli_z();
    m.push_back(x);
  }
  return make_representation(G, m, true);
}

GroupPtr s3() {
  // Elements 0..5 as permutations of {0,1,2}; product is composition.
  const std::vector<std::vector<int>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  std::vector<std::vector<int>> mul(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      for (int k = 0; k < 6; ++k)
        if (perms[k] == c) mul[a][b] = k;
    }
  return group_from_table(mul);
}

void expect_group_axioms(const FiniteGroup& g) {
  for (int a = 0; a < g.order; ++a) {
    EXPECT_EQ(g.mul[a][g.identity], a);
    EXPECT_EQ(g.mul[g.identity][a], a);
    EXPECT_EQ(g.mul[a][g.inverse[a]], g.identity);
    EXPECT_EQ(g.power(a, g.element_order[a]), g.identity);
    for (int b = 0; b < g.order; ++b)
      for (int c = 0; c < g.order; ++c) EXPECT_EQ(g.mul[g.mul[a][b]][c], g.mul[a][g.mul[b][c]]);
  }
}

}  // namespace

TEST(Groups, ProductOfCyclicsAxiomsAndDigits) {
  const GroupPtr g = product_of_cyclics({2, 3});
  EXPECT_EQ(g->order, 6);
  expect_group_axioms(*g);
  EXPECT_TRUE(g->abelian);
  for (int e = 0; e < g->order; ++e) EXPECT_EQ(g->from_digits(g->digits(e)), e);
  // First factor most significant.
  EXPECT_EQ(g->from_digits({1, 0}), 3);
}

TEST(Groups, TableGroupS3) {
  const GroupPtr g = s3();
  expect_group_axioms(*g);
  EXPECT_FALSE(g->abelian);
  EXPECT_EQ(g->classes.size(), 3u);
}

TEST(Groups, RejectsNonGroupTable) {
  EXPECT_THROW(group_from_table({{0, 1}, {0, 1}}), Error);
}

TEST(Groups, RegularRepresentationCharacter) {
  for (const GroupPtr& g : {product_of_cyclics({2, 2}), cyclic_group(5), s3()}) {
    const Representation r = regular_representation(g);
    for (int e = 0; e < g->order; ++e)
      EXPECT_NEAR(std::abs(r.character(e) - (e == g->identity ? cplx(g->order) : cplx(0.0))), 0.0, 1e-12);
  }
}

TEST(Groups, RejectsNonRepresentation) {
  const GroupPtr g = cyclic_group(2);
  EXPECT_THROW(make_representation(g, {identity(2), pauli_z() * 1.5}, false), Error);
  EXPECT_THROW(make_representation(g, {identity(2), pauli_x() * pauli_z() * cplx(0, 1) * pauli_x()}, false), Error);
}

TEST(Groups, FactorSetReproducesProducts) {
  const Representation r = pauli_rep();
  const FiniteGroup& g = *r.group;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      EXPECT_LT(fro(r[a] * r[b] - r.factor_set[a][b] * r[g.mul[a][b]]), 1e-12);
  EXPECT_LT(cocycle_condition_residual(g, r.factor_set), 1e-12);
}

// Commutator phase computed directly from the matrices.
TEST(Groups, CocycleInvariantMatchesCommutatorPhase) {
  const Representation r = pauli_rep();
  const CocycleInvariant inv = cocycle_invariant(r);
  for (const auto& e : inv.pairs) {
    const cplx direct = (r[e.g] * r[e.h] * r[e.g].adjoint() * r[e.h].adjoint()).trace() / 2.0;
    EXPECT_NEAR(std::abs(e.phase - direct), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(inv.at(1, 2) + 1.0), 0.0, 1e-12);
  EXPECT_FALSE(inv.trivial());
}

TEST(Groups, CocycleInvariantIsGaugeInvariant) {
  const Representation r = pauli_rep();
  const CocycleInvariant base = cocycle_invariant(r);
  Rng rng(17);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int t = 0; t < 100; ++t) {
    std::vector<CMatrix> m;
    for (int g = 0; g < 4; ++g) m.push_back(std::polar(1.0, phase(rng)) * r[g]);
    const Representation gauged = make_representation(r.group, m, true);
    EXPECT_TRUE(same_invariant(cocycle_invariant(gauged), base));
  }
}

TEST(Groups, CoboundaryLiftsToLinear) {
  const GroupPtr g = product_of_cyclics({2, 2});
  Rng rng(18);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  // Rephased linear representation: projective with a coboundary factor set.
  std::vector<CMatrix> m;
  for (int e = 0; e < 4; ++e) {
    const auto d = g->digits(e);
    CMatrix x = CMatrix::Zero(2, 2);
    x(0, 0) = 1.0;
    x(1, 1) = (d[0] + d[1]) % 2 ? -1.0 : 1.0;
    m.push_back(std::polar(1.0, e == 0 ? 0.0 : phase(rng)) * x);
  }
  const Representation r = make_representation(g, m, true);
  EXPECT_TRUE(cocycle_invariant(r).trivial());
  const LiftResult lift = lift_to_linear(r);
  EXPECT_FALSE(lift.rep.projective);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_LT(fro(lift.rep[a] * lift.rep[b] - lift.rep[g->mul[a][b]]), 1e-10);
  EXPECT_THROW(lift_to_linear(pauli_rep()), Error);
}

TEST(Groups, NonCRegularElementsHaveVanishingCharacter) {
  const Representation r = pauli_rep();
  for (int e = 0; e < 4; ++e)
    if (!is_c_regular(*r.group, e, r.factor_set)) EXPECT_LT(std::abs(r.character(e)), 1e-12);
  EXPECT_TRUE(is_c_regular(*r.group, 0, r.factor_set));
  EXPECT_FALSE(is_c_regular(*r.group, 1, r.factor_set));
}

TEST(Groups, IntertwinerConjugates) {
  const Representation reg = regular_representation(s3());
  Rng rng(19);
  const CMatrix w = random_unitary(6, rng);
  std::vector<CMatrix> m;
  for (const auto& x : reg.matrices) m.push_back(w * x * w.adjoint());
  const Representation b = make_representation(reg.group, m, false);
  const CMatrix found = find_intertwiner(b, reg, 3);
  EXPECT_LT(unitarity_residual(found), 1e-8);
  for (int g = 0; g < 6; ++g) EXPECT_LT(fro(b[g] - found * reg[g] * found.adjoint()), 1e-8);
}

TEST(Groups, TensorRepMultipliesCharacters) {
  const Representation r = pauli_rep();
  const Representation t = tensor_rep(r, r);
  for (int g = 0; g < 4; ++g) EXPECT_NEAR(std::abs(t.character(g) - r.character(g) * r.character(g)), 0.0, 1e-12);
  // Pauli (x) Pauli has trivial class.
  EXPECT_TRUE(cocycle_invariant(t).trivial());
}
