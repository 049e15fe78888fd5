#include <gtest/gtest.h>

#include "mpuc/errors.hpp"
#include "mpuc/models.hpp"
#include "mpuc/mpu.hpp"
#include "mpuc/ringmpo.hpp"

using namespace mpuc;

namespace {

SymmetricMpu zd2(const std::string& name = "zdzd-spt") {
  ModelParams p;
  p.d = 2;
  return instantiate(name, p);
}

ModelParams with_n(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

// Translation on a ring of L sites: out leg i = in leg (i + s) mod L.
CMatrix translation(int d, int L, int s) {
  std::vector<int> perm(L);
  for (int i = 0; i < L; ++i) perm[i] = ((i + s) % L + L) % L;
  return permutation_gate(std::vector<int>(L, d), perm);
}

}  // namespace

TEST(Mpu, IdentityTensorGivesIdentity) {
  const SymmetricMpu s = instantiate("identity");
  EXPECT_LT(fro(build_full_unitary(*s.tensor, 4) - identity(16)), 1e-12);
}

TEST(Mpu, ShiftTensorIsATranslation) {
  const SymmetricMpu s = instantiate("shift");
  const CMatrix u = build_full_unitary(*s.tensor, 5);
  const double left = fro(u - translation(2, 5, 1)), right = fro(u - translation(2, 5, -1));
  EXPECT_LT(std::min(left, right), 1e-12);
  EXPECT_GT(std::max(left, right), 1.0);
}

TEST(Mpu, BilayerMovesLayersOppositeWays) {
  const SymmetricMpu s = instantiate("bilayer-swap", with_n(3));
  const int L = 3;
  const CMatrix u = build_full_unitary(*s.tensor, L);
  // Qubit legs (a0 b0 a1 b1 a2 b2): a moves one way, b the other.
  double best = 1e9;
  for (int s : {1, -1}) {
    std::vector<int> perm(2 * L);
    for (int j = 0; j < L; ++j) {
      perm[2 * j] = 2 * ((j + s + L) % L);
      perm[2 * j + 1] = 2 * ((j - s + L) % L) + 1;
    }
    best = std::min(best, fro(u - permutation_gate(std::vector<int>(2 * L, 2), perm)));
  }
  EXPECT_LT(best, 1e-12);
}

TEST(Mpu, FullUnitaryIsUnitary) {
  for (const SymmetricMpu& s : {instantiate("shift"), instantiate("bilayer-swap"), zd2()})
    EXPECT_LT(unitarity_residual(build_full_unitary(*s.tensor, 3)), 1e-10) << s.name;
}

TEST(Mpu, StandardFormReconstructsTensor) {
  for (const SymmetricMpu& s : {instantiate("shift"), instantiate("bilayer-swap"), zd2(), zd2("zdzd-floquet-perturbed")}) {
    const std::string name = s.name;
    const StandardForm sf = standard_form_from_tensor(*s.tensor);
    EXPECT_LT(reconstruction_residual(sf, *s.tensor, 2), 1e-8) << name;
    EXPECT_LT(unitarity_residual(sf.u), 1e-8) << name;
    EXPECT_LT(unitarity_residual(sf.v), 1e-8) << name;
    EXPECT_EQ(static_cast<long>(sf.l) * sf.r, static_cast<long>(sf.db()) * sf.db()) << name;
  }
}

TEST(Mpu, ChiralIndexOfShiftIsLogD) {
  for (int d : {2, 3}) {
    ModelParams p;
    p.d = d;
    const SymmetricMpu s = instantiate("shift", p);
    EXPECT_NEAR(std::abs(chiral_index(s.sf)), std::log(static_cast<double>(d)), 1e-12);
  }
  EXPECT_NEAR(chiral_index(instantiate("bilayer-swap").sf), 0.0, 1e-12);
}

TEST(Mpu, BrickworkMatchesTensor) {
  const SymmetricMpu s = instantiate("bilayer-swap", with_n(3));
  EXPECT_LT(fro(brickwork_unitary(s.sf, 2) - build_full_unitary(*s.tensor, 4)), 1e-10);
  Rng rng(4);
  CVector psi = random_gaussian(256, 1, rng);
  const CVector there = apply_brickwork(s.sf, 2, psi);
  EXPECT_LT((apply_brickwork_adjoint(s.sf, 2, there) - psi).norm(), 1e-10);
}

TEST(Mpu, BlockingPreservesTheUnitary) {
  const SymmetricMpu s = zd2();
  EXPECT_LT(fro(build_full_unitary(block(*s.tensor, 2), 2) - build_full_unitary(*s.tensor, 4)), 1e-10);
  const StandardForm b = sf_block(s.sf, 2);
  EXPECT_EQ(b.k, 2);
  EXPECT_LT(fro(brickwork_unitary(b, 1) - brickwork_unitary(s.sf, 2)), 1e-10);
}

TEST(Mpu, ComposeIsMatrixProduct) {
  const SymmetricMpu a = instantiate("shift"), b = instantiate("identity");
  const SymmetricMpu z = zd2();
  const MpuTensor c = compose(*z.tensor, *z.tensor);
  const CMatrix uz = build_full_unitary(*z.tensor, 3);
  EXPECT_LT(fro(build_full_unitary(c, 3) - uz * uz), 1e-10);
  const MpuTensor ab = compose(*a.tensor, *b.tensor);
  EXPECT_LT(fro(build_full_unitary(ab, 4) - build_full_unitary(*a.tensor, 4)), 1e-10);
  const StandardForm sc = sf_compose(a.sf, a.sf);
  const CMatrix ua = build_full_unitary(*a.tensor, 2 * sc.k);
  EXPECT_LT(fro(brickwork_unitary(sc, 1) - ua * ua), 1e-10);
}

TEST(Mpu, TensorProductActsOnBothFactors) {
  const SymmetricMpu a = instantiate("shift"), b = instantiate("identity");
  const MpuTensor t = tensor_product(*a.tensor, *b.tensor);
  const int L = 3;
  const CMatrix u = build_full_unitary(t, L);
  // Legs (a0 b0 a1 b1 ..) against U_a (x) U_b on (a0 a1 .. b0 b1 ..).
  const CMatrix ref = kron(build_full_unitary(*a.tensor, L), build_full_unitary(*b.tensor, L));
  std::vector<int> perm;
  for (int j = 0; j < L; ++j) {
    perm.push_back(j);
    perm.push_back(L + j);
  }
  const std::vector<int> dims(2 * L, 2);
  EXPECT_LT(fro(permute_operator(ref, dims, dims, perm, perm) - u), 1e-10);
}

TEST(Mpu, TpGaugeIsTracePreserving) {
  const SymmetricMpu s = zd2("zdzd-floquet-perturbed");
  const MpuTensor g = tp_gauge(*s.tensor);
  EXPECT_TRUE(is_trace_preserving(g, 1e-9));
  EXPECT_LT(fro(build_full_unitary(g, 3) - build_full_unitary(*s.tensor, 3)), 1e-8);
}

TEST(Mpu, SimplicityCertificates) {
  EXPECT_TRUE(is_simple(*instantiate("bilayer-swap").tensor).is_simple);
  const SimplicityCertificate c = find_simple_blocking(*zd2().tensor);
  EXPECT_TRUE(c.is_simple);
  EXPECT_GE(c.k_used, 1);
}

TEST(Mpu, RejectsInconsistentGates) {
  Rng rng(9);
  const CMatrix u = random_unitary(16, rng);
  EXPECT_THROW(standard_form_from_gates(u, u, 4, 4, 1, 4, *instantiate("bilayer-swap").tensor), Error);
  EXPECT_THROW(standard_form_from_gates(2.0 * u, u, 4, 4, 1, 4), Error);
  EXPECT_THROW(standard_form_from_gates(u, u, 4, 3, 1, 4), Error);
}

TEST(Mpu, RingMpoDenseMatchesTensor) {
  const SymmetricMpu s = zd2();
  const RingMpo r = ring_from_tensor(*s.tensor, 3);
  EXPECT_LT(fro(mpo_dense(r) - build_full_unitary(*s.tensor, 3)), 1e-10);
  const RingMpo rs = ring_from_sites(sites_from_standard_form(s.sf), 2);
  EXPECT_LT(fro(mpo_dense(rs) - brickwork_unitary(s.sf, 2)), 1e-10);
  // Tr(U^dagger U) = dim
  EXPECT_NEAR(std::abs(mpo_hs_inner(r, r) - 64.0), 0.0, 1e-8);
  Rng rng(10);
  const CVector psi = random_gaussian(64, 1, rng);
  EXPECT_LT((mpo_apply(r, psi) - build_full_unitary(*s.tensor, 3) * psi).norm(), 1e-10);
  EXPECT_LT(fro(mpo_dense(mpo_mul(mpo_adjoint(r), r)) - identity(64)), 1e-10);
}
