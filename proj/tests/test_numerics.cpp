#include <gtest/gtest.h>

#include "mpuc/errors.hpp"
#include "mpuc/numerics.hpp"
#include "mpuc/tolerances.hpp"

using namespace mpuc;

namespace {

CVector random_state(long n, Rng& rng) {
  CVector v = random_gaussian(n, 1, rng);
  return v / v.norm();
}

}  // namespace

TEST(Numerics, KronMatchesIndexFormula) {
  Rng rng(1);
  const CMatrix a = random_gaussian(2, 3, rng), b = random_gaussian(3, 2, rng);
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_NEAR(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)), 0.0, 1e-14);
}

TEST(Numerics, RandomUnitaryIsUnitary) {
  Rng rng(2);
  for (int n : {1, 2, 5, 16}) EXPECT_LT(unitarity_residual(random_unitary(n, rng)), 1e-12);
}

TEST(Numerics, SvdReconstructs) {
  Rng rng(3);
  const CMatrix m = random_gaussian(5, 3, rng);
  const SvdResult s = svd(m);
  CMatrix r = CMatrix::Zero(5, 3);
  for (size_t i = 0; i < s.s.size(); ++i) r += s.s[i] * s.U.col(i) * s.V.col(i).adjoint();
  EXPECT_LT(fro(r - m), 1e-12);
  for (size_t i = 1; i < s.s.size(); ++i) EXPECT_GE(s.s[i - 1], s.s[i]);
}

TEST(Numerics, UnitaryLogRoundTrip) {
  Rng rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const CMatrix u = random_unitary(6, rng);
    const CMatrix h = unitary_log(u);
    EXPECT_TRUE(is_hermitian(h, 1e-10));
    EXPECT_LT(fro(expm_hermitian(h) - u), 1e-10);
  }
}

TEST(Numerics, PhaseAlignedDistanceIgnoresGlobalPhase) {
  Rng rng(5);
  const CMatrix u = random_unitary(4, rng);
  EXPECT_LT(phase_aligned_distance(std::polar(1.0, 1.234) * u, u), 1e-12);
  EXPECT_GT(phase_aligned_distance(random_unitary(4, rng), u), 1e-3);
}

TEST(Numerics, PermuteLegsIsInvertible) {
  Rng rng(6);
  const std::vector<int> dims = {2, 3, 4};
  const CVector v = random_state(24, rng);
  std::vector<cplx> in(v.data(), v.data() + v.size());
  const std::vector<int> perm = {2, 0, 1};
  const auto once = permute_legs(in, dims, perm);
  // out leg i = in leg perm[i]; the inverse permutation restores the order.
  std::vector<int> inv(3), pdims(3);
  for (int i = 0; i < 3; ++i) {
    inv[perm[i]] = i;
    pdims[i] = dims[perm[i]];
  }
  const auto back = permute_legs(once, pdims, inv);
  for (size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(std::abs(back[i] - in[i]), 0.0, 1e-15);
}

TEST(Numerics, ApplyOnLegsMatchesEmbed) {
  Rng rng(7);
  const std::vector<int> dims = {2, 3, 2, 2};
  const CMatrix op = random_gaussian(4, 4, rng);
  const CVector psi = random_state(24, rng);
  for (const std::vector<int>& legs : {std::vector<int>{0, 2}, std::vector<int>{3, 0}, std::vector<int>{2, 3}}) {
    const CVector a = apply_on_legs(psi, dims, op, legs);
    const CVector b = embed(op, dims, legs) * psi;
    EXPECT_LT((a - b).norm(), 1e-12);
  }
}

TEST(Numerics, ApplyOnLegsChangesDimensions) {
  Rng rng(8);
  std::vector<int> dims = {2, 2};
  const CMatrix iso = random_gaussian(3, 2, rng);
  const CVector psi = random_state(4, rng);
  const CVector out = apply_on_legs(psi, dims, iso, {1}, {3});
  EXPECT_EQ(out.size(), 6);
  EXPECT_EQ(dims[1], 3);
  EXPECT_LT((out - kron(identity(2), iso) * psi).norm(), 1e-12);
}

TEST(Numerics, PartialTraceOfProduct) {
  Rng rng(9);
  const CMatrix a = random_gaussian(2, 2, rng), b = random_gaussian(3, 3, rng);
  const CMatrix pt = partial_trace(kron(a, b), {2, 3}, {0});
  EXPECT_LT(fro(pt - b.trace() * a), 1e-12);
  const CMatrix pt1 = partial_trace(kron(a, b), {2, 3}, {1});
  EXPECT_LT(fro(pt1 - a.trace() * b), 1e-12);
}

TEST(Numerics, OperatorSchmidtOfProductHasRankOne) {
  Rng rng(10);
  const CMatrix a = random_unitary(2, rng), b = random_unitary(3, rng);
  const SchmidtDecomposition s = operator_schmidt(kron(a, b), {2, 2}, {3, 3});
  ASSERT_EQ(s.coefficients.size(), 1u);
  const ProductSplit p = split_product(kron(a, b), {2, 2}, {3, 3});
  EXPECT_LT(p.residual, 1e-12);
  EXPECT_LT(fro(kron(p.a, p.b) - kron(a, b)), 1e-12);
}

TEST(Numerics, SwapHasOperatorSchmidtRankD2) {
  const int d = 3;
  CMatrix swap = CMatrix::Zero(9, 9);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(j * d + i, i * d + j) = 1.0;
  EXPECT_EQ(operator_schmidt(swap, {d, d}, {d, d}).coefficients.size(), 9u);
}

TEST(Numerics, DominantFixedPointOfDepolarizingChannel) {
  const CMatrix rho = CMatrix::Identity(3, 3) / 3.0;
  const LinearMap ch = [](const CMatrix& x) { return CMatrix(0.5 * x + 0.5 * x.trace() * CMatrix::Identity(3, 3) / 3.0); };
  EXPECT_LT(fro(dominant_fixed_point(ch, 3) - rho), 1e-10);
}

TEST(Numerics, NullSpaceSpansKernel) {
  CMatrix m = CMatrix::Zero(2, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  const CMatrix n = null_space(m, 1e-10);
  ASSERT_EQ(n.cols(), 2);
  EXPECT_LT(fro(m * n), 1e-12);
}

TEST(Numerics, RootOfUnityWraps) {
  EXPECT_NEAR(std::abs(root_of_unity(-1, 4) - cplx(0, -1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(root_of_unity(7, 4) - cplx(0, -1)), 0.0, 1e-15);
}

TEST(Tolerances, OverridesParseAndReject) {
  Tolerances t;
  t.apply_overrides("route=1e-5,degeneracy=0.001");
  EXPECT_DOUBLE_EQ(t.route, 1e-5);
  EXPECT_DOUBLE_EQ(t.degeneracy, 1e-3);
  EXPECT_THROW(t.apply_overrides("nonsense=1"), Error);
  EXPECT_THROW(t.apply_overrides("route"), Error);
}
