#include <gtest/gtest.h>

#include "mpuc/errors.hpp"
#include "mpuc/floquet.hpp"

using namespace mpuc;

namespace {

ModelParams with_n(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

SymmetricMpu zdzd_edge(int d) {
  ModelParams p;
  p.d = d;
  return instantiate("zdzd-spt", p);
}

void expect_faithful(const FloquetUnitary& f, const SymmetricMpu& edge) {
  EXPECT_LT(gate_unitarity_residual(f), 1e-10) << f.name;
  EXPECT_LT(symmetry_residual(f), 1e-9) << f.name;
  const BulkEdgeResiduals r = measure_bulk_and_edge(f, edge);
  EXPECT_LT(r.bulk, 1e-9) << f.name;
  EXPECT_LT(r.edge, 1e-9) << f.name;
  EXPECT_LT(r.edge_leak, 1e-9) << f.name;
  EXPECT_GT(r.edge_checks, 0) << f.name;
  EXPECT_TRUE(r.passed()) << f.name;
}

}  // namespace

TEST(Floquet, LatticeShape) {
  const FloquetUnitary f = build_zdzd_floquet(2, 3, 2);
  EXPECT_EQ(f.lattice.bottom.size(), 4u);
  EXPECT_EQ(f.lattice.top.size(), 4u);
  EXPECT_EQ(f.lattice.size(), static_cast<int>(f.lattice.coords.size()));
  EXPECT_FALSE(f.lattice.bulk().empty());
}

TEST(Floquet, ZdzdPlaquetteModel) {
  for (int d : {2, 3}) {
    const FloquetUnitary f = build_zdzd_floquet(d, 2, 2);
    EXPECT_LT(gate_commutator_residual(f), 1e-10);
    EXPECT_LT(diagonal_residual(f), 1e-10);
    expect_faithful(f, zdzd_edge(d));
  }
  expect_faithful(build_zdzd_floquet(2, 3, 3), zdzd_edge(2));
}

TEST(Floquet, CocyclePlaquetteModel) {
  ModelParams p;
  p.orders = {2, 2};
  expect_faithful(build_cocycle_floquet(p, 2, 2), instantiate("cocycle-mpu", p));
  p.coboundary = true;
  expect_faithful(build_cocycle_floquet(p, 2, 2), instantiate("cocycle-mpu", p));
}

TEST(Floquet, SwapConstructionWithBilayerGates) {
  const SymmetricMpu b = instantiate("bilayer-swap", with_n(3));
  const FloquetUnitary f = build_swap_floquet(b.sf.u, b.sf.l, b.sf.r, b.rep, 2, 2);
  const SymmetricMpu edge = swap_edge_mpu(b.sf.u, b.sf.l, b.sf.r, b.rep);
  expect_faithful(f, edge);
  EXPECT_LT(phase_aligned_distance(edge_unitary(b, 256), edge_unitary(edge, 256)), 1e-9);
}

TEST(Floquet, SwapConstructionWithShift) {
  const SymmetricMpu s = instantiate("shift");
  const FloquetUnitary f = build_swap_floquet(s.sf.u, s.sf.l, s.sf.r, s.rep, 2, 2);
  expect_faithful(f, swap_edge_mpu(s.sf.u, s.sf.l, s.sf.r, s.rep));
}

TEST(Floquet, WrongEdgeIsRejected) {
  const FloquetUnitary f = build_zdzd_floquet(2, 2, 2);
  const SymmetricMpu wrong = instantiate("identity", [] {
    ModelParams p;
    p.d = 4;
    return p;
  }());
  EXPECT_FALSE(measure_bulk_and_edge(f, wrong).passed());
  try {
    verify_trivial_bulk_and_edge(f, wrong);
    ADD_FAILURE() << "expected construction_faithfulness";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::construction_faithfulness);
  }
}

TEST(Floquet, ApplyMatchesFullUnitary) {
  const FloquetUnitary f = build_zdzd_floquet(2, 2, 2);
  const CMatrix u = full_unitary(f);
  EXPECT_LT(unitarity_residual(u), 1e-10);
  Rng rng(12);
  CVector psi = random_gaussian(u.rows(), 1, rng);
  EXPECT_LT((apply_floquet(f, psi) - u * psi).norm(), 1e-10);
}

TEST(Floquet, SizeLimits) {
  const FloquetUnitary big = build_zdzd_floquet(3, 3, 3);
  EXPECT_THROW(full_unitary(big), Error);
  EXPECT_THROW(apply_floquet(big, CVector::Zero(4)), Error);
  EXPECT_THROW(edge_unitary(zdzd_edge(3), 1L << 20), Error);
  EXPECT_THROW(build_zdzd_floquet(1, 2, 2), Error);
  EXPECT_THROW(build_zdzd_floquet(2, 1, 2), Error);
}
