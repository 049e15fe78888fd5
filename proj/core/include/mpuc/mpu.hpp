#pragma once

#include <string>
#include <vector>

#include "mpuc/numerics.hpp"

namespace mpuc {

// Rank-4 MPU tensor. mats[i * d + j] is the D x D matrix for (out i, in j).
struct MpuTensor {
  int d = 0;
  int D = 0;
  std::vector<CMatrix> mats;

  static MpuTensor zeros(int d, int D);
  const CMatrix& at(int i, int j) const { return mats[static_cast<size_t>(i) * d + j]; }
  CMatrix& at(int i, int j) { return mats[static_cast<size_t>(i) * d + j]; }
};

// Two-layer presentation. Blocked sites have dimension db() = d^k.
// u maps blocked sites (2j, 2j+1) to legs (l_j, r_j); v maps (r_j, l_{j+1}) to
// blocked sites (2j+1, 2j+2), the last v wrapping around the ring.
struct StandardForm {
  CMatrix u;
  CMatrix v;
  int l = 0;
  int r = 0;
  int k = 1;
  int d = 0;

  int db() const;
};

struct SimplicityCertificate {
  bool is_simple = false;
  int k_used = 1;
  CMatrix sigma;
  double residual = 0.0;
};

// Budget for dense operators built from tensors or gates.
constexpr long kDenseBudget = 4096;
// State-vector budget for randomized checks; pairs = 2 is always checked.
constexpr long kCheckBudget = 1L << 18;
bool check_fits(int db, int pairs);

CMatrix build_full_unitary(const MpuTensor& t, int L);
MpuTensor block(const MpuTensor& t, int k);

// E(X) = d^{-1} sum_ij U_ij X U_ij^dagger and its adjoint.
CMatrix transfer_channel(const MpuTensor& t, const CMatrix& x);
CMatrix transfer_channel_adjoint(const MpuTensor& t, const CMatrix& x);
bool is_trace_preserving(const MpuTensor& t, double tol = 1e-9);
// Similarity transform of the bond so that E is trace preserving.
MpuTensor tp_gauge(const MpuTensor& t);

SimplicityCertificate is_simple(const MpuTensor& t);
// Blocks until simple, within d^k <= max_db and k <= D^4.
SimplicityCertificate find_simple_blocking(const MpuTensor& t, int max_db = 64);

StandardForm standard_form_from_gates(const CMatrix& u, const CMatrix& v, int l, int r, int k, int d);
// Same, additionally checking the brickwork against a source tensor (blocked by k).
StandardForm standard_form_from_gates(const CMatrix& u, const CMatrix& v, int l, int r, int k, int d,
                                      const MpuTensor& source);
StandardForm standard_form_from_tensor(const MpuTensor& t);

// Brickwork on `pairs` pairs of blocked sites (2 * pairs blocked sites).
CVector apply_brickwork(const StandardForm& sf, int pairs, const CVector& state);
CVector apply_brickwork_adjoint(const StandardForm& sf, int pairs, const CVector& state);
CMatrix brickwork_unitary(const StandardForm& sf, int pairs);

// max over seeded random states of |U_tensor psi - U_brickwork psi|.
double reconstruction_residual(const StandardForm& sf, const MpuTensor& t, int pairs);
double reconstruction_residual(const StandardForm& a, const StandardForm& b, int pairs);

// Pair-cell tensor (physical dimension db^2) built from the gates.
MpuTensor tensor_from_standard_form(const StandardForm& sf);

MpuTensor tensor_product(const MpuTensor& a, const MpuTensor& b);
// U_a U_b (b applied first).
MpuTensor compose(const MpuTensor& a, const MpuTensor& b);

StandardForm sf_block(const StandardForm& sf, int m);
StandardForm sf_tensor_product(const StandardForm& a, const StandardForm& b);
// U_a U_b (b applied first); the blocked site triples.
StandardForm sf_compose(const StandardForm& a, const StandardForm& b);

// Dense matrix of a sequence of leg operations applied to the basis of in_dims.
struct LegOp {
  CMatrix op;
  std::vector<int> legs;
  std::vector<int> out_dims;
};
CMatrix leg_circuit_matrix(const std::vector<int>& in_dims, const std::vector<LegOp>& ops,
                           const std::vector<int>& final_order);

}  // namespace mpuc
