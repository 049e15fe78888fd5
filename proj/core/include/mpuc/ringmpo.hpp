#pragma once

#include <vector>

#include "mpuc/mpu.hpp"

namespace mpuc {

// One site of an operator-valued matrix product on a ring.
// data index: ((i * din + j) * Dl + a) * Dr + b
struct SiteOp {
  int dout = 1;
  int din = 1;
  int Dl = 1;
  int Dr = 1;
  std::vector<cplx> data;

  SiteOp() = default;
  SiteOp(int dout_, int din_, int Dl_, int Dr_);
  cplx& at(int i, int j, int a, int b) {
    return data[((static_cast<size_t>(i) * din + j) * Dl + a) * Dr + b];
  }
  cplx at(int i, int j, int a, int b) const {
    return data[((static_cast<size_t>(i) * din + j) * Dl + a) * Dr + b];
  }
  CMatrix bond_block(int i, int j) const;
};

using RingMpo = std::vector<SiteOp>;

SiteOp site_from_tensor(const MpuTensor& t);
SiteOp site_from_operator(const CMatrix& op);
RingMpo ring_from_tensor(const MpuTensor& t, int L);
RingMpo ring_from_sites(const std::vector<SiteOp>& cell, int repeats);
RingMpo ring_product_operator(const std::vector<CMatrix>& ops);

// Splits an operator on consecutive sites (dims given) into site tensors with
// trivial outer bonds.
std::vector<SiteOp> split_operator(const CMatrix& op, const std::vector<int>& dims);

// Site-resolved MPO of a standard form on `pairs` pairs; cell of two sites.
std::vector<SiteOp> sites_from_standard_form(const StandardForm& sf);

RingMpo mpo_mul(const RingMpo& a, const RingMpo& b);
RingMpo mpo_adjoint(const RingMpo& a);
cplx mpo_trace(const RingMpo& a);
cplx mpo_hs_inner(const RingMpo& a, const RingMpo& b);  // Tr(a^dagger b)
CVector mpo_apply(const RingMpo& a, const CVector& psi);
CMatrix mpo_dense(const RingMpo& a);

// Tr of a product of transfer matrices around the ring.
cplx ring_trace(const std::vector<CMatrix>& transfers);

}  // namespace mpuc
