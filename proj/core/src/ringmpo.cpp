#include "mpuc/ringmpo.hpp"

#include "mpuc/errors.hpp"

namespace mpuc {

SiteOp::SiteOp(int dout_, int din_, int Dl_, int Dr_)
    : dout(dout_), din(din_), Dl(Dl_), Dr(Dr_),
      data(static_cast<size_t>(dout_) * din_ * Dl_ * Dr_, cplx(0.0)) {}

CMatrix SiteOp::bond_block(int i, int j) const {
  CMatrix m(Dl, Dr);
  for (int a = 0; a < Dl; ++a)
    for (int b = 0; b < Dr; ++b) m(a, b) = at(i, j, a, b);
  return m;
}

SiteOp site_from_tensor(const MpuTensor& t) {
  SiteOp s(t.d, t.d, t.D, t.D);
  for (int i = 0; i < t.d; ++i)
    for (int j = 0; j < t.d; ++j)
      for (int a = 0; a < t.D; ++a)
        for (int b = 0; b < t.D; ++b) s.at(i, j, a, b) = t.at(i, j)(a, b);
  return s;
}

SiteOp site_from_operator(const CMatrix& op) {
  SiteOp s(static_cast<int>(op.rows()), static_cast<int>(op.cols()), 1, 1);
  for (int i = 0; i < op.rows(); ++i)
    for (int j = 0; j < op.cols(); ++j) s.at(i, j, 0, 0) = op(i, j);
  return s;
}

RingMpo ring_from_tensor(const MpuTensor& t, int L) { return RingMpo(L, site_from_tensor(t)); }

RingMpo ring_from_sites(const std::vector<SiteOp>& cell, int repeats) {
  RingMpo out;
  for (int r = 0; r < repeats; ++r)
    for (const auto& s : cell) out.push_back(s);
  return out;
}

RingMpo ring_product_operator(const std::vector<CMatrix>& ops) {
  RingMpo out;
  for (const auto& o : ops) out.push_back(site_from_operator(o));
  return out;
}

std::vector<SiteOp> split_operator(const CMatrix& op, const std::vector<int>& dims) {
  const int m = static_cast<int>(dims.size());
  require(op.rows() == product(dims) && op.cols() == product(dims), "split_operator: shape mismatch");
  std::vector<int> legdims;
  for (int x = 0; x < 2; ++x)
    for (int d : dims) legdims.push_back(d);
  std::vector<int> perm;
  for (int s = 0; s < m; ++s) {
    perm.push_back(s);
    perm.push_back(m + s);
  }
  std::vector<cplx> flat(op.data(), op.data() + op.size());
  std::vector<cplx> inter = permute_legs(flat, legdims, perm);
  std::vector<SiteOp> out;
  // rem: (bond, rest) matrix
  long rest = static_cast<long>(inter.size());
  CMatrix rem = Eigen::Map<CMatrix>(inter.data(), 1, rest);
  int bond = 1;
  for (int s = 0; s < m; ++s) {
    const long local = static_cast<long>(dims[s]) * dims[s];
    rest /= local;
    // reshape rem (bond, local*rest) -> (bond*local, rest)
    CMatrix mat(static_cast<long>(bond) * local, rest);
    for (int b = 0; b < bond; ++b)
      for (long q = 0; q < local; ++q)
        for (long z = 0; z < rest; ++z) mat(b * local + q, z) = rem(b, q * rest + z);
    if (s == m - 1) {
      SiteOp so(dims[s], dims[s], bond, 1);
      for (int b = 0; b < bond; ++b)
        for (int i = 0; i < dims[s]; ++i)
          for (int j = 0; j < dims[s]; ++j) so.at(i, j, b, 0) = mat(b * local + i * dims[s] + j, 0);
      out.push_back(so);
      break;
    }
    SvdResult sv = svd(mat);
    int rank = 0;
    for (double x : sv.s)
      if (x > 1e-13 * std::max(sv.s[0], 1e-300)) ++rank;
    rank = std::max(rank, 1);
    SiteOp so(dims[s], dims[s], bond, rank);
    for (int b = 0; b < bond; ++b)
      for (int i = 0; i < dims[s]; ++i)
        for (int j = 0; j < dims[s]; ++j)
          for (int c = 0; c < rank; ++c) so.at(i, j, b, c) = sv.U(b * local + i * dims[s] + j, c);
    out.push_back(so);
    CMatrix next(rank, rest);
    for (int c = 0; c < rank; ++c) next.row(c) = sv.s[c] * sv.V.col(c).adjoint();
    rem = next;
    bond = rank;
  }
  return out;
}

std::vector<SiteOp> sites_from_standard_form(const StandardForm& sf) {
  const int db = sf.db();
  SchmidtDecomposition su = operator_schmidt(sf.u, {sf.l, db}, {sf.r, db}, 1e-13);
  SchmidtDecomposition sv = operator_schmidt(sf.v, {db, sf.r}, {db, sf.l}, 1e-13);
  const int na = static_cast<int>(su.coefficients.size());
  const int nb = static_cast<int>(sv.coefficients.size());
  SiteOp even(db, db, nb, na);
  SiteOp odd(db, db, na, nb);
  for (int b = 0; b < nb; ++b) {
    const CMatrix q = sv.coefficients[b] * sv.right_factors[b];
    for (int a = 0; a < na; ++a) {
      const CMatrix w = q * (su.coefficients[a] * su.left_factors[a]);
      for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) even.at(i, j, b, a) = w(i, j);
    }
  }
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      const CMatrix w = sv.left_factors[b] * su.right_factors[a];
      for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) odd.at(i, j, a, b) = w(i, j);
    }
  return {even, odd};
}

RingMpo mpo_mul(const RingMpo& a, const RingMpo& b) {
  require(a.size() == b.size(), "mpo_mul: length mismatch");
  RingMpo out;
  for (size_t s = 0; s < a.size(); ++s) {
    const SiteOp& x = a[s];
    const SiteOp& y = b[s];
    require(x.din == y.dout, "mpo_mul: physical dimension mismatch");
    SiteOp z(x.dout, y.din, x.Dl * y.Dl, x.Dr * y.Dr);
    for (int i = 0; i < x.dout; ++i)
      for (int j = 0; j < y.din; ++j)
        for (int k = 0; k < x.din; ++k)
          for (int a1 = 0; a1 < x.Dl; ++a1)
            for (int b1 = 0; b1 < x.Dr; ++b1) {
              const cplx xv = x.at(i, k, a1, b1);
              if (xv == cplx(0.0)) continue;
              for (int a2 = 0; a2 < y.Dl; ++a2)
                for (int b2 = 0; b2 < y.Dr; ++b2)
                  z.at(i, j, a1 * y.Dl + a2, b1 * y.Dr + b2) += xv * y.at(k, j, a2, b2);
            }
    out.push_back(std::move(z));
  }
  return out;
}

RingMpo mpo_adjoint(const RingMpo& a) {
  RingMpo out;
  for (const auto& x : a) {
    SiteOp z(x.din, x.dout, x.Dl, x.Dr);
    for (int i = 0; i < x.din; ++i)
      for (int j = 0; j < x.dout; ++j)
        for (int p = 0; p < x.Dl; ++p)
          for (int q = 0; q < x.Dr; ++q) z.at(i, j, p, q) = std::conj(x.at(j, i, p, q));
    out.push_back(std::move(z));
  }
  return out;
}

cplx ring_trace(const std::vector<CMatrix>& transfers) {
  require(!transfers.empty(), "ring_trace: empty ring");
  CMatrix acc = transfers[0];
  for (size_t s = 1; s < transfers.size(); ++s) acc = acc * transfers[s];
  return acc.trace();
}

cplx mpo_trace(const RingMpo& a) {
  std::vector<CMatrix> ts;
  for (const auto& x : a) {
    CMatrix t = CMatrix::Zero(x.Dl, x.Dr);
    for (int i = 0; i < std::min(x.dout, x.din); ++i) t += x.bond_block(i, i);
    ts.push_back(t);
  }
  return ring_trace(ts);
}

cplx mpo_hs_inner(const RingMpo& a, const RingMpo& b) {
  require(a.size() == b.size(), "mpo_hs_inner: length mismatch");
  std::vector<CMatrix> ts;
  for (size_t s = 0; s < a.size(); ++s) {
    const SiteOp& x = a[s];
    const SiteOp& y = b[s];
    CMatrix t = CMatrix::Zero(x.Dl * y.Dl, x.Dr * y.Dr);
    for (int i = 0; i < x.dout; ++i)
      for (int j = 0; j < x.din; ++j) t += kron(x.bond_block(i, j).conjugate(), y.bond_block(i, j));
    ts.push_back(t);
  }
  return ring_trace(ts);
}

CVector mpo_apply(const RingMpo& a, const CVector& psi) {
  const int L = static_cast<int>(a.size());
  require(L > 0, "mpo_apply: empty ring");
  long in_total = 1;
  for (const auto& s : a) in_total *= s.din;
  require(psi.size() == in_total, "mpo_apply: state dimension mismatch");
  const int D0 = a[0].Dl;
  // T layout: [alpha0][O][alpha][R], R = remaining inputs (current site most significant)
  long O = 1, R = in_total;
  int Dcur = D0;
  std::vector<cplx> T(static_cast<size_t>(D0) * D0 * R, cplx(0.0));
  for (int a0 = 0; a0 < D0; ++a0)
    for (long r = 0; r < R; ++r) T[(static_cast<size_t>(a0) * D0 + a0) * R + r] = psi(r);
  for (int s = 0; s < L; ++s) {
    const SiteOp& w = a[s];
    require(w.Dl == Dcur, "mpo_apply: bond mismatch");
    const long Rn = R / w.din;
    // (i, beta) x (alpha, j)
    CMatrix W(static_cast<long>(w.dout) * w.Dr, static_cast<long>(w.Dl) * w.din);
    for (int i = 0; i < w.dout; ++i)
      for (int b = 0; b < w.Dr; ++b)
        for (int al = 0; al < w.Dl; ++al)
          for (int j = 0; j < w.din; ++j) W(i * w.Dr + b, al * w.din + j) = w.at(i, j, al, b);
    std::vector<cplx> Tn(static_cast<size_t>(D0) * O * W.rows() * Rn);
    for (long blk = 0; blk < D0 * O; ++blk) {
      Eigen::Map<const CMatrix> in(T.data() + static_cast<size_t>(blk) * W.cols() * Rn, W.cols(), Rn);
      Eigen::Map<CMatrix> out(Tn.data() + static_cast<size_t>(blk) * W.rows() * Rn, W.rows(), Rn);
      out.noalias() = W * in;
    }
    T.swap(Tn);
    O *= w.dout;
    R = Rn;
    Dcur = w.Dr;
  }
  require(Dcur == D0, "mpo_apply: ring does not close");
  CVector out = CVector::Zero(O);
  for (int a0 = 0; a0 < D0; ++a0)
    for (long o = 0; o < O; ++o) out(o) += T[(static_cast<size_t>(a0) * O + o) * D0 + a0];
  return out;
}

CMatrix mpo_dense(const RingMpo& a) {
  long in_total = 1, out_total = 1;
  for (const auto& s : a) {
    in_total *= s.din;
    out_total *= s.dout;
  }
  if (in_total > kDenseBudget || out_total > kDenseBudget) fail(ErrorKind::size, "dense operator exceeds budget");
  CMatrix out(out_total, in_total);
  for (long c = 0; c < in_total; ++c) {
    CVector e = CVector::Zero(in_total);
    e(c) = 1.0;
    out.col(c) = mpo_apply(a, e);
  }
  return out;
}

}  // namespace mpuc
