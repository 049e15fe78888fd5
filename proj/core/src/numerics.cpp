#include "mpuc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

using ColMatrix = Eigen::MatrixXcd;

CMatrix identity(long n) { return CMatrix::Identity(n, n); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron_all(const std::vector<CMatrix>& ms) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& m : ms) out = kron(out, m);
  return out;
}

CMatrix kron_power(const CMatrix& a, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

double fro(const CMatrix& m) { return m.norm(); }

cplx hs_inner(const CMatrix& a, const CMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "hs_inner: shape mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

double unitarity_residual(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix id = identity(u.rows());
  return std::max((u.adjoint() * u - id).norm(), (u * u.adjoint() - id).norm());
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

bool all_finite(const CMatrix& m) {
  for (long i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

double phase_aligned_distance(const CMatrix& a, const CMatrix& b) {
  const double nb = b.norm();
  if (nb == 0.0) return a.norm();
  const cplx ov = hs_inner(b, a);
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  return (a - ph * b).norm() / nb;
}

CMatrix random_gaussian(long rows, long cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(rows, cols);
  for (long i = 0; i < m.size(); ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    m.data()[i] = cplx(re, im);
  }
  return m;
}

CMatrix random_unitary(long n, Rng& rng) {
  ColMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<ColMatrix> qr(g);
  ColMatrix q = qr.householderQ();
  ColMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const cplx ph = std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
    q.col(j) *= ph;
  }
  return q;
}

CMatrix random_hermitian(long n, Rng& rng) {
  CMatrix g = random_gaussian(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

SvdResult svd(const CMatrix& m) {
  require(all_finite(m), "svd: non-finite input");
  SvdResult out;
  if (m.size() == 0) {
    out.U = CMatrix(m.rows(), 0);
    out.V = CMatrix(m.cols(), 0);
    return out;
  }
  ColMatrix cm = m;
  Eigen::BDCSVD<ColMatrix> s(cm, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (s.info() != Eigen::Success) fail(ErrorKind::numerical, "svd did not converge");
  // Divide and conquer can return NaN on exactly degenerate spectra.
  if (s.singularValues().allFinite() && s.matrixU().allFinite() && s.matrixV().allFinite()) {
    out.U = s.matrixU();
    out.V = s.matrixV();
    const auto& sv = s.singularValues();
    out.s.assign(sv.data(), sv.data() + sv.size());
    return out;
  }
  Eigen::JacobiSVD<ColMatrix> j(cm, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (!j.singularValues().allFinite()) fail(ErrorKind::numerical, "svd produced non-finite values");
  out.U = j.matrixU();
  out.V = j.matrixV();
  const auto& sv = j.singularValues();
  out.s.assign(sv.data(), sv.data() + sv.size());
  return out;
}

HermitianEigen eig_hermitian(const CMatrix& h) {
  require(h.rows() == h.cols(), "eig_hermitian: not square");
  ColMatrix hm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ColMatrix> es(hm);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "hermitian eigensolver failed");
  HermitianEigen out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
  out.vectors = es.eigenvectors();
  return out;
}

NormalEigen eig_normal(const CMatrix& m) {
  require(m.rows() == m.cols(), "eig_normal: not square");
  const double scale = std::max(1.0, m.squaredNorm());
  const double nres = (m * m.adjoint() - m.adjoint() * m).norm();
  if (nres > 1e-9 * scale) fail(ErrorKind::precondition, "eig_normal: input is not normal");
  NormalEigen out;
  const long n = m.rows();
  if (n == 0) return out;
  ColMatrix cm = m;
  Eigen::ComplexSchur<ColMatrix> schur(cm);
  if (schur.info() != Eigen::Success) fail(ErrorKind::numerical, "Schur decomposition failed");
  const ColMatrix& t = schur.matrixT();
  double off = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) off += std::norm(t(i, j));
  if (std::sqrt(off) > 1e-8 * std::max(1.0, m.norm()))
    fail(ErrorKind::numerical, "eig_normal: Schur form not diagonal");
  out.values.resize(n);
  for (long i = 0; i < n; ++i) out.values[i] = t(i, i);
  out.vectors = schur.matrixU();
  return out;
}

CMatrix null_space(const CMatrix& m, double rel_cutoff) {
  const long n = m.cols();
  if (m.rows() == 0) return identity(n);
  ColMatrix cm = m;
  auto kernel = [&](const auto& s) -> CMatrix {
    const auto& sv = s.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    long rank = 0;
    for (long i = 0; i < sv.size(); ++i)
      if (sv(i) > rel_cutoff * std::max(top, 1e-300)) ++rank;
    if (top == 0.0) rank = 0;
    return s.matrixV().rightCols(n - rank);
  };
  Eigen::BDCSVD<ColMatrix> s(cm, Eigen::ComputeFullV);
  if (s.singularValues().allFinite() && s.matrixV().allFinite()) return kernel(s);
  Eigen::JacobiSVD<ColMatrix> j(cm, Eigen::ComputeFullV);
  if (!j.singularValues().allFinite()) fail(ErrorKind::numerical, "null_space: svd produced non-finite values");
  return kernel(j);
}

CMatrix polar_unitary(const CMatrix& m) {
  SvdResult s = svd(m);
  return s.U * s.V.adjoint();
}

CMatrix unitary_log(const CMatrix& u) {
  const double res = unitarity_residual(u);
  if (!(res <= tol().unitary * std::max(1.0, std::sqrt(static_cast<double>(u.rows())))))
    fail(ErrorKind::precondition, "unitary_log: input not unitary");
  NormalEigen e = eig_normal(u);
  const long n = u.rows();
  CVector d(n);
  for (long i = 0; i < n; ++i) {
    double th = std::arg(e.values[i]);
    if (th <= -kPi + 1e-10) th = kPi;
    d(i) = -th;
  }
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
  HermitianEigen e = eig_hermitian(h);
  const long n = h.rows();
  CVector d(n);
  for (long i = 0; i < n; ++i) d(i) = std::exp(cplx(0.0, -t * e.values[i]));
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

namespace {

CMatrix realign_for_schmidt(const CMatrix& w, std::pair<long, long> da, std::pair<long, long> db) {
  const long ao = da.first, ai = da.second, bo = db.first, bi = db.second;
  require(w.rows() == ao * bo && w.cols() == ai * bi, "operator_schmidt: shape mismatch");
  CMatrix r(ao * ai, bo * bi);
  for (long a1 = 0; a1 < ao; ++a1)
    for (long b1 = 0; b1 < bo; ++b1)
      for (long a2 = 0; a2 < ai; ++a2)
        for (long b2 = 0; b2 < bi; ++b2) r(a1 * ai + a2, b1 * bi + b2) = w(a1 * bo + b1, a2 * bi + b2);
  return r;
}

CMatrix unvec(const CVector& v, long rows, long cols) {
  CMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

}  // namespace

SchmidtDecomposition operator_schmidt(const CMatrix& w, std::pair<long, long> dims_a,
                                      std::pair<long, long> dims_b, double rel_cutoff) {
  if (rel_cutoff < 0) rel_cutoff = tol().rank_cutoff;
  const CMatrix r = realign_for_schmidt(w, dims_a, dims_b);
  SvdResult s = svd(r);
  SchmidtDecomposition out;
  const double top = s.s.empty() ? 0.0 : s.s[0];
  double disc = 0.0;
  for (size_t m = 0; m < s.s.size(); ++m) {
    if (top > 0 && s.s[m] > rel_cutoff * top) {
      out.coefficients.push_back(s.s[m]);
      out.left_factors.push_back(unvec(s.U.col(m), dims_a.first, dims_a.second));
      out.right_factors.push_back(unvec(s.V.col(m).conjugate(), dims_b.first, dims_b.second));
    } else {
      disc += s.s[m] * s.s[m];
    }
  }
  out.discarded = std::sqrt(disc);
  return out;
}

ProductSplit split_product(const CMatrix& w, std::pair<long, long> dims_a, std::pair<long, long> dims_b) {
  const CMatrix r = realign_for_schmidt(w, dims_a, dims_b);
  SvdResult s = svd(r);
  ProductSplit out;
  const double total = w.norm();
  if (s.s.empty() || total == 0.0) {
    out.a = CMatrix::Zero(dims_a.first, dims_a.second);
    out.b = CMatrix::Zero(dims_b.first, dims_b.second);
    return out;
  }
  out.a = s.s[0] * unvec(s.U.col(0), dims_a.first, dims_a.second);
  out.b = unvec(s.V.col(0).conjugate(), dims_b.first, dims_b.second);
  double rest = 0.0;
  for (size_t m = 1; m < s.s.size(); ++m) rest += s.s[m] * s.s[m];
  out.residual = std::sqrt(rest) / total;
  return out;
}

PowerResult power_iteration(const LinearMap& map, long dim, const CMatrix& seed, int max_iter, double tol_) {
  CMatrix x;
  if (seed.size() == 0) {
    Rng rng(20240611);
    x = identity(dim) + 0.05 * random_gaussian(dim, dim, rng);
  } else {
    x = seed;
  }
  x /= x.norm();
  PowerResult out;
  for (int it = 1; it <= max_iter; ++it) {
    CMatrix y = map(x);
    if (!all_finite(y)) fail(ErrorKind::numerical, "power iteration produced non-finite values");
    const cplx lam = hs_inner(x, y);
    const double ny = y.norm();
    const double res = (y - lam * x).norm();
    out.iterations = it;
    if (ny == 0.0) {
      out.eigenvalue = 0.0;
      out.vector = x;
      out.residual = 0.0;
      return out;
    }
    if (res <= tol_ * std::max(ny, 1e-300)) {
      out.eigenvalue = lam;
      out.vector = y / ny;
      out.residual = res / ny;
      return out;
    }
    x = y / ny;
  }
  fail(ErrorKind::numerical, "power iteration did not converge");
}

CMatrix dominant_fixed_point(const LinearMap& channel, long dim) {
  PowerResult p = power_iteration(channel, dim, identity(dim), 20000, tol().fixed_point);
  if (std::abs(p.eigenvalue - 1.0) > 1e-8)
    fail(ErrorKind::precondition, "dominant_fixed_point: leading eigenvalue is not 1 (channel not trace preserving)");
  CMatrix x = p.vector;
  const cplx tr = x.trace();
  if (std::abs(tr) < 1e-12) fail(ErrorKind::degeneracy, "fixed point is traceless");
  x /= tr;
  // Deflated map: a second eigenvalue of modulus ~1 keeps the iterates from decaying.
  LinearMap deflated = [&](const CMatrix& y) -> CMatrix { return channel(y) - x * y.trace(); };
  Rng rng(7);
  CMatrix y = random_gaussian(dim, dim, rng);
  y -= x * y.trace();
  double ny = y.norm();
  double prev_ratio = -1.0;
  for (int it = 0; it < 400 && ny > 0; ++it) {
    CMatrix z = deflated(y / ny);
    const double nz = z.norm();
    if (nz < 1e-14) break;
    const double ratio = nz;
    if (ratio >= 1.0 - tol().gap && (prev_ratio >= 0 && std::abs(ratio - prev_ratio) < 1e-10))
      fail(ErrorKind::degeneracy, "non-unique fixed point: second eigenvalue within tolerance of 1");
    if (prev_ratio >= 0 && std::abs(ratio - prev_ratio) < 1e-7 && ratio < 1.0 - 1e-6) break;
    prev_ratio = ratio;
    y = z;
    ny = nz;
  }
  return x;
}

long product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

std::vector<cplx> permute_legs(const std::vector<cplx>& in, const std::vector<int>& dims,
                               const std::vector<int>& perm) {
  const size_t n = dims.size();
  require(perm.size() == n, "permute_legs: rank mismatch");
  std::vector<long> in_strides(n, 1);
  for (size_t i = n; i-- > 1;) in_strides[i - 1] = in_strides[i] * dims[i];
  std::vector<int> out_dims(n);
  std::vector<long> stride_of_out(n);
  for (size_t i = 0; i < n; ++i) {
    out_dims[i] = dims[perm[i]];
    stride_of_out[i] = in_strides[perm[i]];
  }
  const long total = product(dims);
  require(static_cast<long>(in.size()) == total, "permute_legs: size mismatch");
  std::vector<cplx> out(total);
  std::vector<int> ctr(n, 0);
  long src = 0;
  for (long k = 0; k < total; ++k) {
    out[k] = in[src];
    for (size_t i = n; i-- > 0;) {
      ++ctr[i];
      src += stride_of_out[i];
      if (ctr[i] < out_dims[i]) break;
      src -= stride_of_out[i] * out_dims[i];
      ctr[i] = 0;
    }
  }
  return out;
}

namespace {

std::vector<long> index_map(const std::vector<int>& dims, const std::vector<int>& perm) {
  const long total = product(dims);
  std::vector<cplx> idx(total);
  for (long i = 0; i < total; ++i) idx[i] = cplx(static_cast<double>(i), 0.0);
  std::vector<cplx> p = permute_legs(idx, dims, perm);
  std::vector<long> out(total);
  for (long i = 0; i < total; ++i) out[i] = static_cast<long>(std::llround(p[i].real()));
  return out;
}

}  // namespace

CMatrix permute_operator(const CMatrix& m, const std::vector<int>& row_dims, const std::vector<int>& col_dims,
                         const std::vector<int>& row_perm, const std::vector<int>& col_perm) {
  require(m.rows() == product(row_dims) && m.cols() == product(col_dims), "permute_operator: shape mismatch");
  const std::vector<long> rmap = index_map(row_dims, row_perm);
  const std::vector<long> cmap = index_map(col_dims, col_perm);
  CMatrix out(m.rows(), m.cols());
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out(i, j) = m(rmap[i], cmap[j]);
  return out;
}

CVector apply_on_legs(const CVector& state, std::vector<int>& dims, const CMatrix& op, const std::vector<int>& legs,
                      const std::vector<int>& out_dims) {
  const size_t n = dims.size();
  std::vector<int> perm(legs.begin(), legs.end());
  std::vector<char> used(n, 0);
  for (int l : legs) {
    require(l >= 0 && static_cast<size_t>(l) < n && !used[l], "apply_on_legs: bad leg list");
    used[l] = 1;
  }
  for (size_t i = 0; i < n; ++i)
    if (!used[i]) perm.push_back(static_cast<int>(i));
  long pin = 1;
  for (int l : legs) pin *= dims[l];
  long pout = 1;
  for (int d : out_dims) pout *= d;
  require(op.cols() == pin && op.rows() == pout, "apply_on_legs: operator shape mismatch");
  std::vector<cplx> sv(state.data(), state.data() + state.size());
  std::vector<cplx> front = permute_legs(sv, dims, perm);
  const long rest = static_cast<long>(front.size()) / pin;
  Eigen::Map<const CMatrix> mf(front.data(), pin, rest);
  CMatrix res = op * mf;
  std::vector<int> new_front_dims(out_dims);
  for (size_t i = legs.size(); i < n; ++i) new_front_dims.push_back(dims[perm[i]]);
  std::vector<int> inv(n);
  for (size_t i = 0; i < n; ++i) inv[perm[i]] = static_cast<int>(i);
  std::vector<cplx> rv(res.data(), res.data() + res.size());
  std::vector<cplx> back = permute_legs(rv, new_front_dims, inv);
  for (size_t i = 0; i < legs.size(); ++i) dims[legs[i]] = out_dims[i];
  return Eigen::Map<CVector>(back.data(), static_cast<long>(back.size()));
}

CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& legs) {
  const size_t n = dims.size();
  std::vector<int> order(legs.begin(), legs.end());
  std::vector<char> used(n, 0);
  for (int l : legs) used[l] = 1;
  long rest = 1;
  for (size_t i = 0; i < n; ++i)
    if (!used[i]) {
      order.push_back(static_cast<int>(i));
      rest *= dims[i];
    }
  CMatrix big = kron(op, identity(rest));
  std::vector<int> cur_dims;
  for (int o : order) cur_dims.push_back(dims[o]);
  std::vector<int> perm(n);
  for (size_t i = 0; i < n; ++i) perm[order[i]] = static_cast<int>(i);
  return permute_operator(big, cur_dims, cur_dims, perm, perm);
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  const size_t n = dims.size();
  std::vector<int> order(keep.begin(), keep.end());
  std::vector<char> used(n, 0);
  for (int k : keep) used[k] = 1;
  long kdim = 1, tdim = 1;
  for (int k : keep) kdim *= dims[k];
  for (size_t i = 0; i < n; ++i)
    if (!used[i]) {
      order.push_back(static_cast<int>(i));
      tdim *= dims[i];
    }
  const CMatrix p = permute_operator(m, dims, dims, order, order);
  CMatrix out = CMatrix::Zero(kdim, kdim);
  for (long a = 0; a < kdim; ++a)
    for (long b = 0; b < kdim; ++b) {
      cplx s = 0;
      for (long t = 0; t < tdim; ++t) s += p(a * tdim + t, b * tdim + t);
      out(a, b) = s;
    }
  return out;
}

}  // namespace mpuc
