#include "mpuc/mpu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpuc/errors.hpp"
#include "mpuc/ringmpo.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

MpuTensor MpuTensor::zeros(int d, int D) {
  MpuTensor t;
  t.d = d;
  t.D = D;
  t.mats.assign(static_cast<size_t>(d) * d, CMatrix::Zero(D, D));
  return t;
}

int StandardForm::db() const {
  int x = 1;
  for (int i = 0; i < k; ++i) x *= d;
  return x;
}

namespace {

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double unitary_tol(long n) { return tol().unitary * std::max(1.0, std::sqrt(static_cast<double>(n))); }

}  // namespace

CMatrix build_full_unitary(const MpuTensor& t, int L) {
  require(L >= 1, "build_full_unitary: L must be positive");
  double dim = std::pow(static_cast<double>(t.d), L);
  if (dim > static_cast<double>(kDenseBudget)) fail(ErrorKind::size, "build_full_unitary: d^L exceeds budget");
  return mpo_dense(ring_from_tensor(t, L));
}

MpuTensor block(const MpuTensor& t, int k) {
  require(k >= 1, "block: k must be positive");
  if (k == 1) return t;
  const double entries = std::pow(static_cast<double>(t.d), 2.0 * k) * t.D * t.D;
  if (entries > 3e7) fail(ErrorKind::size, "block: blocked tensor exceeds memory budget");
  MpuTensor cur = t;
  for (int step = 1; step < k; ++step) {
    MpuTensor nxt = MpuTensor::zeros(cur.d * t.d, t.D);
    for (int i1 = 0; i1 < cur.d; ++i1)
      for (int j1 = 0; j1 < cur.d; ++j1) {
        const CMatrix& a = cur.at(i1, j1);
        if (a.norm() == 0) continue;
        for (int i2 = 0; i2 < t.d; ++i2)
          for (int j2 = 0; j2 < t.d; ++j2) nxt.at(i1 * t.d + i2, j1 * t.d + j2) = a * t.at(i2, j2);
      }
    cur = std::move(nxt);
  }
  return cur;
}

CMatrix transfer_channel(const MpuTensor& t, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(t.D, t.D);
  for (const auto& m : t.mats)
    if (m.norm() > 0) out += m * x * m.adjoint();
  return out / static_cast<double>(t.d);
}

CMatrix transfer_channel_adjoint(const MpuTensor& t, const CMatrix& x) {
  CMatrix out = CMatrix::Zero(t.D, t.D);
  for (const auto& m : t.mats)
    if (m.norm() > 0) out += m.adjoint() * x * m;
  return out / static_cast<double>(t.d);
}

bool is_trace_preserving(const MpuTensor& t, double tol_) {
  return (transfer_channel_adjoint(t, identity(t.D)) - identity(t.D)).norm() <= tol_;
}

MpuTensor tp_gauge(const MpuTensor& t) {
  if (is_trace_preserving(t)) return t;
  PowerResult p = power_iteration([&](const CMatrix& x) { return transfer_channel_adjoint(t, x); }, t.D,
                                  identity(t.D), 20000, 1e-14);
  if (std::abs(p.eigenvalue - 1.0) > 1e-8)
    fail(ErrorKind::not_simple, "tensor transfer channel has spectral radius != 1");
  CMatrix lam = p.vector;
  lam = 0.5 * (lam + lam.adjoint());
  if (lam.trace().real() < 0) lam = -lam;
  HermitianEigen e = eig_hermitian(lam);
  if (e.values.front() <= 1e-10 * e.values.back())
    fail(ErrorKind::not_simple, "left fixed point is singular; tensor not normal");
  CVector sq(t.D), isq(t.D);
  for (int i = 0; i < t.D; ++i) {
    sq(i) = std::sqrt(e.values[i]);
    isq(i) = 1.0 / std::sqrt(e.values[i]);
  }
  const CMatrix half = e.vectors * sq.asDiagonal() * e.vectors.adjoint();
  const CMatrix ihalf = e.vectors * isq.asDiagonal() * e.vectors.adjoint();
  MpuTensor out = t;
  for (auto& m : out.mats) m = half * m * ihalf;
  // Fix the overall scale so that E^dagger(1) = 1 exactly.
  const CMatrix chk = transfer_channel_adjoint(out, identity(t.D));
  const double s = chk.trace().real() / t.D;
  for (auto& m : out.mats) m /= std::sqrt(s);
  return out;
}

SimplicityCertificate is_simple(const MpuTensor& t_in) {
  const MpuTensor t = tp_gauge(t_in);
  SimplicityCertificate cert;
  cert.k_used = 1;
  const long D = t.D, d = t.d;
  const double cost = std::pow(static_cast<double>(d), 4) * std::pow(static_cast<double>(D), 6);
  if (cost > 4e9) fail(ErrorKind::size, "is_simple: identity check exceeds budget");
  cert.sigma = dominant_fixed_point([&](const CMatrix& x) { return transfer_channel(t, x); }, D);
  const long D2 = D * D;
  // C(i,k) = sum_j U_ij (x) conj(U_kj), the matrix of X -> sum_j U_ij X U_kj^dagger.
  std::vector<CMatrix> C(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      CMatrix c = CMatrix::Zero(D2, D2);
      for (int j = 0; j < d; ++j) c += kron(t.at(i, j), t.at(k, j).conjugate());
      C[i * d + k] = c;
    }
  CVector sig(D2), one(D2);
  for (long a = 0; a < D; ++a)
    for (long b = 0; b < D; ++b) {
      sig(a * D + b) = cert.sigma(a, b);
      one(a * D + b) = a == b ? 1.0 : 0.0;
    }
  std::vector<CVector> left(C.size());
  std::vector<Eigen::Matrix<cplx, 1, Eigen::Dynamic>> right(C.size());
  for (size_t q = 0; q < C.size(); ++q) {
    left[q] = C[q] * sig;
    right[q] = one.adjoint() * C[q];
  }
  double worst = 0.0;
  for (size_t p = 0; p < C.size(); ++p)
    for (size_t q = 0; q < C.size(); ++q) {
      const CMatrix lhs = C[p] * C[q];
      const CMatrix rhs = left[p] * right[q];
      worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, lhs.norm()));
    }
  cert.residual = worst;
  cert.is_simple = worst < tol().support;
  return cert;
}

SimplicityCertificate find_simple_blocking(const MpuTensor& t, int max_db) {
  long db = t.d;
  const double kcap = std::pow(static_cast<double>(t.D), 4);
  for (int k = 1; db <= max_db && k <= kcap; ++k, db *= t.d) {
    SimplicityCertificate c = is_simple(block(t, k));
    if (c.is_simple) {
      c.k_used = k;
      return c;
    }
  }
  fail(ErrorKind::not_simple, "tensor did not become simple within the blocking cap");
}

namespace {

void validate_gates(const CMatrix& u, const CMatrix& v, int l, int r, int k, int d) {
  if (d < 1 || k < 1 || l < 1 || r < 1) fail(ErrorKind::precondition, "standard form: dimensions must be positive");
  const long db = ipow(d, k);
  const long n = db * db;
  if (static_cast<long>(l) * r != n) fail(ErrorKind::precondition, "standard form: l * r must equal d^(2k)");
  if (u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n)
    fail(ErrorKind::precondition, "standard form: gate shape mismatch");
  if (unitarity_residual(u) > unitary_tol(n)) fail(ErrorKind::precondition, "standard form: u is not unitary");
  if (unitarity_residual(v) > unitary_tol(n)) fail(ErrorKind::precondition, "standard form: v is not unitary");
}

}  // namespace

StandardForm standard_form_from_gates(const CMatrix& u, const CMatrix& v, int l, int r, int k, int d) {
  validate_gates(u, v, l, r, k, d);
  StandardForm sf{u, v, l, r, k, d};
  return sf;
}

StandardForm standard_form_from_gates(const CMatrix& u, const CMatrix& v, int l, int r, int k, int d,
                                      const MpuTensor& source) {
  StandardForm sf = standard_form_from_gates(u, v, l, r, k, d);
  if (source.d != d) fail(ErrorKind::precondition, "standard form: source tensor dimension mismatch");
  for (int pairs : {2, 3}) {
    if (!check_fits(sf.db(), pairs)) continue;
    const double res = reconstruction_residual(sf, source, pairs);
    if (res > 1e-8) fail(ErrorKind::inconsistent_gates, "brickwork does not reproduce the source tensor");
  }
  return sf;
}

bool check_fits(int db, int pairs) {
  if (pairs <= 2) return true;
  return std::pow(static_cast<double>(db), 2 * pairs) <= static_cast<double>(kCheckBudget);
}

CVector apply_brickwork(const StandardForm& sf, int pairs, const CVector& state) {
  const int db = sf.db();
  const int n = 2 * pairs;
  std::vector<int> dims(n, db);
  require(state.size() == product(dims), "apply_brickwork: state dimension mismatch");
  CVector psi = state;
  for (int j = 0; j < pairs; ++j) psi = apply_on_legs(psi, dims, sf.u, {2 * j, 2 * j + 1}, {sf.l, sf.r});
  for (int j = 0; j < pairs; ++j)
    psi = apply_on_legs(psi, dims, sf.v, {2 * j + 1, (2 * j + 2) % n}, {db, db});
  return psi;
}

CVector apply_brickwork_adjoint(const StandardForm& sf, int pairs, const CVector& state) {
  const int db = sf.db();
  const int n = 2 * pairs;
  std::vector<int> dims(n, db);
  require(state.size() == product(dims), "apply_brickwork_adjoint: state dimension mismatch");
  const CMatrix vd = sf.v.adjoint();
  const CMatrix ud = sf.u.adjoint();
  CVector psi = state;
  for (int j = 0; j < pairs; ++j) psi = apply_on_legs(psi, dims, vd, {2 * j + 1, (2 * j + 2) % n}, {sf.r, sf.l});
  for (int j = 0; j < pairs; ++j) psi = apply_on_legs(psi, dims, ud, {2 * j, 2 * j + 1}, {db, db});
  return psi;
}

CMatrix leg_circuit_matrix(const std::vector<int>& in_dims, const std::vector<LegOp>& ops,
                           const std::vector<int>& final_order) {
  const long N = product(in_dims);
  if (N > kDenseBudget) fail(ErrorKind::size, "leg circuit exceeds dense budget");
  std::vector<int> dims = in_dims;
  dims.push_back(static_cast<int>(N));
  CVector state = CVector::Zero(N * N);
  for (long c = 0; c < N; ++c) state(c * N + c) = 1.0;
  for (const auto& op : ops) state = apply_on_legs(state, dims, op.op, op.legs, op.out_dims);
  std::vector<int> perm = final_order;
  perm.push_back(static_cast<int>(in_dims.size()));
  std::vector<cplx> flat(state.data(), state.data() + state.size());
  std::vector<cplx> out = permute_legs(flat, dims, perm);
  long rows = 1;
  for (int f : final_order) rows *= dims[f];
  return Eigen::Map<CMatrix>(out.data(), rows, N);
}

CMatrix brickwork_unitary(const StandardForm& sf, int pairs) {
  const int db = sf.db();
  const int n = 2 * pairs;
  std::vector<int> dims(n, db);
  std::vector<LegOp> ops;
  for (int j = 0; j < pairs; ++j) ops.push_back({sf.u, {2 * j, 2 * j + 1}, {sf.l, sf.r}});
  for (int j = 0; j < pairs; ++j) ops.push_back({sf.v, {2 * j + 1, (2 * j + 2) % n}, {db, db}});
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return leg_circuit_matrix(dims, ops, order);
}

double reconstruction_residual(const StandardForm& sf, const MpuTensor& t, int pairs) {
  require(t.d == sf.d, "reconstruction_residual: dimension mismatch");
  const MpuTensor tb = block(t, sf.k);
  const RingMpo ring = ring_from_tensor(tb, 2 * pairs);
  const double dim = std::pow(static_cast<double>(sf.db()), 2 * pairs);
  if (dim > 1 << 20) fail(ErrorKind::size, "reconstruction check exceeds budget");
  Rng rng(99);
  double worst = 0.0;
  for (int rep = 0; rep < 2; ++rep) {
    CVector psi = random_gaussian(static_cast<long>(dim), 1, rng);
    psi.normalize();
    const CVector a = mpo_apply(ring, psi);
    const CVector b = apply_brickwork(sf, pairs, psi);
    worst = std::max(worst, (a - b).norm());
  }
  return worst;
}

double reconstruction_residual(const StandardForm& x, const StandardForm& y, int pairs) {
  require(x.d == y.d && x.k == y.k, "reconstruction_residual: incompatible standard forms");
  const double dim = std::pow(static_cast<double>(x.db()), 2 * pairs);
  if (dim > 1 << 20) fail(ErrorKind::size, "reconstruction check exceeds budget");
  Rng rng(98);
  double worst = 0.0;
  for (int rep = 0; rep < 2; ++rep) {
    CVector psi = random_gaussian(static_cast<long>(dim), 1, rng);
    psi.normalize();
    worst = std::max(worst, (apply_brickwork(x, pairs, psi) - apply_brickwork(y, pairs, psi)).norm());
  }
  return worst;
}

MpuTensor tensor_from_standard_form(const StandardForm& sf) {
  const std::vector<SiteOp> cell = sites_from_standard_form(sf);
  const SiteOp& e = cell[0];
  const SiteOp& o = cell[1];
  const int db = sf.db();
  const int D = e.Dl;
  MpuTensor t = MpuTensor::zeros(db * db, D);
  for (int i0 = 0; i0 < db; ++i0)
    for (int j0 = 0; j0 < db; ++j0) {
      const CMatrix a = e.bond_block(i0, j0);
      if (a.norm() == 0) continue;
      for (int i1 = 0; i1 < db; ++i1)
        for (int j1 = 0; j1 < db; ++j1) t.at(i0 * db + i1, j0 * db + j1) = a * o.bond_block(i1, j1);
    }
  return t;
}

MpuTensor tensor_product(const MpuTensor& a, const MpuTensor& b) {
  MpuTensor t = MpuTensor::zeros(a.d * b.d, a.D * b.D);
  for (int ia = 0; ia < a.d; ++ia)
    for (int ja = 0; ja < a.d; ++ja)
      for (int ib = 0; ib < b.d; ++ib)
        for (int jb = 0; jb < b.d; ++jb) t.at(ia * b.d + ib, ja * b.d + jb) = kron(a.at(ia, ja), b.at(ib, jb));
  return t;
}

MpuTensor compose(const MpuTensor& a, const MpuTensor& b) {
  if (a.d != b.d) fail(ErrorKind::precondition, "compose: physical dimensions differ");
  MpuTensor t = MpuTensor::zeros(a.d, a.D * b.D);
  for (int i = 0; i < a.d; ++i)
    for (int j = 0; j < a.d; ++j) {
      CMatrix acc = CMatrix::Zero(t.D, t.D);
      for (int m = 0; m < a.d; ++m) acc += kron(a.at(i, m), b.at(m, j));
      t.at(i, j) = acc;
    }
  return t;
}

StandardForm sf_block(const StandardForm& sf, int m) {
  require(m >= 1, "sf_block: m must be positive");
  if (m == 1) return sf;
  const int db = sf.db();
  const int n = 2 * m;
  std::vector<int> dims(n, db);
  std::vector<LegOp> ops;
  for (int i = 0; i < m; ++i) ops.push_back({sf.u, {2 * i, 2 * i + 1}, {sf.l, sf.r}});
  for (int i = 0; i + 1 < m; ++i) ops.push_back({sf.v, {2 * i + 1, 2 * i + 2}, {db, db}});
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const CMatrix u = leg_circuit_matrix(dims, ops, order);
  const int mid = static_cast<int>(ipow(db, m - 1));
  std::vector<int> vdims;
  for (int i = 0; i < m - 1; ++i) vdims.push_back(db);
  vdims.push_back(sf.r);
  vdims.push_back(sf.l);
  for (int i = 0; i < m - 1; ++i) vdims.push_back(db);
  const CMatrix v = leg_circuit_matrix(vdims, {{sf.v, {m - 1, m}, {db, db}}}, order);
  return standard_form_from_gates(u, v, sf.l * mid, mid * sf.r, sf.k * m, sf.d);
}

namespace {

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

// |a_1..a_k, b_1..b_k> -> |a_1 b_1 .. a_k b_k>
CMatrix interleave_matrix(int da, int db, int k) {
  std::vector<int> dims;
  for (int i = 0; i < k; ++i) dims.push_back(da);
  for (int i = 0; i < k; ++i) dims.push_back(db);
  std::vector<int> perm;
  for (int i = 0; i < k; ++i) {
    perm.push_back(i);
    perm.push_back(k + i);
  }
  std::vector<int> id(perm.size());
  std::iota(id.begin(), id.end(), 0);
  return permute_operator(identity(product(dims)), dims, dims, perm, id);
}

}  // namespace

StandardForm sf_tensor_product(const StandardForm& a_in, const StandardForm& b_in) {
  const int K = a_in.k / gcd_int(a_in.k, b_in.k) * b_in.k;
  const StandardForm a = sf_block(a_in, K / a_in.k);
  const StandardForm b = sf_block(b_in, K / b_in.k);
  const int dba = a.db(), dbb = b.db();
  CMatrix u = permute_operator(kron(a.u, b.u), {a.l, a.r, b.l, b.r}, {dba, dba, dbb, dbb}, {0, 2, 1, 3},
                               {0, 2, 1, 3});
  CMatrix v = permute_operator(kron(a.v, b.v), {dba, dba, dbb, dbb}, {a.r, a.l, b.r, b.l}, {0, 2, 1, 3},
                               {0, 2, 1, 3});
  if (K > 1) {
    const CMatrix p = interleave_matrix(a.d, b.d, K);
    const CMatrix pp = kron(p, p);
    u = u * pp.adjoint();
    v = pp * v;
  }
  return standard_form_from_gates(u, v, a.l * b.l, a.r * b.r, K, a.d * b.d);
}

StandardForm sf_compose(const StandardForm& a_in, const StandardForm& b_in) {
  if (a_in.d != b_in.d) fail(ErrorKind::precondition, "sf_compose: physical dimensions differ");
  const int K = a_in.k / gcd_int(a_in.k, b_in.k) * b_in.k;
  const StandardForm s1 = sf_block(a_in, K / a_in.k);  // applied second
  const StandardForm s0 = sf_block(b_in, K / b_in.k);  // applied first
  const int db = s0.db();
  const std::vector<int> order = {0, 1, 2, 3, 4, 5};
  std::vector<LegOp> uops = {
      {s0.u, {0, 1}, {s0.l, s0.r}}, {s0.u, {2, 3}, {s0.l, s0.r}}, {s0.u, {4, 5}, {s0.l, s0.r}},
      {s0.v, {1, 2}, {db, db}},     {s0.v, {3, 4}, {db, db}},     {s1.u, {2, 3}, {s1.l, s1.r}},
  };
  const CMatrix u = leg_circuit_matrix({db, db, db, db, db, db}, uops, order);
  std::vector<LegOp> vops = {
      {s0.v, {2, 3}, {db, db}},     {s1.u, {1, 2}, {s1.l, s1.r}}, {s1.u, {3, 4}, {s1.l, s1.r}},
      {s1.v, {0, 1}, {db, db}},     {s1.v, {2, 3}, {db, db}},     {s1.v, {4, 5}, {db, db}},
  };
  const CMatrix v = leg_circuit_matrix({s1.r, db, s0.r, s0.l, db, s1.l}, vops, order);
  return standard_form_from_gates(u, v, s0.l * db * s1.l, s1.r * db * s0.r, 3 * K, s0.d);
}

namespace {

// Operators O on sites (0,1) of a 4-site ring whose image U O U^dagger lies on `keep`.
std::vector<CMatrix> support_algebra(const CMatrix& U4, int db, const std::vector<int>& keep) {
  const long n = static_cast<long>(db) * db;
  const std::vector<int> dims4 = {db, db, db, db};
  std::vector<int> others;
  for (int s = 0; s < 4; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) others.push_back(s);
  std::vector<int> order = keep;
  order.insert(order.end(), others.begin(), others.end());
  // Y_{ac}: column (a,c) of U4 reshaped to (keep, others).
  std::vector<CMatrix> Y(static_cast<size_t>(n) * n);
  for (long a = 0; a < n; ++a)
    for (long c = 0; c < n; ++c) {
      const long col = a * n + c;
      std::vector<cplx> v(U4.rows());
      for (long r = 0; r < U4.rows(); ++r) v[r] = U4(r, col);
      std::vector<cplx> p = permute_legs(v, dims4, order);
      Y[a * n + c] = Eigen::Map<CMatrix>(p.data(), n, n);
    }
  // M column (a,b) = vec(Tr_others U (E_ab (x) 1) U^dagger) / n
  CMatrix M(n * n, n * n);
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b) {
      CMatrix R = CMatrix::Zero(n, n);
      for (long c = 0; c < n; ++c) R += Y[a * n + c] * Y[b * n + c].adjoint();
      R /= static_cast<double>(n);
      for (long x = 0; x < n; ++x)
        for (long y = 0; y < n; ++y) M(x * n + y, a * n + b) = R(x, y);
    }
  const CMatrix gram = M.adjoint() * M;
  HermitianEigen e = eig_hermitian(gram);
  std::vector<CMatrix> basis;
  for (long i = 0; i < n * n; ++i) {
    if (std::abs(e.values[i] - 1.0) < 1e-8) {
      CMatrix O(n, n);
      for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b) O(a, b) = e.vectors(a * n + b, i);
      basis.push_back(O);
    }
  }
  return basis;
}

// Eigen-groups of a random Hermitian element; each group is an orthonormal column block.
std::vector<CMatrix> spectral_groups(const std::vector<CMatrix>& basis, long n, Rng& rng, int expect_groups,
                                     int expect_mult) {
  std::normal_distribution<double> nd;
  CMatrix H = CMatrix::Zero(n, n);
  for (const auto& b : basis) H += nd(rng) * (b + b.adjoint()) + nd(rng) * cplx(0, 1) * (b - b.adjoint());
  HermitianEigen e = eig_hermitian(H);
  const double spread = std::max(1.0, std::abs(e.values.back()) + std::abs(e.values.front()));
  std::vector<CMatrix> groups;
  long start = 0;
  for (long i = 1; i <= n; ++i) {
    if (i == n || e.values[i] - e.values[i - 1] > 1e-6 * spread) {
      groups.push_back(e.vectors.middleCols(start, i - start));
      start = i;
    }
  }
  if (static_cast<int>(groups.size()) != expect_groups)
    fail(ErrorKind::extraction_failure, "support algebra spectrum has unexpected block structure");
  for (const auto& g : groups)
    if (g.cols() != expect_mult) fail(ErrorKind::extraction_failure, "support algebra multiplicities mismatch");
  return groups;
}

CMatrix random_element(const std::vector<CMatrix>& basis, long n, Rng& rng) {
  std::normal_distribution<double> nd;
  CMatrix X = CMatrix::Zero(n, n);
  for (const auto& b : basis) X += cplx(nd(rng), nd(rng)) * b;
  return X;
}

}  // namespace

StandardForm standard_form_from_tensor(const MpuTensor& t) {
  SimplicityCertificate cert = find_simple_blocking(t, 8);
  const int k = cert.k_used;
  const MpuTensor tb = block(t, k);
  const int db = tb.d;
  const long n = static_cast<long>(db) * db;
  if (n * n > kDenseBudget) fail(ErrorKind::size, "standard_form_from_tensor: four-site unitary exceeds budget");
  const CMatrix U4 = build_full_unitary(tb, 4);
  const CMatrix U2 = build_full_unitary(tb, 2);
  const std::vector<CMatrix> AL = support_algebra(U4, db, {3, 0});
  const std::vector<CMatrix> AR = support_algebra(U4, db, {1, 2});
  const long l = std::lround(std::sqrt(static_cast<double>(AL.size())));
  const long r = std::lround(std::sqrt(static_cast<double>(AR.size())));
  if (l * l != static_cast<long>(AL.size()) || r * r != static_cast<long>(AR.size()) || l * r != n)
    fail(ErrorKind::extraction_failure, "support algebras do not factor the pair algebra");
  Rng rng(4242);
  const std::vector<CMatrix> E = spectral_groups(AL, n, rng, static_cast<int>(l), static_cast<int>(r));
  const std::vector<CMatrix> F = spectral_groups(AR, n, rng, static_cast<int>(r), static_cast<int>(l));
  // e_00 spans E_0 n F_0
  const CMatrix PF0 = F[0] * F[0].adjoint();
  HermitianEigen w = eig_hermitian(E[0].adjoint() * PF0 * E[0]);
  if (std::abs(w.values.back() - 1.0) > 1e-8) fail(ErrorKind::extraction_failure, "E_0 and F_0 do not intersect");
  const CVector e00 = E[0] * w.vectors.col(E[0].cols() - 1);
  const CMatrix Y = random_element(AR, n, rng);
  const CMatrix X = random_element(AL, n, rng);
  CMatrix u(n, n);
  for (long b = 0; b < r; ++b) {
    CVector e0b = F[b] * (F[b].adjoint() * (Y * e00));
    if (e0b.norm() < 1e-8) fail(ErrorKind::extraction_failure, "degenerate random element in A_R");
    e0b.normalize();
    for (long a = 0; a < l; ++a) {
      CVector eab = E[a] * (E[a].adjoint() * (X * e0b));
      if (eab.norm() < 1e-8) fail(ErrorKind::extraction_failure, "degenerate random element in A_L");
      eab.normalize();
      u.row(a * r + b) = eab.adjoint();
    }
  }
  const CMatrix x = U2 * u.adjoint();
  const CMatrix v = permute_operator(x, {db, db}, {static_cast<int>(l), static_cast<int>(r)}, {1, 0}, {1, 0});
  if (unitarity_residual(v) > 1e-8) fail(ErrorKind::extraction_failure, "recovered v is not unitary");
  StandardForm sf{u, v, static_cast<int>(l), static_cast<int>(r), k, t.d};
  for (int pairs : {2, 3}) {
    if (!check_fits(sf.db(), pairs)) continue;
    if (reconstruction_residual(sf, t, pairs) > 1e-8)
      fail(ErrorKind::extraction_failure, "extracted gates fail brickwork reconstruction");
  }
  return sf;
}

}  // namespace mpuc
