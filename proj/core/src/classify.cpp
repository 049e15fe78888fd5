#include "mpuc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

namespace {

constexpr long kStateBudget = 1L << 20;

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

CVector random_state(long n, Rng& rng) {
  CVector psi = random_gaussian(n, 1, rng);
  psi.normalize();
  return psi;
}

CVector apply_each(const CVector& psi, const std::vector<int>& dims, const CMatrix& op) {
  CVector out = psi;
  for (size_t s = 0; s < dims.size(); ++s) out = apply_on_legs(out, dims, op, {static_cast<int>(s)});
  return out;
}

CMatrix block_of(const SiteOp& w, int i, int j) { return w.bond_block(i, j); }

void set_block(SiteOp& w, int i, int j, const CMatrix& m) {
  for (int a = 0; a < w.Dl; ++a)
    for (int b = 0; b < w.Dr; ++b) w.at(i, j, a, b) = m(a, b);
}

std::vector<CMatrix> blocks(const SiteOp& w) {
  std::vector<CMatrix> out(static_cast<size_t>(w.dout) * w.din);
  for (int i = 0; i < w.dout; ++i)
    for (int j = 0; j < w.din; ++j) out[i * w.din + j] = block_of(w, i, j);
  return out;
}

// W'_{ij} = sum_{kl} a_{ik} W_{kl} b_{lj}
std::vector<CMatrix> dress_physical(const std::vector<CMatrix>& w, int d, const CMatrix& a, const CMatrix& b) {
  std::vector<CMatrix> tmp(w.size(), CMatrix::Zero(w[0].rows(), w[0].cols()));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (a(i, k) == cplx(0.0)) continue;
      for (int j = 0; j < d; ++j) tmp[i * d + j] += a(i, k) * w[k * d + j];
    }
  std::vector<CMatrix> out(w.size(), CMatrix::Zero(w[0].rows(), w[0].cols()));
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) {
        if (b(l, j) == cplx(0.0)) continue;
        out[i * d + j] += tmp[i * d + l] * b(l, j);
      }
  return out;
}

// Rank-one split of w on (l x r) legs using the largest entry as pivot.
ProductSplit pivot_split(const CMatrix& w, long l, long r) {
  Eigen::Index pi = 0, pj = 0;
  w.cwiseAbs().maxCoeff(&pi, &pj);
  const long a = pi / r, b = pi % r, a2 = pj / r, b2 = pj % r;
  CMatrix x(l, l), y(r, r);
  for (long p = 0; p < l; ++p)
    for (long q = 0; q < l; ++q) x(p, q) = w(p * r + b, q * r + b2);
  for (long s = 0; s < r; ++s)
    for (long t = 0; t < r; ++t) y(s, t) = w(a * r + s, a2 * r + t);
  y /= w(pi, pj);
  ProductSplit out{x, y, 0.0};
  out.residual = (w - kron(x, y)).norm() / std::max(w.norm(), 1e-300);
  return out;
}

cplx first_phase(const CMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > 1e-8 * scale) return m(i, j) / std::abs(m(i, j));
  return 1.0;
}

double log_abs(cplx z) { return std::log(std::abs(z)); }

}  // namespace

Representation blocked_rep(const Representation& rep, int k) { return k == 1 ? rep : tensor_power(rep, k); }

namespace {

SymmetryCheck checked_symmetry(const SymmetricMpu& s) {
  const SymmetryCheck c = symmetry_residual(s);
  if (c.worst > tol().symmetry * 10.0)
    fail(ErrorKind::asymmetric, "MPU does not commute with rho_g^L: worst element " + s.rep.group->label(c.worst_element) +
                                    ", residual " + std::to_string(c.worst));
  return c;
}

}  // namespace

SymmetricMpu make_symmetric(const std::string& name, std::optional<MpuTensor> tensor, std::optional<StandardForm> sf,
                            const Representation& rep) {
  require(tensor.has_value() || sf.has_value(), "make_symmetric: need a tensor or a standard form");
  if (rep.projective) fail(ErrorKind::precondition, "physical representation must be linear");
  SymmetricMpu s;
  s.name = name;
  s.rep = rep;
  s.tensor = tensor;
  if (sf) {
    s.sf = *sf;
    if (tensor) {
      if (tensor->d != sf->d) fail(ErrorKind::precondition, "tensor and gates have different physical dimension");
      if (reconstruction_residual(*sf, *tensor, 2) > 1e-8)
        fail(ErrorKind::inconsistent_gates, "gates do not reproduce the tensor");
    }
  } else {
    s.sf = standard_form_from_tensor(*tensor);
  }
  if (rep.dim() != s.sf.d) fail(ErrorKind::precondition, "representation dimension differs from the physical dimension");
  if (tensor) {
    s.cell = {site_from_tensor(*tensor)};
    s.cell_rep = rep;
  } else {
    s.cell = sites_from_standard_form(s.sf);
    s.cell_rep = blocked_rep(rep, s.sf.k);
  }
  s.symmetry_worst = checked_symmetry(s).worst;
  return s;
}

SymmetricMpu from_standard_form(const std::string& name, const StandardForm& sf, const Representation& rep) {
  return make_symmetric(name, std::nullopt, sf, rep);
}

SymmetryCheck symmetry_residual(const StandardForm& sf, const Representation& rep) {
  const Representation rb = blocked_rep(rep, sf.k);
  const int db = sf.db();
  SymmetryCheck out;
  Rng rng(31);
  bool any = false;
  for (int pairs : {2, 3}) {
    if (!check_fits(db, pairs)) continue;
    const long n = ipow(db, 2 * pairs);
    if (n > kStateBudget) continue;
    any = true;
    std::vector<int> dims(2 * pairs, db);
    for (int rep_i = 0; rep_i < 2; ++rep_i) {
      const CVector psi = random_state(n, rng);
      const CVector upsi = apply_brickwork(sf, pairs, psi);
      for (int g : rep.group->generators()) {
        const CVector a = apply_brickwork(sf, pairs, apply_each(psi, dims, rb[g]));
        const CVector b = apply_each(upsi, dims, rb[g]);
        const double res = (a - b).norm();
        if (res > out.worst) {
          out.worst = res;
          out.worst_element = g;
        }
      }
    }
  }
  if (!any) fail(ErrorKind::size, "symmetry check exceeds the state budget");
  return out;
}

SymmetryCheck symmetry_residual(const SymmetricMpu& s) {
  SymmetryCheck out = symmetry_residual(s.sf, s.rep);
  if (s.tensor) {
    const MpuTensor& t = *s.tensor;
    Rng rng(37);
    for (int L : {2, 3}) {
      const long n = ipow(t.d, L);
      if (n > kCheckBudget) continue;
      const RingMpo ring = ring_from_tensor(t, L);
      std::vector<int> dims(L, t.d);
      for (int rep_i = 0; rep_i < 2; ++rep_i) {
        const CVector psi = random_state(n, rng);
        const CVector upsi = mpo_apply(ring, psi);
        for (int g = 0; g < s.rep.group->order; ++g) {
          if (g == s.rep.group->identity) continue;
          const double res = (mpo_apply(ring, apply_each(psi, dims, s.rep[g])) - apply_each(upsi, dims, s.rep[g])).norm();
          if (res > out.worst) {
            out.worst = res;
            out.worst_element = g;
          }
        }
      }
    }
  }
  return out;
}

bool verify_symmetry(const SymmetricMpu& s) {
  checked_symmetry(s);
  return true;
}

VirtualSymmetry extract_xy(const StandardForm& sf, const Representation& rep) {
  const GroupPtr G = rep.group;
  const Representation rb = blocked_rep(rep, sf.k);
  const long l = sf.l, r = sf.r;
  VirtualSymmetry vs;
  std::vector<CMatrix> xs, ys;
  const CMatrix ud = sf.u.adjoint();
  const CMatrix vd = sf.v.adjoint();
  for (int g = 0; g < G->order; ++g) {
    const CMatrix rr = kron(rb[g], rb[g]);
    const CMatrix w = sf.u * rr * ud;
    ProductSplit sp = pivot_split(w, l, r);
    if (sp.residual > tol().factor)
      fail(ErrorKind::not_factorizable, "u rho_g^2 u^dag is not a product across the l|r cut for g = " + G->label(g));
    const double c = std::sqrt((sp.a.adjoint() * sp.a).trace().real() / static_cast<double>(l));
    CMatrix x = sp.a / c;
    CMatrix y = sp.b * c;
    const cplx ph = first_phase(x);
    x /= ph;
    y *= ph;
    vs.factor_residual = std::max(vs.factor_residual, (w - kron(x, y)).norm() / w.norm());
    vs.v_side_residual = std::max(vs.v_side_residual, (sf.v * kron(y, x) * vd - rr).norm() / rr.norm());
    xs.push_back(x);
    ys.push_back(y);
  }
  vs.x = make_representation(G, xs, true);
  vs.y = make_representation(G, ys, true);
  for (int g = 0; g < G->order; ++g)
    for (int h = 0; h < G->order; ++h)
      vs.inverse_set_residual =
          std::max(vs.inverse_set_residual, std::abs(vs.x.factor_set[g][h] * vs.y.factor_set[g][h] - 1.0));
  vs.gauge_notes.push_back("x_g phase fixed by its first nonzero entry; y_g carries the inverse phase");
  vs.gauge_notes.push_back("v-side relation v (y_g (x) x_g) v^dag = rho_g (x) rho_g holds with the u-side phases, residual " +
                           std::to_string(vs.v_side_residual));
  return vs;
}

VirtualSymmetry extract_xy(const SymmetricMpu& s) { return extract_xy(s.sf, s.rep); }

namespace {

// Y -> d^{-1} sum_ij W_ij^dag Y W'_ij over the sites of a cell (site 0 first).
CMatrix cell_left_map(const std::vector<std::vector<CMatrix>>& w, const std::vector<std::vector<CMatrix>>& wp,
                      const std::vector<int>& d, const CMatrix& y0) {
  CMatrix y = y0;
  for (size_t s = 0; s < w.size(); ++s) {
    CMatrix acc = CMatrix::Zero(w[s][0].cols(), w[s][0].cols());
    for (size_t q = 0; q < w[s].size(); ++q) {
      if (w[s][q].norm() == 0) continue;
      acc.noalias() += w[s][q].adjoint() * y * wp[s][q];
    }
    y = acc / static_cast<double>(d[s]);
  }
  return y;
}

}  // namespace

std::vector<SiteOp> tp_gauge_cell(const std::vector<SiteOp>& cell) {
  require(!cell.empty(), "tp_gauge_cell: empty cell");
  std::vector<std::vector<CMatrix>> w;
  std::vector<int> d;
  for (const auto& s : cell) {
    w.push_back(blocks(s));
    d.push_back(s.din);
  }
  const long D = cell[0].Dl;
  const LinearMap adj = [&](const CMatrix& y) { return cell_left_map(w, w, d, y); };
  PowerResult p = power_iteration(adj, D, identity(D), 20000, 1e-14);
  if (std::abs(p.eigenvalue - 1.0) > 1e-8) fail(ErrorKind::not_simple, "cell transfer channel has spectral radius != 1");
  CMatrix lam = 0.5 * (p.vector + p.vector.adjoint());
  if (lam.trace().real() < 0) lam = -lam;
  HermitianEigen e = eig_hermitian(lam);
  if (e.values.front() <= 1e-10 * e.values.back())
    fail(ErrorKind::not_simple, "left fixed point of the cell channel is singular");
  CVector sq(D), isq(D);
  for (long i = 0; i < D; ++i) {
    sq(i) = std::sqrt(e.values[i]);
    isq(i) = 1.0 / std::sqrt(e.values[i]);
  }
  const CMatrix half = e.vectors * sq.asDiagonal() * e.vectors.adjoint();
  const CMatrix ihalf = e.vectors * isq.asDiagonal() * e.vectors.adjoint();
  std::vector<SiteOp> out = cell;
  for (int i = 0; i < out[0].dout; ++i)
    for (int j = 0; j < out[0].din; ++j) set_block(out[0], i, j, half * block_of(out[0], i, j));
  SiteOp& last = out.back();
  for (int i = 0; i < last.dout; ++i)
    for (int j = 0; j < last.din; ++j) set_block(last, i, j, block_of(last, i, j) * ihalf);
  std::vector<std::vector<CMatrix>> w2;
  for (const auto& s : out) w2.push_back(blocks(s));
  const CMatrix chk = cell_left_map(w2, w2, d, identity(D));
  const double scale = std::sqrt(chk.trace().real() / static_cast<double>(D));
  for (auto& x : out[0].data) x /= scale;
  return out;
}

ZResult extract_z(const SymmetricMpu& s) {
  ZResult out;
  out.tp_cell = tp_gauge_cell(s.cell);
  std::vector<std::vector<CMatrix>> w;
  std::vector<int> d;
  for (const auto& site : out.tp_cell) {
    w.push_back(blocks(site));
    d.push_back(site.din);
  }
  const long D = out.tp_cell[0].Dl;
  const GroupPtr G = s.rep.group;
  std::vector<CMatrix> zs;
  for (int g = 0; g < G->order; ++g) {
    const CMatrix& rho = s.cell_rep[g];
    std::vector<std::vector<CMatrix>> wp;
    for (size_t q = 0; q < w.size(); ++q) wp.push_back(dress_physical(w[q], d[q], rho, rho.adjoint()));
    const LinearMap m = [&](const CMatrix& y) { return cell_left_map(w, wp, d, y); };
    PowerResult p = power_iteration(m, D, CMatrix(), 20000, 1e-14);
    if (std::abs(p.eigenvalue) < 1.0 - 1e-8)
      fail(ErrorKind::symmetry_broken, "mixed transfer operator has no unimodular eigenvalue for g = " + G->label(g));
    CMatrix z = polar_unitary(p.vector);
    z /= first_phase(z);
    const cplx ov = (z.adjoint() * m(z)).trace() / static_cast<double>(D);
    out.relation_residual = std::max(out.relation_residual, std::sqrt(std::max(0.0, 2.0 * (1.0 - ov.real()))));
    zs.push_back(z);
  }
  out.z = make_representation(G, zs, true);
  return out;
}

double chiral_index(const StandardForm& sf) {
  return 0.5 * std::log(static_cast<double>(sf.r) / static_cast<double>(sf.l));
}

cplx character(const SymmetricMpu& s, int g) { return std::pow(s.rep.character(g), s.sf.k); }

bool character_defined(cplx chi, double dim) { return std::abs(chi) > tol().character * std::max(1.0, dim); }

std::optional<double> spi(const VirtualSymmetry& vs, int g) {
  const cplx tx = vs.x.character(g);
  const cplx ty = vs.y.character(g);
  if (!character_defined(tx, static_cast<double>(vs.x.dim())) || !character_defined(ty, static_cast<double>(vs.y.dim())))
    return std::nullopt;
  return 0.5 * (log_abs(ty) - log_abs(tx));
}

std::optional<cplx> refined_spi(const VirtualSymmetry& vs, const Representation& blocked, int g) {
  const cplx chi = blocked.character(g);
  if (!character_defined(chi, static_cast<double>(blocked.dim()))) return std::nullopt;
  LiftResult lift;
  try {
    lift = lift_to_linear(vs.y);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_liftable) fail(ErrorKind::not_defined, "refined SPI needs a trivial cohomology class");
    throw;
  }
  const FiniteGroup& G = *blocked.group;
  const int dg = G.element_order[g];
  const cplx val = std::pow(lift.rep.character(g) / chi, dg);
  // Any other lift differs by a one-dimensional character, which the d_g power removes.
  if (!G.cyclic_orders.empty()) {
    Rng rng(1000 + g);
    std::vector<int> ks;
    for (int n : G.cyclic_orders) ks.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
    const std::vector<int> dig = G.digits(g);
    cplx sigma = 1.0;
    for (size_t i = 0; i < ks.size(); ++i) sigma *= root_of_unity(static_cast<long long>(ks[i]) * dig[i], G.cyclic_orders[i]);
    const cplx other = std::pow(sigma * lift.rep.character(g) / chi, dg);
    if (std::abs(other - val) > 1e-9 * std::max(1.0, std::abs(val)))
      fail(ErrorKind::numerical, "refined SPI changed under a character redress");
  }
  return val;
}

EdgeOperators edge_operators(const StandardForm& sf, const VirtualSymmetry& vs, const Representation& blocked, int g) {
  const int e = vs.x.group->identity;
  EdgeOperators out;
  const CMatrix ud = sf.u.adjoint();
  out.L = ud * kron(vs.x[e], vs.y[g]) * sf.u;
  out.R = ud * kron(vs.x[g], vs.y[e]) * sf.u;
  const cplx chi = blocked.character(g);
  const cplx expect = static_cast<double>(sf.db()) * static_cast<double>(sf.db()) * chi * chi;
  out.product_rule_residual = std::abs(out.L.trace() * out.R.trace() - expect) / std::max(1.0, std::abs(expect));
  return out;
}

double string_evolution_check(const SymmetricMpu& s, const VirtualSymmetry& vs, int g, int sites, int N) {
  require(sites % 2 == 0, "string_evolution_check: ring length must be even");
  require(N % 2 == 0 && N >= 2 && sites - N >= 2, "string_evolution_check: need even N >= 2 and sites - N >= 2");
  const StandardForm& sf = s.sf;
  const int db = sf.db();
  const long n = ipow(db, sites);
  if (n > kStateBudget) fail(ErrorKind::size, "string_evolution_check exceeds the state budget");
  const Representation rb = blocked_rep(s.rep, sf.k);
  const EdgeOperators eo = edge_operators(sf, vs, rb, g);
  const int pairs = sites / 2;
  std::vector<int> dims(sites, db);
  Rng rng(53);
  double worst = 0.0;
  for (int rep_i = 0; rep_i < 2; ++rep_i) {
    const CVector psi = random_state(n, rng);
    CVector a = apply_brickwork(sf, pairs, psi);
    for (int q = 1; q <= N; ++q) a = apply_on_legs(a, dims, rb[g], {q});
    a = apply_brickwork_adjoint(sf, pairs, a);
    CVector b = apply_on_legs(psi, dims, eo.L, {0, 1});
    for (int q = 2; q < N; ++q) b = apply_on_legs(b, dims, rb[g], {q});
    b = apply_on_legs(b, dims, eo.R, {N, N + 1});
    worst = std::max(worst, (a - b).norm());
  }
  if (worst > 1e-7) fail(ErrorKind::factorization_violation, "evolved string does not factorize into L_g and R_g");
  return worst;
}

std::optional<double> sigma_route(const SymmetricMpu& s, const ZResult& z, int g) {
  const std::vector<SiteOp>& cell = z.tp_cell;
  cplx chi = 1.0;
  double dim = 1.0;
  std::vector<std::vector<CMatrix>> w, wr;
  std::vector<cplx> chis;
  const CMatrix& rho = s.cell_rep[g];
  for (const auto& site : cell) {
    chis.push_back(rho.trace());
    chi *= rho.trace();
    dim *= site.din;
    w.push_back(blocks(site));
    wr.push_back(dress_physical(w.back(), site.din, rho.adjoint(), identity(site.din)));
  }
  if (!character_defined(chi, dim)) return std::nullopt;
  const long D = cell[0].Dl;
  // E_g(X) = chi^{-1} sum_ij W_ij X (rho^dag W)_ij^dag, applied from the last site of the cell.
  const LinearMap eg = [&](const CMatrix& x0) {
    CMatrix x = x0;
    for (size_t q = w.size(); q-- > 0;) {
      CMatrix acc = CMatrix::Zero(w[q][0].rows(), w[q][0].rows());
      for (size_t b = 0; b < w[q].size(); ++b) {
        if (w[q][b].norm() == 0) continue;
        acc.noalias() += w[q][b] * x * wr[q][b].adjoint();
      }
      x = acc / chis[q];
    }
    return x;
  };
  PowerResult p = power_iteration(eg, D, CMatrix(), 20000, 1e-14);
  if (std::abs(p.eigenvalue - 1.0) > 1e-7) fail(ErrorKind::degeneracy, "twisted channel has no unit fixed point");
  CMatrix sig = p.vector;
  const cplx norm = (z.z[g] * sig).trace();
  if (std::abs(norm) < 1e-12) fail(ErrorKind::degeneracy, "Tr(z_g Sigma_g) vanishes");
  sig /= norm;
  return log_abs(sig.trace());
}

InterferometryPoint interferometry(const SymmetricMpu& s, int g, int k) {
  require(k >= 1, "interferometry: k must be positive");
  const int c = static_cast<int>(s.cell.size());
  int n = 2 * k + 6;
  n = ((n + c - 1) / c) * c;
  const int N = n / 2;  // string on sites [1, N]
  const CMatrix& rho = s.cell_rep[g];
  const cplx chi = rho.trace();
  const double dsite = static_cast<double>(rho.rows());
  if (!character_defined(chi, dsite)) fail(ErrorKind::precondition, "interferometry needs chi_g != 0");
  const RingMpo U = ring_from_sites(s.cell, n / c);
  std::vector<CMatrix> sops;
  for (int q = 0; q < n; ++q) sops.push_back(q >= 1 && q <= N ? rho : identity(rho.rows()));
  const RingMpo O = mpo_mul(mpo_adjoint(U), mpo_mul(ring_product_operator(sops), U));
  std::vector<bool> inA(n, false);
  for (int q = 1 - k; q <= k; ++q) inA[((q % n) + n) % n] = true;
  std::vector<CMatrix> ts;
  for (int q = 0; q < n; ++q) {
    const SiteOp& w = O[q];
    if (inA[q]) {
      CMatrix t = CMatrix::Zero(w.Dl, w.Dr);
      for (int i = 0; i < w.dout; ++i) t += w.bond_block(i, i);
      ts.push_back(kron(t, t.conjugate()) / (static_cast<double>(w.dout) * w.dout));
    } else {
      CMatrix t = CMatrix::Zero(static_cast<long>(w.Dl) * w.Dl, static_cast<long>(w.Dr) * w.Dr);
      for (int i = 0; i < w.dout; ++i)
        for (int j = 0; j < w.din; ++j) {
          const CMatrix b = w.bond_block(i, j);
          if (b.norm() == 0) continue;
          t += kron(b, b.conjugate());
        }
      ts.push_back(t / static_cast<double>(w.dout));
    }
  }
  InterferometryPoint out;
  out.k = k;
  out.expectation = ring_trace(ts).real();
  if (out.expectation <= 0) fail(ErrorKind::numerical, "interferometric expectation is not positive");
  out.predicted_relative = 0.5 * std::log(out.expectation) + k * std::log(dsite / std::abs(chi));
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, "fit_line: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

HomotopyPath homotopy_path(const SymmetricMpu& s, int samples) {
  require(samples >= 2, "homotopy_path: need at least two samples");
  const StandardForm& sf = s.sf;
  if (std::abs(chiral_index(sf)) > 1e-9) fail(ErrorKind::obstruction, "nonzero chiral index obstructs a symmetric path");
  const VirtualSymmetry vs = extract_xy(s);
  const GroupPtr G = s.rep.group;
  bool trivial = false;
  if (G->abelian) {
    trivial = cocycle_invariant(vs.x).trivial();
  } else {
    FactorSet one(G->order, std::vector<cplx>(G->order, 1.0));
    trivial = coboundary_equivalent(vs.x.factor_set, one, *G);
  }
  if (!trivial) fail(ErrorKind::obstruction, "nontrivial cohomology class obstructs a symmetric path");
  const LiftResult lx = lift_to_linear(vs.x);
  std::vector<CMatrix> yl;
  for (int g = 0; g < G->order; ++g) yl.push_back(vs.y[g] / lx.beta[g]);
  const Representation yt = make_representation(G, yl, false);
  const Representation reg = regular_representation(G);
  const Representation rb = blocked_rep(s.rep, sf.k);
  const Representation rho2 = tensor_rep(rb, reg);
  const Representation x2 = tensor_rep(lx.rep, reg);
  const Representation y2 = tensor_rep(yt, reg);
  const CMatrix X = find_intertwiner(x2, rho2, 11);
  const CMatrix Y = find_intertwiner(y2, rho2, 12);
  const int db = sf.db(), n = G->order;
  const CMatrix ia = identity(static_cast<long>(n) * n);
  const CMatrix unew =
      permute_operator(kron(sf.u, ia), {sf.l, sf.r, n, n}, {db, db, n, n}, {0, 2, 1, 3}, {0, 2, 1, 3});
  const CMatrix vnew =
      permute_operator(kron(sf.v, ia), {db, db, n, n}, {sf.r, sf.l, n, n}, {0, 2, 1, 3}, {0, 2, 1, 3});
  const CMatrix up = kron(X.adjoint(), Y.adjoint()) * unew;
  const CMatrix vp = vnew * kron(Y, X);
  const int dn = db * n, ln = sf.l * n, rn = sf.r * n;
  const StandardForm padded = standard_form_from_gates(unew, vnew, ln, rn, 1, dn);
  const CMatrix hu = unitary_log(up);
  const CMatrix hv = unitary_log(vp);
  HomotopyPath path;
  path.rep = rho2;
  for (int i = 0; i < samples; ++i) {
    const double lam = static_cast<double>(i) / (samples - 1);
    HomotopySample smp;
    smp.lambda = lam;
    smp.sf = standard_form_from_gates(expm_hermitian(hu, 1.0 - lam), expm_hermitian(hv, 1.0 - lam), ln, rn, 1, dn);
    smp.symmetry_residual = symmetry_residual(smp.sf, rho2).worst;
    path.samples.push_back(std::move(smp));
  }
  const CMatrix id = identity(static_cast<long>(dn) * dn);
  const StandardForm ident = standard_form_from_gates(id, id, dn, dn, 1, dn);
  path.start_error = reconstruction_residual(path.samples.front().sf, padded, 2);
  path.end_error = reconstruction_residual(path.samples.back().sf, ident, 2);
  return path;
}

std::optional<double> lr_lower_bound(const ClassificationReport& rep) {
  if (std::abs(rep.ind) > 1e-9) return std::nullopt;
  double best = 0.0;
  for (const auto& e : rep.elements) {
    if (!e.spi) continue;
    const double ratio = static_cast<double>(rep.d) / std::abs(e.chi);
    if (ratio <= 1.0 + 1e-12) continue;
    best = std::max(best, std::abs(*e.spi) / std::log(ratio));
  }
  return best;
}

QuantizationWitness quantization_witness(const CMatrix& y, int order) {
  const NormalEigen e = eig_normal(y);
  QuantizationWitness w;
  w.multiplicities.assign(order, 0);
  const cplx base = e.values[0];
  cplx sum = 0.0;
  double dev = 0.0;
  for (const cplx& lam : e.values) {
    const cplx rel = lam / base;
    long j = std::lround(std::arg(rel) * order / (2.0 * kPi));
    j = ((j % order) + order) % order;
    dev = std::max(dev, std::abs(rel - root_of_unity(j, order)));
    w.multiplicities[j] += 1;
    sum += root_of_unity(j, order);
  }
  w.residual = std::abs(std::abs(sum) - std::abs(y.trace())) + dev;
  return w;
}

ClassificationReport classify(const SymmetricMpu& s) {
  ClassificationReport rep;
  rep.model = s.name;
  rep.d = s.sf.d;
  rep.k = s.sf.k;
  rep.l = s.sf.l;
  rep.r = s.sf.r;
  rep.ind = chiral_index(s.sf);
  rep.symmetry_residual = s.symmetry_worst;
  const VirtualSymmetry vs = extract_xy(s);
  rep.factor_residual = vs.factor_residual;
  rep.v_side_residual = vs.v_side_residual;
  rep.gauge_notes = vs.gauge_notes;
  const GroupPtr G = s.rep.group;
  rep.cocycle = cocycle_invariant(vs.x);
  if (G->abelian) {
    rep.class_trivial = rep.cocycle.trivial();
  } else {
    FactorSet one(G->order, std::vector<cplx>(G->order, 1.0));
    try {
      rep.class_trivial = coboundary_equivalent(vs.x.factor_set, one, *G);
    } catch (const Error&) {
      rep.class_trivial = rep.cocycle.trivial();
      rep.gauge_notes.push_back("class triviality judged from commuting-pair invariant only");
    }
  }
  const ZResult z = extract_z(s);
  rep.z_relation_residual = z.relation_residual;
  rep.z_cocycle = cocycle_invariant(z.z);
  rep.z_matches_x = same_invariant(rep.z_cocycle, rep.cocycle);
  const Representation rb = blocked_rep(s.rep, s.sf.k);
  for (int g = 0; g < G->order; ++g) {
    ElementLabels el;
    el.g = g;
    el.chi = s.rep.character(g);
    el.c_regular = is_c_regular(*G, g, vs.x.factor_set);
    el.spi = spi(vs, g);
    if (el.spi) {
      el.trace_route = *el.spi - rep.ind;
      const EdgeOperators eo = edge_operators(s.sf, vs, rb, g);
      el.product_rule_residual = eo.product_rule_residual;
      el.edge_route = 0.5 * (log_abs(eo.L.trace()) - log_abs(eo.R.trace()));
      el.sigma_route = sigma_route(s, z, g);
      if (rep.class_trivial) el.rind = refined_spi(vs, rb, g);
      rep.max_route_gap = std::max(rep.max_route_gap, std::abs(*el.trace_route - *el.edge_route));
      if (el.sigma_route) rep.max_route_gap = std::max(rep.max_route_gap, std::abs(*el.trace_route - *el.sigma_route));
    }
    rep.elements.push_back(el);
  }
  rep.lr_bound = lr_lower_bound(rep);
  return rep;
}

}  // namespace mpuc
