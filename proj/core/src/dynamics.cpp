#include "mpuc/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

namespace {

constexpr long kEvolveBudget = 1L << 16;

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

PureState product_state(int L, int d, int basis_index) {
  require(L >= 1 && d >= 2, "product_state: need L >= 1, d >= 2");
  const long n = ipow(d, L);
  if (n > kEvolveBudget) fail(ErrorKind::size, "state dimension exceeds 2^16");
  require(basis_index >= 0 && basis_index < n, "product_state: basis index out of range");
  PureState s{L, d, CVector::Zero(n)};
  s.amplitudes(basis_index) = 1.0;
  return s;
}

std::vector<PureState> evolve(const PureState& state, const SymmetricMpu& s, int steps) {
  require(steps >= 0, "evolve: negative step count");
  if (ipow(state.d, state.L) > kEvolveBudget) fail(ErrorKind::size, "state dimension exceeds 2^16");
  RingMpo ring;
  if (s.tensor) {
    if (s.tensor->d != state.d) fail(ErrorKind::precondition, "evolve: state and MPU site dimensions differ");
    ring = ring_from_tensor(*s.tensor, state.L);
  } else {
    const int c = static_cast<int>(s.cell.size());
    if (s.cell[0].din != state.d || state.L % c != 0)
      fail(ErrorKind::precondition, "evolve: state does not match the MPU cell");
    ring = ring_from_sites(s.cell, state.L / c);
  }
  std::vector<PureState> out{state};
  for (int t = 0; t < steps; ++t) {
    PureState next = out.back();
    next.amplitudes = mpo_apply(ring, out.back().amplitudes);
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<double> entanglement_spectrum(const PureState& state, int cut) {
  require(cut >= 0 && cut <= state.L, "entanglement_spectrum: bad cut");
  const long rows = ipow(state.d, cut);
  const long cols = ipow(state.d, state.L - cut);
  const CMatrix m = Eigen::Map<const CMatrix>(state.amplitudes.data(), rows, cols);
  const SvdResult sv = svd(m);
  std::vector<double> out;
  double total = 0.0;
  for (double x : sv.s) {
    out.push_back(x * x);
    total += x * x;
  }
  for (double& x : out) x /= total;
  return out;
}

double entropy(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (double x : spectrum)
    if (x > 0) s -= x * std::log(x);
  return s;
}

std::vector<int> degeneracy_profile(const std::vector<double>& spectrum, double tol, double floor) {
  std::vector<double> v;
  for (double x : spectrum)
    if (x > floor) v.push_back(x);
  std::sort(v.begin(), v.end(), std::greater<double>());
  std::vector<int> out;
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i + 1;
    while (j < v.size() && v[j - 1] - v[j] <= tol) ++j;
    out.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

bool all_divisible(const std::vector<int>& profile, int m) {
  return std::all_of(profile.begin(), profile.end(), [m](int c) { return c % m == 0; });
}

SpectrumSeries spectrum_series(const std::vector<PureState>& states, int cut, double tol) {
  SpectrumSeries out;
  for (size_t t = 0; t < states.size(); ++t) {
    SpectrumPoint p;
    p.t = static_cast<int>(t);
    p.spectrum = entanglement_spectrum(states[t], cut);
    p.entropy = entropy(p.spectrum);
    p.profile = degeneracy_profile(p.spectrum, tol);
    out.push_back(std::move(p));
  }
  return out;
}

OracleResult analytic_oracle_zdzd(int d, int t) {
  require(d >= 2 && t >= 0, "analytic_oracle_zdzd: need d >= 2, t >= 0");
  OracleResult r;
  r.mps.d = d * d;
  r.mps.D = d;
  r.mps.mats.assign(d * d, CMatrix::Zero(d, d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be)
          if (mod((be - al) * t, d) == b)
            r.mps.mats[a * d + b](al, be) = root_of_unity(static_cast<long long>(al) * a, d) / static_cast<double>(d);
  r.reduced_bond = d / std::gcd(d, t);
  const int m = r.reduced_bond * r.reduced_bond;
  r.spectrum.assign(m, 1.0 / m);
  return r;
}

PureState state_from_mps(const MpsTensor& m, int L) {
  require(L >= 1, "state_from_mps: need L >= 1");
  if (ipow(m.d, L) > kEvolveBudget) fail(ErrorKind::size, "state dimension exceeds 2^16");
  std::vector<CMatrix> prefix(m.mats.begin(), m.mats.end());
  for (int s = 1; s < L; ++s) {
    std::vector<CMatrix> next;
    next.reserve(prefix.size() * m.d);
    for (const auto& p : prefix)
      for (int i = 0; i < m.d; ++i) next.push_back(p * m.mats[i]);
    prefix.swap(next);
  }
  PureState out{L, m.d, CVector(static_cast<long>(prefix.size()))};
  for (size_t i = 0; i < prefix.size(); ++i) out.amplitudes(i) = prefix[i].trace();
  const double n = out.amplitudes.norm();
  if (n < 1e-300) fail(ErrorKind::numerical, "MPS contracts to the zero vector");
  out.amplitudes /= n;
  return out;
}

std::vector<cplx> transfer_spectrum(const MpsTensor& m) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(static_cast<long>(m.D) * m.D, static_cast<long>(m.D) * m.D);
  for (const auto& a : m.mats) e += kron(a, a.conjugate());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(e, false);
  std::vector<cplx> out;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > 1e-10) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (std::abs(std::abs(a) - std::abs(b)) > 1e-9) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return out;
}

MpsTensor mps_apply_mpu(const MpsTensor& m, const MpuTensor& u) {
  require(u.d == m.d, "mps_apply_mpu: dimension mismatch");
  MpsTensor out{m.d, m.D * u.D, std::vector<CMatrix>(m.d, CMatrix::Zero(m.D * u.D, m.D * u.D))};
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j)
      if (u.at(i, j).norm() > 0) out.mats[i] += kron(u.at(i, j), m.mats[j]);
  return out;
}

namespace {

double interp(const std::vector<std::pair<double, double>>& pts, double t) {
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (t >= pts[i].first && t <= pts[i + 1].first) {
      const double w = (t - pts[i].first) / (pts[i + 1].first - pts[i].first);
      return (1 - w) * pts[i].second + w * pts[i + 1].second;
    }
  return pts.back().second;
}

}  // namespace

Crossover crossover_time(const std::vector<double>& s, int d) {
  require(d >= 2, "crossover_time: need d >= 2");
  Crossover out;
  const int T = static_cast<int>(s.size()) - 1;
  auto points = [&](int r) {
    std::vector<std::pair<double, double>> p;
    for (int t = r; t <= T; t += d) p.push_back({double(t), s[t]});
    return p;
  };
  const auto p0 = points(0);
  bool all = true;
  double sum = 0.0;
  for (int r = 1; r < d; ++r) {
    const auto pr = points(r);
    std::optional<double> hit;
    if (pr.size() >= 1 && p0.size() >= 2) {
      const double lo = r, hi = std::min(pr.back().first, p0.back().first);
      std::vector<double> ts;
      for (const auto& p : pr)
        if (p.first >= lo && p.first <= hi) ts.push_back(p.first);
      for (const auto& p : p0)
        if (p.first >= lo && p.first <= hi) ts.push_back(p.first);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      auto gap = [&](double t) { return interp(pr, t) - interp(p0, t); };
      if (!ts.empty()) {
        const double g0 = gap(ts[0]);
        if (std::abs(g0) <= 1e-12) {
          hit = ts[0];
        } else {
          for (size_t i = 1; i < ts.size() && !hit; ++i) {
            const double g = gap(ts[i]);
            if (std::abs(g) <= 1e-12 || (g > 0) != (g0 > 0)) {
              const double gp = gap(ts[i - 1]);
              hit = ts[i - 1] + (ts[i] - ts[i - 1]) * gp / (gp - g);
            }
          }
        }
      }
    }
    out.per_residue.push_back(hit);
    if (hit)
      sum += *hit;
    else
      all = false;
  }
  if (all) out.t_star = sum / (d - 1);
  return out;
}

Circuit circuit_from_standard_form(const StandardForm& sf, int sites) {
  require(sites >= 2 && sites % 2 == 0, "circuit_from_standard_form: need an even number of sites");
  if (sf.l != sf.db() || sf.r != sf.db())
    fail(ErrorKind::precondition, "circuit_from_standard_form: gates must map sites to sites (l = r = d^k)");
  Circuit c;
  c.sites = sites;
  c.d = sf.db();
  c.layers.push_back({0, std::vector<CMatrix>(sites / 2, sf.u)});
  c.layers.push_back({1, std::vector<CMatrix>(sites / 2, sf.v)});
  return c;
}

namespace {

void check_circuit(const Circuit& c) {
  require(c.sites >= 2 && c.sites % 2 == 0, "circuit: need an even number of sites");
  for (const auto& l : c.layers) {
    require(l.offset >= -1 && l.offset <= 1, "circuit: layer offset must be -1, 0 or 1");
    const size_t n = l.offset < 0 ? c.sites : c.sites / 2;
    require(l.gates.size() == n, "circuit: wrong number of gates in a layer");
  }
}

CVector apply_layer(const Circuit& c, const GateLayer& l, const CVector& psi, bool adjoint) {
  const std::vector<int> dims(c.sites, c.d);
  CVector out = psi;
  if (l.offset < 0) {
    for (int s = 0; s < c.sites; ++s)
      out = apply_on_legs(out, dims, adjoint ? CMatrix(l.gates[s].adjoint()) : l.gates[s], {s});
    return out;
  }
  for (int j = 0; j < c.sites / 2; ++j) {
    const int a = 2 * j + l.offset, b = mod(2 * j + l.offset + 1, c.sites);
    out = apply_on_legs(out, dims, adjoint ? CMatrix(l.gates[j].adjoint()) : l.gates[j], {a, b});
  }
  return out;
}

}  // namespace

CVector apply_circuit(const Circuit& c, const CVector& psi) {
  check_circuit(c);
  CVector out = psi;
  for (const auto& l : c.layers) out = apply_layer(c, l, out, false);
  return out;
}

CVector apply_circuit_adjoint(const Circuit& c, const CVector& psi) {
  check_circuit(c);
  CVector out = psi;
  for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) out = apply_layer(c, *it, out, true);
  return out;
}

namespace {

struct WindowOp {
  CMatrix op;
  double residual = 0.0;
};

// Rank-one split of O restricted to `win` against the rest, from O applied to
// |i>_win (x) phi for every basis state i.
WindowOp extract_window(const std::function<CVector(const CVector&)>& O, int n, int d, const std::vector<int>& win,
                        Rng& rng) {
  std::vector<int> order = win;
  std::vector<char> used(n, 0);
  for (int w : win) used[w] = 1;
  for (int s = 0; s < n; ++s)
    if (!used[s]) order.push_back(s);
  const std::vector<int> dims(n, d);
  std::vector<int> to_natural(n), pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  for (int k = 0; k < n; ++k) to_natural[k] = pos[k];
  const long D = ipow(d, static_cast<int>(win.size()));
  const long R = ipow(d, n - static_cast<int>(win.size()));
  CVector phi = random_gaussian(R, 1, rng);
  phi.normalize();
  CMatrix A(D * D, R);
  for (long i = 0; i < D; ++i) {
    std::vector<cplx> ordered(static_cast<size_t>(D * R), cplx(0.0));
    for (long r = 0; r < R; ++r) ordered[i * R + r] = phi(r);
    std::vector<cplx> nat = permute_legs(ordered, dims, to_natural);
    const CVector out = O(Eigen::Map<CVector>(nat.data(), static_cast<long>(nat.size())));
    std::vector<cplx> flat(out.data(), out.data() + out.size());
    std::vector<cplx> back = permute_legs(flat, dims, order);
    for (long j = 0; j < D; ++j)
      for (long r = 0; r < R; ++r) A(j * D + i, r) = back[j * R + r];
  }
  const SvdResult sv = svd(A);
  double tail = 0.0, total = 0.0;
  for (size_t k = 0; k < sv.s.size(); ++k) {
    total += sv.s[k] * sv.s[k];
    if (k > 0) tail += sv.s[k] * sv.s[k];
  }
  WindowOp w;
  w.residual = std::sqrt(tail / std::max(total, 1e-300));
  w.op = CMatrix(D, D);
  for (long j = 0; j < D; ++j)
    for (long i = 0; i < D; ++i) w.op(j, i) = sv.U(j * D + i, 0);
  w.op *= std::sqrt(static_cast<double>(D)) / w.op.norm();
  return w;
}

}  // namespace

StringSpiResult inhomogeneous_string_spi(const Circuit& c, const Representation& rep, int g, int window) {
  check_circuit(c);
  require(window >= 1, "inhomogeneous_string_spi: window must be positive");
  require(rep.dim() == c.d, "inhomogeneous_string_spi: representation dimension differs from the site dimension");
  const int n = c.sites;
  require(n >= 4 * window + 2, "inhomogeneous_string_spi: ring too short for the window");
  if (ipow(c.d, n) > (1L << 20)) fail(ErrorKind::size, "inhomogeneous_string_spi: ring exceeds the state budget");
  const CMatrix& rho = rep[g];
  const std::vector<int> dims(n, c.d);
  const int N = n - 2 * window;
  StringSpiResult out;
  Rng rng(4711 + g);
  bool defined = true;
  for (int a = 1; a < n; a += 2) {
    std::vector<int> string, mid, wl, wr;
    for (int q = 0; q < N; ++q) string.push_back(mod(a + q, n));
    const int b = a + N - 1;
    for (int q = a - window; q <= a + window - 1; ++q) wl.push_back(mod(q, n));
    for (int q = b - window + 1; q <= b + window; ++q) wr.push_back(mod(q, n));
    for (int q = a + window; q <= b - window; ++q) mid.push_back(mod(q, n));
    auto O = [&](const CVector& psi) {
      CVector x = apply_circuit(c, psi);
      for (int s : string) x = apply_on_legs(x, dims, rho, {s});
      return apply_circuit_adjoint(c, x);
    };
    const WindowOp L = extract_window(O, n, c.d, wl, rng);
    const WindowOp R = extract_window(O, n, c.d, wr, rng);
    double res = std::max(L.residual, R.residual);
    for (int rep_i = 0; rep_i < 2; ++rep_i) {
      CVector psi = random_gaussian(ipow(c.d, n), 1, rng);
      psi.normalize();
      const CVector lhs = O(psi);
      CVector rhs = apply_on_legs(psi, dims, L.op, wl);
      for (int s : mid) rhs = apply_on_legs(rhs, dims, rho, {s});
      rhs = apply_on_legs(rhs, dims, R.op, wr);
      const cplx phase = rhs.dot(lhs) / rhs.squaredNorm();
      res = std::max(res, (lhs - phase * rhs).norm() + std::abs(std::abs(phase) - 1.0));
    }
    out.factor_residual = std::max(out.factor_residual, res);
    const double tl = std::abs(L.op.trace()), tr = std::abs(R.op.trace());
    const double scale = std::sqrt(static_cast<double>(L.op.rows()));
    if (tl < tol().character * scale || tr < tol().character * scale) {
      defined = false;
      continue;
    }
    out.per_position.push_back(0.5 * std::log(tl / tr));
  }
  if (out.factor_residual > 1e-7)
    fail(ErrorKind::factorization_violation,
         "evolved string does not factorize: circuit is not locality preserving within the window or not symmetric");
  if (defined && !out.per_position.empty()) {
    const auto [lo, hi] = std::minmax_element(out.per_position.begin(), out.per_position.end());
    out.position_spread = *hi - *lo;
    out.relative_spi = out.per_position.front();
  }
  return out;
}

}  // namespace mpuc
