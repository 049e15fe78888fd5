#include "mpuc/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mpuc/errors.hpp"
#include "mpuc/ringmpo.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

namespace {

constexpr double kStateBudgetLog2 = 18.0;
constexpr long kTrackerBudget = 4096;
constexpr long kEnumBudget = 4096;

long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int wrap(int a, int n) { return ((a % n) + n) % n; }

long dims_product(const std::vector<int>& dims, const std::vector<int>& sites) {
  long p = 1;
  for (int s : sites) p *= dims[s];
  return p;
}

CMatrix kron_sites(const std::vector<CMatrix>& per_site, const std::vector<int>& sites) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int s : sites) out = kron(out, per_site[s]);
  return out;
}

}  // namespace

double Lattice2D::log2_dim() const {
  double s = 0.0;
  for (int d : dims) s += std::log2(static_cast<double>(d));
  return s;
}

std::vector<int> Lattice2D::bulk() const {
  std::vector<char> edge(dims.size(), 0);
  for (int s : bottom) edge[s] = 1;
  for (int s : top) edge[s] = 1;
  std::vector<int> out;
  for (int s = 0; s < size(); ++s)
    if (!edge[s]) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Plaquette models

namespace {

// Corners of the plaquette above-right of vertex (c, r) on a C-periodic grid of
// vertices indexed y * C + x: bottom-left, bottom-right, top-right, top-left.
std::vector<int> plaquette_sites(int c, int r, int C) {
  return {r * C + c, r * C + wrap(c + 1, C), (r + 1) * C + wrap(c + 1, C), (r + 1) * C + c};
}

Lattice2D vertex_lattice(int rows, int C, int d) {
  Lattice2D lat;
  lat.rows = rows;
  lat.cols = C;
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < C; ++x) {
      lat.dims.push_back(d);
      lat.coords.push_back({x, y});
    }
  for (int x = 0; x < C; ++x) {
    lat.bottom.push_back(x);
    lat.top.push_back((rows - 1) * C + x);
  }
  return lat;
}

CMatrix diagonal_in_basis(const CVector& phases, const CMatrix& basis) {
  return basis * phases.asDiagonal() * basis.adjoint();
}

}  // namespace

FloquetUnitary build_zdzd_floquet(int d, int rows, int cols) {
  require(d >= 2 && d <= 4, "build_zdzd_floquet: need 2 <= d <= 4");
  require(rows >= 2 && cols >= 2, "build_zdzd_floquet: need rows >= 2 and cols >= 2");
  const int C = 2 * cols;
  FloquetUnitary f;
  f.name = "zdzd-plaquette";
  f.lattice = vertex_lattice(rows, C, d);
  f.lattice.cols = cols;
  const CMatrix F = fourier(d);
  f.basis = std::vector<CMatrix>(f.lattice.size(), F);
  f.group = product_of_cyclics({d, d});
  const CMatrix z = clock(d);
  f.rho.resize(f.lattice.size());
  for (int s = 0; s < f.lattice.size(); ++s) {
    const auto [x, y] = f.lattice.coords[s];
    const bool white = (x + y) % 2 == 0;
    for (int g = 0; g < f.group->order; ++g) {
      const auto ds = f.group->digits(g);
      CMatrix m = identity(d);
      for (int i = 0; i < (white ? ds[0] : ds[1]); ++i) m = m * z;
      f.rho[s].push_back(m);
    }
  }
  const CMatrix F4 = kron_power(F, 4);
  f.layers.resize(2);
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < C; ++c) {
      const int sign = (r + c) % 2 == 0 ? 1 : -1;  // gray: CZ on horizontal bonds, CZ^-1 on vertical
      FloquetGate g;
      g.sites = plaquette_sites(c, r, C);
      g.phases = CVector(ipow(d, 4));
      for (int bl = 0; bl < d; ++bl)
        for (int br = 0; br < d; ++br)
          for (int tr = 0; tr < d; ++tr)
            for (int tl = 0; tl < d; ++tl) {
              const long e = static_cast<long>(bl) * br + tl * tr - bl * tl - br * tr;
              g.phases(((bl * d + br) * d + tr) * d + tl) = root_of_unity(sign * e, d);
            }
      g.op = diagonal_in_basis(g.phases, F4);
      g.tag = sign > 0 ? "gray" : "white";
      f.layers[sign > 0 ? 0 : 1].push_back(std::move(g));
    }
  return f;
}

FloquetUnitary build_cocycle_floquet(const ModelParams& params, int rows, int cols) {
  require(rows >= 2 && cols >= 2 && cols % 2 == 0, "build_cocycle_floquet: need rows >= 2 and even cols >= 2");
  const CocycleAngles ca = cocycle_angles(params);
  const FiniteGroup& G = *ca.group;
  const int n = G.order;
  FloquetUnitary f;
  f.name = "cocycle-plaquette";
  f.lattice = vertex_lattice(rows, cols, n);
  f.basis = std::vector<CMatrix>(f.lattice.size(), identity(n));
  f.group = ca.group;
  const Representation reg = regular_representation(ca.group);
  f.rho.assign(f.lattice.size(), reg.matrices);
  // alpha(g1, g2, g3) = exp(-i theta(g1^-1 g2, g2^-1 g3))
  auto alpha = [&](int g1, int g2, int g3) {
    return std::polar(1.0, -ca.theta[G.mul[G.inverse[g1]][g2]][G.mul[G.inverse[g2]][g3]]);
  };
  f.layers.resize(1);
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      FloquetGate g;
      g.sites = plaquette_sites(c, r, cols);
      g.phases = CVector(ipow(n, 4));
      for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2)
          for (int g3 = 0; g3 < n; ++g3)
            for (int g4 = 0; g4 < n; ++g4)
              g.phases(((g1 * n + g2) * n + g3) * n + g4) = alpha(g1, g2, g3) / alpha(g1, g4, g3);
      if (ipow(n, 4) <= 256) g.op = CMatrix(g.phases.asDiagonal());
      g.tag = "plaquette";
      f.layers[0].push_back(std::move(g));
    }
  return f;
}

// ---------------------------------------------------------------------------
// SWAP construction

FloquetUnitary build_swap_floquet(const CMatrix& u, int l, int r, const Representation& rho, int rows, int cols) {
  const int d = static_cast<int>(rho.dim());
  require(rows >= 2 && rows % 2 == 0, "build_swap_floquet: rows must be even and >= 2");
  require(cols >= 2, "build_swap_floquet: need cols >= 2");
  require(l >= 1 && r >= 1 && static_cast<long>(l) * r == static_cast<long>(d) * d,
          "build_swap_floquet: need l * r = d^2");
  require(u.rows() == d * d && u.cols() == d * d, "build_swap_floquet: u must act on two sites");
  if (unitarity_residual(u) > tol().unitary) fail(ErrorKind::validation, "build_swap_floquet: u is not unitary");

  const int P = 4 * cols;      // x period
  const int H = 2 * rows - 1;  // physical rows, gray rows at odd y
  FloquetUnitary f;
  f.name = "swap-construction";
  Lattice2D& lat = f.lattice;
  lat.rows = rows;
  lat.cols = cols;
  std::map<std::pair<int, int>, int> at;
  for (int y = 0; y < H; ++y)
    for (int x = y % 2; x < P; x += 2) {
      at[{x, y}] = lat.size();
      lat.coords.push_back({x, y});
      lat.dims.push_back(d);
    }
  for (int x = 0; x < P; x += 2) {
    lat.bottom.push_back(at.at({x, 0}));
    lat.top.push_back(at.at({x, H - 1}));
  }
  auto is_black = [](int x, int y) { return y % 2 == 0 && wrap(x - y, 4) == 0; };
  auto partner = [&](int x, int y) { return at.at({wrap(x + 2, P), y}); };

  f.group = rho.group;
  f.rho.assign(lat.size(), rho.matrices);

  FloquetLayer ulayer, udlayer;
  std::vector<std::pair<int, int>> blacks;
  for (const auto& [xy, s] : at)
    if (is_black(xy.first, xy.second)) {
      blacks.push_back(xy);
      FloquetGate g;
      g.sites = {s, partner(xy.first, xy.second)};
      g.op = u;
      g.out_dims = {l, r};
      g.tag = "u";
      ulayer.push_back(g);
      g.op = u.adjoint();
      g.out_dims = {d, d};
      g.tag = "u-dagger";
      udlayer.push_back(std::move(g));
    }
  f.layers.push_back(std::move(ulayer));

  const CMatrix exch = permutation_gate({l, r, l, r}, {2, 1, 0, 3});
  const CMatrix uu = kron(u, u);
  const bool fuse = ipow(d, 4) <= 1024;
  // Black sublattice: (x, y) -> (x / 2, y / 2); lower rows exchange with the
  // row above or below along the diagonals, in the order red, blue, green, orange.
  const int bdx[4] = {-1, 1, 1, -1}, bdy[4] = {1, 1, -1, -1};
  for (int k = 0; k < 4; ++k) {
    FloquetLayer layer;
    for (const auto& [x, y] : blacks) {
      if ((y / 2) % 2 != 0) continue;
      const int yy = y + 2 * bdy[k];
      if (yy < 0 || yy >= H) continue;
      const int xx = wrap(x + 2 * bdx[k], P);
      FloquetGate g;
      g.sites = {at.at({x, y}), at.at({xx, yy})};
      g.swap = true;
      g.tag = "l-exchange";
      if (fuse)
        f.fused.push_back({{g.sites[0], partner(x, y), g.sites[1], partner(xx, yy)}, uu.adjoint() * exch * uu});
      layer.push_back(std::move(g));
    }
    f.layers.push_back(std::move(layer));
  }
  f.layers.push_back(std::move(udlayer));

  // Physical exchanges between black/white rows (even y) and gray rows.
  const int pdx[4] = {1, -1, -1, 1}, pdy[4] = {1, 1, -1, -1};
  for (int k = 0; k < 4; ++k) {
    FloquetLayer layer;
    for (const auto& [xy, s] : at) {
      const auto [x, y] = xy;
      if (y % 2 != 0) continue;
      const int yy = y + pdy[k];
      if (yy < 0 || yy >= H) continue;
      FloquetGate g;
      g.sites = {s, at.at({wrap(x + pdx[k], P), yy})};
      g.swap = true;
      g.tag = "exchange";
      layer.push_back(std::move(g));
    }
    f.layers.push_back(std::move(layer));
  }
  return f;
}

SymmetricMpu swap_edge_mpu(const CMatrix& u, int l, int r, const Representation& rho) {
  const int d = static_cast<int>(rho.dim());
  StandardForm sf;
  sf.u = u;
  sf.v = u.adjoint() * permutation_gate({r, l}, {1, 0});
  sf.l = l;
  sf.r = r;
  sf.k = 1;
  sf.d = d;
  return from_standard_form("swap-edge", sf, rho);
}

// ---------------------------------------------------------------------------
// Gate-level checks

namespace {

std::vector<int> gate_in_dims(const FloquetUnitary& f, const FloquetGate& g, const std::vector<int>& cur) {
  std::vector<int> out;
  for (int s : g.sites) out.push_back(cur[s]);
  (void)f;
  return out;
}

template <class Fn>
void for_each_gate(const FloquetUnitary& f, Fn fn) {
  std::vector<int> cur = f.lattice.dims;
  for (const auto& layer : f.layers)
    for (const auto& g : layer) {
      const auto in = gate_in_dims(f, g, cur);
      fn(g, in);
      if (g.swap) {
        std::swap(cur[g.sites[0]], cur[g.sites[1]]);
      } else if (!g.out_dims.empty()) {
        for (size_t i = 0; i < g.sites.size(); ++i) cur[g.sites[i]] = g.out_dims[i];
      }
    }
}

// rho in the diagonal basis must be monomial: column j has one entry, at perm[j].
bool monomial(const CMatrix& m, std::vector<int>& perm, std::vector<cplx>& val) {
  perm.assign(m.cols(), -1);
  val.assign(m.cols(), 0.0);
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > 1e-10) {
        if (perm[j] >= 0) return false;
        perm[j] = static_cast<int>(i);
        val[j] = m(i, j);
      }
  return std::all_of(perm.begin(), perm.end(), [](int p) { return p >= 0; });
}

}  // namespace

double gate_unitarity_residual(const FloquetUnitary& f) {
  double worst = 0.0;
  for_each_gate(f, [&](const FloquetGate& g, const std::vector<int>&) {
    if (g.swap) return;
    if (g.op.size() > 0) worst = std::max(worst, unitarity_residual(g.op));
    for (long i = 0; i < g.phases.size(); ++i) worst = std::max(worst, std::abs(std::abs(g.phases(i)) - 1.0));
  });
  return worst;
}

double gate_commutator_residual(const FloquetUnitary& f) {
  if (!f.basis) fail(ErrorKind::precondition, "gate_commutator_residual: defined for plaquette models only");
  std::vector<const FloquetGate*> gates;
  for (const auto& layer : f.layers)
    for (const auto& g : layer) gates.push_back(&g);
  Rng rng(2718);
  double worst = 0.0;
  for (size_t i = 0; i < gates.size(); ++i)
    for (size_t j = i + 1; j < gates.size(); ++j) {
      const auto& a = *gates[i];
      const auto& b = *gates[j];
      std::vector<int> uni = a.sites;
      bool overlap = false;
      for (int s : b.sites) {
        if (std::find(uni.begin(), uni.end(), s) != uni.end())
          overlap = true;
        else
          uni.push_back(s);
      }
      if (!overlap) continue;
      std::vector<int> dims, la, lb;
      for (int s : uni) dims.push_back(f.lattice.dims[s]);
      const long n = product(dims);
      if (a.op.size() == 0 || b.op.size() == 0 || n > (1L << 14)) continue;  // diagonal in a shared basis
      for (int s : a.sites) la.push_back(static_cast<int>(std::find(uni.begin(), uni.end(), s) - uni.begin()));
      for (int s : b.sites) lb.push_back(static_cast<int>(std::find(uni.begin(), uni.end(), s) - uni.begin()));
      for (int rep = 0; rep < 2; ++rep) {
        CVector psi = random_gaussian(n, 1, rng);
        psi.normalize();
        const CVector ab = apply_on_legs(apply_on_legs(psi, dims, b.op, lb), dims, a.op, la);
        const CVector ba = apply_on_legs(apply_on_legs(psi, dims, a.op, la), dims, b.op, lb);
        worst = std::max(worst, (ab - ba).norm());
      }
    }
  return worst;
}

double symmetry_residual(const FloquetUnitary& f) {
  const auto gens = f.group->generators();
  double worst = 0.0;
  auto dense_check = [&](const std::vector<int>& sites, const CMatrix& op) {
    for (int g : gens) {
      std::vector<CMatrix> r;
      for (int s : sites) r.push_back(f.rho[s][g]);
      const CMatrix R = kron_all(r);
      worst = std::max(worst, fro(op * R - R * op) / std::sqrt(static_cast<double>(op.rows())));
    }
  };
  for_each_gate(f, [&](const FloquetGate& g, const std::vector<int>& in) {
    if (g.swap) {
      for (int h : gens)
        if (in[0] == in[1] && in[0] == f.lattice.dims[g.sites[0]])
          worst = std::max(worst, fro(f.rho[g.sites[0]][h] - f.rho[g.sites[1]][h]));
      return;
    }
    if (!g.out_dims.empty()) return;  // virtual-leg gates are checked fused
    if (f.basis && g.phases.size() > 0) {
      for (int h : gens) {
        std::vector<std::vector<int>> perm(g.sites.size());
        std::vector<std::vector<cplx>> val(g.sites.size());
        for (size_t i = 0; i < g.sites.size(); ++i) {
          const int s = g.sites[i];
          const CMatrix& B = (*f.basis)[s];
          if (!monomial(B.adjoint() * f.rho[s][h] * B, perm[i], val[i])) {
            worst = std::max(worst, 1.0);
            return;
          }
        }
        for (long idx = 0; idx < g.phases.size(); ++idx) {
          long rem = idx, image = 0, mul = 1;
          std::vector<int> digits(g.sites.size());
          for (int i = static_cast<int>(g.sites.size()) - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rem % in[i]);
            rem /= in[i];
          }
          for (int i = static_cast<int>(g.sites.size()) - 1; i >= 0; --i) {
            image += perm[i][digits[i]] * mul;
            mul *= in[i];
          }
          worst = std::max(worst, std::abs(g.phases(idx) - g.phases(image)));
        }
      }
      return;
    }
    if (g.op.size() > 0) dense_check(g.sites, g.op);
  });
  for (const auto& [sites, op] : f.fused) dense_check(sites, op);
  return worst;
}

double diagonal_residual(const FloquetUnitary& f) {
  if (!f.basis) fail(ErrorKind::precondition, "diagonal_residual: no diagonal basis declared");
  double worst = 0.0;
  for (const auto& layer : f.layers)
    for (const auto& g : layer) {
      if (g.op.size() == 0) continue;
      const CMatrix B = kron_sites(*f.basis, g.sites);
      const CMatrix t = B.adjoint() * g.op * B;
      CMatrix off = t;
      for (long i = 0; i < t.rows(); ++i) off(i, i) = 0.0;
      worst = std::max(worst, fro(off));
      if (g.phases.size() == t.rows())
        for (long i = 0; i < t.rows(); ++i) worst = std::max(worst, std::abs(t(i, i) - g.phases(i)));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Dense application

CVector apply_floquet(const FloquetUnitary& f, const CVector& psi) {
  if (f.lattice.log2_dim() > kStateBudgetLog2 + 1e-9)
    fail(ErrorKind::size, "apply_floquet: lattice exceeds 2^18 total dimension");
  std::vector<int> dims = f.lattice.dims;
  require(psi.size() == product(dims), "apply_floquet: state dimension mismatch");
  CVector out = psi;
  for (const auto& layer : f.layers)
    for (const auto& g : layer) {
      std::vector<int> in;
      for (int s : g.sites) in.push_back(dims[s]);
      if (g.swap) {
        out = apply_on_legs(out, dims, permutation_gate(in, {1, 0}), g.sites, {in[1], in[0]});
        continue;
      }
      CMatrix op = g.op;
      if (op.size() == 0) {
        if (!f.basis || g.phases.size() > (1L << 12)) fail(ErrorKind::size, "apply_floquet: gate too large");
        const CMatrix B = kron_sites(*f.basis, g.sites);
        op = diagonal_in_basis(g.phases, B);
      }
      out = apply_on_legs(out, dims, op, g.sites, g.out_dims.empty() ? in : g.out_dims);
    }
  return out;
}

CMatrix full_unitary(const FloquetUnitary& f) {
  if (f.lattice.log2_dim() > 10.0 + 1e-9) fail(ErrorKind::size, "full_unitary: lattice exceeds 2^10 total dimension");
  const long n = product(f.lattice.dims);
  CMatrix out(n, n);
  for (long j = 0; j < n; ++j) {
    CVector e = CVector::Zero(n);
    e(j) = 1.0;
    out.col(j) = apply_floquet(f, e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bulk and edge

CMatrix edge_unitary(const SymmetricMpu& s, long dim) {
  RingMpo ring;
  if (s.tensor) {
    long p = 1;
    int L = 0;
    while (p < dim) {
      p *= s.tensor->d;
      ++L;
    }
    if (p != dim) fail(ErrorKind::precondition, "edge_unitary: edge dimension is not a power of the MPU site dimension");
    ring = ring_from_tensor(*s.tensor, L);
  } else {
    long c = 1;
    for (const auto& site : s.cell) c *= site.din;
    long p = 1;
    int reps = 0;
    while (p < dim) {
      p *= c;
      ++reps;
    }
    if (p != dim) fail(ErrorKind::precondition, "edge_unitary: edge dimension is not a power of the MPU cell dimension");
    ring = ring_from_sites(s.cell, reps);
  }
  if (dim > kTrackerBudget) fail(ErrorKind::size, "edge_unitary: edge ring exceeds 4096 dimensions");
  return mpo_dense(ring);
}

namespace {

struct Tracked {
  std::vector<int> slots;
  std::vector<int> dims;
  CMatrix op;
};

// (G (x) 1) m for G acting on the leading in_dim factor of m's rows.
CMatrix left_apply(const CMatrix& G, const CMatrix& m, long in_dim) {
  const long rest = m.rows() / in_dim;
  const long C = m.cols();
  Eigen::Map<const CMatrix> view(m.data(), in_dim, rest * C);
  CMatrix out(G.rows() * rest, C);
  Eigen::Map<CMatrix>(out.data(), G.rows(), rest * C).noalias() = G * view;
  return out;
}

void reorder(Tracked& t, const std::vector<int>& perm) {
  std::vector<int> slots, dims;
  for (int p : perm) {
    slots.push_back(t.slots[p]);
    dims.push_back(t.dims[p]);
  }
  t.op = permute_operator(t.op, t.dims, t.dims, perm, perm);
  t.slots = std::move(slots);
  t.dims = std::move(dims);
}

void trim(Tracked& t) {
  for (size_t i = 0; i < t.slots.size();) {
    const int n = static_cast<int>(t.slots.size());
    std::vector<int> perm;
    for (int k = 0; k < n; ++k)
      if (k != static_cast<int>(i)) perm.push_back(k);
    perm.push_back(static_cast<int>(i));
    Tracked c = t;
    reorder(c, perm);
    const long s = c.dims.back();
    const long R = c.op.rows() / s;
    CMatrix rest = CMatrix::Zero(R, R);
    for (long a = 0; a < R; ++a)
      for (long b = 0; b < R; ++b)
        for (long k = 0; k < s; ++k) rest(a, b) += c.op(a * s + k, b * s + k);
    rest /= static_cast<double>(s);
    const double dev = (c.op - kron(rest, CMatrix::Identity(s, s))).norm();
    if (dev <= 1e-12 * std::max(1.0, c.op.norm())) {
      c.op = rest;
      c.slots.pop_back();
      c.dims.pop_back();
      t = std::move(c);
    } else {
      ++i;
    }
  }
}

void track_gate(Tracked& t, const FloquetGate& g, std::vector<int>& cur) {
  if (g.swap) {
    const int a = g.sites[0], b = g.sites[1];
    for (int& s : t.slots) s = s == a ? b : (s == b ? a : s);
    std::swap(cur[a], cur[b]);
    return;
  }
  const bool touched = std::any_of(g.sites.begin(), g.sites.end(), [&](int s) {
    return std::find(t.slots.begin(), t.slots.end(), s) != t.slots.end();
  });
  std::vector<int> out_dims = g.out_dims;
  if (out_dims.empty())
    for (int s : g.sites) out_dims.push_back(cur[s]);
  if (touched) {
    if (g.op.size() == 0) fail(ErrorKind::size, "operator tracking needs materialized gates");
    for (int s : g.sites)
      if (std::find(t.slots.begin(), t.slots.end(), s) == t.slots.end()) {
        t.slots.push_back(s);
        t.dims.push_back(cur[s]);
        t.op = kron(t.op, CMatrix::Identity(cur[s], cur[s]));
      }
    if (t.op.rows() * static_cast<long>(std::max<long>(1, g.op.rows() / std::max<long>(1, g.op.cols()))) >
        kTrackerBudget)
      fail(ErrorKind::size, "operator tracking exceeds the support budget");
    std::vector<int> perm;
    for (int s : g.sites) perm.push_back(static_cast<int>(std::find(t.slots.begin(), t.slots.end(), s) - t.slots.begin()));
    for (int k = 0; k < static_cast<int>(t.slots.size()); ++k)
      if (std::find(perm.begin(), perm.end(), k) == perm.end()) perm.push_back(k);
    reorder(t, perm);
    const long in_dim = g.op.cols();
    const CMatrix a = left_apply(g.op, t.op, in_dim);
    t.op = left_apply(g.op, a.adjoint(), in_dim).adjoint();
    for (size_t i = 0; i < g.sites.size(); ++i) t.dims[i] = out_dims[i];
    if (t.op.rows() > kTrackerBudget) fail(ErrorKind::size, "operator tracking exceeds the support budget");
    trim(t);
  }
  for (size_t i = 0; i < g.sites.size(); ++i) cur[g.sites[i]] = out_dims[i];
}

Tracked track(const FloquetUnitary& f, int site, const CMatrix& o) {
  Tracked t{{site}, {f.lattice.dims[site]}, o};
  std::vector<int> cur = f.lattice.dims;
  for (const auto& layer : f.layers)
    for (const auto& g : layer) track_gate(t, g, cur);
  return t;
}

// op on `slots` extended by identities to `target` (a superset), in target order.
CMatrix extend_to(const Tracked& t, const std::vector<int>& target, const std::vector<int>& dims_of) {
  std::vector<int> legs;
  for (int s : t.slots) {
    auto it = std::find(target.begin(), target.end(), s);
    legs.push_back(static_cast<int>(it - target.begin()));
  }
  std::vector<int> dims;
  for (int s : target) dims.push_back(dims_of[s]);
  return embed(t.op, dims, legs);
}

void tracker_engine(const FloquetUnitary& f, const SymmetricMpu& expected, BulkEdgeResiduals& out) {
  const Lattice2D& lat = f.lattice;
  for (int s : lat.bulk()) {
    const int d = lat.dims[s];
    for (const CMatrix& o : {clock(d), shift_down(d)}) {
      Tracked t = track(f, s, o);
      std::vector<int> target = t.slots;
      if (std::find(target.begin(), target.end(), s) == target.end()) target.push_back(s);
      if (product([&] {
            std::vector<int> ds;
            for (int q : target) ds.push_back(lat.dims[q]);
            return ds;
          }()) > kTrackerBudget)
        fail(ErrorKind::size, "bulk check exceeds the support budget");
      const CMatrix got = extend_to(t, target, lat.dims);
      const CMatrix want = extend_to(Tracked{{s}, {d}, o}, target, lat.dims);
      out.bulk = std::max(out.bulk, fro(got - want) / fro(want));
      ++out.bulk_checks;
    }
  }
  std::vector<int> bdims;
  for (int s : lat.bottom) bdims.push_back(lat.dims[s]);
  const long bdim = product(bdims);
  const CMatrix W = edge_unitary(expected, bdim);
  for (size_t pos = 0; pos < lat.bottom.size(); ++pos) {
    const int s = lat.bottom[pos];
    const int d = lat.dims[s];
    for (const CMatrix& o : {clock(d), shift_down(d)}) {
      Tracked t = track(f, s, o);
      // Split off slots outside the bottom row.
      std::vector<int> inside, outside;
      for (size_t i = 0; i < t.slots.size(); ++i) {
        const bool in = std::find(lat.bottom.begin(), lat.bottom.end(), t.slots[i]) != lat.bottom.end();
        (in ? inside : outside).push_back(static_cast<int>(i));
      }
      CMatrix q = t.op;
      std::vector<int> qslots;
      if (!outside.empty()) {
        std::vector<int> perm = inside;
        perm.insert(perm.end(), outside.begin(), outside.end());
        Tracked c = t;
        reorder(c, perm);
        long so = 1;
        for (size_t i = inside.size(); i < c.dims.size(); ++i) so *= c.dims[i];
        const long R = c.op.rows() / so;
        q = CMatrix::Zero(R, R);
        for (long a = 0; a < R; ++a)
          for (long b = 0; b < R; ++b)
            for (long k = 0; k < so; ++k) q(a, b) += c.op(a * so + k, b * so + k);
        q /= static_cast<double>(so);
        out.edge_leak = std::max(out.edge_leak, fro(c.op - kron(q, CMatrix::Identity(so, so))) / fro(c.op));
        for (int i : inside) qslots.push_back(t.slots[i]);
      } else {
        qslots = t.slots;
      }
      std::vector<int> legs;
      for (int qs : qslots)
        legs.push_back(static_cast<int>(std::find(lat.bottom.begin(), lat.bottom.end(), qs) - lat.bottom.begin()));
      const CMatrix got = embed(q, bdims, legs);
      const CMatrix want = W * embed(o, bdims, {static_cast<int>(pos)}) * W.adjoint();
      out.edge = std::max(out.edge, fro(got - want) / fro(want));
      ++out.edge_checks;
    }
  }
}

// Phase of the diagonal unitary on a configuration (labels in the diagonal basis).
struct PhaseModel {
  const FloquetUnitary& f;
  std::vector<const FloquetGate*> gates;
  std::vector<std::vector<int>> touching;  // site -> gate indices

  explicit PhaseModel(const FloquetUnitary& ff) : f(ff), touching(ff.lattice.size()) {
    for (const auto& layer : f.layers)
      for (const auto& g : layer) {
        if (g.phases.size() == 0) fail(ErrorKind::precondition, "diagonal engine needs gate phases");
        for (int s : g.sites) touching[s].push_back(static_cast<int>(gates.size()));
        gates.push_back(&g);
      }
  }
  cplx gate_phase(int gi, const std::vector<int>& cfg) const {
    const FloquetGate& g = *gates[gi];
    long idx = 0;
    for (int s : g.sites) idx = idx * f.lattice.dims[s] + cfg[s];
    return g.phases(idx);
  }
  cplx total(const std::vector<int>& cfg) const {
    cplx p = 1.0;
    for (size_t i = 0; i < gates.size(); ++i) p *= gate_phase(static_cast<int>(i), cfg);
    return p;
  }
};

// Configurations of `sites` (all of them when few, else seeded samples).
template <class Fn>
void for_configs(const std::vector<int>& sites, const std::vector<int>& dims, std::vector<int>& cfg, Rng& rng, Fn fn) {
  const long n = dims_product(dims, sites);
  if (n <= kEnumBudget) {
    for (long k = 0; k < n; ++k) {
      long rem = k;
      for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
        cfg[sites[i]] = static_cast<int>(rem % dims[sites[i]]);
        rem /= dims[sites[i]];
      }
      fn();
    }
  } else {
    for (long k = 0; k < kEnumBudget; ++k) {
      for (int s : sites) cfg[s] = static_cast<int>(rng() % dims[s]);
      fn();
    }
  }
}

void diagonal_engine(const FloquetUnitary& f, const SymmetricMpu& expected, BulkEdgeResiduals& out) {
  const Lattice2D& lat = f.lattice;
  const PhaseModel pm(f);
  Rng rng(1618);
  std::vector<int> cfg(lat.size(), 0);
  for (int s : lat.bulk()) {
    std::vector<int> nb;
    for (int gi : pm.touching[s])
      for (int q : pm.gates[gi]->sites)
        if (q != s && std::find(nb.begin(), nb.end(), q) == nb.end()) nb.push_back(q);
    for (int a = 1; a < lat.dims[s]; ++a) {
      double acc = 0.0;
      long count = 0;
      for_configs(nb, lat.dims, cfg, rng, [&] {
        cplx ratio = 1.0;
        for (int gi : pm.touching[s]) {
          cfg[s] = a;
          const cplx pa = pm.gate_phase(gi, cfg);
          cfg[s] = 0;
          ratio *= pa / pm.gate_phase(gi, cfg);
        }
        acc += std::norm(ratio - 1.0);
        ++count;
      });
      out.bulk = std::max(out.bulk, std::sqrt(acc / static_cast<double>(count)));
      ++out.bulk_checks;
    }
  }
  std::vector<int> bdims;
  for (int s : lat.bottom) bdims.push_back(lat.dims[s]);
  const long bdim = product(bdims);
  const CMatrix W = edge_unitary(expected, bdim);
  const CMatrix B = kron_sites(*f.basis, lat.bottom);
  const CMatrix Wt = B.adjoint() * W * B;
  CMatrix off = Wt;
  for (long i = 0; i < bdim; ++i) off(i, i) = 0.0;
  out.edge = fro(off) / std::sqrt(static_cast<double>(bdim));
  std::vector<int> rest;
  for (int s = 0; s < lat.size(); ++s)
    if (std::find(lat.bottom.begin(), lat.bottom.end(), s) == lat.bottom.end()) rest.push_back(s);
  for (int sample = 0; sample < 4; ++sample) {
    std::fill(cfg.begin(), cfg.end(), 0);
    if (sample > 0)
      for (int s : rest) cfg[s] = static_cast<int>(rng() % lat.dims[s]);
    std::optional<cplx> ref;
    long k = 0;
    for_configs(lat.bottom, lat.dims, cfg, rng, [&] {
      long idx = 0;
      for (int s : lat.bottom) idx = idx * lat.dims[s] + cfg[s];
      const cplx ratio = pm.total(cfg) / Wt(idx, idx);
      if (!ref) ref = ratio;
      out.edge = std::max(out.edge, std::abs(ratio - *ref));
      ++k;
    });
    out.edge_checks += static_cast<int>(k);
  }
}

}  // namespace

bool BulkEdgeResiduals::passed() const {
  const double t = tol().faithfulness;
  return bulk <= t && edge <= t && edge_leak <= t;
}

BulkEdgeResiduals measure_bulk_and_edge(const FloquetUnitary& f, const SymmetricMpu& expected_edge) {
  BulkEdgeResiduals out;
  if (f.basis)
    diagonal_engine(f, expected_edge, out);
  else
    tracker_engine(f, expected_edge, out);
  return out;
}

BulkEdgeResiduals verify_trivial_bulk_and_edge(const FloquetUnitary& f, const SymmetricMpu& expected_edge) {
  const BulkEdgeResiduals r = measure_bulk_and_edge(f, expected_edge);
  if (!r.passed())
    fail(ErrorKind::construction_faithfulness,
         "Floquet construction is not bulk-trivial with the expected edge (bulk " + std::to_string(r.bulk) +
             ", edge " + std::to_string(r.edge) + ", leak " + std::to_string(r.edge_leak) + ")");
  return r;
}

}  // namespace mpuc
