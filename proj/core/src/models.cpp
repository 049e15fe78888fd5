#include "mpuc/models.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "mpuc/errors.hpp"

namespace mpuc {

CMatrix permutation_gate(const std::vector<int>& dims, const std::vector<int>& perm) {
  std::vector<int> id(dims.size());
  std::iota(id.begin(), id.end(), 0);
  return permute_operator(identity(product(dims)), dims, dims, perm, id);
}

CMatrix clock(int d) {
  CMatrix z = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = root_of_unity(j, d);
  return z;
}

CMatrix shift_down(int d) {
  CMatrix x = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + d - 1) % d, j) = 1.0;
  return x;
}

CMatrix fourier(int d) {
  CMatrix f(d, d);
  for (int j = 0; j < d; ++j)
    for (int a = 0; a < d; ++a) f(j, a) = root_of_unity(static_cast<long long>(a) * j, d) / std::sqrt(double(d));
  return f;
}

CMatrix controlled_phase(int d, int power) {
  CMatrix c = CMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) c(a * d + b, a * d + b) = root_of_unity(static_cast<long long>(power) * a * b, d);
  return c;
}

CMatrix number_z(int d) {
  CMatrix n = CMatrix::Zero(d, d);
  const CMatrix z = clock(d);
  CMatrix zj = identity(d);
  for (int j = 1; j < d; ++j) {
    zj = zj * z;
    n += (zj - identity(d)) / (root_of_unity(-j, d) - 1.0);
  }
  return n;
}

namespace {

int get(const std::optional<int>& v, int def) { return v ? *v : def; }

void need(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::spec, what);
}

Representation cyclic_rep(int n, const CMatrix& gen) {
  GroupPtr G = cyclic_group(n);
  std::vector<CMatrix> mats;
  CMatrix m = identity(gen.rows());
  for (int g = 0; g < n; ++g) {
    mats.push_back(m);
    m = m * gen;
  }
  return make_representation(G, std::move(mats), false);
}

// diag(1, ..., 1, w_n)
CMatrix last_phase(int d, int n) {
  CMatrix r = identity(d);
  r(d - 1, d - 1) = root_of_unity(1, n);
  return r;
}

SymmetricMpu make_identity(const ModelParams& p) {
  const int d = get(p.d, 2), n = get(p.n, 3);
  need(d >= 2 && n >= 2, "identity: need d >= 2 and n >= 2");
  MpuTensor t = MpuTensor::zeros(d, 1);
  for (int i = 0; i < d; ++i) t.at(i, i)(0, 0) = 1.0;
  return make_symmetric("identity", t, std::nullopt, cyclic_rep(n, last_phase(d, n)));
}

SymmetricMpu make_shift(const ModelParams& p) {
  const int d = get(p.d, 2), n = get(p.n, 3);
  need(d >= 2 && n >= 2, "shift: need d >= 2 and n >= 2");
  MpuTensor t = MpuTensor::zeros(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t.at(i, j)(i, j) = 1.0;
  return make_symmetric("shift", t, std::nullopt, cyclic_rep(n, last_phase(d, n)));
}

// Site = qubits (a, b). The a layer moves one site left, the b layer one site right.
SymmetricMpu make_bilayer(const ModelParams& p) {
  const int n = get(p.n, 3);
  need(n >= 2, "bilayer-swap: need n >= 2");
  MpuTensor t = MpuTensor::zeros(4, 4);
  for (int ao = 0; ao < 2; ++ao)
    for (int bo = 0; bo < 2; ++bo)
      for (int ai = 0; ai < 2; ++ai)
        for (int bi = 0; bi < 2; ++bi) t.at(ao * 2 + bo, ai * 2 + bi)(ai * 2 + bo, ao * 2 + bi) = 1.0;
  const std::vector<int> q(4, 2);
  const CMatrix u = permutation_gate(q, {0, 2, 1, 3});  // (a0 b0 a1 b1) -> (a0 a1)(b0 b1)
  const CMatrix v = permutation_gate(q, {2, 0, 3, 1});  // (b0 b1 a2 a3) -> (a2 b0)(a3 b1)
  const StandardForm sf = standard_form_from_gates(u, v, 4, 4, 1, 4, t);
  const CMatrix rho = kron(identity(2), last_phase(2, n));
  return make_symmetric("bilayer-swap", t, sf, cyclic_rep(n, rho));
}

Representation zdzd_rep(int d) {
  GroupPtr G = product_of_cyclics({d, d});
  const CMatrix z = clock(d);
  std::vector<CMatrix> mats;
  for (int g = 0; g < G->order; ++g) {
    const auto ds = G->digits(g);
    CMatrix a = identity(d), b = identity(d);
    for (int i = 0; i < ds[0]; ++i) a = a * z;
    for (int i = 0; i < ds[1]; ++i) b = b * z;
    mats.push_back(kron(a, b));
  }
  return make_representation(G, std::move(mats), false);
}

struct ZdZdParts {
  MpuTensor tensor;
  CMatrix u, v;
};

// Diagonal in the shift eigenbasis, phase w^{a1 a2 - a2 a1'} per site; rotated
// to the clock basis with F on every qudit.
ZdZdParts zdzd_parts(int d) {
  const int s = d * d;
  MpuTensor tx = MpuTensor::zeros(s, d);
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = 0; a2 < d; ++a2)
      for (int beta = 0; beta < d; ++beta)
        tx.at(a1 * d + a2, a1 * d + a2)(a1, beta) = root_of_unity(static_cast<long long>(a1) * a2 - a2 * beta, d);
  const CMatrix f2 = kron(fourier(d), fourier(d));
  ZdZdParts out;
  out.tensor = MpuTensor::zeros(s, d);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int a = 0; a < s; ++a) {
        if (std::abs(f2(i, a)) == 0) continue;
        out.tensor.at(i, j) += f2(i, a) * std::conj(f2(j, a)) * tx.at(a, a);
      }
  // u on qudits (a b c e): w^{ab} w^{-bc} w^{ce}; v on (c e a' b'): w^{-e a'}
  const std::vector<int> dims(4, d);
  const CMatrix ux = embed(controlled_phase(d, 1), dims, {0, 1}) * embed(controlled_phase(d, -1), dims, {1, 2}) *
                     embed(controlled_phase(d, 1), dims, {2, 3});
  const CMatrix vx = embed(controlled_phase(d, -1), dims, {1, 2});
  const CMatrix f4 = kron(f2, f2);
  out.u = f4 * ux * f4.adjoint();
  out.v = f4 * vx * f4.adjoint();
  return out;
}

SymmetricMpu make_zdzd(const ModelParams& p) {
  const int d = get(p.d, 2);
  need(d >= 2 && d <= 4, "zdzd-spt: need 2 <= d <= 4");
  const ZdZdParts z = zdzd_parts(d);
  const StandardForm sf = standard_form_from_gates(z.u, z.v, d * d, d * d, 1, d * d, z.tensor);
  return make_symmetric("zdzd-spt", z.tensor, sf, zdzd_rep(d));
}

SymmetricMpu make_zdzd_perturbed(const ModelParams& p) {
  const int d = get(p.d, 2);
  const double h = p.h ? *p.h : 0.1;
  need(d >= 2 && d <= 4, "zdzd-floquet-perturbed: need 2 <= d <= 4");
  need(std::isfinite(h), "zdzd-floquet-perturbed: h must be finite");
  ZdZdParts z = zdzd_parts(d);
  const CMatrix w = expm_hermitian(number_z(d), h);
  const CMatrix w2 = kron(w, w);
  MpuTensor t = MpuTensor::zeros(d * d, d);
  for (int i = 0; i < d * d; ++i)
    for (int j = 0; j < d * d; ++j)
      for (int k = 0; k < d * d; ++k) t.at(i, j) += w2(i, k) * z.tensor.at(k, j);
  const CMatrix v = kron(w2, w2) * z.v;
  const StandardForm sf = standard_form_from_gates(z.u, v, d * d, d * d, 1, d * d, t);
  return make_symmetric("zdzd-floquet-perturbed", t, sf, zdzd_rep(d));
}

}  // namespace

CocycleAngles cocycle_angles(const ModelParams& p) {
  std::vector<int> orders = p.orders.empty() ? std::vector<int>{2, 2} : p.orders;
  need(orders.size() >= 2, "cocycle-mpu: need at least two cyclic factors");
  long total = 1;
  for (int o : orders) {
    need(o >= 2, "cocycle-mpu: cyclic orders must be >= 2");
    total *= o;
  }
  need(total <= 12, "cocycle-mpu: |G| must be at most 12");
  CocycleAngles out;
  out.group = product_of_cyclics(orders);
  const FiniteGroup& G = *out.group;
  const int n = G.order;
  const int N = std::gcd(orders[0], orders[1]);
  std::vector<double> phi(n, 0.0);
  if (p.coboundary) {
    Rng rng(977);
    std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
    for (int g = 0; g < n; ++g) phi[g] = g == G.identity ? 0.0 : U(rng);
  }
  out.theta.assign(n, std::vector<double>(n, 0.0));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const auto dg = G.digits(g), dh = G.digits(h);
      out.theta[g][h] = 2.0 * kPi * p.p * dg[1] * dh[0] / N + phi[g] + phi[h] - phi[G.mul[g][h]];
    }
  return out;
}

namespace {

SymmetricMpu make_cocycle(const ModelParams& p) {
  const CocycleAngles c = cocycle_angles(p);
  const FiniteGroup& G = *c.group;
  const int n = G.order;
  CMatrix u = CMatrix::Zero(n * n, n * n);
  for (int gl = 0; gl < n; ++gl)
    for (int gr = 0; gr < n; ++gr) {
      const double th = c.theta[G.mul[G.inverse[gl]][gr]][G.inverse[gr]];
      u(gl * n + gr, gl * n + gr) = std::polar(1.0, -th);
    }
  const StandardForm sf = standard_form_from_gates(u, u, n, n, 1, n);
  return make_symmetric("cocycle-mpu", std::nullopt, sf, regular_representation(c.group));
}

SymmetricMpu make_z3_refined(const ModelParams&) {
  CMatrix u = CMatrix::Zero(9, 9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) u(((a + b) % 3) * 3 + (a + 2 * b) % 3, a * 3 + b) = 1.0;
  const CMatrix rho = CVector((CVector(3) << 1.0, root_of_unity(1, 3), root_of_unity(1, 3)).finished()).asDiagonal();
  const StandardForm sf = standard_form_from_gates(u, u, 3, 3, 1, 3);
  return make_symmetric("z3-refined", std::nullopt, sf, cyclic_rep(3, rho));
}

// Site = three qubits. Physical qubits p1..p6 of a pair are rewired to
// T1 T3 T5 T2 T4 T6, then a gate controlled by (T1, T2) acts on (T3, T4).
SymmetricMpu make_z2_d8(const ModelParams&) {
  const std::vector<int> q(6, 2);
  // out leg i <- in leg perm[i]; T_k is out leg k-1
  const CMatrix wire = permutation_gate(q, {0, 3, 1, 4, 2, 5});
  const CMatrix X = shift_down(2);
  const CMatrix P0 = (CMatrix(2, 2) << 1, 0, 0, 0).finished();
  const CMatrix P1 = (CMatrix(2, 2) << 0, 0, 0, 1).finished();
  const CMatrix swap2 = permutation_gate({2, 2}, {1, 0});
  const CMatrix c11 = kron(X, P0) + kron(identity(2), P1);
  CMatrix ctrl = kron(kron(P1, P1), c11) + kron(kron(P0, P1), swap2) + kron(kron(identity(2), P0), identity(4));
  const CMatrix u = embed(ctrl, q, {0, 1, 2, 3}) * wire;
  const CMatrix S = permutation_gate({8, 8}, {1, 0});
  const CMatrix v = S * u.adjoint() * S;
  const CMatrix cz = kron(P0, identity(2)) + kron(P1, clock(2));
  const StandardForm sf = standard_form_from_gates(u, v, 8, 8, 1, 8);
  return make_symmetric("z2-d8", std::nullopt, sf, cyclic_rep(2, kron(cz, identity(2))));
}

using Builder = SymmetricMpu (*)(const ModelParams&);

const std::map<std::string, std::pair<Builder, std::string>>& registry() {
  static const std::map<std::string, std::pair<Builder, std::string>> r = {
      {"identity", {make_identity, "--d D (2) --n N (3); Z_N acts as diag(1,..,1,w_N)"}},
      {"shift", {make_shift, "--d D (2) --n N (3); right translation, Z_N as diag(1,..,1,w_N)"}},
      {"bilayer-swap", {make_bilayer, "--n N (3); two qubits per site, Z_N acts as 1 (x) diag(1,w_N)"}},
      {"zdzd-spt", {make_zdzd, "--d D (2, up to 4); Z_D x Z_D acting as Z^m (x) Z^n"}},
      {"zdzd-floquet-perturbed", {make_zdzd_perturbed, "--d D (2) --h H (0.1)"}},
      {"cocycle-mpu", {make_cocycle, "--orders N1,N2[,..] (2,2) --p P (1) [--coboundary]; regular representation"}},
      {"z3-refined", {make_z3_refined, "no parameters"}},
      {"z2-d8", {make_z2_d8, "no parameters"}},
  };
  return r;
}

}  // namespace

std::vector<std::string> model_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

std::string model_usage(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) fail(ErrorKind::spec, "unknown model '" + name + "'");
  return it->second.second;
}

SymmetricMpu instantiate(const std::string& name, const ModelParams& params) {
  auto it = registry().find(name);
  if (it == registry().end()) fail(ErrorKind::spec, "unknown model '" + name + "'");
  return it->second.first(params);
}

ExpectedLabels expected_labels(const std::string& name, const ModelParams& p) {
  ExpectedLabels ex;
  if (name == "identity" || name == "shift") {
    const int d = get(p.d, 2), n = get(p.n, 3);
    const bool sh = name == "shift";
    ex.ind = sh ? std::log(double(d)) : 0.0;
    for (int g = 0; g < n; ++g) {
      const cplx chi = double(d - 1) + root_of_unity(g, n);
      if (std::abs(chi) < 1e-12)
        ex.spi.push_back({g, std::nullopt});
      else
        ex.spi.push_back({g, sh ? std::log(std::abs(chi)) : 0.0});
    }
    ex.class_trivial = true;
    ex.basis = sh ? "translation: ind = log d, spi_g = log|chi_g|" : "identity: all labels vanish";
  } else if (name == "bilayer-swap") {
    const int n = get(p.n, 3);
    ex.ind = 0.0;
    for (int g = 0; g < n; ++g) {
      const double c = std::cos(kPi * g / n);
      if (std::abs(c) < 1e-12)
        ex.spi.push_back({g, std::nullopt});
      else
        ex.spi.push_back({g, std::log(std::abs(c))});
    }
    ex.class_trivial = true;
    ex.basis = "x = 1, y = Z_w (x) Z_w: spi_g = log|cos(pi g / n)|";
  } else if (name == "zdzd-spt" || name == "zdzd-floquet-perturbed") {
    const int d = get(p.d, 2);
    ex.ind = 0.0;
    ex.spi.push_back({0, 0.0});
    for (int g = 1; g < d * d; ++g) ex.spi.push_back({g, std::nullopt});
    // ((1,0),(0,1)) in mixed radix
    ex.cocycle.push_back({d, 1, root_of_unity(-1, d)});
    ex.class_trivial = false;
    ex.basis = "cluster-state cocycle: commutator phase w_d^{-1} at ((1,0),(0,1)); characters of Z^m (x) Z^n vanish off e";
  } else if (name == "cocycle-mpu") {
    std::vector<int> orders = p.orders.empty() ? std::vector<int>{2, 2} : p.orders;
    int n = 1;
    for (int o : orders) n *= o;
    ex.ind = 0.0;
    ex.spi.push_back({0, 0.0});
    for (int g = 1; g < n; ++g) ex.spi.push_back({g, std::nullopt});
    const int N = std::gcd(orders[0], orders[1]);
    int stride = n / orders[0];
    ex.cocycle.push_back({stride, stride / orders[1], root_of_unity(-p.p, N)});
    ex.class_trivial = (p.p % N) == 0;
    ex.basis = "regular representation: chi_g = |G| delta_{g,e}; bilinear cocycle, commutator phase w_N^{-p}";
  } else if (name == "z3-refined") {
    ex.ind = 0.0;
    ex.spi = {{0, 0.0}, {1, 0.0}, {2, 0.0}};
    ex.rind = {{1, -1.0}, {2, -1.0}};
    ex.class_trivial = true;
    ex.basis = "x = y = rho_2: rind_1 = ((1 + 2w^2) / (1 + 2w))^3 = -1";
  } else if (name == "z2-d8") {
    ex.ind = 0.0;
    ex.spi = {{0, 0.0}, {1, std::log(2.0)}};
    ex.class_trivial = true;
    ex.basis = "Tr x_1 = 2, Tr y_1 = 8: spi_1 = log 2";
  } else {
    fail(ErrorKind::spec, "unknown model '" + name + "'");
  }
  return ex;
}

std::vector<ModelSpec> zoo() {
  std::vector<ModelSpec> out;
  auto add = [&](const std::string& name, ModelParams p) { out.push_back({name, p, expected_labels(name, p)}); };
  ModelParams p;
  add("identity", p);
  add("shift", p);
  for (int n = 2; n <= 6; ++n) {
    ModelParams q;
    q.n = n;
    add("bilayer-swap", q);
  }
  for (int d = 2; d <= 3; ++d) {
    ModelParams q;
    q.d = d;
    add("zdzd-spt", q);
  }
  {
    ModelParams q;
    q.d = 2;
    q.h = 0.1;
    add("zdzd-floquet-perturbed", q);
  }
  {
    ModelParams q;
    q.orders = {2, 2};
    add("cocycle-mpu", q);
    q.coboundary = true;
    add("cocycle-mpu", q);
    ModelParams r;
    r.orders = {3, 3};
    add("cocycle-mpu", r);
  }
  add("z3-refined", p);
  add("z2-d8", p);
  return out;
}

double compare_to_expected(const ClassificationReport& rep, const ExpectedLabels& ex) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  if (ex.ind) worst = std::max(worst, std::abs(rep.ind - *ex.ind));
  for (const auto& [g, val] : ex.spi) {
    if (g >= static_cast<int>(rep.elements.size())) return inf;
    const auto& got = rep.elements[g].spi;
    if (got.has_value() != val.has_value()) return inf;
    if (val) worst = std::max(worst, std::abs(*got - *val));
  }
  for (const auto& [g, val] : ex.rind) {
    if (g >= static_cast<int>(rep.elements.size()) || !rep.elements[g].rind) return inf;
    worst = std::max(worst, std::abs(*rep.elements[g].rind - val));
  }
  for (const auto& [g, h, ph] : ex.cocycle) worst = std::max(worst, std::abs(rep.cocycle.at(g, h) - ph));
  if (ex.class_trivial && *ex.class_trivial != rep.class_trivial) return inf;
  return worst;
}

}  // namespace mpuc
