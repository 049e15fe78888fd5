#include "mpuc/groups.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

std::vector<int> FiniteGroup::digits(int g) const {
  std::vector<int> ds(cyclic_orders.size());
  for (size_t i = cyclic_orders.size(); i-- > 0;) {
    ds[i] = g % cyclic_orders[i];
    g /= cyclic_orders[i];
  }
  return ds;
}

int FiniteGroup::from_digits(const std::vector<int>& ds) const {
  int g = 0;
  for (size_t i = 0; i < cyclic_orders.size(); ++i) {
    const int n = cyclic_orders[i];
    g = g * n + ((ds[i] % n) + n) % n;
  }
  return g;
}

std::string FiniteGroup::label(int g) const {
  if (cyclic_orders.size() <= 1) return std::to_string(g);
  std::ostringstream os;
  os << "(";
  auto ds = digits(g);
  for (size_t i = 0; i < ds.size(); ++i) os << (i ? "," : "") << ds[i];
  os << ")";
  return os.str();
}

int FiniteGroup::power(int g, int k) const {
  int r = identity;
  for (int i = 0; i < k; ++i) r = mul[r][g];
  return r;
}

std::vector<int> FiniteGroup::generators() const {
  std::vector<int> gens;
  if (!cyclic_orders.empty()) {
    for (size_t i = 0; i < cyclic_orders.size(); ++i) {
      std::vector<int> ds(cyclic_orders.size(), 0);
      ds[i] = 1;
      if (cyclic_orders[i] > 1) gens.push_back(from_digits(ds));
    }
    return gens;
  }
  std::vector<char> in(order, 0);
  in[identity] = 1;
  auto close = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      for (int a = 0; a < order; ++a)
        if (in[a])
          for (int s : gens)
            if (!in[mul[a][s]]) {
              in[mul[a][s]] = 1;
              grew = true;
            }
    }
  };
  for (int g = 0; g < order; ++g)
    if (!in[g]) {
      gens.push_back(g);
      close();
    }
  return gens;
}

namespace {

std::shared_ptr<FiniteGroup> finish(std::shared_ptr<FiniteGroup> G) {
  const int n = G->order;
  if (n <= 0) fail(ErrorKind::validation, "group must have positive order");
  for (const auto& row : G->mul) {
    if (static_cast<int>(row.size()) != n) fail(ErrorKind::validation, "multiplication table is not square");
    for (int v : row)
      if (v < 0 || v >= n) fail(ErrorKind::validation, "multiplication table entry out of range");
  }
  if (static_cast<int>(G->mul.size()) != n) fail(ErrorKind::validation, "multiplication table is not square");
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = G->mul[a][b] == b && G->mul[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) fail(ErrorKind::validation, "multiplication table has no identity");
  G->identity = e;
  if (n <= 64) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (G->mul[G->mul[a][b]][c] != G->mul[a][G->mul[b][c]])
            fail(ErrorKind::validation, "multiplication table is not associative");
  }
  G->inverse.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (G->mul[a][b] == e && G->mul[b][a] == e) G->inverse[a] = b;
  for (int a = 0; a < n; ++a)
    if (G->inverse[a] < 0) fail(ErrorKind::validation, "element without inverse");
  G->element_order.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    int x = a, k = 1;
    while (x != e) {
      x = G->mul[x][a];
      if (++k > n) fail(ErrorKind::validation, "element of infinite order");
    }
    G->element_order[a] = k;
    if (n % k != 0) fail(ErrorKind::validation, "element order does not divide group order");
  }
  G->abelian = true;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (G->mul[a][b] != G->mul[b][a]) G->abelian = false;
  std::vector<int> cls(n, -1);
  for (int a = 0; a < n; ++a) {
    if (cls[a] >= 0) continue;
    std::vector<int> members;
    for (int x = 0; x < n; ++x) {
      int c = G->mul[G->mul[x][a]][G->inverse[x]];
      if (cls[c] < 0) {
        cls[c] = static_cast<int>(G->classes.size());
        members.push_back(c);
      }
    }
    std::sort(members.begin(), members.end());
    G->classes.push_back(members);
  }
  return G;
}

}  // namespace

GroupPtr product_of_cyclics(const std::vector<int>& orders) {
  if (orders.empty()) fail(ErrorKind::validation, "product of cyclics needs at least one factor");
  for (int o : orders)
    if (o < 1) fail(ErrorKind::validation, "cyclic factor order must be >= 1");
  auto G = std::make_shared<FiniteGroup>();
  G->cyclic_orders = orders;
  int n = 1;
  for (int o : orders) n *= o;
  if (n > 4096) fail(ErrorKind::size, "group too large");
  G->order = n;
  G->mul.assign(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a) {
    auto da = G->digits(a);
    for (int b = 0; b < n; ++b) {
      auto db = G->digits(b);
      std::vector<int> dc(orders.size());
      for (size_t i = 0; i < orders.size(); ++i) dc[i] = (da[i] + db[i]) % orders[i];
      G->mul[a][b] = G->from_digits(dc);
    }
  }
  return finish(G);
}

GroupPtr cyclic_group(int n) { return product_of_cyclics({n}); }

GroupPtr group_from_table(const std::vector<std::vector<int>>& mul) {
  auto G = std::make_shared<FiniteGroup>();
  G->order = static_cast<int>(mul.size());
  G->mul = mul;
  return finish(G);
}

namespace {

FactorSet compute_factor_set(const FiniteGroup& G, const std::vector<CMatrix>& m, double& worst) {
  const int n = G.order;
  const double dim = static_cast<double>(m[0].rows());
  FactorSet w(n, std::vector<cplx>(n, 1.0));
  worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const CMatrix prod = m[a] * m[b];
      const CMatrix& target = m[G.mul[a][b]];
      cplx ph = hs_inner(target, prod) / dim;
      const double mod = std::abs(ph);
      if (mod > 0) ph /= mod;
      w[a][b] = ph;
      worst = std::max(worst, (prod - ph * target).norm() / std::sqrt(dim));
    }
  return w;
}

}  // namespace

Representation make_representation(GroupPtr g, std::vector<CMatrix> mats, bool projective) {
  if (!g) fail(ErrorKind::validation, "representation without group");
  if (static_cast<int>(mats.size()) != g->order) fail(ErrorKind::validation, "representation needs one matrix per element");
  const long dim = mats[0].rows();
  for (const auto& m : mats) {
    if (m.rows() != dim || m.cols() != dim) fail(ErrorKind::validation, "representation matrices differ in shape");
    if (unitarity_residual(m) > tol().unitary * std::max(1.0, std::sqrt(static_cast<double>(dim))))
      fail(ErrorKind::validation, "representation matrix is not unitary");
  }
  Representation r;
  r.group = g;
  r.matrices = std::move(mats);
  double worst = 0.0;
  FactorSet w = compute_factor_set(*g, r.matrices, worst);
  if (worst > 1e-8) fail(ErrorKind::not_projective, "matrices do not satisfy a projective multiplication law");
  if (!projective) {
    for (int a = 0; a < g->order; ++a)
      for (int b = 0; b < g->order; ++b)
        if (std::abs(w[a][b] - 1.0) > 1e-9) fail(ErrorKind::validation, "linear representation violates rho_g rho_h = rho_gh");
  } else {
    r.projective = true;
    r.factor_set = std::move(w);
  }
  return r;
}

Representation regular_representation(GroupPtr g) {
  std::vector<CMatrix> mats;
  for (int a = 0; a < g->order; ++a) {
    CMatrix m = CMatrix::Zero(g->order, g->order);
    for (int h = 0; h < g->order; ++h) m(g->mul[a][h], h) = 1.0;
    mats.push_back(m);
  }
  return make_representation(g, std::move(mats), false);
}

Representation trivial_representation(GroupPtr g, long dim) {
  std::vector<CMatrix> mats(g->order, identity(dim));
  return make_representation(g, std::move(mats), false);
}

Representation tensor_rep(const Representation& a, const Representation& b) {
  require(a.group == b.group || a.group->order == b.group->order, "tensor_rep: group mismatch");
  std::vector<CMatrix> mats;
  for (int g = 0; g < a.group->order; ++g) mats.push_back(kron(a.matrices[g], b.matrices[g]));
  return make_representation(a.group, std::move(mats), a.projective || b.projective);
}

Representation tensor_power(const Representation& r, int n) {
  std::vector<CMatrix> mats;
  for (const auto& m : r.matrices) mats.push_back(kron_power(m, n));
  return make_representation(r.group, std::move(mats), r.projective);
}

FactorSet factor_set_of(const Representation& rep) {
  double worst = 0.0;
  FactorSet w = compute_factor_set(*rep.group, rep.matrices, worst);
  if (worst > 1e-8) fail(ErrorKind::not_projective, "rho_g rho_h is not proportional to rho_gh");
  if (cocycle_condition_residual(*rep.group, w) > 1e-9)
    fail(ErrorKind::not_projective, "extracted phases violate the cocycle condition");
  return w;
}

double cocycle_condition_residual(const FiniteGroup& G, const FactorSet& w) {
  double worst = 0.0;
  for (int a = 0; a < G.order; ++a)
    for (int b = 0; b < G.order; ++b)
      for (int c = 0; c < G.order; ++c) {
        const cplx lhs = w[a][b] * w[G.mul[a][b]][c];
        const cplx rhs = w[b][c] * w[a][G.mul[b][c]];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

cplx CocycleInvariant::at(int g, int h) const {
  for (const auto& e : pairs)
    if (e.g == g && e.h == h) return e.phase;
  fail(ErrorKind::precondition, "cocycle invariant: pair not present");
}

bool CocycleInvariant::trivial() const {
  for (const auto& e : pairs)
    if (std::abs(e.phase - 1.0) > 1e-9) return false;
  return true;
}

CocycleInvariant cocycle_invariant(const FiniteGroup& G, const FactorSet& w) {
  CocycleInvariant out;
  const int n = G.order;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!G.commute(a, b)) continue;
      const cplx ph = w[a][b] / w[b][a];
      const double k = std::arg(ph) * n / (2.0 * kPi);
      const long kk = std::lround(k);
      const cplx snapped = root_of_unity(kk, n);
      if (std::abs(ph - snapped) > tol().snap) fail(ErrorKind::gauge_noise, "commutator phase is not a root of unity");
      out.pairs.push_back({a, b, snapped});
    }
  return out;
}

bool same_invariant(const CocycleInvariant& a, const CocycleInvariant& b) {
  if (a.pairs.size() != b.pairs.size()) return false;
  for (size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].g != b.pairs[i].g || a.pairs[i].h != b.pairs[i].h) return false;
    if (std::abs(a.pairs[i].phase - b.pairs[i].phase) > 1e-9) return false;
  }
  return true;
}

CocycleInvariant multiply(const CocycleInvariant& a, const CocycleInvariant& b) {
  require(a.pairs.size() == b.pairs.size(), "cocycle invariants over different groups");
  CocycleInvariant out = a;
  for (size_t i = 0; i < a.pairs.size(); ++i) out.pairs[i].phase = a.pairs[i].phase * b.pairs[i].phase;
  return out;
}

std::vector<cplx> coboundary_solution(const FiniteGroup& G, const FactorSet& w, bool& found) {
  found = false;
  const int n = G.order;
  const std::vector<int> gens = G.generators();
  // beta(s)^{ord s} = prod_j w(s^j, s) along each generator's cycle.
  std::vector<cplx> base(gens.size());
  std::vector<int> ords(gens.size());
  long combos = 1;
  for (size_t i = 0; i < gens.size(); ++i) {
    const int s = gens[i];
    const int k = G.element_order[s];
    cplx prod = 1.0;
    int x = G.identity;
    for (int j = 0; j < k; ++j) {
      prod *= w[x][s];
      x = G.mul[x][s];
    }
    base[i] = std::polar(1.0, std::arg(prod) / k) * std::pow(std::abs(prod), 1.0 / k);
    ords[i] = k;
    combos *= k;
    if (combos > 200000) fail(ErrorKind::unsupported_size, "coboundary search space too large");
  }
  std::vector<int> choice(gens.size(), 0);
  for (long c = 0; c < combos; ++c) {
    long rem = c;
    for (size_t i = 0; i < gens.size(); ++i) {
      choice[i] = static_cast<int>(rem % ords[i]);
      rem /= ords[i];
    }
    std::vector<cplx> beta(n, 0.0);
    std::vector<char> set(n, 0);
    beta[G.identity] = w[G.identity][G.identity];
    set[G.identity] = 1;
    std::queue<int> q;
    q.push(G.identity);
    while (!q.empty()) {
      const int g = q.front();
      q.pop();
      for (size_t i = 0; i < gens.size(); ++i) {
        const int gs = G.mul[g][gens[i]];
        if (set[gs]) continue;
        const cplx bs = base[i] * root_of_unity(choice[i], ords[i]);
        beta[gs] = beta[g] * bs / w[g][gens[i]];
        set[gs] = 1;
        q.push(gs);
      }
    }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        if (std::abs(w[a][b] - beta[a] * beta[b] / beta[G.mul[a][b]]) > 1e-7) ok = false;
    if (ok) {
      found = true;
      return beta;
    }
  }
  return {};
}

bool coboundary_equivalent(const FactorSet& a, const FactorSet& b, const FiniteGroup& G) {
  if (G.order > 12) fail(ErrorKind::unsupported_size, "coboundary search limited to |G| <= 12");
  FactorSet c(G.order, std::vector<cplx>(G.order));
  for (int x = 0; x < G.order; ++x)
    for (int y = 0; y < G.order; ++y) c[x][y] = a[x][y] / b[x][y];
  bool found = false;
  coboundary_solution(G, c, found);
  return found;
}

LiftResult lift_to_linear(const Representation& rep) {
  const FiniteGroup& G = *rep.group;
  FactorSet w = rep.projective ? rep.factor_set : factor_set_of(rep);
  if (!cocycle_invariant(G, w).trivial()) fail(ErrorKind::not_liftable, "projective class is nontrivial");
  bool found = false;
  std::vector<cplx> beta = coboundary_solution(G, w, found);
  if (!found) fail(ErrorKind::not_liftable, "no coboundary found for factor set");
  LiftResult out;
  std::vector<CMatrix> mats;
  out.beta.resize(G.order);
  for (int g = 0; g < G.order; ++g) {
    out.beta[g] = 1.0 / beta[g];
    mats.push_back(rep.matrices[g] * out.beta[g]);
  }
  out.rep = make_representation(rep.group, std::move(mats), false);
  return out;
}

bool is_c_regular(const FiniteGroup& G, int elem, const FactorSet& w) {
  for (int h = 0; h < G.order; ++h)
    if (G.commute(elem, h) && std::abs(w[elem][h] - w[h][elem]) > tol().snap) return false;
  return true;
}

CMatrix find_intertwiner(const Representation& a, const Representation& b, unsigned long long seed) {
  const FiniteGroup& G = *a.group;
  require(a.dim() == b.dim(), "find_intertwiner: dimension mismatch");
  for (int g = 0; g < G.order; ++g)
    if (std::abs(a.character(g) - b.character(g)) > 1e-8 * std::max<double>(1.0, a.dim()))
      fail(ErrorKind::inequivalent, "find_intertwiner: characters differ");
  Rng rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const CMatrix m = random_gaussian(a.dim(), a.dim(), rng);
    CMatrix w = CMatrix::Zero(a.dim(), a.dim());
    for (int g = 0; g < G.order; ++g) w += a.matrices[g] * m * b.matrices[g].adjoint();
    w /= static_cast<double>(G.order);
    SvdResult s = svd(w);
    if (s.s.back() < 1e-6 * s.s.front()) continue;
    const CMatrix u = s.U * s.V.adjoint();
    double worst = 0.0;
    for (int g = 0; g < G.order; ++g)
      worst = std::max(worst, (a.matrices[g] - u * b.matrices[g] * u.adjoint()).norm());
    if (worst < 1e-8) return u;
  }
  fail(ErrorKind::numerical, "find_intertwiner: group average stayed singular");
}

}  // namespace mpuc
