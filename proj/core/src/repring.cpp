#include "mpuc/repring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <numeric>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc {

namespace {

void require_cyclic_product(const FiniteGroup& g) {
  if (!g.abelian || g.cyclic_orders.empty())
    fail(ErrorKind::precondition, "representation ring: group must be a product of cyclic groups");
}

}  // namespace

cplx irrep_character(const FiniteGroup& g, int irrep, int element) {
  const auto k = g.digits(irrep);
  const auto e = g.digits(element);
  double phase = 0.0;
  for (size_t i = 0; i < k.size(); ++i)
    phase += static_cast<double>((static_cast<long>(k[i]) * e[i]) % g.cyclic_orders[i]) / g.cyclic_orders[i];
  return std::polar(1.0, 2.0 * M_PI * phase);
}

int dual_irrep(const FiniteGroup& g, int irrep) { return g.inverse[irrep]; }

int RepVector::dim() const { return std::accumulate(mult.begin(), mult.end(), 0); }

cplx RepVector::character(int g) const {
  cplx s = 0.0;
  for (size_t k = 0; k < mult.size(); ++k)
    if (mult[k]) s += static_cast<double>(mult[k]) * irrep_character(*group, static_cast<int>(k), g);
  return s;
}

RepVector rep_vector(GroupPtr g, std::vector<int> mult) {
  require(g != nullptr, "rep_vector: null group");
  require_cyclic_product(*g);
  if (static_cast<int>(mult.size()) != g->order)
    fail(ErrorKind::precondition, "rep_vector: one multiplicity per irrep required");
  for (int m : mult)
    if (m < 0) fail(ErrorKind::precondition, "rep_vector: negative multiplicity");
  return RepVector{std::move(g), std::move(mult)};
}

RepVector rep_vector_of(const Representation& rep) {
  const FiniteGroup& g = *rep.group;
  require_cyclic_product(g);
  if (rep.projective) fail(ErrorKind::precondition, "rep_vector_of: representation must be linear");
  std::vector<int> mult(g.order);
  for (int k = 0; k < g.order; ++k) {
    cplx s = 0.0;
    for (int e = 0; e < g.order; ++e) s += std::conj(irrep_character(g, k, e)) * rep.character(e);
    s /= static_cast<double>(g.order);
    const double r = std::round(s.real());
    if (std::abs(s - r) > 1e-6) fail(ErrorKind::validation, "rep_vector_of: non-integer multiplicity");
    mult[k] = static_cast<int>(r);
  }
  return rep_vector(rep.group, std::move(mult));
}

RepVector decompose_tensor(const RepVector& a, const RepVector& b) {
  if (a.group != b.group && (a.group->cyclic_orders != b.group->cyclic_orders))
    fail(ErrorKind::precondition, "decompose_tensor: representations of different groups");
  const FiniteGroup& g = *a.group;
  std::vector<int> out(g.order, 0);
  for (int i = 0; i < g.order; ++i)
    if (a.mult[i])
      for (int j = 0; j < g.order; ++j) out[g.mul[i][j]] += a.mult[i] * b.mult[j];
  return RepVector{a.group, out};
}

namespace {

// With `all` set, every solution is appended and the search continues.
bool divide_search(const FiniteGroup& g, const std::vector<int>& target, const std::vector<int>& x,
                   std::vector<int>& y, std::vector<int>& acc, int h, int left, long& work, long cap,
                   std::vector<std::vector<int>>* all = nullptr) {
  if (++work > cap) return false;
  if (h == g.order) {
    const bool hit = left == 0 && acc == target;
    if (hit && all) {
      all->push_back(y);
      return false;
    }
    return hit;
  }
  int hi = left;
  for (int k = 0; k < g.order; ++k)
    if (x[k]) hi = std::min(hi, (target[g.mul[k][h]] - acc[g.mul[k][h]]) / x[k]);
  for (int v = hi; v >= 0; --v) {
    y[h] = v;
    for (int k = 0; k < g.order; ++k) acc[g.mul[k][h]] += x[k] * v;
    if (divide_search(g, target, x, y, acc, h + 1, left - v, work, cap, all)) return true;
    for (int k = 0; k < g.order; ++k) acc[g.mul[k][h]] -= x[k] * v;
    if (work > cap) return false;
  }
  y[h] = 0;
  return false;
}

}  // namespace

std::optional<RepVector> divide(const RepVector& target, const RepVector& x, long* work) {
  const FiniteGroup& g = *target.group;
  const int dt = target.dim(), dx = x.dim();
  if (dx == 0 || dt % dx != 0) return std::nullopt;
  long local = 0;
  long& w = work ? *work : local;
  bool regular = true;
  std::vector<cplx> cx(g.order), ct(g.order);
  for (int e = 0; e < g.order; ++e) {
    cx[e] = x.character(e);
    ct[e] = target.character(e);
    if (std::abs(cx[e]) < 1e-9) regular = false;
  }
  if (regular) {
    ++w;
    std::vector<int> y(g.order);
    for (int h = 0; h < g.order; ++h) {
      cplx s = 0.0;
      for (int e = 0; e < g.order; ++e) s += ct[e] / cx[e] * std::conj(irrep_character(g, h, e));
      s /= static_cast<double>(g.order);
      const double r = std::round(s.real());
      if (r < 0 || std::abs(s - r) > 1e-6) return std::nullopt;
      y[h] = static_cast<int>(r);
    }
    RepVector yv{target.group, y};
    if (decompose_tensor(x, yv).mult != target.mult) return std::nullopt;
    return yv;
  }
  std::vector<int> y(g.order, 0), acc(g.order, 0);
  if (divide_search(g, target.mult, x.mult, y, acc, 0, dt / dx, w, std::numeric_limits<long>::max()))
    return RepVector{target.group, y};
  return std::nullopt;
}

std::vector<RepVector> divide_all(const RepVector& target, const RepVector& x, long* work) {
  const FiniteGroup& g = *target.group;
  const int dt = target.dim(), dx = x.dim();
  if (dx == 0 || dt % dx != 0) return {};
  bool regular = true;
  for (int e = 0; e < g.order; ++e)
    if (std::abs(x.character(e)) < 1e-9) regular = false;
  if (regular) {
    // Characters of y are fixed pointwise, so the quotient is unique.
    auto y = divide(target, x, work);
    if (!y) return {};
    return {*y};
  }
  long local = 0;
  long& w = work ? *work : local;
  std::vector<int> y(g.order, 0), acc(g.order, 0);
  std::vector<std::vector<int>> found;
  divide_search(g, target.mult, x.mult, y, acc, 0, dt / dx, w, std::numeric_limits<long>::max(), &found);
  std::vector<RepVector> out;
  for (auto& f : found) out.push_back(RepVector{target.group, std::move(f)});
  return out;
}

bool is_nontrivial(const RepVector& rho, const RepVector& x) {
  if (x.dim() != rho.dim()) return true;
  for (int s = 0; s < rho.group->order; ++s) {
    std::vector<int> sigma(rho.group->order, 0);
    sigma[s] = 1;
    if (decompose_tensor(RepVector{rho.group, sigma}, rho).mult == x.mult) return false;
  }
  return true;
}

Decomposition predict_indices(Decomposition dec) {
  const FiniteGroup& g = *dec.rho.group;
  const double cut = tol().character;
  dec.predicted_ind = 0.5 * std::log(static_cast<double>(dec.y.dim()) / dec.x.dim());
  dec.predicted_spi.assign(g.order, std::nullopt);
  dec.predicted_rind.assign(g.order, std::nullopt);
  for (int e = 0; e < g.order; ++e) {
    const cplx cx = dec.x.character(e), cy = dec.y.character(e), cr = dec.rho.character(e);
    if (std::abs(cx) > cut && std::abs(cy) > cut) dec.predicted_spi[e] = 0.5 * std::log(std::abs(cy) / std::abs(cx));
    if (std::abs(cr) > cut) dec.predicted_rind[e] = std::pow(cy / cr, g.element_order[e]);
  }
  return dec;
}

namespace {

struct Enumerator {
  const FiniteGroup& g;
  const RepVector& rho;
  const RepVector& square;
  const SearchConstraints& c;
  std::atomic<long>& work;
  std::atomic<bool>& partial;
  int total_dim;
  std::vector<int> upper;
  std::vector<Decomposition> found;

  // x <= shift_h(square) for some h: y has at least one irrep h.
  bool feasible_prefix(const std::vector<int>& x, int upto) const {
    for (int h = 0; h < g.order; ++h) {
      bool ok = true;
      for (int k = 0; k <= upto && ok; ++k) ok = x[k] <= square.mult[g.mul[k][h]];
      if (ok) return true;
    }
    return false;
  }

  void visit(std::vector<int>& x) {
    const int dx = std::accumulate(x.begin(), x.end(), 0);
    if (dx == 0 || total_dim % dx != 0) return;
    if (c.equal_dims && dx != rho.dim()) return;
    RepVector xv{rho.group, x};
    long w = 0;
    const auto ys = divide_all(square, xv, &w);
    work += w;
    const bool nontrivial = is_nontrivial(rho, xv);
    for (const auto& y : ys) {
      Decomposition d;
      d.rho = rho;
      d.x = xv;
      d.y = y;
      d.nontrivial = nontrivial;
      found.push_back(predict_indices(std::move(d)));
    }
  }

  void recurse(std::vector<int>& x, int k, int sum) {
    if (partial) return;
    if (work.fetch_add(1) >= c.budget) {
      partial = true;
      return;
    }
    if (k == g.order) {
      visit(x);
      return;
    }
    const int cap = c.equal_dims ? rho.dim() - sum : total_dim - sum;
    for (int v = 0; v <= std::min(upper[k], cap); ++v) {
      x[k] = v;
      if (!feasible_prefix(x, k)) break;
      recurse(x, k + 1, sum + v);
    }
    x[k] = 0;
  }
};

bool decomposition_less(const Decomposition& a, const Decomposition& b) {
  if (a.x.dim() != b.x.dim()) return a.x.dim() < b.x.dim();
  if (a.x.mult != b.x.mult) return a.x.mult < b.x.mult;
  return a.y.mult < b.y.mult;
}

}  // namespace

SearchResult search_decompositions(const RepVector& rho, const SearchConstraints& c) {
  const FiniteGroup& g = *rho.group;
  require_cyclic_product(g);
  const int d = rho.dim();
  require(d >= 1, "search_decompositions: empty representation");
  if (static_cast<long>(d) * d > 4096) fail(ErrorKind::size, "search_decompositions: dim(rho)^2 exceeds 4096");
  const RepVector square = decompose_tensor(rho, rho);
  std::vector<int> upper(g.order, 0);
  for (int k = 0; k < g.order; ++k)
    for (int h = 0; h < g.order; ++h) upper[k] = std::max(upper[k], square.mult[g.mul[k][h]]);

  std::atomic<long> work{0};
  std::atomic<bool> partial{false};
  // One partition per leading multiplicity, pulled by a fixed set of workers.
  const int nparts = upper[0] + 1;
  std::vector<std::vector<Decomposition>> results(nparts);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int lead = next++; lead < nparts; lead = next++) {
      Enumerator e{g, rho, square, c, work, partial, square.dim(), upper, {}};
      std::vector<int> x(g.order, 0);
      x[0] = lead;
      if (e.feasible_prefix(x, 0)) e.recurse(x, 1, lead);
      results[lead] = std::move(e.found);
    }
  };
  const int nworkers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, nparts);
  std::vector<std::future<void>> pool;
  for (int i = 0; i < nworkers; ++i) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  SearchResult out;
  for (auto& v : results)
    out.decompositions.insert(out.decompositions.end(), std::make_move_iterator(v.begin()),
                              std::make_move_iterator(v.end()));
  std::sort(out.decompositions.begin(), out.decompositions.end(), decomposition_less);
  if (c.max_results > 0 && static_cast<int>(out.decompositions.size()) > c.max_results) {
    out.decompositions.resize(c.max_results);
    out.partial = true;
  }
  out.partial = out.partial || partial;
  out.evaluated = work;
  return out;
}

}  // namespace mpuc
