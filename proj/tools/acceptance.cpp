// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "mpuc/dynamics.hpp"
#include "mpuc/errors.hpp"
#include "mpuc/repring.hpp"

using namespace mpuc;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void check(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::pair<int, json> run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mpuc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  json j;
  if (code == 0 && !out.str().empty()) j = json::parse(out.str());
  return {code, j};
}

ModelParams with_n(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

ModelParams with_d(int d) {
  ModelParams p;
  p.d = d;
  return p;
}

Outcome check_bilayer_spi() {
  Outcome o;
  double slowest = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [code, j] = run_cli({"classify", "--model", "bilayer-swap", "--n", std::to_string(n)});
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    const std::string tag = "n=" + std::to_string(n);
    if (code != 0) {
      check(o, false, tag + " exit " + std::to_string(code));
      continue;
    }
    check(o, std::abs(j["ind"].get<double>()) < 1e-9, tag + " ind");
    const double c = std::abs(std::cos(M_PI / n));
    const json& s = j["spi"]["1"];
    if (c < 1e-12)
      check(o, s.is_null(), tag + " spi should be undefined");
    else
      check(o, s.is_number() && std::abs(s.get<double>() - std::log(c)) < 1e-7, tag + " spi");
    check(o, dt < 5.0, tag + " runtime " + fmt("%.1fs", dt));
  }
  if (o.pass) o.detail = "N=2..6, N=2 undefined (cos = 0), slowest " + fmt("%.2fs", slowest);
  return o;
}

Outcome check_three_routes() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int compared = 0;
  for (const auto& spec : zoo()) {
    const ClassificationReport r = classify(instantiate(spec.name, spec.params));
    for (const auto& e : r.elements) {
      if (!e.trace_route) continue;
      const std::string tag = spec.name + " g=" + std::to_string(e.g);
      if (!e.edge_route || !e.sigma_route) {
        check(o, false, tag + " missing route");
        continue;
      }
      const double a = std::abs(*e.trace_route - *e.edge_route);
      const double b = std::abs(*e.trace_route - *e.sigma_route);
      worst = std::max({worst, a, b});
      check(o, a < 1e-7 && b < 1e-7, tag + fmt(" gap %.1e", std::max(a, b)));
      ++compared;
    }
  }
  const double dt = seconds_since(t0);
  check(o, dt < 60.0, fmt("runtime %.1fs", dt));
  if (o.pass) o.detail = std::to_string(compared) + " elements, worst gap " + fmt("%.1e", worst) + ", " + fmt("%.1fs", dt);
  return o;
}

Outcome check_refined_spi() {
  Outcome o;
  const ClassificationReport z3 = classify(instantiate("z3-refined"));
  const auto& e = z3.elements[1];
  check(o, e.spi && std::abs(*e.spi) < 1e-9, "z3-refined spi(1)");
  check(o, e.rind && std::abs(*e.rind + 1.0) < 1e-7, "z3-refined rind(1)");
  const ClassificationReport z2 = classify(instantiate("z2-d8"));
  check(o, std::abs(z2.ind) < 1e-9, "z2-d8 ind");
  check(o, z2.elements[1].spi && std::abs(*z2.elements[1].spi - std::log(2.0)) < 1e-7, "z2-d8 spi(1)");
  if (o.pass) o.detail = "rind(1) = -1, spi(1) = log 2";
  return o;
}

Outcome check_cohomology() {
  Outcome o;
  CocycleInvariant zd2;
  for (int d : {2, 3}) {
    const SymmetricMpu s = instantiate("zdzd-spt", with_d(d));
    const ClassificationReport r = classify(s);
    const FiniteGroup& G = *s.rep.group;
    const cplx w = r.cocycle.at(G.from_digits({1, 0}), G.from_digits({0, 1}));
    const bool ok = std::abs(w - root_of_unity(1, d)) < 1e-7 || std::abs(w - root_of_unity(-1, d)) < 1e-7;
    check(o, ok, "zdzd-spt d=" + std::to_string(d) + " invariant");
    if (d == 2) zd2 = r.cocycle;
  }
  check(o, classify(instantiate("bilayer-swap", with_n(3))).cocycle.trivial(), "bilayer-swap invariant not trivial");
  ModelParams p;
  p.orders = {2, 2};
  check(o, same_invariant(classify(instantiate("cocycle-mpu", p)).cocycle, zd2), "cocycle-mpu differs from zdzd-spt(2)");
  if (o.pass) o.detail = "w_d^(+-1) for d=2,3; bilayer trivial; cocycle-mpu(Z2xZ2) = zdzd-spt(2)";
  return o;
}

Outcome check_degeneracy() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double oracle_gap = 0.0;
  for (auto [d, L] : std::vector<std::pair<int, int>>{{2, 6}, {3, 4}, {4, 4}}) {
    const SymmetricMpu s = instantiate("zdzd-spt", with_d(d));
    const auto states = evolve(product_state(L, s.d()), s, 2 * d);
    const SpectrumSeries ser = spectrum_series(states, L / 2, 1e-7);
    for (const auto& pt : ser) {
      const int g = std::gcd(d, pt.t);
      const int m = (d / g) * (d / g);
      const std::string tag = "d=" + std::to_string(d) + " t=" + std::to_string(pt.t);
      check(o, all_divisible(pt.profile, m), tag + " multiplicities");
      const OracleResult orc = analytic_oracle_zdzd(d, pt.t);
      double gap = 0.0;
      for (size_t i = 0; i < pt.spectrum.size(); ++i) {
        const double want = i < orc.spectrum.size() ? orc.spectrum[i] : 0.0;
        const double dev = std::abs(pt.spectrum[i] - want);
        gap = std::isfinite(dev) ? std::max(gap, dev) : std::numeric_limits<double>::infinity();
      }
      oracle_gap = std::max(oracle_gap, gap);
      check(o, gap < 1e-9, tag + fmt(" oracle gap %.1e", gap));
    }
  }
  const double dt = seconds_since(t0);
  check(o, dt < 120.0, fmt("runtime %.1fs", dt));
  if (o.pass) o.detail = "(2,6) (3,4) (4,4), oracle gap " + fmt("%.1e", oracle_gap) + ", " + fmt("%.1fs", dt);
  return o;
}

Outcome check_perturbed() {
  Outcome o;
  std::vector<double> tstar;
  for (double h : {0.1, 0.2}) {
    ModelParams p;
    p.d = 2;
    p.h = h;
    const SymmetricMpu s = instantiate("zdzd-floquet-perturbed", p);
    const auto states = evolve(product_state(6, s.d()), s, 40);
    const SpectrumSeries ser = spectrum_series(states, 3, 1e-3);
    std::vector<double> ent;
    for (const auto& pt : ser) {
      ent.push_back(pt.entropy);
      if (h == 0.1 && pt.t % 2 == 1 && pt.t <= 12)
        check(o, all_divisible(pt.profile, 4), "h=0.1 t=" + std::to_string(pt.t) + " multiplicities");
    }
    const Crossover c = crossover_time(ent, 2);
    check(o, c.t_star.has_value(), fmt("h=%.1f no crossover", h));
    tstar.push_back(c.t_star.value_or(0.0));
  }
  check(o, tstar[1] < tstar[0], "t* does not decrease with h");
  if (o.pass) o.detail = "4-fold at odd t <= 11, t* = " + fmt("%.2f", tstar[0]) + " (h=0.1), " + fmt("%.2f", tstar[1]) + " (h=0.2)";
  return o;
}

Outcome check_interferometry_fit() {
  Outcome o;
  auto [code, j] = run_cli({"interferometry", "--model", "bilayer-swap", "--n", "3", "--g", "1", "--kmax", "3", "--fit"});
  if (code != 0) {
    check(o, false, "exit " + std::to_string(code));
    return o;
  }
  const double ds = std::abs(j["fit"]["slope"].get<double>() - j["expected"]["slope"].get<double>());
  const double di = std::abs(j["fit"]["intercept"].get<double>() - j["expected"]["intercept"].get<double>());
  check(o, ds < 1e-6, fmt("slope off by %.1e", ds));
  check(o, di < 1e-6, fmt("intercept off by %.1e", di));
  // Independent of the classifier: slope -log(4 / |2 + 2w|), intercept log cos(pi/3).
  check(o, std::abs(j["expected"]["slope"].get<double>() + std::log(4.0 / std::abs(2.0 + 2.0 * root_of_unity(1, 3)))) < 1e-12,
        "expected slope");
  check(o, std::abs(j["expected"]["intercept"].get<double>() - std::log(0.5)) < 1e-7, "expected intercept");
  if (o.pass) o.detail = "slope " + fmt("%.9f", j["fit"]["slope"].get<double>()) + ", intercept " + fmt("%.9f", j["fit"]["intercept"].get<double>());
  return o;
}

bool contains(const SearchResult& r, const std::vector<int>& x, const std::vector<int>& y, bool& nontrivial) {
  for (const auto& d : r.decompositions)
    if (d.x.mult == x && d.y.mult == y) {
      nontrivial = d.nontrivial;
      return true;
    }
  return false;
}

// All (x, y) with x (x) y = rho (x) rho by direct enumeration of both factors.
std::set<std::pair<std::vector<int>, std::vector<int>>> brute_force(const RepVector& rho) {
  const FiniteGroup& G = *rho.group;
  const RepVector sq = decompose_tensor(rho, rho);
  const int n = sq.dim();
  std::vector<std::vector<int>> vecs;
  std::function<void(std::vector<int>&, int, int)> gen = [&](std::vector<int>& v, int k, int left) {
    if (k == G.order) {
      vecs.push_back(v);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      v[k] = a;
      gen(v, k + 1, left - a);
    }
    v[k] = 0;
  };
  std::vector<int> v(G.order, 0);
  gen(v, 0, n);
  std::set<std::pair<std::vector<int>, std::vector<int>>> out;
  for (const auto& x : vecs) {
    const int dx = std::accumulate(x.begin(), x.end(), 0);
    if (dx == 0) continue;
    for (const auto& y : vecs) {
      if (dx * std::accumulate(y.begin(), y.end(), 0) != n) continue;
      std::vector<int> p(G.order, 0);
      for (int a = 0; a < G.order; ++a)
        for (int b = 0; b < G.order; ++b) p[G.mul[a][b]] += x[a] * y[b];
      if (p == sq.mult) out.insert({x, y});
    }
  }
  return out;
}

Outcome check_repring_search() {
  Outcome o;
  SearchConstraints eq;
  eq.equal_dims = true;
  bool nt = false;
  const RepVector bil = rep_vector(cyclic_group(3), {2, 2, 0});
  const SearchResult rb = search_decompositions(bil);
  check(o, contains(rb, {4, 0, 0}, {1, 2, 1}, nt) && nt, "bilayer decomposition");
  const SearchResult r8 = search_decompositions(rep_vector(cyclic_group(2), {6, 2}), eq);
  check(o, contains(r8, {5, 3}, {8, 0}, nt) && nt, "Z2 d=8 decomposition");
  const SearchResult r3 = search_decompositions(rep_vector(cyclic_group(3), {1, 2, 0}), eq);
  check(o, contains(r3, {1, 0, 2}, {1, 0, 2}, nt) && nt, "Z3 refined decomposition");
  check(o, !rb.partial && !r8.partial && !r3.partial, "search reported partial");
  int spot = 0;
  for (const auto& rho : {bil, rep_vector(cyclic_group(2), {2, 1}), rep_vector(product_of_cyclics({2, 2}), {1, 1, 0, 0})}) {
    const SearchResult full = search_decompositions(rho);
    std::set<std::pair<std::vector<int>, std::vector<int>>> got;
    for (const auto& d : full.decompositions) got.insert({d.x.mult, d.y.mult});
    check(o, got == brute_force(rho), "exhaustiveness spot-check");
    spot += static_cast<int>(got.size());
  }
  if (o.pass) o.detail = "3 reference decompositions found and nontrivial, " + std::to_string(spot) + " pairs match brute force";
  return o;
}

// x (x) y gauge: u -> (A (x) B) u, v -> v (B^dagger (x) A^dagger).
StandardForm random_gauge(const StandardForm& sf, Rng& rng) {
  const CMatrix A = random_unitary(sf.l, rng), B = random_unitary(sf.r, rng);
  StandardForm g = sf;
  g.u = kron(A, B) * sf.u;
  g.v = sf.v * kron(B.adjoint(), A.adjoint());
  return g;
}

Outcome check_additivity() {
  Outcome o;
  double worst = 0.0;
  auto labels = [](const SymmetricMpu& s) { return classify(s); };
  auto compare = [&](const ClassificationReport& a, const ClassificationReport& b, const ClassificationReport& ab,
                     const std::string& tag) {
    const double di = std::abs(ab.ind - a.ind - b.ind);
    worst = std::max(worst, di);
    check(o, di < 1e-7, tag + " ind");
    for (size_t g = 0; g < ab.elements.size(); ++g) {
      const auto &x = a.elements[g].spi, &y = b.elements[g].spi, &z = ab.elements[g].spi;
      if (!x || !y) continue;
      if (!z) {
        check(o, false, tag + " spi undefined");
        continue;
      }
      const double ds = std::abs(*z - *x - *y);
      worst = std::max(worst, ds);
      check(o, ds < 1e-7, tag + " spi(" + std::to_string(g) + ")");
    }
  };
  const SymmetricMpu b3 = instantiate("bilayer-swap", with_n(3));
  ModelParams id3;
  id3.n = 3;
  id3.d = 4;
  const SymmetricMpu i3 = instantiate("identity", id3);
  ModelParams q2;
  q2.n = 3;
  const SymmetricMpu sh = instantiate("shift", q2), idq = instantiate("identity", q2);
  const SymmetricMpu z3 = instantiate("z3-refined");
  struct Pair {
    const SymmetricMpu* a;
    const SymmetricMpu* b;
    bool compose;
  };
  const std::vector<Pair> pairs = {{&sh, &idq, true}, {&sh, &sh, true}, {&b3, &i3, false}, {&b3, &z3, false}, {&sh, &b3, false}};
  for (const auto& p : pairs) {
    const std::string tag = p.a->name + (p.compose ? " * " : " x ") + p.b->name;
    SymmetricMpu ab;
    if (p.compose)
      ab = from_standard_form(tag, sf_compose(p.a->sf, p.b->sf), p.a->rep);
    else
      ab = from_standard_form(tag, sf_tensor_product(p.a->sf, p.b->sf), tensor_rep(p.a->rep, p.b->rep));
    compare(labels(*p.a), labels(*p.b), labels(ab), tag);
  }
  // Blocking and gauge invariance.
  const ClassificationReport base = classify(b3);
  const ClassificationReport blocked = classify(from_standard_form("blocked", sf_block(b3.sf, 2), b3.rep));
  const double db = std::abs(*blocked.elements[1].spi - *base.elements[1].spi);
  worst = std::max(worst, db);
  check(o, db < 1e-7, "blocking");
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const StandardForm g = random_gauge(b3.sf, rng);
    const VirtualSymmetry vs = extract_xy(g, b3.rep);
    const auto v = spi(vs, 1);
    const double dg = v ? std::abs(*v - *base.elements[1].spi) : 1.0;
    worst = std::max(worst, dg);
    check(o, dg < 1e-7, "gauge " + std::to_string(i));
  }
  // Symmetric site-dependent perturbation between the u and v layers.
  Circuit c = circuit_from_standard_form(b3.sf, 6);
  GateLayer mid{-1, {}};
  for (int j = 0; j < 6; ++j) {
    if (j % 2 == 0) {
      mid.gates.push_back(random_unitary(4, rng));  // l leg carries the trivial x
    } else {
      CMatrix q = CMatrix::Zero(4, 4);
      for (int k = 0; k < 4; ++k) q(k, k) = std::polar(1.0, 6.0 * static_cast<double>(rng()) / static_cast<double>(Rng::max()));
      mid.gates.push_back(q);  // commutes with the diagonal y
    }
  }
  c.layers.insert(c.layers.begin() + 1, mid);
  const StringSpiResult sr = inhomogeneous_string_spi(c, b3.rep, 1);
  const double dp = sr.relative_spi ? std::abs(*sr.relative_spi - *base.elements[1].trace_route) : 1.0;
  worst = std::max({worst, dp, sr.position_spread});
  check(o, dp < 1e-7 && sr.position_spread < 1e-7, "perturbed string");
  if (o.pass) o.detail = "5 pairs, blocking, 50 gauges, perturbed string; worst " + fmt("%.1e", worst);
  return o;
}

Outcome check_floquet_parents() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  auto run = [&](const std::string& model, const ModelParams& p, int rows, int cols) {
    const cli::FloquetCase fc = cli::floquet_for_model(model, p, rows, cols);
    try {
      const BulkEdgeResiduals r = verify_trivial_bulk_and_edge(fc.floquet, fc.edge);
      worst = std::max({worst, r.bulk, r.edge, r.edge_leak});
    } catch (const Error& e) {
      check(o, false, model + ": " + e.what());
    }
  };
  ModelParams d2;
  d2.d = 2;
  run("zdzd-spt", d2, 2, 3);
  run("zdzd-spt", d2, 3, 3);  // with bulk sites
  run("bilayer-swap", with_n(3), 2, 2);
  // The SWAP edge seeded with bilayer-swap gates is the bilayer MPU itself.
  const SymmetricMpu b3 = instantiate("bilayer-swap", with_n(3));
  const double same = phase_aligned_distance(edge_unitary(b3, 256), edge_unitary(swap_edge_mpu(b3.sf.u, b3.sf.l, b3.sf.r, b3.rep), 256));
  check(o, same < 1e-8, "SWAP edge differs from bilayer-swap");
  const double dt = seconds_since(t0);
  check(o, dt < 300.0, fmt("runtime %.1fs", dt));
  if (o.pass) o.detail = "zdzd d=2 2x3 and 3x3, SWAP bilayer-swap(3) 2x2; worst residual " + fmt("%.1e", worst);
  return o;
}

Outcome check_homotopy() {
  Outcome o;
  const HomotopyPath h = homotopy_path(instantiate("bilayer-swap", with_n(3)), 11);
  double worst = 0.0;
  for (const auto& s : h.samples) worst = std::max(worst, s.symmetry_residual);
  check(o, h.samples.size() == 11, "sample count");
  check(o, worst < 1e-8, fmt("symmetry residual %.1e", worst));
  check(o, h.start_error < 1e-8 && h.end_error < 1e-8, "endpoint errors");
  bool obstructed = false;
  try {
    homotopy_path(instantiate("zdzd-spt", with_d(2)), 11);
  } catch (const Error& e) {
    obstructed = e.kind() == ErrorKind::obstruction;
  }
  check(o, obstructed, "zdzd-spt(2) not obstructed");
  if (o.pass) o.detail = "11 samples, symmetry " + fmt("%.1e", worst) + ", endpoints " + fmt("%.1e", std::max(h.start_error, h.end_error)) + "; zdzd-spt obstructed";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"bilayer SWAP SPI", check_bilayer_spi},
      {"three-route agreement", check_three_routes},
      {"refined SPI", check_refined_spi},
      {"cohomology", check_cohomology},
      {"entanglement-spectrum degeneracy", check_degeneracy},
      {"perturbed dynamics", check_perturbed},
      {"interferometry", check_interferometry_fit},
      {"representation-ring search", check_repring_search},
      {"additivity and invariance", check_additivity},
      {"Floquet parents", check_floquet_parents},
      {"homotopy", check_homotopy},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
