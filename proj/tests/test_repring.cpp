#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "mpuc/models.hpp"
#include "mpuc/repring.hpp"

using namespace mpuc;

namespace {

using Pair = std::pair<std::vector<int>, std::vector<int>>;

// Abelian irreps compose like the group elements that label them.
std::vector<int> tensor_mult(const FiniteGroup& g, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(g.order, 0);
  for (int i = 0; i < g.order; ++i)
    for (int j = 0; j < g.order; ++j) out[g.mul[i][j]] += a[i] * b[j];
  return out;
}

void for_each_of_dim(int n, int dim, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> m(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      m[i] = left;
      f(m);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      m[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, dim);
}

std::set<Pair> brute_force(const RepVector& rho) {
  const FiniteGroup& g = *rho.group;
  const std::vector<int> target = tensor_mult(g, rho.mult, rho.mult);
  int total = 0;
  for (int m : target) total += m;
  std::set<Pair> out;
  for (int dx = 1; dx <= total; ++dx) {
    if (total % dx) continue;
    for_each_of_dim(g.order, dx, [&](const std::vector<int>& x) {
      for_each_of_dim(g.order, total / dx, [&](const std::vector<int>& y) {
        if (tensor_mult(g, x, y) == target) out.insert({x, y});
      });
    });
  }
  return out;
}

std::set<Pair> found(const SearchResult& r) {
  std::set<Pair> out;
  for (const auto& d : r.decompositions) out.insert({d.x.mult, d.y.mult});
  return out;
}

const Decomposition* find(const SearchResult& r, const std::vector<int>& x, const std::vector<int>& y) {
  for (const auto& d : r.decompositions)
    if (d.x.mult == x && d.y.mult == y) return &d;
  return nullptr;
}

}  // namespace

TEST(Repring, TensorOfIrrepsAddsLabels) {
  const GroupPtr g = product_of_cyclics({2, 3});
  const RepVector a = rep_vector(g, {0, 1, 0, 0, 0, 0});
  const RepVector b = rep_vector(g, {0, 0, 0, 1, 0, 1});
  EXPECT_EQ(decompose_tensor(a, b).mult, tensor_mult(*g, a.mult, b.mult));
  for (int k = 0; k < 6; ++k) {
    const int dk = dual_irrep(*g, k);
    EXPECT_EQ(g->mul[k][dk], g->identity);
    for (int e = 0; e < 6; ++e)
      EXPECT_NEAR(std::abs(irrep_character(*g, k, e) * irrep_character(*g, dk, e) - 1.0), 0.0, 1e-12);
  }
}

TEST(Repring, ReferenceDecompositions) {
  SearchConstraints eq;
  eq.equal_dims = true;
  const SearchResult bil = search_decompositions(rep_vector(cyclic_group(3), {2, 2, 0}));
  const Decomposition* b = find(bil, {4, 0, 0}, {1, 2, 1});
  ASSERT_NE(b, nullptr);
  EXPECT_TRUE(b->nontrivial);

  const SearchResult d8 = search_decompositions(rep_vector(cyclic_group(2), {6, 2}), eq);
  const Decomposition* e = find(d8, {5, 3}, {8, 0});
  ASSERT_NE(e, nullptr);
  EXPECT_TRUE(e->nontrivial);
  ASSERT_TRUE(e->predicted_spi[1].has_value());
  EXPECT_NEAR(*e->predicted_spi[1], std::log(2.0), 1e-12);

  const SearchResult z3 = search_decompositions(rep_vector(cyclic_group(3), {1, 2, 0}), eq);
  const Decomposition* r = find(z3, {1, 0, 2}, {1, 0, 2});
  ASSERT_NE(r, nullptr);
  EXPECT_TRUE(r->nontrivial);
  ASSERT_TRUE(r->predicted_rind[1].has_value());
  EXPECT_NEAR(std::abs(*r->predicted_rind[1] + 1.0), 0.0, 1e-9);
  for (const auto* s : {&bil, &d8, &z3}) EXPECT_FALSE(s->partial);
}

TEST(Repring, ResultsAreOrderedAndFactorize) {
  const RepVector rho = rep_vector(cyclic_group(3), {2, 2, 0});
  const SearchResult r = search_decompositions(rho);
  const RepVector sq = decompose_tensor(rho, rho);
  for (size_t i = 0; i < r.decompositions.size(); ++i) {
    const auto& d = r.decompositions[i];
    EXPECT_EQ(decompose_tensor(d.x, d.y).mult, sq.mult);
    EXPECT_EQ(d.nontrivial, is_nontrivial(rho, d.x));
    if (i) {
      const auto& p = r.decompositions[i - 1];
      EXPECT_TRUE(p.x.dim() < d.x.dim() || (p.x.dim() == d.x.dim() && p.x.mult <= d.x.mult));
    }
  }
}

TEST(Repring, ExhaustiveAgainstBruteForce) {
  for (const RepVector& rho : {rep_vector(cyclic_group(3), {2, 2, 0}), rep_vector(cyclic_group(2), {2, 1}),
                               rep_vector(product_of_cyclics({2, 2}), {1, 1, 0, 0})})
    EXPECT_EQ(found(search_decompositions(rho)), brute_force(rho));
}

// Seeded sample of roughly one in ten small representations.
TEST(Repring, RandomizedExhaustivenessRecheck) {
  Rng rng(2024);
  std::uniform_int_distribution<int> pick(0, 9);
  int checked = 0;
  for (const GroupPtr& g : {cyclic_group(2), cyclic_group(3), cyclic_group(4), product_of_cyclics({2, 2})}) {
    for (int dim = 1; dim <= 3; ++dim)
      for_each_of_dim(g->order, dim, [&](const std::vector<int>& m) {
        if (pick(rng) != 0 && checked > 0) return;
        const RepVector rho = rep_vector(g, m);
        EXPECT_EQ(found(search_decompositions(rho)), brute_force(rho));
        ++checked;
      });
  }
  EXPECT_GE(checked, 3);
}

TEST(Repring, BudgetYieldsPartialResult) {
  SearchConstraints c;
  c.budget = 1000;
  const SearchResult r = search_decompositions(rep_vector(cyclic_group(2), {32, 32}), c);
  EXPECT_TRUE(r.partial);
  const RepVector sq = decompose_tensor(rep_vector(cyclic_group(2), {32, 32}), rep_vector(cyclic_group(2), {32, 32}));
  for (const auto& d : r.decompositions) EXPECT_EQ(decompose_tensor(d.x, d.y).mult, sq.mult);
  SearchConstraints lim;
  lim.max_results = 2;
  EXPECT_LE(search_decompositions(rep_vector(cyclic_group(3), {2, 2, 0}), lim).decompositions.size(), 2u);
}

TEST(Repring, DivideAllEnumeratesEveryQuotient) {
  const GroupPtr z2 = cyclic_group(2);
  const auto ys = divide_all(rep_vector(z2, {2, 2}), rep_vector(z2, {1, 1}));
  std::set<std::vector<int>> got;
  for (const auto& y : ys) got.insert(y.mult);
  EXPECT_EQ(got, (std::set<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}}));
  const auto one = divide(rep_vector(z2, {3, 1}), rep_vector(z2, {1, 0}));
  ASSERT_TRUE(one.has_value());
  EXPECT_EQ(one->mult, (std::vector<int>{3, 1}));
  EXPECT_FALSE(divide(rep_vector(z2, {3, 0}), rep_vector(z2, {1, 1})).has_value());
}

TEST(Repring, PredictionsMatchClassifier) {
  ModelParams p;
  p.n = 3;
  const ClassificationReport rep = classify(instantiate("bilayer-swap", p));
  const SearchResult r = search_decompositions(rep_vector(cyclic_group(3), {2, 2, 0}));
  const Decomposition* d = find(r, {4, 0, 0}, {1, 2, 1});
  ASSERT_NE(d, nullptr);
  EXPECT_NEAR(d->predicted_ind, rep.ind, 1e-9);
  for (int g = 0; g < 3; ++g) {
    ASSERT_EQ(d->predicted_spi[g].has_value(), rep.elements[g].spi.has_value());
    if (d->predicted_spi[g]) EXPECT_NEAR(*d->predicted_spi[g], *rep.elements[g].spi, 1e-9);
  }
}

TEST(Repring, RepVectorOfLinearRep) {
  const Representation reg = regular_representation(cyclic_group(4));
  EXPECT_EQ(rep_vector_of(reg).mult, (std::vector<int>{1, 1, 1, 1}));
}
