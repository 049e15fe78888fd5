#pragma once

#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "mpuc/numerics.hpp"

namespace mpuc {

struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mul;
  int identity = 0;
  std::vector<int> inverse;
  std::vector<int> element_order;
  std::vector<std::vector<int>> classes;
  bool abelian = true;
  // Non-empty when the group is a product of cyclic groups; elements are then
  // mixed-radix integers with the first factor most significant.
  std::vector<int> cyclic_orders;

  std::vector<int> digits(int g) const;
  int from_digits(const std::vector<int>& ds) const;
  std::string label(int g) const;
  std::vector<int> generators() const;
  bool commute(int g, int h) const { return mul[g][h] == mul[h][g]; }
  int power(int g, int k) const;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr cyclic_group(int n);
GroupPtr product_of_cyclics(const std::vector<int>& orders);
GroupPtr group_from_table(const std::vector<std::vector<int>>& mul);

using FactorSet = std::vector<std::vector<cplx>>;

struct Representation {
  GroupPtr group;
  std::vector<CMatrix> matrices;
  bool projective = false;
  FactorSet factor_set;  // filled iff projective

  long dim() const { return matrices.empty() ? 0 : matrices[0].rows(); }
  const CMatrix& operator[](int g) const { return matrices[g]; }
  cplx character(int g) const { return matrices[g].trace(); }
};

// Validates unitarity and the multiplication law (linear or projective).
Representation make_representation(GroupPtr g, std::vector<CMatrix> mats, bool projective);

Representation regular_representation(GroupPtr g);
Representation trivial_representation(GroupPtr g, long dim);
Representation tensor_power(const Representation& r, int n);
Representation tensor_rep(const Representation& a, const Representation& b);

FactorSet factor_set_of(const Representation& rep);
double cocycle_condition_residual(const FiniteGroup& g, const FactorSet& w);

struct CocycleInvariant {
  struct Entry {
    int g;
    int h;
    cplx phase;
  };
  std::vector<Entry> pairs;
  cplx at(int g, int h) const;
  bool trivial() const;
};

CocycleInvariant cocycle_invariant(const FiniteGroup& g, const FactorSet& w);
inline CocycleInvariant cocycle_invariant(const Representation& rep) {
  return cocycle_invariant(*rep.group, rep.projective ? rep.factor_set : factor_set_of(rep));
}
bool same_invariant(const CocycleInvariant& a, const CocycleInvariant& b);
CocycleInvariant multiply(const CocycleInvariant& a, const CocycleInvariant& b);

// beta with w(g,h) = beta(g) beta(h) / beta(gh), if one exists.
std::vector<cplx> coboundary_solution(const FiniteGroup& g, const FactorSet& w, bool& found);
bool coboundary_equivalent(const FactorSet& a, const FactorSet& b, const FiniteGroup& g);

struct LiftResult {
  Representation rep;
  std::vector<cplx> beta;  // rep_g(lifted) = beta(g) * rep_g(input)
};
LiftResult lift_to_linear(const Representation& rep);

bool is_c_regular(const FiniteGroup& g, int elem, const FactorSet& w);

// W with a_g = W b_g W^dagger for all g.
CMatrix find_intertwiner(const Representation& a, const Representation& b, unsigned long long seed = 1);

}  // namespace mpuc
