#pragma once

#include <optional>
#include <vector>

#include "mpuc/groups.hpp"

namespace mpuc {

// Element of the representation ring of a product of cyclic groups. Irreps are
// labelled like group elements: irrep k has character prod_i w_{n_i}^{k_i g_i}.
struct RepVector {
  GroupPtr group;
  std::vector<int> mult;

  int dim() const;
  cplx character(int g) const;
  bool operator==(const RepVector& o) const { return mult == o.mult; }
};

RepVector rep_vector(GroupPtr g, std::vector<int> mult);
// Multiplicities of a linear representation of an abelian group.
RepVector rep_vector_of(const Representation& rep);
cplx irrep_character(const FiniteGroup& g, int irrep, int element);
int dual_irrep(const FiniteGroup& g, int irrep);

RepVector decompose_tensor(const RepVector& a, const RepVector& b);

struct Decomposition {
  RepVector rho;
  RepVector x;
  RepVector y;
  bool nontrivial = false;
  double predicted_ind = 0.0;
  std::vector<std::optional<double>> predicted_spi;  // indexed by element
  std::vector<std::optional<cplx>> predicted_rind;
};

struct SearchConstraints {
  bool equal_dims = false;
  int max_results = 0;  // 0 = unlimited
  long budget = 4'000'000;  // candidate evaluations before giving up
};

struct SearchResult {
  std::vector<Decomposition> decompositions;  // by dim x, then lexicographic
  bool partial = false;
  long evaluated = 0;
};

// All (x, y) with x (x) y = rho (x) rho, flagged for nontriviality and filled
// by predict_indices.
SearchResult search_decompositions(const RepVector& rho, const SearchConstraints& c = {});

// y with x (x) y = target, if it exists in R+(G).
std::optional<RepVector> divide(const RepVector& target, const RepVector& x, long* work = nullptr);
// Every such y; more than one only when some character of x vanishes.
std::vector<RepVector> divide_all(const RepVector& target, const RepVector& x, long* work = nullptr);

bool is_nontrivial(const RepVector& rho, const RepVector& x);
Decomposition predict_indices(Decomposition dec);

}  // namespace mpuc
