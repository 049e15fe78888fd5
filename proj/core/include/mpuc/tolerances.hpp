#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mpuc {

struct Tolerances {
  double rank_cutoff = 1e-8;     // relative singular-value cutoff
  double unitary = 1e-9;         // unitarity / normality checks
  double symmetry = 1e-9;        // [rho^L, U] commutators
  double support = 1e-8;         // support-membership projection residual
  double factor = 1e-8;          // x (x) y factorization, defining relations
  double route = 1e-7;           // cross-route agreement
  double snap = 1e-6;            // root-of-unity snapping
  double character = 1e-8;       // chi_g treated as zero below this
  double degeneracy = 1e-7;      // entanglement-spectrum grouping
  double fixed_point = 1e-12;    // power-iteration convergence
  double gap = 1e-8;             // second eigenvalue distance from 1
  double faithfulness = 1e-7;    // Floquet residual bound

  // Parses "key=value,key=value"; unknown keys raise a validation error.
  void apply_overrides(const std::string& spec);
  std::vector<std::pair<std::string, double>> entries() const;
};

// Process-wide tolerance set, initialised from MPUC_TOL on first use.
const Tolerances& tol();
void set_tolerances(const Tolerances& t);

}  // namespace mpuc
