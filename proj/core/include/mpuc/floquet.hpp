#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpuc/classify.hpp"
#include "mpuc/models.hpp"

namespace mpuc {

// Sites on a cylinder: x periodic, y open. The bottom and top rows are listed
// left to right.
struct Lattice2D {
  int rows = 0;
  int cols = 0;
  std::vector<int> dims;
  std::vector<std::pair<int, int>> coords;  // (x, y)
  std::vector<int> bottom;
  std::vector<int> top;

  int size() const { return static_cast<int>(dims.size()); }
  double log2_dim() const;
  std::vector<int> bulk() const;
};

struct FloquetGate {
  std::vector<int> sites;
  CMatrix op;                  // empty when too large to materialize
  CVector phases;              // diagonal in the lattice basis (diagonal models)
  bool swap = false;           // plain exchange of two sites
  std::vector<int> out_dims;   // empty: same as input
  std::string tag;
};
using FloquetLayer = std::vector<FloquetGate>;

struct FloquetUnitary {
  std::string name;
  Lattice2D lattice;
  std::vector<FloquetLayer> layers;  // applied in order
  // When set, every gate is diagonal in the product basis whose site-s basis
  // vectors are the columns of basis[s].
  std::optional<std::vector<CMatrix>> basis;
  GroupPtr group;
  std::vector<std::vector<CMatrix>> rho;  // rho[site][g]
  // u-conjugated exchanges, kept for the symmetry check of the swap model.
  std::vector<std::pair<std::vector<int>, CMatrix>> fused;
};

// Z_d x Z_d plaquette model. rows = vertex rows, cols = edge unit cells (two
// qudit columns each: a Z^m site and a Z^n site).
FloquetUnitary build_zdzd_floquet(int d, int rows, int cols);
// Plaquette model of the cocycle-mpu cocycle, sites in the regular
// representation; cols = vertex columns (even).
FloquetUnitary build_cocycle_floquet(const ModelParams& params, int rows, int cols);
// First half: u on every black/white pair, l legs exchanged along the four
// diagonal directions of the black sublattice, u^dagger. Second half: physical
// exchanges between black/white rows and the gray rows in between.
// rows = black/white rows (even), cols = u-pairs per row.
FloquetUnitary build_swap_floquet(const CMatrix& u, int l, int r, const Representation& rho, int rows, int cols);

// Edge MPU generated by (u, v = u^dagger S), S: (r, l) -> (l, r).
SymmetricMpu swap_edge_mpu(const CMatrix& u, int l, int r, const Representation& rho);

double gate_unitarity_residual(const FloquetUnitary& f);
double gate_commutator_residual(const FloquetUnitary& f);
double symmetry_residual(const FloquetUnitary& f);
double diagonal_residual(const FloquetUnitary& f);

// State-vector application and materialization (total dimension <= 2^18 and
// <= 2^10 respectively).
CVector apply_floquet(const FloquetUnitary& f, const CVector& psi);
CMatrix full_unitary(const FloquetUnitary& f);

struct BulkEdgeResiduals {
  double bulk = 0.0;          // max ||F O F^dagger - O|| over bulk generators
  double edge = 0.0;          // bottom row action vs the expected edge MPU
  double edge_leak = 0.0;     // weight of edge-generator images off the bottom row
  int bulk_checks = 0;
  int edge_checks = 0;
  bool passed() const;
};

BulkEdgeResiduals measure_bulk_and_edge(const FloquetUnitary& f, const SymmetricMpu& expected_edge);
// Same, raising construction_faithfulness above the tolerance.
BulkEdgeResiduals verify_trivial_bulk_and_edge(const FloquetUnitary& f, const SymmetricMpu& expected_edge);

// Dense unitary of an MPU on a ring whose total dimension is `dim`.
CMatrix edge_unitary(const SymmetricMpu& s, long dim);

}  // namespace mpuc
