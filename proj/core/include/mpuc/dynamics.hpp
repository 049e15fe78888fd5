#pragma once

#include <optional>
#include <vector>

#include "mpuc/classify.hpp"

namespace mpuc {

// State on a ring of L sites of dimension d each.
struct PureState {
  int L = 0;
  int d = 0;
  CVector amplitudes;
};

PureState product_state(int L, int d, int basis_index = 0);

// Returns the states at t = 0..steps.
std::vector<PureState> evolve(const PureState& state, const SymmetricMpu& s, int steps);

// Squared Schmidt coefficients (descending) for the cut between sites
// [0, cut) and [cut, L).
std::vector<double> entanglement_spectrum(const PureState& state, int cut);
double entropy(const std::vector<double>& spectrum);

// Multiplicities of the values above `floor`. Sorted descending, a new group
// starts wherever the gap to the previous value exceeds `tol`.
std::vector<int> degeneracy_profile(const std::vector<double>& spectrum, double tol = 1e-7, double floor = 1e-12);
bool all_divisible(const std::vector<int>& profile, int m);

struct SpectrumPoint {
  int t = 0;
  std::vector<double> spectrum;
  double entropy = 0.0;
  std::vector<int> profile;
};
using SpectrumSeries = std::vector<SpectrumPoint>;

SpectrumSeries spectrum_series(const std::vector<PureState>& states, int cut, double tol = 1e-7);

// Closed-form evolved MPS for the Z_d x Z_d SPT MPU from |0_Z>: one site is a
// qudit pair (a, b) in the clock basis, bond dimension d (reducible to
// d / gcd(d, t)).
struct MpsTensor {
  int d = 0;  // physical
  int D = 0;
  std::vector<CMatrix> mats;
};
struct OracleResult {
  MpsTensor mps;
  int reduced_bond = 0;
  std::vector<double> spectrum;  // {1 / reduced_bond^2} x reduced_bond^2
};
OracleResult analytic_oracle_zdzd(int d, int t);
PureState state_from_mps(const MpsTensor& m, int L);

// Nonzero spectrum of sum_j M_j (x) conj(M_j), sorted by modulus.
std::vector<cplx> transfer_spectrum(const MpsTensor& m);
// M'_i = sum_j U_ij (x) M_j
MpsTensor mps_apply_mpu(const MpsTensor& m, const MpuTensor& u);

struct Crossover {
  std::optional<double> t_star;
  std::vector<std::optional<double>> per_residue;  // s = 1..d-1
};
// Crossings of the piecewise-linear continuations of S(t = nd + s) with S(t = nd).
Crossover crossover_time(const std::vector<double>& entropy_by_step, int d);

// Brickwork circuit on a ring. A layer with offset 0 acts on (2j, 2j+1), offset
// 1 on (2j+1, 2j+2); offset -1 means single-site gates. Layers apply in order.
struct GateLayer {
  int offset = 0;
  std::vector<CMatrix> gates;
};
struct Circuit {
  int sites = 0;
  int d = 0;
  std::vector<GateLayer> layers;
};

Circuit circuit_from_standard_form(const StandardForm& sf, int sites);
CVector apply_circuit(const Circuit& c, const CVector& psi);
CVector apply_circuit_adjoint(const Circuit& c, const CVector& psi);

struct StringSpiResult {
  std::optional<double> relative_spi;  // 0.5 log|Tr L_g / Tr R_g|
  double factor_residual = 0.0;
  double position_spread = 0.0;  // max deviation across string positions
  std::vector<double> per_position;
};
// String rho_g on [a, b] with L_g on [a - w, a + w - 1] and R_g on
// [b - w + 1, b + w]; positions a = 1, 3, ... are scanned.
StringSpiResult inhomogeneous_string_spi(const Circuit& c, const Representation& rep, int g, int window = 1);

}  // namespace mpuc
