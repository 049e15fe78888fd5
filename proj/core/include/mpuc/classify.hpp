#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpuc/groups.hpp"
#include "mpuc/mpu.hpp"
#include "mpuc/ringmpo.hpp"

namespace mpuc {

// A G-symmetric MPU. The standard form is always present (extracted from the
// tensor when not supplied). `cell` is a site-resolved period of the ring used
// by the transfer-operator routes; `cell_rep` acts on one cell site.
struct SymmetricMpu {
  std::string name;
  std::optional<MpuTensor> tensor;
  StandardForm sf;
  Representation rep;
  std::vector<SiteOp> cell;
  Representation cell_rep;
  double symmetry_worst = 0.0;  // set by make_symmetric
  int d() const { return sf.d; }
};

SymmetricMpu make_symmetric(const std::string& name, std::optional<MpuTensor> tensor,
                            std::optional<StandardForm> sf, const Representation& rep);
// Same gates, different cell (site-resolved from the standard form).
SymmetricMpu from_standard_form(const std::string& name, const StandardForm& sf, const Representation& rep);

struct SymmetryCheck {
  double worst = 0.0;
  int worst_element = 0;
};

SymmetryCheck symmetry_residual(const SymmetricMpu& s);
// Brickwork-only check for a bare gate pair.
SymmetryCheck symmetry_residual(const StandardForm& sf, const Representation& rep);
// Throws asymmetric-mpu when the commutator residual exceeds tolerance.
bool verify_symmetry(const SymmetricMpu& s);

Representation blocked_rep(const Representation& rep, int k);

struct VirtualSymmetry {
  Representation x;
  Representation y;
  std::optional<Representation> z;
  double factor_residual = 0.0;     // max_g |u rho rho u^dag - x (x) y| / |.|
  double v_side_residual = 0.0;     // max_g |v (y (x) x) v^dag - rho rho| / |.|
  double inverse_set_residual = 0.0;
  std::vector<std::string> gauge_notes;
};

VirtualSymmetry extract_xy(const SymmetricMpu& s);
VirtualSymmetry extract_xy(const StandardForm& sf, const Representation& rep);

// Trace-preserving gauge of a periodic cell (fixed on bond 0).
std::vector<SiteOp> tp_gauge_cell(const std::vector<SiteOp>& cell);

struct ZResult {
  Representation z;
  std::vector<SiteOp> tp_cell;  // gauge in which z is expressed
  double relation_residual = 0.0;  // |rho U rho^dag - z^dag U z| / |U| over the cell
};
ZResult extract_z(const SymmetricMpu& s);

double chiral_index(const StandardForm& sf);

cplx character(const SymmetricMpu& s, int g);  // Tr of rho_g on one blocked site
bool character_defined(cplx chi, double dim);

std::optional<double> spi(const VirtualSymmetry& vs, int g);
// rind_g; nullopt when chi_g vanishes. Throws not-defined for a nontrivial class.
std::optional<cplx> refined_spi(const VirtualSymmetry& vs, const Representation& blocked, int g);

struct EdgeOperators {
  CMatrix L;
  CMatrix R;
  double product_rule_residual = 0.0;
};
// `blocked` is the physical representation on one blocked site (product rule check).
EdgeOperators edge_operators(const StandardForm& sf, const VirtualSymmetry& vs, const Representation& blocked, int g);

// Conjugates a g-string on blocked sites [1, N] of a ring of `sites` blocked
// sites and compares with L_g (x) rho..rho (x) R_g. N must be even.
double string_evolution_check(const SymmetricMpu& s, const VirtualSymmetry& vs, int g, int sites, int N);

// ind_g - ind from the twisted channel fixed point.
std::optional<double> sigma_route(const SymmetricMpu& s, const ZResult& z, int g);

struct InterferometryPoint {
  int k = 0;
  double expectation = 0.0;
  double predicted_relative = 0.0;  // 0.5 log<X> + k log(d/|chi|)
};
// k cell sites on each side of the left wall of a g-string.
InterferometryPoint interferometry(const SymmetricMpu& s, int g, int k);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct HomotopySample {
  double lambda = 0.0;
  StandardForm sf;
  double symmetry_residual = 0.0;
};
struct HomotopyPath {
  Representation rep;  // physical rep with ancillas (on a blocked site)
  std::vector<HomotopySample> samples;
  double start_error = 0.0;  // brickwork at lambda=0 vs the ancilla-padded input
  double end_error = 0.0;    // brickwork at lambda=1 vs identity
};
HomotopyPath homotopy_path(const SymmetricMpu& s, int samples = 11);

struct ElementLabels {
  int g = 0;
  cplx chi = 0.0;  // Tr rho_g on one physical site
  bool c_regular = true;
  std::optional<double> spi;
  std::optional<cplx> rind;
  std::optional<double> trace_route;  // ind_g - ind from x, y
  std::optional<double> edge_route;   // 0.5 log|Tr L / Tr R|
  std::optional<double> sigma_route;  // log|Tr Sigma_g|
  double product_rule_residual = 0.0;
};

struct ClassificationReport {
  std::string model;
  int d = 0, k = 1, l = 0, r = 0;
  double ind = 0.0;
  std::vector<ElementLabels> elements;
  CocycleInvariant cocycle;
  CocycleInvariant z_cocycle;
  bool z_matches_x = false;
  bool class_trivial = true;
  std::optional<double> lr_bound;
  double max_route_gap = 0.0;
  double symmetry_residual = 0.0;
  double factor_residual = 0.0;
  double v_side_residual = 0.0;
  double z_relation_residual = 0.0;
  std::vector<std::string> gauge_notes;
};

ClassificationReport classify(const SymmetricMpu& s);

// l_LR >= |ind_g| / log(d / |chi_g|), maximised over g; nullopt unless ind = 0.
std::optional<double> lr_lower_bound(const ClassificationReport& rep);

// Multiplicities c_j of the d_g-th roots in the spectrum of a (phase-fixed)
// projective y_g, and |sum_j c_j w^j| - |Tr y_g|.
struct QuantizationWitness {
  std::vector<int> multiplicities;
  double residual = 0.0;
};
QuantizationWitness quantization_witness(const CMatrix& y, int order);

}  // namespace mpuc
