#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace mpuc {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using Rng = std::mt19937_64;

constexpr double kPi = 3.14159265358979323846;

inline cplx root_of_unity(long long k, long long n) {
  const double a = 2.0 * kPi * static_cast<double>(((k % n) + n) % n) / static_cast<double>(n);
  return {std::cos(a), std::sin(a)};
}

// ---- basic helpers -------------------------------------------------------

CMatrix identity(long n);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(const std::vector<CMatrix>& ms);
CMatrix kron_power(const CMatrix& a, int n);
double fro(const CMatrix& m);
cplx hs_inner(const CMatrix& a, const CMatrix& b);  // Tr(a^dagger b)
double unitarity_residual(const CMatrix& u);        // max(|u^dag u - 1|, |u u^dag - 1|), Frobenius
bool is_hermitian(const CMatrix& m, double tol);
bool all_finite(const CMatrix& m);

// min over global phases of |a - e^{i phi} b|_F, normalised by |b|_F.
double phase_aligned_distance(const CMatrix& a, const CMatrix& b);

CMatrix random_gaussian(long rows, long cols, Rng& rng);
CMatrix random_unitary(long n, Rng& rng);
CMatrix random_hermitian(long n, Rng& rng);

// ---- decompositions -------------------------------------------------------

struct SvdResult {
  CMatrix U;
  std::vector<double> s;  // descending
  CMatrix V;              // m = U diag(s) V^dagger
};

SvdResult svd(const CMatrix& m);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns
};

HermitianEigen eig_hermitian(const CMatrix& h);

struct NormalEigen {
  std::vector<cplx> values;
  CMatrix vectors;  // unitary, m = W diag(values) W^dagger
};

NormalEigen eig_normal(const CMatrix& m);

// Columns span the numerical null space of m (relative cutoff on singular values).
CMatrix null_space(const CMatrix& m, double rel_cutoff);

// Closest unitary in Frobenius norm.
CMatrix polar_unitary(const CMatrix& m);

// Hermitian h with exp(-i h) = u, eigenphases in (-pi, pi].
CMatrix unitary_log(const CMatrix& u);

// exp(-i t h) for Hermitian h.
CMatrix expm_hermitian(const CMatrix& h, double t = 1.0);

// ---- operator Schmidt -----------------------------------------------------

struct SchmidtDecomposition {
  std::vector<CMatrix> left_factors;
  std::vector<CMatrix> right_factors;
  std::vector<double> coefficients;  // descending, only those above cutoff
  double discarded = 0.0;            // sqrt of the squared weight below cutoff
};

// w acts on A (x) B with A first; dims are (out, in) per factor.
SchmidtDecomposition operator_schmidt(const CMatrix& w, std::pair<long, long> dims_a,
                                      std::pair<long, long> dims_b, double rel_cutoff = -1.0);

// Rank-one split w ~ a (x) b; residual is the discarded Schmidt weight relative to |w|.
struct ProductSplit {
  CMatrix a;
  CMatrix b;
  double residual = 0.0;
};

ProductSplit split_product(const CMatrix& w, std::pair<long, long> dims_a, std::pair<long, long> dims_b);

// ---- fixed points ---------------------------------------------------------

using LinearMap = std::function<CMatrix(const CMatrix&)>;

struct PowerResult {
  cplx eigenvalue;
  CMatrix vector;
  int iterations = 0;
  double residual = 0.0;
};

// Dominant eigenpair by power iteration from `seed` (identity when empty).
PowerResult power_iteration(const LinearMap& map, long dim, const CMatrix& seed = CMatrix(),
                            int max_iter = 20000, double tol = 1e-13);

// Fixed point of a trace-preserving map, normalised to unit trace. Throws on degeneracy.
CMatrix dominant_fixed_point(const LinearMap& channel, long dim);

// ---- multi-leg tensor utilities ------------------------------------------
// Legs are ordered with the first leg most significant.

long product(const std::vector<int>& dims);

// out leg i = in leg perm[i]
std::vector<cplx> permute_legs(const std::vector<cplx>& in, const std::vector<int>& dims,
                               const std::vector<int>& perm);

// Operator whose legs are reordered: result[(perm-ordered i), (perm-ordered j)] = m[i, j].
// row_dims/col_dims are the leg dimensions of m's rows and columns.
CMatrix permute_operator(const CMatrix& m, const std::vector<int>& row_dims, const std::vector<int>& col_dims,
                         const std::vector<int>& row_perm, const std::vector<int>& col_perm);

// Apply op (mapping legs `legs`, dims dims[legs] -> out_dims) to a state vector.
// dims is updated in place for the touched legs.
CVector apply_on_legs(const CVector& state, std::vector<int>& dims, const CMatrix& op,
                      const std::vector<int>& legs, const std::vector<int>& out_dims);

inline CVector apply_on_legs(const CVector& state, const std::vector<int>& dims, const CMatrix& op,
                             const std::vector<int>& legs) {
  std::vector<int> d = dims;
  std::vector<int> od;
  for (int l : legs) od.push_back(dims[l]);
  return apply_on_legs(state, d, op, legs, od);
}

// op on `legs` embedded in the full space of `dims` (identity elsewhere).
CMatrix embed(const CMatrix& op, const std::vector<int>& dims, const std::vector<int>& legs);

// Partial trace keeping `keep` (in their given order).
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims, const std::vector<int>& keep);

}  // namespace mpuc
