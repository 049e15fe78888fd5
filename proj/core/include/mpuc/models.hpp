#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mpuc/classify.hpp"

namespace mpuc {

struct ModelParams {
  std::optional<int> n;       // Z_n order (bilayer-swap, identity, shift)
  std::optional<int> d;       // qudit dimension
  std::optional<double> h;    // perturbation strength
  std::vector<int> orders;    // cyclic factors for cocycle-mpu
  int p = 1;                  // cocycle exponent
  bool coboundary = false;    // multiply the cocycle by a seeded coboundary
};

// Labels a model is known to carry. A missing spi value means "not defined".
struct ExpectedLabels {
  std::optional<double> ind;
  std::vector<std::pair<int, std::optional<double>>> spi;
  std::vector<std::pair<int, cplx>> rind;
  std::vector<std::tuple<int, int, cplx>> cocycle;
  std::optional<bool> class_trivial;
  std::string basis;  // where the numbers come from
};

struct ModelSpec {
  std::string name;
  ModelParams params;
  ExpectedLabels expected;
};

std::vector<std::string> model_names();
std::string model_usage(const std::string& name);
SymmetricMpu instantiate(const std::string& name, const ModelParams& params = {});
ExpectedLabels expected_labels(const std::string& name, const ModelParams& params = {});
// Default parameter sets used by `models list` and the regression suite.
std::vector<ModelSpec> zoo();

// Largest deviation of a report from the expected labels; +inf on a
// structural mismatch (e.g. spi defined where none is expected).
double compare_to_expected(const ClassificationReport& rep, const ExpectedLabels& ex);

// theta(g, h) of the cocycle-mpu model (bilinear cocycle times an optional
// seeded coboundary).
struct CocycleAngles {
  GroupPtr group;
  std::vector<std::vector<double>> theta;
};
CocycleAngles cocycle_angles(const ModelParams& params);

// Building blocks shared with the Floquet constructions.
CMatrix permutation_gate(const std::vector<int>& dims, const std::vector<int>& perm);
CMatrix clock(int d);                     // diag(w^j)
CMatrix shift_down(int d);                // X|j> = |j-1>
CMatrix fourier(int d);                   // F[j,a] = w^{aj} / sqrt(d)
CMatrix controlled_phase(int d, int power);  // sum w^{power ab} |ab><ab|
CMatrix number_z(int d);                  // N_Z in the clock basis

}  // namespace mpuc
