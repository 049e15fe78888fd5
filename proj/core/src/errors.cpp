#include "mpuc/errors.hpp"

namespace mpuc {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::validation: return "validation";
    case ErrorKind::size: return "size";
    case ErrorKind::spec: return "spec";
    case ErrorKind::numerical: return "numerical-failure";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::not_simple: return "not-simple";
    case ErrorKind::extraction_failure: return "extraction-failure";
    case ErrorKind::inconsistent_gates: return "inconsistent-gates";
    case ErrorKind::asymmetric: return "asymmetric-mpu";
    case ErrorKind::not_factorizable: return "not-factorizable";
    case ErrorKind::symmetry_broken: return "symmetry-broken-on-virtual";
    case ErrorKind::not_projective: return "not-a-projective-representation";
    case ErrorKind::gauge_noise: return "gauge-noise";
    case ErrorKind::unsupported_size: return "unsupported-size";
    case ErrorKind::not_liftable: return "not-liftable";
    case ErrorKind::inequivalent: return "inequivalent-representations";
    case ErrorKind::factorization_violation: return "factorization-violation";
    case ErrorKind::obstruction: return "obstruction";
    case ErrorKind::not_defined: return "not-defined";
    case ErrorKind::construction_faithfulness: return "construction-faithfulness";
  }
  return "unknown";
}

bool is_validation_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::precondition:
    case ErrorKind::validation:
    case ErrorKind::size:
    case ErrorKind::spec:
    case ErrorKind::unsupported_size:
      return true;
    default:
      return false;
  }
}

}  // namespace mpuc
