#pragma once

#include <stdexcept>
#include <string>

namespace mpuc {

enum class ErrorKind {
  precondition,
  validation,
  size,
  spec,
  numerical,
  degeneracy,
  not_simple,
  extraction_failure,
  inconsistent_gates,
  asymmetric,
  not_factorizable,
  symmetry_broken,
  not_projective,
  gauge_noise,
  unsupported_size,
  not_liftable,
  inequivalent,
  factorization_violation,
  obstruction,
  not_defined,
  construction_faithfulness,
};

const char* kind_name(ErrorKind k);

// Input-side problems map to exit code 2 in the CLI, everything else to 1.
bool is_validation_kind(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::precondition, what);
}

}  // namespace mpuc
