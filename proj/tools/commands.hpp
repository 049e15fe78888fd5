#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mpuc/floquet.hpp"
#include "mpuc/models.hpp"

namespace mpuc::cli {

// Runs one command line. Exit codes: 0 ok, 2 validation, 1 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Parent Floquet circuit of a zoo model together with the edge it should carry.
// zdzd-spt and cocycle-mpu use plaquette models, everything else the SWAP
// construction seeded with the model's gates.
struct FloquetCase {
  FloquetUnitary floquet;
  SymmetricMpu edge;
};
FloquetCase floquet_for_model(const std::string& name, const ModelParams& p, std::optional<int> rows,
                              std::optional<int> cols);

}  // namespace mpuc::cli
