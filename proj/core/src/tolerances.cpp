#include "mpuc/tolerances.hpp"

#include <cstdlib>
#include <mutex>
#include <sstream>

#include "mpuc/errors.hpp"

namespace mpuc {

namespace {

struct Field {
  const char* name;
  double Tolerances::*ptr;
};

constexpr Field kFields[] = {
    {"rank_cutoff", &Tolerances::rank_cutoff}, {"unitary", &Tolerances::unitary},
    {"symmetry", &Tolerances::symmetry},       {"support", &Tolerances::support},
    {"factor", &Tolerances::factor},           {"route", &Tolerances::route},
    {"snap", &Tolerances::snap},               {"character", &Tolerances::character},
    {"degeneracy", &Tolerances::degeneracy},   {"fixed_point", &Tolerances::fixed_point},
    {"gap", &Tolerances::gap},                 {"faithfulness", &Tolerances::faithfulness},
};

Tolerances& global() {
  static Tolerances t = [] {
    Tolerances init;
    if (const char* env = std::getenv("MPUC_TOL")) init.apply_overrides(env);
    return init;
  }();
  return t;
}

}  // namespace

void Tolerances::apply_overrides(const std::string& spec) {
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::validation, "MPUC_TOL entry without '=': " + item);
    std::string key = item.substr(0, eq);
    double value = 0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::validation, "MPUC_TOL value not a number: " + item);
    }
    if (!(value > 0)) fail(ErrorKind::validation, "MPUC_TOL value must be positive: " + item);
    bool found = false;
    for (const auto& f : kFields) {
      if (key == f.name) {
        this->*(f.ptr) = value;
        found = true;
      }
    }
    if (!found) fail(ErrorKind::validation, "unknown MPUC_TOL key: " + key);
  }
}

std::vector<std::pair<std::string, double>> Tolerances::entries() const {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& f : kFields) out.emplace_back(f.name, this->*(f.ptr));
  return out;
}

const Tolerances& tol() { return global(); }

void set_tolerances(const Tolerances& t) { global() = t; }

}  // namespace mpuc
