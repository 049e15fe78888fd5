#pragma once

#include <string>

#include "json.hpp"
#include "mpuc/classify.hpp"
#include "mpuc/dynamics.hpp"
#include "mpuc/floquet.hpp"
#include "mpuc/models.hpp"
#include "mpuc/repring.hpp"

namespace mpuc::cli {

using nlohmann::json;

json to_json(cplx z);
json to_json(const CMatrix& m);
json legend(const FiniteGroup& g);
json params_json(const ModelParams& p);
json expected_json(const ExpectedLabels& ex);
json report_json(const ClassificationReport& r, const FiniteGroup& g);
json decomposition_json(const Decomposition& d);
json floquet_json(const FloquetUnitary& f, const BulkEdgeResiduals& r);
json homotopy_json(const HomotopyPath& h);
json tolerances_json();

// Input schemas; malformed input raises ErrorKind::validation.
CMatrix matrix_from_json(const json& j);
GroupPtr group_from_json(const json& j);
Representation rep_from_json(const json& j, GroupPtr g);
// {"name"?, "group", "rep", then "d", "D", "tensor": {"(i,j)": ..} and/or
// "gates": {"u", "v", "l", "r", "k"}}. rep acts on one physical site.
SymmetricMpu mpu_from_json(const json& j);

// Series rows: t, entropy, spectrum values padded to `width`, profile.
std::string series_csv(const SpectrumSeries& s);

}  // namespace mpuc::cli
