#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

namespace mpuc::cli {

namespace {

[[noreturn]] void bad_input(const std::string& what) { fail(ErrorKind::validation, "input: " + what); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json invariant_json(const CocycleInvariant& c) {
  json out = json::array();
  for (const auto& e : c.pairs) out.push_back({e.g, e.h, to_json(e.phase)});
  return out;
}

int as_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) bad_input(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json legend(const FiniteGroup& g) {
  json out = json::object();
  out["order"] = g.order;
  if (!g.cyclic_orders.empty()) out["cyclic_orders"] = g.cyclic_orders;
  json els = json::array();
  for (int e = 0; e < g.order; ++e) els.push_back({{"index", e}, {"label", g.label(e)}, {"order", g.element_order[e]}});
  out["elements"] = std::move(els);
  return out;
}

json params_json(const ModelParams& p) {
  json out = json::object();
  if (p.n) out["n"] = *p.n;
  if (p.d) out["d"] = *p.d;
  if (p.h) out["h"] = *p.h;
  if (!p.orders.empty()) out["orders"] = p.orders;
  if (p.p != 1) out["p"] = p.p;
  if (p.coboundary) out["coboundary"] = true;
  return out;
}

json expected_json(const ExpectedLabels& ex) {
  json out = json::object();
  out["ind"] = optional_json(ex.ind);
  json spi = json::object();
  for (const auto& [g, v] : ex.spi) spi[std::to_string(g)] = optional_json(v);
  out["spi"] = std::move(spi);
  json rind = json::object();
  for (const auto& [g, v] : ex.rind) rind[std::to_string(g)] = to_json(v);
  out["rind"] = std::move(rind);
  json coc = json::array();
  for (const auto& [g, h, v] : ex.cocycle) coc.push_back({g, h, to_json(v)});
  out["cocycle"] = std::move(coc);
  out["class_trivial"] = ex.class_trivial ? json(*ex.class_trivial) : json(nullptr);
  out["basis"] = ex.basis;
  return out;
}

json report_json(const ClassificationReport& r, const FiniteGroup& g) {
  json out = json::object();
  out["model"] = r.model;
  out["legend"] = legend(g);
  out["standard_form"] = {{"d", r.d}, {"k", r.k}, {"l", r.l}, {"r", r.r}};
  out["ind"] = r.ind;
  json spi = json::object(), rind = json::object(), chi = json::object(), routes = json::object();
  json creg = json::object();
  for (const auto& e : r.elements) {
    const std::string key = std::to_string(e.g);
    spi[key] = optional_json(e.spi);
    rind[key] = e.rind ? to_json(*e.rind) : json(nullptr);
    chi[key] = to_json(e.chi);
    creg[key] = e.c_regular;
    routes[key] = {{"trace", optional_json(e.trace_route)},
                   {"edge", optional_json(e.edge_route)},
                   {"sigma", optional_json(e.sigma_route)},
                   {"product_rule_residual", e.product_rule_residual}};
  }
  out["spi"] = std::move(spi);
  out["rind"] = std::move(rind);
  out["characters"] = std::move(chi);
  out["c_regular"] = std::move(creg);
  out["cocycle"] = invariant_json(r.cocycle);
  out["z_cocycle"] = invariant_json(r.z_cocycle);
  out["z_matches_x"] = r.z_matches_x;
  out["class_trivial"] = r.class_trivial;
  out["routes"] = std::move(routes);
  out["max_route_gap"] = r.max_route_gap;
  out["lr_bound"] = optional_json(r.lr_bound);
  out["residuals"] = {{"symmetry", r.symmetry_residual},
                      {"factor", r.factor_residual},
                      {"v_side", r.v_side_residual},
                      {"z_relation", r.z_relation_residual}};
  out["gauge_notes"] = r.gauge_notes;
  return out;
}

json decomposition_json(const Decomposition& d) {
  json spi = json::object(), rind = json::object();
  for (size_t e = 0; e < d.predicted_spi.size(); ++e) {
    spi[std::to_string(e)] = optional_json(d.predicted_spi[e]);
    rind[std::to_string(e)] = d.predicted_rind[e] ? to_json(*d.predicted_rind[e]) : json(nullptr);
  }
  return {{"x", d.x.mult},
          {"y", d.y.mult},
          {"dim_x", d.x.dim()},
          {"dim_y", d.y.dim()},
          {"nontrivial", d.nontrivial},
          {"predicted_ind", d.predicted_ind},
          {"predicted_spi", std::move(spi)},
          {"predicted_rind", std::move(rind)}};
}

json floquet_json(const FloquetUnitary& f, const BulkEdgeResiduals& r) {
  const Lattice2D& lat = f.lattice;
  int gates = 0;
  for (const auto& layer : f.layers) gates += static_cast<int>(layer.size());
  json out = json::object();
  out["construction"] = f.name;
  out["lattice"] = {{"rows", lat.rows},
                    {"cols", lat.cols},
                    {"sites", lat.size()},
                    {"log2_dim", lat.log2_dim()},
                    {"bottom", lat.bottom},
                    {"bulk_sites", lat.bulk().size()}};
  out["layers"] = f.layers.size();
  out["gates"] = gates;
  json res = {{"gate_unitarity", gate_unitarity_residual(f)}, {"symmetry", symmetry_residual(f)}};
  if (f.basis) {
    res["commutator"] = gate_commutator_residual(f);
    res["diagonal"] = diagonal_residual(f);
  }
  res["bulk"] = r.bulk;
  res["edge"] = r.edge;
  res["edge_leak"] = r.edge_leak;
  out["residuals"] = std::move(res);
  out["checks"] = {{"bulk", r.bulk_checks}, {"edge", r.edge_checks}};
  out["tolerance"] = tol().faithfulness;
  out["pass"] = r.passed();
  return out;
}

json homotopy_json(const HomotopyPath& h) {
  json samples = json::array();
  double worst = 0.0;
  for (const auto& s : h.samples) {
    worst = std::max(worst, s.symmetry_residual);
    samples.push_back({{"lambda", s.lambda},
                       {"symmetry_residual", s.symmetry_residual},
                       {"l", s.sf.l},
                       {"r", s.sf.r},
                       {"unitarity_u", unitarity_residual(s.sf.u)},
                       {"unitarity_v", unitarity_residual(s.sf.v)}});
  }
  return {{"samples", std::move(samples)},
          {"rep_dim", h.rep.dim()},
          {"max_symmetry_residual", worst},
          {"start_error", h.start_error},
          {"end_error", h.end_error}};
}

json tolerances_json() {
  json out = json::object();
  for (const auto& [k, v] : tol().entries()) out[k] = v;
  return out;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad_input("matrix must be a non-empty array of rows");
  const long rows = static_cast<long>(j.size());
  long cols = -1;
  CMatrix m;
  for (long i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array()) bad_input("matrix row is not an array");
    if (cols < 0) {
      cols = static_cast<long>(row.size());
      if (cols == 0) bad_input("empty matrix row");
      m.resize(rows, cols);
    }
    if (static_cast<long>(row.size()) != cols) bad_input("ragged matrix");
    for (long c = 0; c < cols; ++c) {
      const json& z = row[c];
      if (z.is_number()) {
        m(i, c) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
        m(i, c) = cplx(z[0].get<double>(), z[1].get<double>());
      } else {
        bad_input("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  if (!all_finite(m)) bad_input("non-finite matrix entry");
  return m;
}

GroupPtr group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) bad_input("group needs a 'type'");
  const std::string type = j["type"];
  if (type == "product_cyclic") {
    if (!j.contains("orders") || !j["orders"].is_array() || j["orders"].empty()) bad_input("group needs 'orders'");
    std::vector<int> orders;
    for (const auto& o : j["orders"]) {
      if (!o.is_number_integer() || o.get<int>() < 1) bad_input("cyclic orders must be positive integers");
      orders.push_back(o.get<int>());
    }
    return product_of_cyclics(orders);
  }
  if (type == "table") {
    if (!j.contains("mul") || !j["mul"].is_array()) bad_input("group needs 'mul'");
    std::vector<std::vector<int>> mul;
    try {
      mul = j["mul"].get<std::vector<std::vector<int>>>();
    } catch (const json::exception&) {
      bad_input("'mul' must be an integer table");
    }
    return group_from_table(mul);
  }
  bad_input("unknown group type '" + type + "'");
}

Representation rep_from_json(const json& j, GroupPtr g) {
  if (!j.is_object() || !j.contains("matrices") || !j["matrices"].is_object()) bad_input("rep needs 'matrices'");
  std::vector<CMatrix> mats(g->order);
  std::vector<bool> seen(g->order, false);
  for (const auto& [key, val] : j["matrices"].items()) {
    int e = -1;
    try {
      size_t pos = 0;
      e = std::stoi(key, &pos);
      if (pos != key.size()) e = -1;
    } catch (const std::exception&) {
      e = -1;
    }
    if (e < 0 || e >= g->order) bad_input("rep element index '" + key + "' out of range");
    mats[e] = matrix_from_json(val);
    seen[e] = true;
  }
  for (int e = 0; e < g->order; ++e)
    if (!seen[e]) bad_input("rep is missing element " + std::to_string(e));
  if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<long>() != mats[0].rows()))
    bad_input("rep 'dim' does not match the matrices");
  for (const auto& m : mats)
    if (m.rows() != mats[0].rows() || m.cols() != mats[0].rows()) bad_input("rep matrices must be square and equal-sized");
  return make_representation(std::move(g), std::move(mats), false);
}

SymmetricMpu mpu_from_json(const json& j) {
  if (!j.is_object()) bad_input("top level must be an object");
  if (!j.contains("group")) bad_input("missing 'group'");
  if (!j.contains("rep")) bad_input("missing 'rep'");
  const GroupPtr g = group_from_json(j["group"]);
  const Representation rep = rep_from_json(j["rep"], g);
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "input";
  std::optional<MpuTensor> tensor;
  std::optional<StandardForm> sf;
  if (j.contains("tensor")) {
    const int d = as_int(j, "d"), D = as_int(j, "D");
    if (d < 1 || D < 1) bad_input("'d' and 'D' must be positive");
    if (!j["tensor"].is_object()) bad_input("'tensor' must map \"(i,j)\" to matrices");
    MpuTensor t = MpuTensor::zeros(d, D);
    static const std::regex key_re(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
    for (const auto& [key, val] : j["tensor"].items()) {
      std::smatch m;
      if (!std::regex_match(key, m, key_re)) bad_input("tensor key '" + key + "' is not of the form (i,j)");
      const int a = std::stoi(m[1]), b = std::stoi(m[2]);
      if (a >= d || b >= d) bad_input("tensor key '" + key + "' out of range");
      CMatrix mat = matrix_from_json(val);
      if (mat.rows() != D || mat.cols() != D) bad_input("tensor block '" + key + "' is not D x D");
      t.at(a, b) = std::move(mat);
    }
    tensor = std::move(t);
  }
  if (j.contains("gates")) {
    const json& gj = j["gates"];
    if (!gj.is_object() || !gj.contains("u") || !gj.contains("v")) bad_input("'gates' needs 'u' and 'v'");
    StandardForm s;
    s.u = matrix_from_json(gj["u"]);
    s.v = matrix_from_json(gj["v"]);
    s.l = as_int(gj, "l");
    s.r = as_int(gj, "r");
    s.k = gj.contains("k") ? as_int(gj, "k") : 1;
    s.d = static_cast<int>(rep.dim());
    if (s.l < 1 || s.r < 1 || s.k < 1) bad_input("'l', 'r', 'k' must be positive");
    const long db2 = static_cast<long>(s.db()) * s.db();
    if (s.u.rows() != static_cast<long>(s.l) * s.r || s.u.cols() != db2) bad_input("'u' must map db^2 to l*r");
    if (s.v.cols() != static_cast<long>(s.l) * s.r || s.v.rows() != db2) bad_input("'v' must map r*l to db^2");
    sf = std::move(s);
  }
  if (!tensor && !sf) bad_input("need 'tensor' (with 'd', 'D') or 'gates'");
  return make_symmetric(name, tensor, sf, rep);
}

std::string series_csv(const SpectrumSeries& s) {
  size_t width = 0;
  for (const auto& p : s) width = std::max(width, p.spectrum.size());
  std::ostringstream os;
  char buf[64];
  os << "t,entropy";
  for (size_t i = 0; i < width; ++i) os << ",lambda" << i;
  os << ",profile\n";
  for (const auto& p : s) {
    os << p.t;
    std::snprintf(buf, sizeof buf, ",%.17g", p.entropy);
    os << buf;
    for (size_t i = 0; i < width; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", i < p.spectrum.size() ? p.spectrum[i] : 0.0);
      os << buf;
    }
    os << ',';
    for (size_t i = 0; i < p.profile.size(); ++i) os << (i ? " " : "") << p.profile[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace mpuc::cli
