#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json_io.hpp"
#include "mpuc/errors.hpp"
#include "mpuc/tolerances.hpp"

#ifndef MPUC_VERSION
#define MPUC_VERSION "0.0.0"
#endif

namespace mpuc::cli {

namespace {

struct ModelFlags {
  std::string model;
  std::optional<int> n, d;
  std::optional<double> h;
  std::vector<int> orders;
  int p = 1;
  bool coboundary = false;

  void attach(CLI::App* app, bool required = true) {
    auto* m = app->add_option("--model", model, "Model name (see `models list`)");
    if (required) m->required();
    app->add_option("--n", n, "Z_n order");
    app->add_option("--d", d, "Qudit dimension");
    app->add_option("--h", h, "Perturbation strength");
    app->add_option("--orders", orders, "Cyclic factors, comma separated")->delimiter(',');
    app->add_option("--p", p, "Cocycle exponent");
    app->add_flag("--coboundary", coboundary, "Multiply the cocycle by a seeded coboundary");
  }
  ModelParams params() const {
    ModelParams q;
    q.n = n;
    q.d = d;
    q.h = h;
    q.orders = orders;
    q.p = p;
    q.coboundary = coboundary;
    return q;
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string command;
  json parameters = json::object();
  bool record_time = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json manifest() const {
    json m = {{"command", command},
              {"parameters", parameters},
              {"seeds", {{"library", "fixed"}}},
              {"tolerances", tolerances_json()},
              {"tool_version", MPUC_VERSION}};
    if (record_time)
      m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
  }
};

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) fail(ErrorKind::validation, "cannot open '" + path + "' for writing");
    f << text;
    if (!f) fail(ErrorKind::numerical, "write to '" + path + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void emit(Context& ctx, json body, const std::string& out_path) {
  body["manifest"] = ctx.manifest();
  const std::string text = body.dump(2) + "\n";
  if (out_path.empty())
    ctx.out << text;
  else
    write_atomic(out_path, text);
}

int cmd_models(Context& ctx) {
  json list = json::array();
  for (const auto& spec : zoo())
    list.push_back({{"name", spec.name},
                    {"params", params_json(spec.params)},
                    {"usage", model_usage(spec.name)},
                    {"expected", expected_json(spec.expected)}});
  emit(ctx, {{"models", std::move(list)}}, "");
  return 0;
}

int cmd_classify(Context& ctx, const ModelFlags& mf, const std::string& input, const std::string& out_path) {
  SymmetricMpu s;
  std::optional<ExpectedLabels> ex;
  if (!input.empty()) {
    std::ifstream f(input);
    if (!f) fail(ErrorKind::validation, "cannot read '" + input + "'");
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::validation, std::string("malformed JSON: ") + e.what());
    }
    s = mpu_from_json(j);
    ctx.parameters["input"] = input;
  } else {
    s = instantiate(mf.model, mf.params());
    ex = expected_labels(mf.model, mf.params());
    ctx.parameters["model"] = mf.model;
    ctx.parameters["params"] = params_json(mf.params());
  }
  const ClassificationReport r = classify(s);
  json body = report_json(r, *s.rep.group);
  if (ex) {
    body["expected"] = expected_json(*ex);
    body["expected_deviation"] = compare_to_expected(r, *ex);
  }
  emit(ctx, std::move(body), out_path);
  return 0;
}

int cmd_evolve(Context& ctx, const ModelFlags& mf, int L, int steps, std::optional<int> cut, const std::string& out) {
  const ModelParams p = mf.params();
  const SymmetricMpu s = instantiate(mf.model, p);
  const int c = cut.value_or(L / 2);
  if (L < 2 || c < 1 || c >= L) fail(ErrorKind::validation, "evolve: need L >= 2 and 0 < cut < L");
  if (steps < 0) fail(ErrorKind::validation, "evolve: steps must be non-negative");
  const auto states = evolve(product_state(L, s.d()), s, steps);
  const SpectrumSeries series = spectrum_series(states, c, tol().degeneracy);
  ctx.parameters = {{"model", mf.model}, {"params", params_json(p)}, {"L", L}, {"steps", steps}, {"cut", c}};
  const std::string csv = series_csv(series);
  json summary = json::object();
  if (mf.model == "zdzd-spt" || mf.model == "zdzd-floquet-perturbed") {
    const int d = p.d.value_or(2);
    json div = json::array();
    std::vector<double> ent;
    for (const auto& pt : series) {
      const int g = std::gcd(d, pt.t);
      const int m = (d / g) * (d / g);
      div.push_back({{"t", pt.t}, {"forced_multiplicity", m}, {"divisible", all_divisible(pt.profile, m)}});
      ent.push_back(pt.entropy);
    }
    summary["degeneracy"] = std::move(div);
    const Crossover cr = crossover_time(ent, d);
    summary["crossover_t_star"] = cr.t_star ? json(*cr.t_star) : json(nullptr);
  }
  if (out.empty()) {
    ctx.out << csv;
    return 0;
  }
  write_atomic(out, csv);
  json m = {{"csv", std::filesystem::path(out).filename().string()}, {"summary", std::move(summary)}};
  emit(ctx, std::move(m), out + ".json");
  return 0;
}

RepVector parse_rho(const std::string& group, const std::string& rho) {
  std::vector<int> orders;
  auto parse_int = [](const std::string& t) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != t.size()) fail(ErrorKind::validation, "not an integer: '" + t + "'");
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, sep);) out.push_back(t);
    return out;
  };
  // Accepted: "Zn:2,3", "Z2xZ3", "Z2,Z3", "Z6".
  if (group.rfind("Zn:", 0) == 0) {
    for (const auto& t : split(group.substr(3), ',')) orders.push_back(parse_int(t));
  } else {
    std::string g = group;
    std::replace(g.begin(), g.end(), 'x', ',');
    for (const auto& t : split(g, ',')) {
      if (t.size() < 2 || t[0] != 'Z') fail(ErrorKind::validation, "bad group factor '" + t + "'");
      orders.push_back(parse_int(t.substr(1)));
    }
  }
  if (orders.empty()) fail(ErrorKind::validation, "empty group");
  for (int o : orders)
    if (o < 1) fail(ErrorKind::validation, "cyclic orders must be positive");
  std::vector<int> mult;
  for (const auto& t : split(rho, ',')) mult.push_back(parse_int(t));
  const GroupPtr G = product_of_cyclics(orders);
  if (static_cast<int>(mult.size()) != G->order)
    fail(ErrorKind::validation, "rho needs one multiplicity per irrep (" + std::to_string(G->order) + ")");
  try {
    return rep_vector(G, mult);
  } catch (const Error& e) {
    fail(ErrorKind::validation, e.what());
  }
}

int cmd_search(Context& ctx, const std::string& group, const std::string& rho, const SearchConstraints& c) {
  const RepVector r = parse_rho(group, rho);
  const SearchResult res = search_decompositions(r, c);
  json list = json::array();
  for (const auto& d : res.decompositions) list.push_back(decomposition_json(d));
  ctx.parameters = {{"group", group},
                    {"rho", r.mult},
                    {"equal_dims", c.equal_dims},
                    {"max_results", c.max_results},
                    {"budget", c.budget}};
  emit(ctx,
       {{"legend", legend(*r.group)},
        {"rho", r.mult},
        {"decompositions", std::move(list)},
        {"count", res.decompositions.size()},
        {"partial", res.partial},
        {"evaluated", res.evaluated}},
       "");
  return 0;
}

int cmd_interferometry(Context& ctx, const ModelFlags& mf, int g, int kmax, bool fit) {
  const SymmetricMpu s = instantiate(mf.model, mf.params());
  if (g < 0 || g >= s.rep.group->order) fail(ErrorKind::validation, "--g out of range");
  if (kmax < 1) fail(ErrorKind::validation, "--kmax must be positive");
  ctx.parameters = {{"model", mf.model}, {"params", params_json(mf.params())}, {"g", g}, {"kmax", kmax}};
  json table = json::array();
  std::vector<double> ks, ys;
  for (int k = 1; k <= kmax; ++k) {
    const InterferometryPoint pt = interferometry(s, g, k);
    const double half = 0.5 * std::log(pt.expectation);
    table.push_back({{"k", k}, {"expectation", pt.expectation}, {"half_log", half}, {"predicted_relative", pt.predicted_relative}});
    ks.push_back(k);
    ys.push_back(half);
  }
  json body = {{"legend", legend(*s.rep.group)}, {"table", std::move(table)}};
  if (fit) {
    if (kmax < 2) fail(ErrorKind::validation, "--fit needs kmax >= 2");
    const LinearFit lf = fit_line(ks, ys);
    const ClassificationReport r = classify(s);
    const cplx chi = s.cell_rep.character(g);
    json expected = {{"slope", -std::log(static_cast<double>(s.cell_rep.dim()) / std::abs(chi))}};
    const auto& el = r.elements[g];
    expected["intercept"] = el.trace_route ? json(*el.trace_route) : json(nullptr);
    body["fit"] = {{"slope", lf.slope}, {"intercept", lf.intercept}};
    body["expected"] = std::move(expected);
  }
  emit(ctx, std::move(body), "");
  return 0;
}

int cmd_floquet(Context& ctx, const ModelFlags& mf, std::optional<int> rows, std::optional<int> cols) {
  const FloquetCase fc = floquet_for_model(mf.model, mf.params(), rows, cols);
  const BulkEdgeResiduals r = measure_bulk_and_edge(fc.floquet, fc.edge);
  ctx.parameters = {{"model", mf.model},
                    {"params", params_json(mf.params())},
                    {"rows", fc.floquet.lattice.rows},
                    {"cols", fc.floquet.lattice.cols}};
  json body = floquet_json(fc.floquet, r);
  body["edge_model"] = fc.edge.name;
  emit(ctx, std::move(body), "");
  return r.passed() ? 0 : 1;
}

int cmd_homotopy(Context& ctx, const ModelFlags& mf, int samples) {
  if (samples < 2) fail(ErrorKind::validation, "--samples must be at least 2");
  const SymmetricMpu s = instantiate(mf.model, mf.params());
  ctx.parameters = {{"model", mf.model}, {"params", params_json(mf.params())}, {"samples", samples}};
  emit(ctx, homotopy_json(homotopy_path(s, samples)), "");
  return 0;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
}

}  // namespace

FloquetCase floquet_for_model(const std::string& name, const ModelParams& p, std::optional<int> rows,
                              std::optional<int> cols) {
  if (name == "zdzd-spt") {
    const int d = p.d.value_or(2);
    return {build_zdzd_floquet(d, rows.value_or(2), cols.value_or(3)), instantiate(name, p)};
  }
  if (name == "cocycle-mpu") return {build_cocycle_floquet(p, rows.value_or(2), cols.value_or(2)), instantiate(name, p)};
  const SymmetricMpu s = instantiate(name, p);
  if (s.sf.k != 1) fail(ErrorKind::precondition, "SWAP construction needs an unblocked standard form");
  return {build_swap_floquet(s.sf.u, s.sf.l, s.sf.r, s.rep, rows.value_or(2), cols.value_or(2)),
          swap_edge_mpu(s.sf.u, s.sf.l, s.sf.r, s.rep)};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric matrix-product unitaries: classification, dynamics and constructions", "mpuc"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
  app.require_subcommand(1);
  app.set_version_flag("--version", MPUC_VERSION);
  std::string tol_override;
  bool record_time = false;
  app.add_option("--tol", tol_override, "Tolerance overrides key=value,..");
  app.add_flag("--record-time", record_time, "Add wall time to the manifest");

  auto* models = app.add_subcommand("models", "Model zoo");
  models->add_subcommand("list", "Zoo with expected labels");
  models->require_subcommand(1);

  ModelFlags cf;
  std::string input, cls_out;
  auto* cls = app.add_subcommand("classify", "Classification report");
  cf.attach(cls, false);
  cls->add_option("--input", input, "MPU JSON file");
  cls->add_option("--out", cls_out, "Report path");

  ModelFlags ef;
  int L = 6, steps = 12;
  std::optional<int> cut;
  std::string ev_out;
  auto* ev = app.add_subcommand("evolve", "Entanglement spectrum time series");
  ef.attach(ev);
  ev->add_option("--L", L, "Ring length in MPU sites")->required();
  ev->add_option("--steps", steps, "Number of Floquet steps")->required();
  ev->add_option("--cut", cut, "Sites left of the cut (default L/2)");
  ev->add_option("--out", ev_out, "CSV path; the manifest goes to <out>.json");

  std::string group, rho;
  SearchConstraints sc;
  auto* sd = app.add_subcommand("search-decomp", "Representation-ring decompositions");
  sd->add_option("--group", group, "Zn:2,3 | Z2xZ3 | Z6")->required();
  sd->add_option("--rho", rho, "Irrep multiplicities a0,a1,..")->required();
  sd->add_flag("--equal-dims", sc.equal_dims, "Only dim x = dim rho");
  sd->add_option("--max-results", sc.max_results, "Truncate the list (0 = all)");
  sd->add_option("--budget", sc.budget, "Candidate evaluations before reporting partial");

  ModelFlags inf;
  int g = 1, kmax = 3;
  bool fit = false;
  auto* it = app.add_subcommand("interferometry", "String expectation table");
  inf.attach(it);
  it->add_option("--g", g, "Group element index");
  it->add_option("--kmax", kmax, "Largest half-width");
  it->add_flag("--fit", fit, "Fit 0.5 log<X> against k");

  ModelFlags ff;
  std::optional<int> rows, cols;
  auto* fv = app.add_subcommand("floquet-verify", "Bulk and edge residuals of a parent Floquet circuit");
  ff.attach(fv);
  fv->add_option("--rows", rows, "Rows");
  fv->add_option("--cols", cols, "Columns (edge unit cells)");

  ModelFlags hf;
  int samples = 11;
  auto* ho = app.add_subcommand("homotopy", "Symmetric path to the identity with ancillas");
  hf.attach(ho);
  ho->add_option("--samples", samples, "Number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << MPUC_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what(), 2);
    return 2;
  }

  try {
    if (!tol_override.empty()) {
      Tolerances t = tol();
      t.apply_overrides(tol_override);
      set_tolerances(t);
    }
    Context ctx{out, err, app.get_subcommands().front()->get_name()};
    ctx.record_time = record_time;
    if (*models) return cmd_models(ctx);
    if (*cls) {
      if (input.empty() == cf.model.empty())
        fail(ErrorKind::validation, "classify needs exactly one of --model or --input");
      return cmd_classify(ctx, cf, input, cls_out);
    }
    if (*ev) return cmd_evolve(ctx, ef, L, steps, cut, ev_out);
    if (*sd) return cmd_search(ctx, group, rho, sc);
    if (*it) return cmd_interferometry(ctx, inf, g, kmax, fit);
    if (*fv) return cmd_floquet(ctx, ff, rows, cols);
    if (*ho) return cmd_homotopy(ctx, hf, samples);
  } catch (const Error& e) {
    const int code = is_validation_kind(e.kind()) ? 2 : 1;
    error_json(err, kind_name(e.kind()), e.what(), code);
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    error_json(err, "io", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what(), 1);
    return 1;
  }
  return 2;
}

}  // namespace mpuc::cli
