#include "freeholo/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "freeholo/approx.hpp"
#include "freeholo/exprlang.hpp"
#include "freeholo/json_io.hpp"
#include "freeholo/lurking.hpp"
#include "freeholo/mero.hpp"

namespace freeholo {

namespace {

using json_io::Json;

struct Globals {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int level_cap = 8;
  std::string out;
};

struct FnArgs {
  std::string expr;
  std::string expr_file;
  std::string realization;
  int vars = 0;
};

struct LoadedFn {
  NcFunction f;
  std::string kind;
  std::optional<expr::Expr> e;
  std::optional<Realization> r;
};

void add_fn_options(CLI::App* sub, FnArgs& a) {
  sub->add_option("--expr", a.expr, "rational expression in x1..xd");
  sub->add_option("--expr-file", a.expr_file, "file holding the expression");
  sub->add_option("--vars", a.vars, "number of variables d (inferred from the expression if omitted)");
  sub->add_option("--realization", a.realization, "realization JSON file");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

expr::Expr load_expr(const FnArgs& a, int& d) {
  std::string src = a.expr;
  if (src.empty() && !a.expr_file.empty()) src = slurp(a.expr_file);
  if (src.empty()) throw SchemaError("one of --expr, --expr-file or --realization is required");
  if (a.vars > 0) {
    d = a.vars;
    return expr::parse(src, d);
  }
  expr::Expr e = expr::parse(src, 1 << 20);
  d = std::max(1, e.max_var());
  return e;
}

LoadedFn load_function(const FnArgs& a) {
  LoadedFn out;
  if (!a.realization.empty()) {
    Realization r = json_io::realization_from_json(json_io::read_file(a.realization));
    out.f = realization_function(r);
    out.kind = "realization";
    out.r = std::move(r);
    return out;
  }
  int d = 0;
  expr::Expr e = load_expr(a, d);
  out.f = NcFunction{[e](const GradedPoint& x) { return expr::eval_expr(e, x); }, 1, 1};
  out.kind = "expression";
  out.e = std::move(e);
  return out;
}

Json header(const Globals& g, const std::string& command) {
  Json j;
  j["schema"] = json_io::kSchema;
  j["convention"] = json_io::kConvention;
  j["command"] = command;
  j["tol"] = g.tol;
  return j;
}

Json value_json(const CMatrix& m) {
  Json data = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    for (long k = 0; k < m.cols(); ++k) data.push_back(json_io::complex_to_json(m(i, k)));
  }
  return data;
}

Json shape_json(const CMatrix& m) { return Json::array({m.rows(), m.cols()}); }

std::vector<GradedPoint> load_points(const std::string& path) {
  const Json j = json_io::read_file(path);
  if (j.is_object() && !j.contains("points")) return {json_io::point_from_json(j)};
  return json_io::points_from_json(j);
}

GradedPoint load_point(const std::string& path) {
  auto pts = load_points(path);
  if (pts.size() != 1) throw SchemaError(path + ": expected a single point");
  return pts.front();
}

std::vector<CMatrix> load_matrices(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : j) out.push_back(json_io::matrix_from_json(m));
  return out;
}

Json bool_status(bool ok) { return ok ? "pass" : "fail"; }

// --- subcommands -----------------------------------------------------------

struct EvalArgs {
  FnArgs fn;
  std::string point;
};

int cmd_eval(const Globals& g, const EvalArgs& a, Json& rep) {
  LoadedFn fn = load_function(a.fn);
  const Json pj = json_io::read_file(a.point);
  rep["function"] = fn.kind;
  if (pj.is_object() && !pj.contains("points")) {
    const CMatrix v = fn.f(json_io::point_from_json(pj));
    rep["value"] = value_json(v);
    rep["shape"] = shape_json(v);
    return 0;
  }
  Json results = Json::array();
  for (const auto& x : json_io::points_from_json(pj)) {
    const CMatrix v = fn.f(x);
    results.push_back(Json{{"value", value_json(v)}, {"shape", shape_json(v)}});
  }
  rep["results"] = std::move(results);
  (void)g;
  return 0;
}

struct CheckArgs {
  FnArgs fn;
  std::string samples;
  std::string sims;
  int max_pairs = 64;
};

int cmd_check_nc(const Globals& g, const CheckArgs& a, Json& rep) {
  LoadedFn fn = load_function(a.fn);
  const auto samples = load_points(a.samples);
  std::vector<CMatrix> sims;
  std::string sim_source = "file";
  if (!a.sims.empty()) {
    sims = load_matrices(json_io::read_file(a.sims));
  } else {
    sim_source = "generated";
    sampling::Rng rng(g.seed);
    std::set<int> levels;
    for (const auto& x : samples) levels.insert(x.n());
    for (int n : levels) {
      sims.push_back(sampling::haar_unitary(n, rng));
      for (int k = 0; k < 2; ++k) sims.push_back(sampling::random_invertible(n, 10.0, rng));
    }
  }
  NcAxiomOptions opts;
  opts.threshold = g.tol;
  opts.max_pairs = a.max_pairs;
  const NcAxiomReport r = check_nc_axioms(fn.f, samples, sims, opts);
  rep["function"] = fn.kind;
  rep["similarities"] = sim_source;
  rep["direct_sum"] = Json{{"deviation", r.direct_sum}, {"raw", r.direct_sum_raw}, {"checks", r.direct_sum_checks}};
  rep["similarity"] = Json{{"deviation", r.similarity}, {"raw", r.similarity_raw}, {"checks", r.similarity_checks}};
  rep["block_identity"] = Json{{"deviation", r.block_identity},
                               {"raw", r.block_identity_raw},
                               {"checks", r.block_identity_checks}};
  rep["skipped"] = r.skipped;
  rep["threshold"] = r.threshold;
  rep["status"] = bool_status(r.pass);
  return r.pass ? 0 : 1;
}

struct MemberArgs {
  std::string delta;
  std::string point;
  double margin = kDefaultMargin;
};

int cmd_member(const Globals&, const MemberArgs& a, Json& rep) {
  const PolyMatrix delta = json_io::poly_matrix_from_json(json_io::read_file(a.delta));
  const auto pts = load_points(a.point);
  Json results = Json::array();
  for (const auto& x : pts) {
    const Membership m = in_gdelta(delta, x, a.margin);
    results.push_back(Json{{"verdict", to_string(m.verdict)}, {"dist", m.dist}, {"norm", m.norm}, {"level", x.n()}});
  }
  rep["margin"] = a.margin;
  rep["results"] = std::move(results);
  return 0;
}

struct ModelArgs {
  std::string samples;
};

int cmd_model_residual(const Globals& g, const ModelArgs& a, Json& rep) {
  const ModelSampleSet s = json_io::model_from_json(json_io::read_file(a.samples));
  const double res = model_residual(s);
  rep["residual"] = res;
  rep["diagonal_min_eigenvalue"] = diagonal_positivity(s);
  rep["points"] = s.points.size();
  rep["mult"] = s.mult;
  rep["status"] = bool_status(res <= g.tol);
  return 0;
}

struct FitArgs {
  std::string samples;
  bool no_holdout = false;
  int dim_cap = 4096;
};

Json fit_json(const FitReport& f) {
  Json j;
  j["gram_deviation"] = f.gram_deviation;
  j["rank"] = f.rank;
  j["mult"] = f.mult;
  j["data_mult"] = f.data_mult;
  j["sink_columns"] = f.sink_columns;
  j["fit_points"] = f.fit_points;
  j["holdout_points"] = f.holdout_points;
  j["fit_residual"] = f.fit_residual;
  j["holdout_residual"] = f.holdout_residual;
  j["isometry_defect"] = f.realization.defect();
  return j;
}

int cmd_fit(const Globals&, const FitArgs& a, Json& rep) {
  const ModelSampleSet s = json_io::model_from_json(json_io::read_file(a.samples));
  FitOptions opts;
  opts.holdout = !a.no_holdout;
  opts.dim_cap = a.dim_cap;
  const FitReport f = fit_lurking_isometry(s, opts);
  rep["report"] = fit_json(f);
  rep["realization"] = json_io::realization_to_json(f.realization);
  return 0;
}

struct CoronaArgs {
  std::string delta;
  std::string points;
  std::string psis;
  std::string model;
  double epsilon = 0.0;
};

int cmd_corona(const Globals&, const CoronaArgs& a, Json& rep) {
  const PolyMatrix delta = json_io::poly_matrix_from_json(json_io::read_file(a.delta));
  const auto pts = load_points(a.points);
  const Json pj = json_io::read_file(a.psis);
  if (!pj.is_array()) throw SchemaError("psis: expected an array (one entry per point)");
  std::vector<std::vector<CMatrix>> psis;
  for (const auto& entry : pj) psis.push_back(load_matrices(entry));
  std::optional<std::vector<CMatrix>> u;
  int mult = 0;
  std::string model_source = "pick";
  if (!a.model.empty()) {
    const Json mj = json_io::read_file(a.model);
    u = load_matrices(mj.at("u"));
    mult = mj.at("mult").get<int>();
    model_source = "file";
  }
  const CoronaResult c = corona_solve(delta, pts, psis, a.epsilon, u, mult);
  Json phis = Json::array();
  for (const auto& at_point : c.phis) {
    Json row = Json::array();
    for (const auto& m : at_point) row.push_back(json_io::matrix_to_json(m));
    phis.push_back(std::move(row));
  }
  rep["epsilon"] = c.epsilon;
  rep["model_source"] = model_source;
  rep["identity_residual"] = c.identity_residual;
  rep["max_norm"] = c.max_norm;
  rep["bound"] = c.bound;
  rep["phis"] = std::move(phis);
  rep["report"] = fit_json(c.fit);
  rep["realization"] = json_io::realization_to_json(c.fit.realization);
  return 0;
}

struct ApproxArgs {
  std::string realization;
  std::string cover;
  std::string samples;
  bool close = false;
};

int cmd_approx(const Globals& g, const ApproxArgs& a, Json& rep) {
  const Realization r = json_io::realization_from_json(json_io::read_file(a.realization));
  std::vector<PolyMatrix> candidates;
  if (a.cover.empty()) {
    candidates.push_back(r.delta());
  } else {
    const Json cj = json_io::read_file(a.cover);
    if (!cj.is_array()) throw SchemaError("cover: expected an array of poly matrices");
    for (const auto& c : cj) candidates.push_back(json_io::poly_matrix_from_json(c));
  }
  auto sample = load_points(a.samples);
  if (a.close) sample = close_under_direct_sums(sample, g.level_cap);
  const CoverChoice choice = select_covering_delta(sample, candidates);
  const int k = choose_truncation(g.tol, choice.t);
  const double bound = certify_error(k, choice.t);
  const MatPoly p = expand_polynomial(r, k);
  rep["polynomial"] = json_io::matpoly_to_json(p);
  rep["certificate"] = Json{{"K", k},
                            {"t", choice.t},
                            {"bound", bound},
                            {"bound_source", "certified"},
                            {"cover_index", choice.index},
                            {"cover_radius", choice.radius},
                            {"cover_matches_realization", candidates[choice.index] == r.delta()},
                            {"samples", sample.size()},
                            {"closed_to_level", a.close ? g.level_cap : 0}};
  return 0;
}

struct DeriveArgs {
  FnArgs fn;
  std::string point;
  std::string direction;
};

int cmd_derive(const Globals&, const DeriveArgs& a, Json& rep) {
  LoadedFn fn = load_function(a.fn);
  const CMatrix v = nc_derivative(fn.f, load_point(a.point), load_point(a.direction));
  rep["function"] = fn.kind;
  rep["value"] = value_json(v);
  rep["shape"] = shape_json(v);
  return 0;
}

struct CertifyArgs {
  FnArgs fn;
  std::string point;
  std::string delta;
  double bound = -1.0;
  int sample_count = 2000;
};

int cmd_mero_certify(const Globals& g, const CertifyArgs& a, Json& rep) {
  LoadedFn fn = load_function(a.fn);
  const GradedPoint m = load_point(a.point);
  std::optional<PolyMatrix> delta;
  if (!a.delta.empty()) {
    delta = json_io::poly_matrix_from_json(json_io::read_file(a.delta));
  } else if (fn.r) {
    delta = fn.r->delta();
  }
  double b = 0.0;
  BoundSource source = BoundSource::Asserted;
  if (a.bound >= 0.0) {
    b = a.bound;
  } else {
    if (!delta) throw SchemaError("mero certify: --bound or --delta is required");
    sampling::Rng rng(g.seed);
    b = sample_sup_bound(fn.f, *delta, a.sample_count, g.level_cap, rng);
    source = BoundSource::Sampled;
  }
  const InversionCertificate c = inversion_certificate(fn.f, m, fn.f(m), b, source);
  Json p = Json::array();
  for (const auto& v : c.p) p.push_back(json_io::complex_to_json(v));
  Json q = Json::array();
  for (const auto& v : c.q) q.push_back(json_io::complex_to_json(v));
  Json roots = Json::array();
  for (const auto& v : c.roots) roots.push_back(json_io::complex_to_json(v));
  rep["function"] = fn.kind;
  rep["bound_inv"] = c.bound_inv;
  rep["p"] = std::move(p);
  rep["q"] = std::move(q);
  rep["roots"] = std::move(roots);
  rep["c"] = json_io::complex_to_json(c.c);
  rep["sup_bound"] = b;
  rep["bound_source"] = to_string(source);
  rep["heuristic"] = source == BoundSource::Sampled;
  rep["annihilation"] = c.annihilation;
  rep["domain"] = Json{{"delta", delta ? json_io::poly_matrix_to_json(*delta) : Json()},
                       {"augment", "2*p(phi)"}};
  return 0;
}

struct ScanArgs {
  FnArgs fn;
  std::string samples;
};

int cmd_mero_scan(const Globals&, const ScanArgs& a, Json& rep) {
  int d = 0;
  const expr::Expr e = load_expr(a.fn, d);
  const auto samples = load_points(a.samples);
  const ScanReport s = singular_scan(e, samples);
  Json entries = Json::array();
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const auto& en = s.entries[i];
    Json j{{"index", i}, {"singular", en.singular}};
    if (en.singular) {
      j["path"] = SingularityHit::format_path(en.path);
    } else {
      j["norm"] = en.norm;
    }
    entries.push_back(std::move(j));
  }
  rep["expression"] = expr::print(e);
  rep["entries"] = std::move(entries);
  rep["flagged"] = s.flagged;
  rep["total"] = s.total;
  rep["max_norm"] = s.max_norm;
  return 0;
}

struct SamplePointsArgs {
  std::string delta;
  int count = 10;
  int max_level = 2;
  double target = 0.9;
};

int cmd_sample_points(const Globals& g, const SamplePointsArgs& a, Json& rep) {
  const PolyMatrix delta = json_io::poly_matrix_from_json(json_io::read_file(a.delta));
  sampling::Rng rng(g.seed);
  std::vector<GradedPoint> pts;
  const int top = std::min(std::max(1, a.max_level), g.level_cap);
  for (int k = 0; k < a.count; ++k) {
    pts.push_back(sampling::random_inside(delta, 1 + k % top, a.target, rng));
  }
  rep["points"] = json_io::points_to_json(pts);
  return 0;
}

struct SampleModelArgs {
  std::string realization;
  std::string points;
};

int cmd_sample_model(const Globals&, const SampleModelArgs& a, Json& rep) {
  const Realization r = json_io::realization_from_json(json_io::read_file(a.realization));
  const ModelSampleSet s = model_from_realization(r, load_points(a.points));
  const Json m = json_io::model_to_json(s);
  for (auto it = m.begin(); it != m.end(); ++it) rep[it.key()] = it.value();
  return 0;
}

void emit(const Globals& g, const Json& rep, std::ostream& out) {
  const std::string text = rep.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw SchemaError("cannot write " + g.out);
  f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"freeholo: free holomorphic functions on matrix domains"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "tolerance (default 1e-8)");
  app.add_option("--seed", g.seed, "seed for all sampling (default 0)");
  app.add_option("--level-cap", g.level_cap, "largest matrix level to generate (default 8)");
  app.add_option("--out", g.out, "write the report here instead of stdout");

  EvalArgs eval_a;
  auto* eval = app.add_subcommand("eval", "evaluate an expression or realization at points");
  add_fn_options(eval, eval_a.fn);
  eval->add_option("--point", eval_a.point, "point or array of points")->required();

  CheckArgs check_a;
  auto* check = app.add_subcommand("check-nc", "test direct-sum, similarity and block identities");
  add_fn_options(check, check_a.fn);
  check->add_option("--samples", check_a.samples, "array of points")->required();
  check->add_option("--sims", check_a.sims, "array of similarity matrices (generated if omitted)");
  check->add_option("--max-pairs", check_a.max_pairs, "direct-sum pairs examined");

  MemberArgs member_a;
  auto* member = app.add_subcommand("member", "classify points against G_delta");
  member->add_option("--delta", member_a.delta, "delta poly matrix")->required();
  member->add_option("--point", member_a.point, "point or array of points")->required();
  member->add_option("--margin", member_a.margin, "boundary band half-width");

  ModelArgs model_a;
  auto* model = app.add_subcommand("model-residual", "residual of the model identity");
  model->add_option("--samples", model_a.samples, "model sample set")->required();

  FitArgs fit_a;
  auto* fit = app.add_subcommand("fit", "fit a realization to model data");
  fit->add_option("--samples", fit_a.samples, "model sample set")->required();
  fit->add_flag("--no-holdout", fit_a.no_holdout, "use every point for fitting");
  fit->add_option("--dim-cap", fit_a.dim_cap, "largest colligation dimension");

  CoronaArgs corona_a;
  auto* corona = app.add_subcommand("corona", "solve sum phi_i psi_i = 1 with norm control");
  corona->add_option("--delta", corona_a.delta, "delta poly matrix")->required();
  corona->add_option("--points", corona_a.points, "array of points")->required();
  corona->add_option("--psis", corona_a.psis, "per point, the array of psi_i values")->required();
  corona->add_option("--epsilon", corona_a.epsilon, "lower bound epsilon")->required();
  corona->add_option("--model", corona_a.model, "{\"mult\": M, \"u\": [...]} (Pick factorization if omitted)");

  ApproxArgs approx_a;
  auto* approx = app.add_subcommand("approx", "certified polynomial approximation of a realization");
  approx->add_option("--realization", approx_a.realization, "realization")->required();
  approx->add_option("--cover", approx_a.cover, "array of candidate deltas (realization's delta if omitted)");
  approx->add_option("--samples", approx_a.samples, "sample set E")->required();
  approx->add_flag("--close", approx_a.close, "add direct sums of samples up to --level-cap");

  DeriveArgs derive_a;
  auto* derive = app.add_subcommand("derive", "directional derivative via the block point");
  add_fn_options(derive, derive_a.fn);
  derive->add_option("--point", derive_a.point, "base point")->required();
  derive->add_option("--direction", derive_a.direction, "direction")->required();

  auto* mero = app.add_subcommand("mero", "meromorphic tools");
  mero->require_subcommand(1);
  CertifyArgs certify_a;
  auto* certify = mero->add_subcommand("certify", "inversion neighbourhood certificate");
  add_fn_options(certify, certify_a.fn);
  certify->add_option("--point", certify_a.point, "point M")->required();
  certify->add_option("--delta", certify_a.delta, "domain delta");
  certify->add_option("--bound", certify_a.bound, "asserted sup bound B (sampled if omitted)");
  certify->add_option("--sample-count", certify_a.sample_count, "samples used to estimate B");
  ScanArgs scan_a;
  auto* scan = mero->add_subcommand("scan", "flag samples where evaluation meets a singular inverse");
  add_fn_options(scan, scan_a.fn);
  scan->add_option("--samples", scan_a.samples, "array of points")->required();

  SamplePointsArgs sp_a;
  auto* sample_points = app.add_subcommand("sample-points", "random points inside G_delta");
  sample_points->add_option("--delta", sp_a.delta, "delta poly matrix")->required();
  sample_points->add_option("--count", sp_a.count, "number of points");
  sample_points->add_option("--max-level", sp_a.max_level, "levels cycle through 1..max");
  sample_points->add_option("--target", sp_a.target, "upper bound for ||delta(x)||");

  SampleModelArgs sm_a;
  auto* sample_model = app.add_subcommand("sample-model", "model data generated by a realization");
  sample_model->add_option("--realization", sm_a.realization, "realization")->required();
  sample_model->add_option("--points", sm_a.points, "array of points")->required();

  std::vector<const char*> argv{"freeholo"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  Json rep;
  try {
    auto run = [&](const std::string& name, auto&& fn) {
      command = name;
      rep = header(g, name);
      return fn();
    };
    int code = 0;
    if (*eval) {
      code = run("eval", [&] { return cmd_eval(g, eval_a, rep); });
    } else if (*check) {
      code = run("check-nc", [&] { return cmd_check_nc(g, check_a, rep); });
    } else if (*member) {
      code = run("member", [&] { return cmd_member(g, member_a, rep); });
    } else if (*model) {
      code = run("model-residual", [&] { return cmd_model_residual(g, model_a, rep); });
    } else if (*fit) {
      code = run("fit", [&] { return cmd_fit(g, fit_a, rep); });
    } else if (*corona) {
      code = run("corona", [&] { return cmd_corona(g, corona_a, rep); });
    } else if (*approx) {
      code = run("approx", [&] { return cmd_approx(g, approx_a, rep); });
    } else if (*derive) {
      code = run("derive", [&] { return cmd_derive(g, derive_a, rep); });
    } else if (*certify) {
      code = run("mero certify", [&] { return cmd_mero_certify(g, certify_a, rep); });
    } else if (*scan) {
      code = run("mero scan", [&] { return cmd_mero_scan(g, scan_a, rep); });
    } else if (*sample_points) {
      code = run("sample-points", [&] { return cmd_sample_points(g, sp_a, rep); });
    } else if (*sample_model) {
      code = run("sample-model", [&] { return cmd_sample_model(g, sm_a, rep); });
    }
    emit(g, rep, out);
    return code;
  } catch (const MathError& e) {
    Json fail = header(g, command);
    fail["status"] = "error";
    fail["error"] = e.what();
    if (const auto* gm = dynamic_cast<const GramMismatch*>(&e)) fail["gram_deviation"] = gm->deviation();
    if (const auto* sh = dynamic_cast<const SingularityHit*>(&e)) {
      fail["path"] = SingularityHit::format_path(sh->path());
    }
    if (const auto* nc = dynamic_cast<const NoCover*>(&e)) fail["best_radius"] = nc->best_radius();
    if (const auto* bf = dynamic_cast<const BelowFloor*>(&e)) fail["min_eigenvalue"] = bf->min_eigenvalue();
    try {
      emit(g, fail, out);
    } catch (const std::exception&) {
    }
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace freeholo
