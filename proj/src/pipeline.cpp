#include "rnshelix/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rnshelix/error.hpp"

namespace rnshelix {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidDocument, msg); }

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ScalarExpr expr_field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) invalid(where + " is missing \"" + key + "\"");
  const json& v = obj.at(key);
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number()) {
    text = num17(v.get<double>());
  } else {
    invalid(where + "." + key + " must be an expression string");
  }
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.offset(), "in " + where + "." + key + ": " + e.detail());
  }
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) invalid(where + " has unknown field \"" + k + "\"");
  }
}

double number_field(const json& v, const std::string& name) {
  if (!v.is_number()) invalid("\"" + name + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid("\"" + name + "\" must be finite");
  return x;
}

json vec_json(const LVec3& v) { return json::array({v.x1, v.x2, v.x3}); }

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

json series_json(const SigmaSeries& s) {
  return json{{"formula_id", s.formula_id},
              {"mean", s.mean},
              {"std", s.std_dev},
              {"rel_std", finite_or_zero(s.rel_std)},
              {"score", s.score},
              {"valid_samples", s.valid_count},
              {"masked_fraction", s.masked_fraction}};
}

json detection_json(const Detection& d, const std::vector<SigmaSeries>& series) {
  json j;
  j["formula"] = d.verdict || d.error ? json(d.formula) : json(nullptr);
  j["kernel"] = d.series ? json(series[*d.series].formula_id) : json(nullptr);
  j["constant"] = d.series ? json(d.constant) : json(nullptr);
  if (d.angle) {
    j["angle"] = json{{"value", d.angle->value}, {"kind", std::string(to_string(d.angle->kind))}};
  } else {
    j["angle"] = nullptr;
  }
  j["error"] = d.error ? json(std::string(to_string(*d.error))) : json(nullptr);
  j["detail"] = d.detail;
  return j;
}

json axis_json(const AxisResult& a, std::optional<double> indicatrix) {
  json br = json::array();
  for (const auto& b : a.branches) {
    br.push_back(json{{"branch", b.branch},
                      {"candidate", b.candidate},
                      {"angle", b.angle},
                      {"constancy_residual", b.constancy_residual}});
  }
  json j{{"d", vec_json(a.d)},
         {"character", std::string(to_string(a.d_character))},
         {"form", std::string(to_string(a.form))},
         {"angle", a.angle.value},
         {"angle_kind", std::string(to_string(a.angle.kind))},
         {"branch", a.branch},
         {"candidate", a.candidate},
         {"constancy_residual", a.constancy_residual},
         {"gram_residual", a.gram_residual},
         {"max_derivative", a.max_derivative},
         {"inner_B_spread", a.inner_B_spread},
         {"angle_mismatch", a.angle_mismatch},
         {"max_inner_T", a.max_inner_T},
         {"max_inner_N", a.max_inner_N}};
  j["indicatrix_defect"] = indicatrix ? json(*indicatrix) : json(nullptr);
  j["branch_residuals"] = br;
  return j;
}

std::string csv_cell(double x) { return num17(x); }

struct CsvSource {
  const std::vector<double>* s = nullptr;
  const std::vector<DarbouxSample>* darboux = nullptr;
  const SigmaSeries* series = nullptr;
  const AxisResult* axis = nullptr;
};

std::string build_csv(const CsvSource& src, std::size_t& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  rows = 0;
  const std::size_t n = src.s->size();
  for (std::size_t i = 0; i < n; ++i) {
    if (src.series && !src.series->valid[i]) continue;
    std::string line = csv_cell((*src.s)[i]);
    if (src.darboux) {
      const DarbouxSample& d = (*src.darboux)[i];
      line += "," + csv_cell(d.kappa_g) + "," + csv_cell(d.kappa_n) + "," + csv_cell(d.tau_g);
    } else {
      line += ",,,";
    }
    line += ",";
    if (src.series) line += csv_cell(src.series->sigma[i]);
    if (src.axis && src.axis->valid[i]) {
      const LVec3& d = src.axis->per_sample[i];
      line += "," + csv_cell(d.x1) + "," + csv_cell(d.x2) + "," + csv_cell(d.x3);
    } else {
      line += ",,,";
    }
    out += line + "\n";
    ++rows;
  }
  return out;
}

const SigmaSeries* pick_series(const std::vector<SigmaSeries>& series, const Detection& det) {
  if (det.series) return &series[*det.series];
  const SigmaSeries* best = nullptr;
  for (const auto& s : series) {
    if (!best || s.valid_count > best->valid_count) best = &s;
  }
  return best;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Analyze: return "analyze";
    case Mode::Synthesize: return "synthesize";
    case Mode::CheckProps: return "check-props";
  }
  return "?";
}

InputDocument parse_document(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(ErrorKind::InvalidDocument, e.byte > 0 ? e.byte - 1 : 0,
                     "malformed JSON");
  }
  if (!root.is_object()) invalid("document must be a JSON object");
  only_keys(root, {"surface", "curve", "window", "samples", "h", "eps", "h_int", "profile"}, "document");

  InputDocument doc;
  if (root.contains("surface")) {
    const json& s = root["surface"];
    if (!s.is_object()) invalid("surface must be an object");
    only_keys(s, {"x1", "x2", "x3", "type"}, "surface");
    SurfaceSpec surf;
    surf.x = {expr_field(s, "x1", "surface"), expr_field(s, "x2", "surface"),
              expr_field(s, "x3", "surface")};
    for (const auto& e : surf.x) {
      if (e.depends_on(Var::S)) invalid("surface expressions may only use u and v");
    }
    if (s.contains("type")) {
      const json& t = s["type"];
      if (t == "spacelike") {
        surf.declared = Causal::Spacelike;
      } else if (t == "timelike") {
        surf.declared = Causal::Timelike;
      } else {
        invalid("surface.type must be \"spacelike\" or \"timelike\"");
      }
    }
    doc.surface = std::move(surf);
  }
  if (root.contains("curve")) {
    const json& c = root["curve"];
    if (!c.is_object()) invalid("curve must be an object");
    CurveSpec spec;
    if (c.contains("u") || c.contains("v")) {
      only_keys(c, {"u", "v"}, "curve");
      spec.form = CurveSpec::Form::OnSurface;
      spec.x = {expr_field(c, "u", "curve"), expr_field(c, "v", "curve"), ScalarExpr()};
      if (!doc.surface) invalid("a curve given by (u, v) needs a surface");
    } else {
      only_keys(c, {"x1", "x2", "x3"}, "curve");
      spec.form = CurveSpec::Form::Space;
      spec.x = {expr_field(c, "x1", "curve"), expr_field(c, "x2", "curve"), expr_field(c, "x3", "curve")};
    }
    for (const auto& e : spec.x) {
      if (e.depends_on(Var::U) || e.depends_on(Var::V)) invalid("curve expressions may only use s");
    }
    doc.curve = std::move(spec);
  }
  if (root.contains("profile")) {
    const json& p = root["profile"];
    if (!p.is_object()) invalid("profile must be an object");
    only_keys(p, {"case", "kappa_g", "kappa_n", "tau_g"}, "profile");
    if (!p.contains("case") || !p["case"].is_string()) invalid("profile.case must be \"SS\", \"ST\" or \"TT\"");
    InvariantProfile prof;
    prof.tag = parse_case(p["case"].get<std::string>());
    prof.kappa_g = expr_field(p, "kappa_g", "profile");
    prof.kappa_n = expr_field(p, "kappa_n", "profile");
    prof.tau_g = expr_field(p, "tau_g", "profile");
    for (const ScalarExpr* e : {&prof.kappa_g, &prof.kappa_n, &prof.tau_g}) {
      if (e->depends_on(Var::U) || e->depends_on(Var::V)) invalid("profile expressions may only use s");
    }
    doc.profile = std::move(prof);
  }
  if (root.contains("window")) {
    const json& w = root["window"];
    if (!w.is_array() || w.size() != 2) invalid("window must be [s0, s1]");
    const double a = number_field(w[0], "window[0]");
    const double b = number_field(w[1], "window[1]");
    if (!(a < b)) invalid("window must satisfy s0 < s1");
    doc.window = std::array<double, 2>{a, b};
  }
  if (root.contains("samples")) {
    const json& n = root["samples"];
    if (!n.is_number_integer()) invalid("samples must be an integer");
    doc.samples = n.get<int>();
  }
  if (root.contains("h")) doc.h = number_field(root["h"], "h");
  if (root.contains("eps")) doc.eps = number_field(root["eps"], "eps");
  if (root.contains("h_int")) doc.h_int = number_field(root["h_int"], "h_int");
  if (!doc.curve && !doc.profile) invalid("document needs a \"curve\" or a \"profile\"");
  if (doc.curve && doc.profile) invalid("document may hold a curve or a profile, not both");
  if (!doc.window) invalid("document needs a \"window\"");
  return doc;
}

Settings resolve_settings(const InputDocument& doc, const Overrides& cli) {
  Settings s;
  if (doc.samples) s.samples = *doc.samples;
  if (doc.h) s.h = *doc.h;
  if (doc.eps) s.eps = *doc.eps;
  if (doc.h_int) s.h_int = *doc.h_int;
  if (cli.tol) s.tol = *cli.tol;
  if (cli.eps) s.eps = *cli.eps;
  if (cli.h) s.h = *cli.h;
  if (cli.samples) s.samples = *cli.samples;
  if (!(s.tol > 0.0)) invalid("tol must be positive");
  if (!(s.eps >= 0.0)) invalid("eps must be non-negative");
  if (!(s.h > 0.0)) invalid("h must be positive");
  if (!(s.h_int > 0.0)) invalid("h_int must be positive");
  if (s.samples < 16) invalid("samples must be at least 16");
  return s;
}

Artifacts run_document(const std::string& json_text, Mode mode, const Overrides& cli,
                       const std::string& input_label) {
  InputDocument doc = parse_document(json_text);
  const Settings set = resolve_settings(doc, cli);
  if (mode == Mode::Analyze && !doc.curve) invalid("analyze needs a \"curve\"");
  if (mode == Mode::Synthesize && !doc.profile) invalid("synthesize needs a \"profile\"");
  const bool synth = doc.profile.has_value();

  json rep;
  rep["tool"] = json{{"name", kToolName}, {"version", kToolVersion}};
  rep["mode"] = std::string(to_string(mode));
  json cfg{{"input", input_label}, {"tol", set.tol}, {"eps", set.eps}, {"h", set.h}, {"samples", set.samples}};
  if (synth) cfg["h_int"] = set.h_int;
  rep["config"] = cfg;

  CurveTable table;
  std::optional<CaseTag> tag;
  std::optional<double> drift;
  if (synth) {
    InvariantProfile prof = *doc.profile;
    prof.s0 = (*doc.window)[0];
    prof.s1 = (*doc.window)[1];
    prof.h_int = set.h_int;
    const SynthesizedCurve sc = integrate_darboux_frame(prof, canonical_frame(prof.tag));
    drift = sc.gram_drift;
    table = to_curve_table(sc);
    tag = classify_case(table, set.eps);
    if (*tag != prof.tag) {
      throw Error(ErrorKind::MixedCausalCharacter, "integrated frame does not match the profile case");
    }
    rep["input"] = json{{"kind", "profile"}, {"profile_case", std::string(to_string(prof.tag))}};
  } else {
    CurveSpec spec = *doc.curve;
    spec.t0 = (*doc.window)[0];
    spec.t1 = (*doc.window)[1];
    spec.samples = set.samples;
    SampleOptions opt;
    opt.h = set.h;
    opt.eps = set.eps;
    table = reparametrize_unit_speed(spec, doc.surface ? &*doc.surface : nullptr, opt);
    if (doc.surface) {
      tag = classify_case(table, set.eps);
      if (doc.surface->declared) {
        const Causal want = *tag == CaseTag::SS ? Causal::Spacelike : Causal::Timelike;
        if (*doc.surface->declared != want) {
          invalid("surface declared " + std::string(to_string(*doc.surface->declared)) +
                  " but its normal says " + std::string(to_string(want)));
        }
      }
    }
    const char* kind = spec.form == CurveSpec::Form::OnSurface ? "curve_on_surface"
                       : doc.surface                            ? "space_curve_on_surface"
                                                                : "space_curve";
    rep["input"] = json{{"kind", kind}};
  }

  rep["case"] = tag ? json(std::string(to_string(*tag))) : json(nullptr);
  rep["curve_character"] = std::string(to_string(table.velocity));
  rep["samples"] = table.size();
  rep["arc_length"] = table.s.back() - table.s.front();

  double unit_speed = 0.0;
  const double target = table.velocity == Causal::Timelike ? -1.0 : 1.0;
  for (const auto& t : table.d1) unit_speed = std::max(unit_speed, std::abs(mdot(t, t) - target));

  std::vector<DarbouxSample> darboux;
  json checks{{"unit_speed_residual", unit_speed}};
  if (drift) checks["gram_drift"] = *drift;
  if (tag) {
    darboux = darboux_apparatus(table, *tag);
    const FrameResiduals r = darboux_residuals(darboux);
    checks["darboux_gram_residual"] = r.gram;
    checks["darboux_cross_residual"] = r.cross;
    checks["darboux_ode_residual"] = r.ode;
  }

  std::vector<FrenetSample> frenet;
  std::optional<std::string> frenet_error;
  try {
    frenet = frenet_apparatus(table, set.eps);
  } catch (const Error& e) {
    frenet_error = e.what();
  }
  const bool have_frenet = !frenet_error;
  json fj{{"available", have_frenet}, {"error", frenet_error ? json(*frenet_error) : json(nullptr)}};
  if (have_frenet) {
    const FrameResiduals r = frenet_residuals(frenet);
    fj["epsilon"] = frenet.front().epsilon;
    double kmin = frenet.front().kappa, kmax = kmin, tmax = 0.0;
    for (const auto& f : frenet) {
      kmin = std::min(kmin, f.kappa);
      kmax = std::max(kmax, f.kappa);
      tmax = std::max(tmax, std::abs(f.tau));
    }
    fj["kappa_min"] = kmin;
    fj["kappa_max"] = kmax;
    fj["max_abs_tau"] = tmax;
    fj["gram_residual"] = r.gram;
    fj["ode_residual"] = r.ode;
  }
  rep["frame_checks"] = checks;
  rep["frenet"] = fj;

  json kappa_rel = nullptr;
  json phi = nullptr;
  if (tag && have_frenet) {
    const KappaRelation kr = kappa_relation(frenet, darboux);
    json cands = json::array();
    for (const auto& c : kr.candidates) {
      cands.push_back(json{{"relation", c.name}, {"max_rel_defect", c.max_rel_defect}, {"holds", c.holds}});
    }
    kappa_rel = json{{"candidates", cands}, {"selected", kr.selected ? json(*kr.selected) : json(nullptr)}};
    try {
      const auto rel = check_phi_relations(frenet, darboux, set.eps);
      std::size_t valid = 0;
      double rk = 0.0, rt = 0.0;
      for (const auto& r : rel) {
        if (!r.valid) continue;
        ++valid;
        rk = std::max(rk, std::abs(r.residual_kappa));
        rt = std::max(rt, std::abs(r.residual_tau_g));
      }
      phi = json{{"valid_samples", valid}, {"max_residual_kappa", rk}, {"max_residual_tau_g", rt}};
    } catch (const Error& e) {
      phi = json{{"error", e.what()}};
    }
  }
  rep["kappa_relation"] = kappa_rel;
  rep["phi_relations"] = phi;

  HelixOptions hopt;
  hopt.tol = set.tol;
  Artifacts art;
  CsvSource src;
  src.s = &table.s;
  if (tag) {
    const HelixReport hr = analyze_helix(darboux, have_frenet ? &frenet : nullptr, hopt);
    rep["flags"] = json{{"geodesic", hr.flags.geodesic},
                        {"asymptotic", hr.flags.asymptotic},
                        {"line_of_curvature", hr.flags.line_of_curvature}};
    rep["rns_verdict"] = hr.rns.verdict;
    rep["rns"] = detection_json(hr.rns, hr.sigma);
    json sj = json::array();
    for (const auto& s : hr.sigma) sj.push_back(series_json(s));
    rep["sigma"] = sj;
    rep["sigma_error"] = hr.sigma_error ? json(*hr.sigma_error) : json(nullptr);
    rep["axis"] = hr.axis ? axis_json(*hr.axis, hr.indicatrix) : json(nullptr);
    if (hr.slant && !hr.slant->error) {
      rep["slant_verdict"] = hr.slant->detection.verdict;
    } else {
      rep["slant_verdict"] = nullptr;
    }
    json slant = nullptr;
    if (hr.slant) {
      json ss = json::array();
      for (const auto& s : hr.slant->sigma) ss.push_back(series_json(s));
      slant = json{{"error", hr.slant->error ? json(*hr.slant->error) : json(nullptr)},
                   {"detection", detection_json(hr.slant->detection, hr.slant->sigma)},
                   {"sigma", ss},
                   {"axis", hr.slant->axis ? axis_json(*hr.slant->axis, std::nullopt) : json(nullptr)}};
    }
    rep["slant"] = slant;
    json props = json::array();
    for (const auto& p : hr.propositions) {
      props.push_back(json{{"name", p.name}, {"applicable", p.applicable}, {"passed", p.passed}, {"detail", p.detail}});
      if (p.applicable && !p.passed) art.propositions_ok = false;
    }
    rep["propositions"] = props;
    src.darboux = &darboux;
    src.series = pick_series(hr.sigma, hr.rns);
    src.axis = hr.axis ? &*hr.axis : nullptr;
    const SigmaSeries* sel = src.series;
    rep["csv_series"] = sel ? json(sel->formula_id) : json(nullptr);
    art.csv = build_csv(src, art.rows);
  } else {
    rep["flags"] = nullptr;
    rep["rns_verdict"] = nullptr;
    rep["rns"] = nullptr;
    rep["sigma"] = json::array();
    rep["sigma_error"] = "no surface: Darboux frame unavailable";
    rep["axis"] = nullptr;
    std::optional<SlantResult> sl;
    if (have_frenet) sl = analyze_slant(frenet, hopt);
    rep["slant_verdict"] = sl && !sl->error ? json(sl->detection.verdict) : json(nullptr);
    json slant = nullptr;
    if (sl) {
      json ss = json::array();
      for (const auto& s : sl->sigma) ss.push_back(series_json(s));
      slant = json{{"error", sl->error ? json(*sl->error) : json(nullptr)},
                   {"detection", detection_json(sl->detection, sl->sigma)},
                   {"sigma", ss},
                   {"axis", sl->axis ? axis_json(*sl->axis, std::nullopt) : json(nullptr)}};
      src.series = sl->sigma.empty() ? nullptr : pick_series(sl->sigma, sl->detection);
      src.axis = sl->axis ? &*sl->axis : nullptr;
    }
    rep["slant"] = slant;
    rep["propositions"] = json::array();
    rep["csv_series"] = src.series ? json(src.series->formula_id) : json(nullptr);
    art.csv = build_csv(src, art.rows);
  }
  rep["valid_samples"] = art.rows;
  rep["masked_fraction"] = 1.0 - static_cast<double>(art.rows) / static_cast<double>(table.size());
  art.report = rep.dump(2) + "\n";
  return art;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const fs::path dir(config.out_dir);
  const fs::path report_path = dir / "report.json";
  const fs::path csv_path = dir / "samples.csv";
  auto cleanup = [&] {
    std::error_code ec;
    fs::remove(report_path, ec);
    fs::remove(csv_path, ec);
  };
  try {
    std::ifstream in(config.input, std::ios::binary);
    if (!in) invalid("cannot read input file '" + config.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Artifacts art = run_document(buf.str(), config.mode, config.overrides, config.input);

    fs::create_directories(dir);
    {
      std::ofstream r(report_path, std::ios::binary | std::ios::trunc);
      r << art.report;
      std::ofstream c(csv_path, std::ios::binary | std::ios::trunc);
      c << art.csv;
      if (!r || !c) throw std::runtime_error("failed to write outputs in '" + dir.string() + "'");
    }
    out << "wrote " << report_path.string() << " and " << csv_path.string() << " (" << art.rows
        << " rows)\n";
    if (config.mode == Mode::CheckProps) {
      const json rep = json::parse(art.report);
      for (const auto& p : rep["propositions"]) {
        if (!p["applicable"].get<bool>()) continue;
        out << (p["passed"].get<bool>() ? "PASS " : "FAIL ") << p["name"].get<std::string>() << ": "
            << p["detail"].get<std::string>() << "\n";
      }
    }
    return 0;
  } catch (const ParseError& e) {
    cleanup();
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    cleanup();
    err << "error: " << e.what() << "\n";
    return is_validation_error(e.kind()) ? 2 : 3;
  } catch (const std::exception& e) {
    cleanup();
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace rnshelix
