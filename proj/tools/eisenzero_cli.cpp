// eisenzero: zeros of Eisenstein series on genus-zero groups.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eisenzero/petersson.hpp"

using namespace eisenzero;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitDoesNotExist = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string group = "sl2z";
  int weight = 0;
  std::string weights;
  int truncation = 0;
  int terms = 20;
  int precision = 256;
  int samples = 256;
  double target_tol = 1e-7;
  int nodes = 16;
  int refinement_limit = 3;
  double residual_tol = 1e-5;
  int threads = 0;
  std::string output;
  std::string format = "csv";
};

GroupSpec load_group(const std::string& name) {
  for (const auto& b : builtin_group_names())
    if (b == name) return group_spec(name);
  std::ifstream in(name);
  if (!in) throw UsageError("unknown group '" + name + "' and no such config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_config(ss.str());
}

int half_weight(int w) {
  if (w < 2 || w % 2 != 0) throw UsageError("weights must be even and at least 2, got " + std::to_string(w));
  return w / 2;
}

/// "4..40", "4..40..4", "4,6,12" or a single weight.
std::vector<int> parse_weights(const std::string& text) {
  std::vector<int> out;
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size()) throw UsageError("bad weight '" + s + "'");
    return v;
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    std::string rest = text.substr(dots + 2);
    int step = 2;
    if (auto d2 = rest.find(".."); d2 != std::string::npos) {
      step = num(rest.substr(d2 + 2));
      rest = rest.substr(0, d2);
    }
    int lo = num(text.substr(0, dots)), hi = num(rest);
    if (step <= 0 || step % 2 != 0 || hi < lo) throw UsageError("bad weight range '" + text + "'");
    for (int w = lo; w <= hi; w += step) out.push_back(half_weight(w));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(half_weight(num(item)));
  }
  if (out.empty()) throw UsageError("no weights given");
  return out;
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  o.root_precision = c.precision;
  o.geometry.precision = c.precision;
  o.geometry.samples_per_arc = c.samples;
  o.threads = c.threads;
  o.truncation = c.truncation;
  return o;
}

QuadratureSpec quadrature(const RunConfig& c) {
  QuadratureSpec q;
  q.target_tol = c.target_tol;
  q.nodes_per_cell = c.nodes;
  q.refinement_limit = c.refinement_limit;
  return q;
}

json series_json(const QSeries& s, int terms) {
  json coeffs = json::array();
  for (int n = s.valuation(); n < std::min(s.truncation(), s.valuation() + terms); ++n) coeffs.push_back(s.coeff(n).get_str());
  return {{"width", s.width()}, {"valuation", s.valuation()}, {"truncation", s.truncation()}, {"coefficients", coeffs}};
}

json form_json(const ModularForm& f, int terms) {
  return {{"weight", f.weight},
          {"at_infinity", series_json(f.at_infinity, terms)},
          {"at_zero", f.at_zero ? series_json(*f.at_zero, terms) : json(nullptr)}};
}

void write_crit_csv(std::ostream& os, const CritSet& cs) {
  os << "arc_id,t,x,y,kind,numerator_zero,denominator_zero,sign_change,class_id\n";
  for (const auto& p : cs.points)
    os << p.arc_id << ',' << p.t.to_string(30) << ',' << p.z.re.to_string(30) << ',' << p.z.im.to_string(30) << ','
       << to_string(p.kind) << ',' << p.numerator_zero << ',' << p.denominator_zero << ',' << p.sign_change << ','
       << p.class_id << '\n';
}

json crit_json(const CritSet& cs) {
  json pts = json::array();
  for (const auto& p : cs.points)
    pts.push_back({{"arc_id", p.arc_id},
                   {"t", p.t.to_string(40)},
                   {"x", p.z.re.to_string(40)},
                   {"y", p.z.im.to_string(40)},
                   {"kind", to_string(p.kind)},
                   {"numerator_zero", p.numerator_zero},
                   {"denominator_zero", p.denominator_zero},
                   {"sign_change", p.sign_change},
                   {"class_id", p.class_id}});
  return {{"schema_version", kReportSchemaVersion},
          {"points", pts},
          {"c_value", cs.c_value},
          {"n_classes", cs.n_classes},
          {"classes_consistent", cs.classes_consistent},
          {"unmatched_images", cs.unmatched_images}};
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw UsageError("cannot write " + c.output);
  out << text;
}

void emit_json(const RunConfig& c, const json& j) { emit(c, j.dump(2) + "\n"); }

int report_exit(const ZeroReport& r) {
  if (r.status == ReportStatus::does_not_exist) return kExitDoesNotExist;
  return r.status == ReportStatus::ok && r.theorem_pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros of Eisenstein series on genus-zero groups"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s, bool needs_weight) {
    s->add_option("-g,--group", cfg.group, "builtin group name or path to a group config JSON")->capture_default_str();
    if (needs_weight) s->add_option("-w,--weight", cfg.weight, "even weight 2k")->required();
    s->add_option("--truncation", cfg.truncation, "q-expansion truncation override");
    s->add_option("-p,--precision", cfg.precision, "working precision in bits")->check(CLI::Range(64, 1 << 16))->capture_default_str();
    s->add_option("-o,--output", cfg.output, "output file (default stdout)");
  };

  auto* expand = app.add_subcommand("expand", "q-expansions of the Eisenstein series at infinity");
  common(expand, true);
  expand->add_option("--terms", cfg.terms, "coefficients to print")->capture_default_str();

  auto* haupt = app.add_subcommand("hauptmodul", "hauptmodul expansion, cusp and corner values");
  common(haupt, false);
  haupt->add_option("--terms", cfg.terms, "coefficients to print")->capture_default_str();

  auto* ups = app.add_subcommand("upsilon", "the form with maximal order of vanishing at infinity");
  common(ups, true);
  ups->add_option("--terms", cfg.terms, "coefficients to print")->capture_default_str();

  auto* div = app.add_subcommand("divpoly", "divisor polynomial in the hauptmodul");
  common(div, true);

  auto* verify = app.add_subcommand("verify", "check the zero-location theorem at one weight");
  common(verify, true);
  verify->add_option("--samples", cfg.samples, "boundary samples per arc")->check(CLI::PositiveNumber)->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "check a range of weights");
  common(sweep_cmd, false);
  sweep_cmd->add_option("--weights", cfg.weights, "weights, e.g. 4..40, 4..40..4 or 4,6,12")->required();
  sweep_cmd->add_option("--samples", cfg.samples, "boundary samples per arc")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("-j,--threads", cfg.threads, "worker threads (0: all cores)");

  auto* crit = app.add_subcommand("crit", "critical points on the lower arcs and c(Gamma, F)");
  common(crit, false);
  crit->add_option("--samples", cfg.samples, "boundary samples per arc")->check(CLI::PositiveNumber)->capture_default_str();
  crit->add_option("-f,--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  auto* pet = app.add_subcommand("petersson", "orthogonality replay by quadrature");
  common(pet, true);
  pet->add_option("--tol", cfg.target_tol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  pet->add_option("--nodes", cfg.nodes, "Gauss-Legendre nodes per cell")->check(CLI::PositiveNumber)->capture_default_str();
  pet->add_option("--refinement-limit", cfg.refinement_limit, "node doublings")->check(CLI::NonNegativeNumber)->capture_default_str();
  pet->add_option("--residual-tol", cfg.residual_tol, "pass threshold for the relative residual")->capture_default_str();

  auto* trace = app.add_subcommand("trace", "j along the boundary as CSV plot data");
  common(trace, false);
  trace->add_option("--samples", cfg.samples, "boundary samples per arc")->check(CLI::PositiveNumber)->capture_default_str();
  trace->add_option("-f,--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    GroupSpec g = load_group(cfg.group);
    VerifyOptions vo = verify_options(cfg);

    if (expand->parsed()) {
      int k = half_weight(cfg.weight);
      int T = std::max(cfg.truncation, cfg.terms + 1);
      json out{{"schema_version", kReportSchemaVersion}, {"group", g.name}, {"weight", cfg.weight}};
      try {
        out["eisenstein_infinity"] = form_json(eisenstein_infinity_form(g, k, T), cfg.terms);
        out["status"] = "ok";
      } catch (const DoesNotExistError& e) {
        out["status"] = "does_not_exist";
        out["message"] = e.what();
        emit_json(cfg, out);
        return kExitDoesNotExist;
      }
      emit_json(cfg, out);
      return kExitPass;
    }
    if (haupt->parsed()) {
      Hauptmodul j = hauptmodul(g, std::max(cfg.truncation, cfg.terms + 1));
      JField jf(g, cfg.precision);
      json cmp = json::array();
      for (const auto& c : j.comparison)
        cmp.push_back({{"exponent", c.exponent}, {"computed", c.computed.get_str()}, {"reference", c.reference.get_str()}, {"match", c.match}});
      emit_json(cfg, {{"schema_version", kReportSchemaVersion},
                      {"group", g.name},
                      {"hauptmodul", form_json(j.form, cfg.terms)},
                      {"cusp_zero_value", j.cusp_zero_value() ? json(j.cusp_zero_value()->get_str()) : json(nullptr)},
                      {"corner_value", interval_endpoint(jf, g).to_string(40)},
                      {"reference_comparison", cmp},
                      {"reference_mismatch", j.reference_mismatch}});
      return kExitPass;
    }
    if (ups->parsed()) {
      int k = half_weight(cfg.weight);
      int T = std::max({cfg.truncation, cfg.terms + 1, default_truncation(g, k)});
      emit_json(cfg, {{"schema_version", kReportSchemaVersion},
                      {"group", g.name},
                      {"dim", dimension(g, k)},
                      {"upsilon", form_json(upsilon_form(g, k, T), cfg.terms)}});
      return kExitPass;
    }
    if (div->parsed()) {
      int k = half_weight(cfg.weight);
      WeightContext ctx(g, k, cfg.truncation);
      json out{{"schema_version", kReportSchemaVersion}, {"group", g.name}, {"weight", cfg.weight}, {"dim", dimension(g, k)}};
      try {
        DivisorPoly p = divisor_polynomial(ctx, k);
        json coeffs = json::array();
        for (const auto& c : p.poly.coefficients()) coeffs.push_back(c.get_str());
        out["degree"] = p.poly.degree();
        out["coefficients"] = coeffs;
        out["polynomial"] = p.poly.str();
        out["status"] = "ok";
      } catch (const DoesNotExistError& e) {
        out["status"] = "does_not_exist";
        out["message"] = e.what();
        emit_json(cfg, out);
        return kExitDoesNotExist;
      }
      emit_json(cfg, out);
      return kExitPass;
    }
    if (verify->parsed()) {
      int k = half_weight(cfg.weight);
      VerifyContext ctx(g, k, vo);
      ZeroReport r = verify_theorem(ctx, k);
      emit_json(cfg, to_json(r));
      return report_exit(r);
    }
    if (sweep_cmd->parsed()) {
      std::vector<int> ks = parse_weights(cfg.weights);
      VerifyContext ctx(g, *std::max_element(ks.begin(), ks.end()), vo);
      SweepResult res = sweep(ctx, ks);
      emit_json(cfg, to_json(res));
      if (res.summary.all_pass) return kExitPass;
      return res.summary.failed_weights.empty() ? kExitDoesNotExist : kExitFail;
    }
    if (crit->parsed()) {
      JField j(g, cfg.precision);
      CritSet cs = crit_and_c(g, j, vo.geometry);
      if (cfg.format == "csv") {
        std::ostringstream os;
        write_crit_csv(os, cs);
        emit(cfg, os.str());
      } else {
        emit_json(cfg, crit_json(cs));
      }
      return kExitPass;
    }
    if (pet->parsed()) {
      int k = half_weight(cfg.weight);
      VerifyContext ctx(g, k, vo);
      json out;
      try {
        OrthogonalityReport r = orthogonality_replay(ctx, k, quadrature(cfg));
        out = to_json(r);
        out["residual_tol"] = cfg.residual_tol;
        out["pass"] = r.residual < cfg.residual_tol;
        emit_json(cfg, out);
        return r.residual < cfg.residual_tol ? kExitPass : kExitFail;
      } catch (const DoesNotExistError& e) {
        emit_json(cfg, {{"schema_version", kReportSchemaVersion}, {"group", g.name}, {"weight", cfg.weight},
                        {"status", "does_not_exist"}, {"message", e.what()}});
        return kExitDoesNotExist;
      }
    }
    if (trace->parsed()) {
      JField j(g, cfg.precision);
      BoundaryTrace tr = trace_boundary(g, j, vo.geometry);
      if (cfg.format == "csv") {
        std::ostringstream os;
        write_trace_csv(os, tr);
        emit(cfg, os.str());
      } else {
        json pieces = json::array();
        for (const auto& p : tr.pieces) {
          json s = json::array();
          for (const auto& x : p.samples)
            s.push_back({x.t.to_string(20), x.z.re.to_string(20), x.z.im.to_string(20), x.j.re.to_string(20)});
          pieces.push_back({{"arc_id", p.arc_id}, {"columns", {"t", "x", "y", "re_j"}}, {"samples", s}});
        }
        emit_json(cfg, {{"schema_version", kReportSchemaVersion}, {"group", g.name}, {"pieces", pieces}});
      }
      return kExitPass;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigValidation ? kExitConfig : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
