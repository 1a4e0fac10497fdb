#pragma once

#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eisenzero/divpoly.hpp"
#include "eisenzero/geometry.hpp"

namespace eisenzero {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct VerifyOptions {
  Precision root_precision = kDefaultPrecision;
  GeometryOptions geometry;
  int eisenstein_check_terms = 50;
  int threads = 0;     // 0: hardware concurrency
  int truncation = 0;  // 0: 2 dim + 16 at the largest weight
};

/// Everything that depends only on the group: hauptmodul field, Crit(F), c
/// and the interval endpoint; plus the forms for a range of weights.
class VerifyContext {
 public:
  VerifyContext(GroupSpec g, int max_k, VerifyOptions opt = {})
      : opt_(opt),
        weights_(g, std::max(max_k, 1), opt.truncation),
        j_(g, opt.geometry.precision),
        crit_(crit_and_c(g, j_, opt.geometry)),
        endpoint_(interval_endpoint(j_, g)) {}

  const GroupSpec& group() const { return weights_.group(); }
  WeightContext& weights() { return weights_; }
  const JField& j() const { return j_; }
  const CritSet& crit() const { return crit_; }
  const Real& endpoint() const { return endpoint_; }
  const VerifyOptions& options() const { return opt_; }

 private:
  VerifyOptions opt_;
  WeightContext weights_;
  JField j_;
  CritSet crit_;
  Real endpoint_;
};

struct ReportRoot {
  CertifiedRoot root;
  bool in_interval = false;
  std::optional<BoundaryPoint> preimage;
  std::optional<Real> preimage_residual;  // |j(z) - root|
};

struct ReportCounts {
  int real = 0;     // with multiplicity
  int nonreal = 0;  // with multiplicity
  int simple = 0;   // distinct roots of multiplicity one
  int in_interval = 0;
  int endpoint_ambiguous = 0;
  int exceptions = 0;
};

struct SeriesAgreement {
  bool match = true;
  std::optional<int> first_mismatch;
};

struct EisensteinComparison {
  int terms = 0;
  SeriesAgreement three_divides_d;
  SeriesAgreement d_divides_three;
};

enum class ReportStatus { ok, does_not_exist, error };

inline const char* to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::ok: return "ok";
    case ReportStatus::does_not_exist: return "does_not_exist";
    case ReportStatus::error: return "error";
  }
  return "error";
}

struct ZeroReport {
  std::string group;
  int weight = 0;
  int dim = 0;
  int degree = -1;
  Polynomial polynomial;
  std::optional<Real> interval_endpoint;
  Rational bracket_lo, bracket_hi;
  ReportCounts counts;
  std::vector<ReportRoot> roots;
  int c_value = 0;
  bool theorem_pass = false;
  bool corollary_pass = false;
  std::string corollary_note;
  std::vector<CoefficientComparison> hauptmodul_comparison;
  std::optional<Rational> reference_corner_value;
  std::optional<EisensteinComparison> eisenstein_comparison;
  std::optional<Rational> cusp_zero_value;  // set when E_{2k}^infinity does not exist
  int preimage_failures = 0;
  ReportStatus status = ReportStatus::error;
  std::string message;
  Precision precision_bits = kDefaultPrecision;
};

namespace detail {

inline SeriesAgreement agreement(const QSeries& a, const QSeries& b, int terms) {
  SeriesAgreement out;
  for (int n = 0; n < terms; ++n)
    if (a.coeff(n) != b.coeff(n)) {
      out.match = false;
      out.first_mismatch = n;
      break;
    }
  return out;
}

inline std::string corollary_text(int c) {
  if (c % 2 == 1)
    return "c = " + std::to_string(c) + " is odd: all but at most " + std::to_string(c - 1) +
           " roots are real, since nonreal roots pair up";
  return "c = " + std::to_string(c) + " is even: all but at most " + std::to_string(c) + " roots are real";
}

inline ZeroReport base_report(const VerifyContext& ctx, int k) {
  ZeroReport r;
  const GroupSpec& g = ctx.group();
  r.group = g.name;
  r.weight = 2 * k;
  r.dim = dimension(g, k);
  r.c_value = ctx.crit().c_value;
  r.corollary_note = corollary_text(r.c_value);
  r.interval_endpoint = ctx.endpoint();
  std::tie(r.bracket_lo, r.bracket_hi) = rational_bracket(ctx.endpoint());
  r.hauptmodul_comparison = ctx.j().hauptmodul().comparison;
  r.reference_corner_value = g.hauptmodul.reference_corner_value;
  r.precision_bits = ctx.options().root_precision;
  return r;
}

/// Root analysis of an already extracted polynomial; read-only on ctx.
inline void analyze(const VerifyContext& ctx, ZeroReport& r) {
  const Polynomial& p = r.polynomial;
  r.degree = p.degree();
  if (p.degree() < 1) {
    r.theorem_pass = true;
    r.corollary_pass = true;
    r.status = ReportStatus::ok;
    return;
  }
  auto analysis = real_root_analysis(p, ctx.endpoint());
  r.counts.endpoint_ambiguous = analysis.n_endpoint_ambiguous;

  auto factors = squarefree_decomposition(p);
  int good = 0;
  for (const auto& [f, mult] : factors) {
    SturmSequence s(f);
    int real = s.count_real();
    r.counts.real += real * mult;
    r.counts.nonreal += (f.degree() - real) * mult;
    r.counts.in_interval += s.count_above(r.bracket_hi);
    if (mult == 1) {
      r.counts.simple += f.degree();
      good += s.count_above(r.bracket_hi);
    }
  }
  r.counts.exceptions = r.degree - good;
  r.theorem_pass = r.counts.exceptions <= r.c_value;
  int allowed_nonreal = r.c_value % 2 == 1 ? r.c_value - 1 : r.c_value;
  r.corollary_pass = r.counts.nonreal % 2 == 0 && r.counts.nonreal <= allowed_nonreal;

  auto roots = all_roots(p, ctx.options().root_precision);
  Real hi(r.bracket_hi, ctx.options().root_precision);
  int flagged = 0;
  for (auto& cr : roots) {
    ReportRoot rr{cr, cr.is_real && cr.re > hi, std::nullopt, std::nullopt};
    if (rr.in_interval) {
      ++flagged;
      try {
        Real target(cr.re.to_rational(), ctx.j().precision());
        BoundaryPoint b = invert_j_on_boundary(ctx.group(), ctx.j(), ctx.crit(), target);
        Real value = b.at_cusp ? Real(*ctx.j().cusp_zero_value(), ctx.j().precision()) : ctx.j().value(b.z).re;
        rr.preimage_residual = abs(value - target);
        rr.preimage = std::move(b);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotFound) throw;
        ++r.preimage_failures;
      }
    }
    r.roots.push_back(std::move(rr));
  }
  if (flagged != r.counts.in_interval) {
    r.status = ReportStatus::error;
    r.message = "numeric interval flags disagree with the Sturm count";
    return;
  }
  r.status = ReportStatus::ok;
}

}  // namespace detail

/// Comparison of E_{2k}^infinity with the closed divisor-sum formula under
/// both readings of alpha; only meaningful at level 3.
inline std::optional<EisensteinComparison> eisenstein_formula_check(const GroupSpec& g, int k, int terms) {
  if (g.level != 3 || k < 2) return std::nullopt;
  QSeries e = eisenstein_infinity(g, k, terms);
  EisensteinComparison c;
  c.terms = terms;
  c.three_divides_d = detail::agreement(e, eisenstein_divisor_formula(k, terms, AlphaReading::three_divides_d), terms);
  c.d_divides_three = detail::agreement(e, eisenstein_divisor_formula(k, terms, AlphaReading::d_divides_three), terms);
  return c;
}

/// Extracts P(E_{2k}^infinity, X); a DoesNotExist outcome is recorded in the
/// report rather than thrown.
inline ZeroReport prepare_report(VerifyContext& ctx, int k) {
  ZeroReport r = detail::base_report(ctx, k);
  r.eisenstein_comparison = eisenstein_formula_check(ctx.group(), k, ctx.options().eisenstein_check_terms);
  try {
    if (k > ctx.weights().max_k()) throw Error(ErrorCode::InvalidArgument, "weight beyond the prepared range");
    r.polynomial = divisor_polynomial(ctx.weights(), k).poly;
    r.degree = r.polynomial.degree();
    r.status = ReportStatus::ok;
  } catch (const DoesNotExistError& e) {
    r.status = ReportStatus::does_not_exist;
    r.cusp_zero_value = e.cusp_zero_value();
    r.message = e.what();
  } catch (const Error& e) {
    r.status = e.code() == ErrorCode::DoesNotExist ? ReportStatus::does_not_exist : ReportStatus::error;
    r.message = e.what();
  }
  return r;
}

inline void finish_report(const VerifyContext& ctx, ZeroReport& r) {
  if (r.status != ReportStatus::ok) return;
  try {
    detail::analyze(ctx, r);
  } catch (const Error& e) {
    r.status = ReportStatus::error;
    r.theorem_pass = false;
    r.message = e.what();
  }
}

inline ZeroReport verify_theorem(VerifyContext& ctx, int k) {
  ZeroReport r = prepare_report(ctx, k);
  finish_report(ctx, r);
  return r;
}

inline ZeroReport verify_theorem(const GroupSpec& g, int k, VerifyOptions opt = {}) {
  VerifyContext ctx(g, k, opt);
  return verify_theorem(ctx, k);
}

struct SweepSummary {
  int max_exceptions = 0;
  std::vector<int> does_not_exist_weights;
  std::vector<int> failed_weights;
  bool all_pass = true;
};

struct SweepResult {
  std::vector<ZeroReport> reports;
  SweepSummary summary;
};

/// Reports for each half-weight in ks. Polynomials are extracted in order;
/// root analysis runs concurrently and results keep the input order.
inline SweepResult sweep(VerifyContext& ctx, const std::vector<int>& ks) {
  SweepResult out;
  for (int k : ks) out.reports.push_back(prepare_report(ctx, k));
  unsigned threads = ctx.options().threads > 0 ? static_cast<unsigned>(ctx.options().threads)
                                               : std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < out.reports.size(); start += threads) {
    std::vector<std::future<void>> jobs;
    for (std::size_t i = start; i < std::min(out.reports.size(), start + threads); ++i)
      jobs.push_back(std::async(std::launch::async, [&ctx, &out, i] { finish_report(ctx, out.reports[i]); }));
    for (auto& f : jobs) f.get();
  }
  for (const auto& r : out.reports) {
    if (r.status == ReportStatus::does_not_exist) {
      out.summary.does_not_exist_weights.push_back(r.weight);
      out.summary.all_pass = false;
      continue;
    }
    out.summary.max_exceptions = std::max(out.summary.max_exceptions, r.counts.exceptions);
    if (r.status != ReportStatus::ok || !r.theorem_pass) {
      out.summary.failed_weights.push_back(r.weight);
      out.summary.all_pass = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using json = nlohmann::json;

inline json real_json(const Real& x, int digits = 40) { return x.to_string(digits); }

inline json optional_rational(const std::optional<Rational>& r) { return r ? json(r->get_str()) : json(nullptr); }

inline json agreement_json(const SeriesAgreement& a) {
  return {{"match", a.match}, {"first_mismatch", a.first_mismatch ? json(*a.first_mismatch) : json(nullptr)}};
}

}  // namespace detail

inline nlohmann::json to_json(const ZeroReport& r) {
  using detail::json;
  json roots = json::array();
  for (const auto& rr : r.roots) {
    json pre = nullptr;
    if (rr.preimage)
      pre = {{"x", detail::real_json(rr.preimage->z.re, 30)},
             {"y", detail::real_json(rr.preimage->z.im, 30)},
             {"arc_id", rr.preimage->arc_id},
             {"at_cusp", rr.preimage->at_cusp},
             {"residual", detail::real_json(*rr.preimage_residual, 6)}};
    roots.push_back({{"re", detail::real_json(rr.root.re)},
                     {"im", detail::real_json(rr.root.im)},
                     {"certified_radius", detail::real_json(rr.root.radius, 6)},
                     {"multiplicity", rr.root.multiplicity},
                     {"in_interval", rr.in_interval},
                     {"boundary_preimage", pre}});
  }
  json coeffs = json::array();
  for (const auto& c : r.polynomial.coefficients()) coeffs.push_back(c.get_str());

  json hc = json::array();
  bool mismatch = false;
  for (const auto& c : r.hauptmodul_comparison) {
    hc.push_back({{"exponent", c.exponent},
                  {"computed", c.computed.get_str()},
                  {"reference", c.reference.get_str()},
                  {"match", c.match}});
    mismatch = mismatch || !c.match;
  }
  json haupt = {{"coefficients", hc},
                {"reference_mismatch", mismatch},
                {"reference_corner_value", detail::optional_rational(r.reference_corner_value)},
                {"computed_corner_value", r.interval_endpoint ? detail::real_json(*r.interval_endpoint) : json(nullptr)}};

  json eis = nullptr;
  if (r.eisenstein_comparison)
    eis = {{"terms", r.eisenstein_comparison->terms},
           {"alpha_three_divides_d", detail::agreement_json(r.eisenstein_comparison->three_divides_d)},
           {"alpha_d_divides_three", detail::agreement_json(r.eisenstein_comparison->d_divides_three)},
           {"alpha_discrepancy", r.eisenstein_comparison->three_divides_d.match != r.eisenstein_comparison->d_divides_three.match}};

  return {{"schema_version", kReportSchemaVersion},
          {"group", r.group},
          {"weight", r.weight},
          {"dim", r.dim},
          {"degree", r.degree},
          {"polynomial", coeffs},
          {"interval_endpoint", r.interval_endpoint ? detail::real_json(*r.interval_endpoint) : json(nullptr)},
          {"interval_bracket", {r.bracket_lo.get_str(), r.bracket_hi.get_str()}},
          {"precision_bits", r.precision_bits},
          {"counts",
           {{"real", r.counts.real},
            {"nonreal", r.counts.nonreal},
            {"simple", r.counts.simple},
            {"in_interval", r.counts.in_interval},
            {"endpoint_ambiguous", r.counts.endpoint_ambiguous},
            {"exceptions", r.counts.exceptions}}},
          {"roots", roots},
          {"preimage_failures", r.preimage_failures},
          {"c_value", r.c_value},
          {"theorem_pass", r.theorem_pass},
          {"corollary_pass", r.corollary_pass},
          {"corollary_note", r.corollary_note},
          {"hauptmodul_comparison", haupt},
          {"eisenstein_comparison", eis},
          {"cusp_zero_value", detail::optional_rational(r.cusp_zero_value)},
          {"status", to_string(r.status)},
          {"message", r.message}};
}

inline nlohmann::json to_json(const SweepResult& s) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  return {{"schema_version", kReportSchemaVersion},
          {"reports", reports},
          {"summary",
           {{"max_exceptions", s.summary.max_exceptions},
            {"does_not_exist_weights", s.summary.does_not_exist_weights},
            {"failed_weights", s.summary.failed_weights},
            {"all_pass", s.summary.all_pass}}}};
}

}  // namespace eisenzero
