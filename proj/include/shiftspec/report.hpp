#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "shiftspec/io.hpp"

namespace shiftspec {

inline constexpr const char* kVersion = "0.1.0";

struct AnalysisInput {
  json spec;                   // weight spec as JSON
  std::string corpus_id;       // empty unless --corpus
  std::vector<double> params;  // positional corpus parameters
  long horizon = 0;
  Tolerance tol;
  bool estimate_only = false;
  bool verify = false;
};

struct OracleCheck {
  std::string name;
  std::string detail;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct Trace {
  std::string name;
  std::vector<std::pair<long, double>> points;
};

struct LocalEntry {
  std::string vector;  // shorthand description
  json vector_spec;
  LocalSpectrumReport report;
};

struct AnalysisReport {
  AnalysisInput input;
  RadiiReport radii;
  ClassificationReport classification;
  std::vector<LocalEntry> local;
  std::vector<OracleCheck> oracle;
  std::vector<Trace> traces;
  std::vector<std::pair<std::string, double>> timings_ms;
};

namespace detail {

class Stopwatch {
 public:
  double lap_ms() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline std::vector<Trace> radius_traces(const BetaCache& beta) {
  std::vector<Trace> out;
  std::vector<Branch> sides{Branch::Plus};
  if (beta.side() == Side::Bilateral) sides.push_back(Branch::Minus);
  for (Branch b : sides) {
    std::string suffix = beta.side() == Side::Bilateral ? (b == Branch::Plus ? "+" : "-") : "";
    out.push_back({"beta_n^(1/n)" + suffix, root_trace(beta, b, 600)});
    auto [up, lo] = fekete_trace(beta, b, 200);
    Trace tu{"r upper" + suffix, {}}, tl{"r1 lower" + suffix, {}};
    for (std::size_t i = 0; i < up.size(); ++i) {
      tu.points.emplace_back(static_cast<long>(i) + 1, up[i]);
      tl.points.emplace_back(static_cast<long>(i) + 1, lo[i]);
    }
    out.push_back(std::move(tu));
    out.push_back(std::move(tl));
  }
  return out;
}

inline OracleCheck check(std::string name, std::string detail, double value, double threshold) {
  return {std::move(name), std::move(detail), value, threshold, value <= threshold};
}

// Cross-checks against code paths that do not go through the radii estimators.
inline std::vector<OracleCheck> oracle_checks(const BetaCache& beta, const RadiiReport& rep,
                                              const ClassificationReport& cls) {
  std::vector<OracleCheck> out;
  auto e0 = VectorSpec::basis(0);
  auto pn = power_norms(beta, e0, beta.n_plus());
  double r3 = estimate_r2_r3(beta, Branch::Plus).second.value;
  out.push_back(check("local-radius-e0", "|r_S(e_0) - r3 estimate| with r_S(e_0) from power norms up to n = " +
                                             std::to_string(beta.n_plus()),
                      std::fabs(pn.r_local.value - r3), 1e-9 * std::max(1.0, r3)));

  if (beta.side() == Side::Unilateral && beta.zero_indices().empty()) {
    double radius = 1.5 * std::max(rep.r.value, rep.plus.r3.value) + 0.1;
    auto x = VectorSpec::from_map({{0, 1.0}, {1, 1.0}});
    auto rec = contour_reconstruct(beta, x, radius, 512);
    out.push_back(check("contour-reconstruction", "x = e_0 + e_1, radius " + fmt(radius) + ", 512 nodes", rec.distance, 1e-10));
  }

  if (beta.side() == Side::Bilateral && cls.svep_failure.kind == RegionKind::Annulus) {
    double lam = std::sqrt(cls.svep_failure.rho_in * cls.svep_failure.rho_out);
    long trunc = std::min<long>({60, beta.n_plus() - 1, beta.n_minus()});
    double res = eigenvector_residual(beta, cplx(lam, 0.0), trunc);
    out.push_back(check("eigenvector-residual", "lambda = " + fmt(lam) + " inside the SVEP failure annulus, trunc " +
                                                     std::to_string(trunc),
                        res, 1e-10));
  }
  return out;
}

}  // namespace detail

// Runs weights -> radii -> classify, plus the oracle cross-checks when asked.
inline AnalysisReport analyze(const WeightSequence& w, AnalysisInput input) {
  if (input.horizon < 64) throw ShiftError(ErrorCode::InsufficientHorizon, "horizon must be at least 64");
  AnalysisReport out;
  detail::Stopwatch sw;
  long h = input.horizon;
  auto beta = w.side() == Side::Bilateral ? build_beta(w, h, h) : build_beta(w, h);
  out.timings_ms.emplace_back("build_beta", sw.lap_ms());

  ClassifyOptions opt;
  opt.tol = input.tol;
  opt.radii.exact_shortcuts = !input.estimate_only;
  out.radii = compute_radii(w, beta, opt.radii);
  out.timings_ms.emplace_back("radii", sw.lap_ms());
  out.classification = classify(w, beta, out.radii, opt);
  out.timings_ms.emplace_back("classify", sw.lap_ms());
  out.traces = detail::radius_traces(beta);
  out.timings_ms.emplace_back("traces", sw.lap_ms());
  if (input.verify) {
    out.oracle = detail::oracle_checks(beta, out.radii, out.classification);
    out.timings_ms.emplace_back("verify", sw.lap_ms());
  }
  out.input = std::move(input);
  return out;
}

// ---------------------------------------------------------------- JSON

inline json to_json(const Tolerance& t) {
  return json{{"tau_floor", t.tau_floor},
              {"spread_factor", t.spread_factor},
              {"max_rel_spread", t.max_rel_spread},
              {"zero_tol", t.zero_tol},
              {"nonzero_tol", t.nonzero_tol}};
}

inline Tolerance tolerance_from_json(const json& j) {
  Tolerance t;
  t.tau_floor = io::get_num(j, "tau_floor");
  t.spread_factor = io::get_num(j, "spread_factor");
  t.max_rel_spread = io::get_num(j, "max_rel_spread");
  t.zero_tol = io::get_num(j, "zero_tol");
  t.nonzero_tol = io::get_num(j, "nonzero_tol");
  return t;
}

inline json to_json(const AnalysisReport& r, bool with_timing = true) {
  json j;
  j["schema"] = kSchemaVersion;
  j["version"] = kVersion;
  json in;
  in["spec"] = r.input.spec;
  in["corpus"] = r.input.corpus_id.empty() ? json(nullptr) : json(r.input.corpus_id);
  in["params"] = io::num_array(r.input.params);
  in["horizon"] = r.input.horizon;
  in["tolerance"] = to_json(r.input.tol);
  in["estimate_only"] = r.input.estimate_only;
  in["verify"] = r.input.verify;
  j["input"] = in;
  j["radii"] = to_json(r.radii);
  j["classification"] = to_json(r.classification);
  json loc = json::array();
  for (const auto& l : r.local)
    loc.push_back(json{{"vector", l.vector}, {"vector_spec", l.vector_spec}, {"report", to_json(l.report)}});
  j["local"] = loc;
  json orc = json::array();
  for (const auto& c : r.oracle)
    orc.push_back(json{{"name", c.name},
                       {"detail", c.detail},
                       {"value", io::num(c.value)},
                       {"threshold", io::num(c.threshold)},
                       {"passed", c.passed}});
  j["oracle"] = orc;
  json tr = json::array();
  for (const auto& t : r.traces) {
    json n = json::array(), v = json::array();
    for (const auto& [k, x] : t.points) {
      n.push_back(k);
      v.push_back(io::num(x));
    }
    tr.push_back(json{{"name", t.name}, {"n", n}, {"estimate", v}});
  }
  j["traces"] = tr;
  if (with_timing) {
    json tm = json::object();
    for (const auto& [k, ms] : r.timings_ms) tm[k + "_ms"] = ms;
    j["timing"] = tm;
  }
  return j;
}

inline AnalysisReport analysis_from_json(const json& j) {
  if (!j.is_object()) throw ShiftError(ErrorCode::MalformedSpec, "report must be a JSON object");
  if (io::field(j, "schema") != kSchemaVersion)
    throw ShiftError(ErrorCode::MalformedSpec, "unsupported report schema " + j.at("schema").dump());
  AnalysisReport r;
  const json& in = io::field(j, "input");
  r.input.spec = io::field(in, "spec");
  if (!io::field(in, "corpus").is_null()) r.input.corpus_id = in.at("corpus").get<std::string>();
  r.input.params = io::num_list(in, "params");
  r.input.horizon = io::get<long>(in, "horizon");
  r.input.tol = tolerance_from_json(io::field(in, "tolerance"));
  r.input.estimate_only = io::get<bool>(in, "estimate_only");
  r.input.verify = io::get<bool>(in, "verify");
  r.radii = radii_from_json(io::field(j, "radii"));
  r.classification = classification_from_json(io::field(j, "classification"));
  for (const auto& l : io::field(j, "local"))
    r.local.push_back({io::get<std::string>(l, "vector"), io::field(l, "vector_spec"), local_from_json(io::field(l, "report"))});
  for (const auto& c : io::field(j, "oracle"))
    r.oracle.push_back({io::get<std::string>(c, "name"), io::get<std::string>(c, "detail"), io::get_num(c, "value"),
                        io::get_num(c, "threshold"), io::get<bool>(c, "passed")});
  for (const auto& t : io::field(j, "traces")) {
    Trace tr{io::get<std::string>(t, "name"), {}};
    const json& n = io::field(t, "n");
    const json& v = io::field(t, "estimate");
    if (!n.is_array() || !v.is_array() || n.size() != v.size())
      throw ShiftError(ErrorCode::MalformedSpec, "trace '" + tr.name + "' has mismatched columns");
    for (std::size_t i = 0; i < n.size(); ++i) tr.points.emplace_back(n[i].get<long>(), io::to_num(v[i]));
    r.traces.push_back(std::move(tr));
  }
  if (j.contains("timing"))
    for (const auto& [k, v] : j.at("timing").items()) r.timings_ms.emplace_back(k.substr(0, k.size() - 3), io::to_num(v));
  return r;
}

}  // namespace shiftspec
