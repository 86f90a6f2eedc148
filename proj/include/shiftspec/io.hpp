#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shiftspec/classify.hpp"
#include "shiftspec/local.hpp"

namespace shiftspec {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace io {

// Non-finite doubles are written as the strings "inf", "-inf", "nan".
inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double to_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ShiftError(ErrorCode::MalformedSpec, "expected a number, got " + j.dump());
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ShiftError(ErrorCode::MalformedSpec, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ShiftError(ErrorCode::MalformedSpec, std::string("field '") + key + "': " + e.what());
  }
}

inline double get_num(const json& j, const char* key) { return to_num(field(j, key)); }

inline std::vector<double> num_list(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& a = j.at(key);
  if (!a.is_array()) throw ShiftError(ErrorCode::MalformedSpec, std::string("field '") + key + "' must be an array");
  for (const auto& x : a) out.push_back(to_num(x));
  return out;
}

inline json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline Side side_from_string(const std::string& s) {
  if (s == "unilateral") return Side::Unilateral;
  if (s == "bilateral") return Side::Bilateral;
  throw ShiftError(ErrorCode::MalformedSpec, "side must be 'unilateral' or 'bilateral', got '" + s + "'");
}

inline ExactReason reason_from_string(const std::string& s) {
  for (auto r : {ExactReason::PeriodicGeometricMean, ExactReason::Constant, ExactReason::QuasiNilpotentStructural,
                 ExactReason::CorpusAnnotation})
    if (s == to_string(r)) return r;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown exactness reason '" + s + "'");
}

inline Source source_from_string(const std::string& s) {
  for (auto v : {Source::Literature, Source::Elementary, Source::Computed})
    if (s == to_string(v)) return v;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown source '" + s + "'");
}

inline Tri tri_from_string(const std::string& s) {
  for (auto v : {Tri::True, Tri::False, Tri::Undecidable})
    if (s == to_string(v)) return v;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown truth value '" + s + "'");
}

inline Invertibility invertibility_from_string(const std::string& s) {
  if (s == "invertible") return Invertibility::Invertible;
  if (s == "not-invertible") return Invertibility::NotInvertible;
  if (s == "undeclared") return Invertibility::Undeclared;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown invertibility '" + s + "'");
}

inline const char* to_string(Invertibility v) {
  switch (v) {
    case Invertibility::Invertible: return "invertible";
    case Invertibility::NotInvertible: return "not-invertible";
    case Invertibility::Undeclared: return "undeclared";
  }
  return "undeclared";
}

}  // namespace io

// ---------------------------------------------------------------- weight specs

// {schema: 1, side, structure: {type, ...}, bound}
//   explicit            values, minus_values, tail
//   periodic            period
//   eventually_periodic prefix, period, minus_prefix, minus_period
//   formula             name, params
//   named               id, params
inline json weight_spec_to_json(const WeightSequence& w) {
  json s;
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, ExplicitWeights>) {
          s["type"] = "explicit";
          s["values"] = io::num_array(st.values);
          s["minus_values"] = io::num_array(st.minus_values);
          s["tail"] = io::num(st.tail);
        } else if constexpr (std::is_same_v<T, PeriodicWeights>) {
          s["type"] = "periodic";
          s["period"] = io::num_array(st.period);
        } else if constexpr (std::is_same_v<T, EventuallyPeriodicWeights>) {
          s["type"] = "eventually_periodic";
          s["prefix"] = io::num_array(st.prefix);
          s["period"] = io::num_array(st.period);
          s["minus_prefix"] = io::num_array(st.minus_prefix);
          s["minus_period"] = io::num_array(st.minus_period);
        } else if constexpr (std::is_same_v<T, FormulaWeights>) {
          s["type"] = "formula";
          s["name"] = st.name;
          s["params"] = st.params;
        } else if constexpr (std::is_same_v<T, NamedWeights>) {
          s["type"] = "named";
          s["id"] = st.id;
          s["params"] = st.params;
        } else {
          throw ShiftError(ErrorCode::InvalidArgument, "derived sequence '" + st.description + "' has no JSON form");
        }
      },
      w.structure());
  json j;
  j["schema"] = kSchemaVersion;
  j["side"] = to_string(w.side());
  j["structure"] = s;
  j["bound"] = io::num(w.bound());
  return j;
}

inline WeightSequence weight_spec_from_json(const json& j) {
  if (!j.is_object()) throw ShiftError(ErrorCode::MalformedSpec, "weight spec must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion)
    throw ShiftError(ErrorCode::MalformedSpec, "unsupported schema version " + j.at("schema").dump());
  Side side = io::side_from_string(io::get<std::string>(j, "side"));
  const json& s = io::field(j, "structure");
  auto type = io::get<std::string>(s, "type");
  std::optional<double> bound;
  if (j.contains("bound") && !j.at("bound").is_null()) bound = io::to_num(j.at("bound"));

  static const std::map<std::string, std::vector<std::string>> allowed{
      {"explicit", {"values", "minus_values", "tail"}},
      {"periodic", {"period"}},
      {"eventually_periodic", {"prefix", "period", "minus_prefix", "minus_period"}},
      {"formula", {"name", "params"}},
      {"named", {"id", "params"}}};
  if (auto it = allowed.find(type); it != allowed.end())
    for (const auto& [k, v] : s.items())
      if (k != "type" && std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw ShiftError(ErrorCode::MalformedSpec, "unexpected field '" + k + "' in a " + type + " structure");

  auto params = [&]() {
    std::map<std::string, double> p;
    if (s.contains("params"))
      for (const auto& [k, v] : s.at("params").items()) p[k] = io::to_num(v);
    return p;
  };

  if (type == "explicit") {
    io::field(s, "values");
    auto values = io::num_list(s, "values");
    auto minus = io::num_list(s, "minus_values");
    double tail = s.contains("tail") ? io::to_num(s.at("tail")) : 1.0;
    double b = bound.value_or(std::max({tail, values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()),
                                        minus.empty() ? 0.0 : *std::max_element(minus.begin(), minus.end()), 1e-300}));
    return WeightSequence::from_list(side, values, minus, tail, b);
  }
  if (type == "periodic") return WeightSequence::periodic(side, io::num_list(s, "period"), bound);
  if (type == "eventually_periodic")
    return WeightSequence::eventually_periodic(side, io::num_list(s, "prefix"), io::num_list(s, "period"),
                                               io::num_list(s, "minus_prefix"), io::num_list(s, "minus_period"), bound);
  if (type == "formula") {
    auto w = WeightSequence::formula(side, io::get<std::string>(s, "name"), params());
    if (bound && w.bound() > *bound)
      throw ShiftError(ErrorCode::BoundExceeded, "formula weights exceed the declared bound");
    return w;
  }
  if (type == "named") {
    auto w = named_weight(io::get<std::string>(s, "id"), params());
    if (w.side() != side)
      throw ShiftError(ErrorCode::MalformedSpec, "construction '" + w.label() + "' is " + to_string(w.side()));
    return w;
  }
  throw ShiftError(ErrorCode::MalformedSpec, "unknown structure type '" + type + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShiftError(ErrorCode::MalformedSpec, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ShiftError(ErrorCode::MalformedSpec, "'" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------- vectors

// {type: "explicit", coefficients: [[n, re, im], ...]}
// {type: "geometric", ratio_plus: [re, im], ratio_minus: [re, im], scale}
inline json vector_to_json(const VectorSpec& x) {
  json j;
  if (x.kind() == VectorSpec::Kind::Explicit) {
    j["type"] = "explicit";
    json c = json::array();
    for (const auto& [n, a] : x.coefficients()) c.push_back(json::array({n, a.real(), a.imag()}));
    j["coefficients"] = c;
  } else {
    j["type"] = "geometric";
    j["ratio_plus"] = json::array({x.ratio_plus().real(), x.ratio_plus().imag()});
    j["ratio_minus"] = json::array({x.ratio_minus().real(), x.ratio_minus().imag()});
    j["scale"] = x.scale();
  }
  return j;
}

inline VectorSpec vector_from_json(const json& j) {
  auto type = io::get<std::string>(j, "type");
  auto complex_of = [](const json& a) {
    if (!a.is_array() || a.size() != 2) throw ShiftError(ErrorCode::MalformedSpec, "complex numbers are [re, im] pairs");
    return cplx(io::to_num(a[0]), io::to_num(a[1]));
  };
  if (type == "explicit") {
    std::map<long, cplx> m;
    for (const auto& c : io::field(j, "coefficients")) {
      if (!c.is_array() || c.size() < 2 || c.size() > 3)
        throw ShiftError(ErrorCode::MalformedSpec, "coefficients are [n, re] or [n, re, im]");
      m[c[0].get<long>()] += cplx(io::to_num(c[1]), c.size() == 3 ? io::to_num(c[2]) : 0.0);
    }
    return VectorSpec::from_map(std::move(m));
  }
  if (type == "geometric") {
    cplx rm = j.contains("ratio_minus") ? complex_of(j.at("ratio_minus")) : cplx(0.0);
    double scale = j.contains("scale") ? io::to_num(j.at("scale")) : 1.0;
    return VectorSpec::geometric(complex_of(io::field(j, "ratio_plus")), rm, scale);
  }
  throw ShiftError(ErrorCode::MalformedSpec, "unknown vector type '" + type + "'");
}

// Command-line shorthand: "e0", "e0+e1", "2*e3+0.5*e-1", "geometric:0.5" or
// "geometric:0.5,0.25" (plus and minus ratios).
inline VectorSpec parse_vector(const std::string& text) {
  auto bad = [&]() { return ShiftError(ErrorCode::MalformedSpec, "cannot parse vector '" + text + "'"); };
  if (text.rfind("geometric:", 0) == 0) {
    std::stringstream ss(text.substr(10));
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      return VectorSpec::geometric(std::stod(a), b.empty() ? 0.0 : std::stod(b));
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  std::map<long, cplx> m;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t e = text.find('e', pos);
    if (e == std::string::npos) throw bad();
    double coef = 1.0;
    if (e > pos) {
      std::string c = text.substr(pos, e - pos);
      if (c.back() != '*') throw bad();
      try {
        coef = std::stod(c.substr(0, c.size() - 1));
      } catch (const std::logic_error&) {
        throw bad();
      }
    }
    // The index may be negative, so the next term starts at the first '+' after it.
    std::size_t end = text.find('+', e + 2);
    std::string idx = text.substr(e + 1, end == std::string::npos ? std::string::npos : end - e - 1);
    try {
      std::size_t used = 0;
      long n = std::stol(idx, &used);
      if (used != idx.size()) throw bad();
      m[n] += coef;
    } catch (const std::logic_error&) {
      throw bad();
    }
    pos = end == std::string::npos ? text.size() : end + 1;
  }
  if (m.empty()) throw bad();
  return VectorSpec::from_map(std::move(m));
}

inline std::string describe_vector(const VectorSpec& x) {
  if (x.kind() == VectorSpec::Kind::Geometric)
    return "geometric(" + detail::fmt(std::abs(x.ratio_plus())) + ", " + detail::fmt(std::abs(x.ratio_minus())) + ")";
  std::string s;
  for (const auto& [n, a] : x.coefficients()) {
    if (!s.empty()) s += " + ";
    if (a != cplx(1.0)) s += detail::fmt(a.real()) + (a.imag() != 0 ? "+" + detail::fmt(a.imag()) + "i" : "") + "*";
    s += "e" + std::to_string(n);
  }
  return s;
}

// ---------------------------------------------------------------- radii

inline json to_json(const RadiusEstimate& e) {
  json j;
  j["value"] = io::num(e.value);
  j["exact"] = e.exact;
  if (e.exact) {
    j["reason"] = to_string(e.reason);
  }
  json d;
  d["horizon"] = e.diag.horizon;
  d["spread"] = io::num(e.diag.spread);
  d["monotone"] = e.diag.monotone;
  d["note"] = e.diag.note;
  if (e.diag.upper < kInf) d["upper"] = io::num(e.diag.upper);
  j["diagnostic"] = d;
  return j;
}

inline RadiusEstimate radius_from_json(const json& j) {
  RadiusEstimate e;
  e.value = io::get_num(j, "value");
  e.exact = io::get<bool>(j, "exact");
  if (e.exact) e.reason = io::reason_from_string(io::get<std::string>(j, "reason"));
  const json& d = io::field(j, "diagnostic");
  e.diag.horizon = io::get<long>(d, "horizon");
  e.diag.spread = io::get_num(d, "spread");
  e.diag.monotone = io::get<bool>(d, "monotone");
  e.diag.note = io::get<std::string>(d, "note");
  if (d.contains("upper")) e.diag.upper = io::to_num(d.at("upper"));
  return e;
}

inline json to_json(const SideRadii& s) {
  return json{{"r1", to_json(s.r1)}, {"r2", to_json(s.r2)}, {"r3", to_json(s.r3)}, {"r", to_json(s.r)}};
}

inline SideRadii side_radii_from_json(const json& j) {
  return {radius_from_json(io::field(j, "r1")), radius_from_json(io::field(j, "r2")), radius_from_json(io::field(j, "r3")),
          radius_from_json(io::field(j, "r"))};
}

inline json to_json(const RadiiReport& r) {
  json j;
  j["side"] = to_string(r.side);
  j["plus"] = to_json(r.plus);
  j["minus"] = r.minus ? to_json(*r.minus) : json(nullptr);
  j["r1"] = to_json(r.r1);
  j["r"] = to_json(r.r);
  j["q"] = r.q ? to_json(*r.q) : json(nullptr);
  j["m"] = to_json(r.m);
  j["w"] = to_json(r.w);
  j["norm"] = to_json(r.norm);
  j["invertibility"] = io::to_string(r.invertibility);
  j["invertibility_presumed"] = r.invertibility_presumed;
  j["chain_ok"] = r.chain_ok;
  j["chain_violations"] = r.chain_violations;
  return j;
}

inline RadiiReport radii_from_json(const json& j) {
  RadiiReport r;
  r.side = io::side_from_string(io::get<std::string>(j, "side"));
  r.plus = side_radii_from_json(io::field(j, "plus"));
  if (!io::field(j, "minus").is_null()) r.minus = side_radii_from_json(j.at("minus"));
  r.r1 = radius_from_json(io::field(j, "r1"));
  r.r = radius_from_json(io::field(j, "r"));
  if (!io::field(j, "q").is_null()) r.q = radius_from_json(j.at("q"));
  r.m = radius_from_json(io::field(j, "m"));
  r.w = radius_from_json(io::field(j, "w"));
  r.norm = radius_from_json(io::field(j, "norm"));
  r.invertibility = io::invertibility_from_string(io::get<std::string>(j, "invertibility"));
  r.invertibility_presumed = io::get<bool>(j, "invertibility_presumed");
  r.chain_ok = io::get<bool>(j, "chain_ok");
  r.chain_violations = io::get<std::vector<std::string>>(j, "chain_violations");
  return r;
}

// ---------------------------------------------------------------- regions and verdicts

inline json to_json(const SpectralRegion& r) {
  return json{{"kind", to_string(r.kind)},
              {"rho_in", io::num(r.rho_in)},
              {"rho_out", io::num(r.rho_out)},
              {"closed_in", r.closed_in},
              {"closed_out", r.closed_out}};
}

inline SpectralRegion region_from_json(const json& j) {
  SpectralRegion r;
  r.kind = region_kind_from_string(io::get<std::string>(j, "kind"));
  r.rho_in = io::get_num(j, "rho_in");
  r.rho_out = io::get_num(j, "rho_out");
  r.closed_in = io::get<bool>(j, "closed_in");
  r.closed_out = io::get<bool>(j, "closed_out");
  return r;
}

inline json to_json(const Verdict& v) {
  return json{{"status", to_string(v.status)}, {"basis", v.basis}, {"caveat", v.caveat}};
}

inline Verdict verdict_from_json(const json& j) {
  Verdict v{status_from_string(io::get<std::string>(j, "status")), io::get<std::string>(j, "basis"),
            io::get<std::string>(j, "caveat")};
  if (v.basis.empty()) throw ShiftError(ErrorCode::MalformedSpec, "verdict without a basis");
  return v;
}

inline json to_json(const PropertyVerdicts& p) {
  json j;
  for (const auto& name : property_names()) j[name] = to_json(p.get(name));
  return j;
}

inline PropertyVerdicts verdicts_from_json(const json& j) {
  PropertyVerdicts p;
  for (const auto& name : property_names()) p.get(name) = verdict_from_json(io::field(j, name.c_str()));
  return p;
}

inline json to_json(const AnnotationCheck& a) {
  return json{{"property", a.annotation.property},
              {"subject", a.annotation.subject},
              {"expected", a.annotation.holds ? "Holds" : "Fails"},
              {"location", a.annotation.location},
              {"source", to_string(a.annotation.source)},
              {"engine", to_string(a.engine)},
              {"conflict", a.conflict}};
}

inline AnnotationCheck annotation_from_json(const json& j) {
  AnnotationCheck a;
  a.annotation.property = io::get<std::string>(j, "property");
  a.annotation.subject = io::get<std::string>(j, "subject");
  a.annotation.holds = io::get<std::string>(j, "expected") == "Holds";
  a.annotation.location = io::get<std::string>(j, "location");
  a.annotation.source = io::source_from_string(io::get<std::string>(j, "source"));
  a.engine = status_from_string(io::get<std::string>(j, "engine"));
  a.conflict = io::get<bool>(j, "conflict");
  return a;
}

inline json to_json(const ClassificationReport& c) {
  json j;
  j["side"] = to_string(c.side);
  j["S"] = to_json(c.subject);
  j["S*"] = to_json(c.adjoint);
  json regions;
  regions["spectrum"] = to_json(c.spectrum);
  regions["approximate_point"] = to_json(c.approximate_point);
  regions["svep_failure"] = to_json(c.svep_failure);
  regions["svep_failure_adjoint"] = to_json(c.svep_failure_adjoint);
  regions["sigma_beta_candidate"] = to_json(c.sigma_beta_candidate);
  j["regions"] = regions;
  j["approximate_point_exact"] = c.approximate_point_exact;
  j["approximate_point_caveat"] = c.approximate_point_caveat;
  j["h0_dense"] = to_string(c.h0_dense);
  j["h0_dense_basis"] = c.h0_dense_basis;
  json ann = json::array();
  for (const auto& a : c.annotations) ann.push_back(to_json(a));
  j["annotations"] = ann;
  j["annotation_conflicts"] = c.annotation_conflicts();
  j["notes"] = c.notes;
  return j;
}

inline ClassificationReport classification_from_json(const json& j) {
  ClassificationReport c;
  c.side = io::side_from_string(io::get<std::string>(j, "side"));
  c.subject = verdicts_from_json(io::field(j, "S"));
  c.adjoint = verdicts_from_json(io::field(j, "S*"));
  const json& r = io::field(j, "regions");
  c.spectrum = region_from_json(io::field(r, "spectrum"));
  c.approximate_point = region_from_json(io::field(r, "approximate_point"));
  c.svep_failure = region_from_json(io::field(r, "svep_failure"));
  c.svep_failure_adjoint = region_from_json(io::field(r, "svep_failure_adjoint"));
  c.sigma_beta_candidate = region_from_json(io::field(r, "sigma_beta_candidate"));
  c.approximate_point_exact = io::get<bool>(j, "approximate_point_exact");
  c.approximate_point_caveat = io::get<std::string>(j, "approximate_point_caveat");
  c.h0_dense = io::tri_from_string(io::get<std::string>(j, "h0_dense"));
  c.h0_dense_basis = io::get<std::string>(j, "h0_dense_basis");
  for (const auto& a : io::field(j, "annotations")) c.annotations.push_back(annotation_from_json(a));
  c.notes = io::get<std::vector<std::string>>(j, "notes");
  return c;
}

// ---------------------------------------------------------------- local spectra

inline json to_json(const LocalSpectrumReport& l) {
  json j;
  j["region"] = to_json(l.region.region);
  j["lower_bound"] = l.region.lower_bound;
  json c = json::array();
  for (const auto& r : l.contained) c.push_back(to_json(r));
  j["contained"] = c;
  auto opt = [](const std::optional<RadiusEstimate>& e) { return e ? to_json(*e) : json(nullptr); };
  j["r_omega"] = opt(l.r_omega);
  j["r_omega_minus"] = opt(l.r_omega_minus);
  j["r_omega_plus"] = opt(l.r_omega_plus);
  j["r_local"] = to_json(l.r_local);
  j["case"] = l.case_tag;
  j["caveat"] = l.caveat;
  return j;
}

inline LocalSpectrumReport local_from_json(const json& j) {
  LocalSpectrumReport l;
  l.region.region = region_from_json(io::field(j, "region"));
  l.region.lower_bound = io::get<bool>(j, "lower_bound");
  for (const auto& r : io::field(j, "contained")) l.contained.push_back(region_from_json(r));
  auto opt = [&](const char* key) -> std::optional<RadiusEstimate> {
    const json& v = io::field(j, key);
    if (v.is_null()) return std::nullopt;
    return radius_from_json(v);
  };
  l.r_omega = opt("r_omega");
  l.r_omega_minus = opt("r_omega_minus");
  l.r_omega_plus = opt("r_omega_plus");
  l.r_local = radius_from_json(io::field(j, "r_local"));
  l.case_tag = io::get<std::string>(j, "case");
  l.caveat = io::get<std::string>(j, "caveat");
  return l;
}

inline json to_json(const MembershipVerdict& m) {
  return json{{"re", m.lambda.real()},
              {"im", m.lambda.imag()},
              {"decision", to_string(m.decision)},
              {"evidence", m.evidence},
              {"log_ratio", io::num(m.log_ratio)}};
}

}  // namespace shiftspec
