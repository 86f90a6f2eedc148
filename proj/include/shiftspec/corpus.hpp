#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shiftspec/constructions.hpp"

namespace shiftspec {

// Where an expected value comes from: a published statement, an elementary
// computation, or a value derived here from the definitions.
enum class Source { Literature, Elementary, Computed };

inline const char* to_string(Source s) {
  switch (s) {
    case Source::Literature: return "literature";
    case Source::Elementary: return "elementary";
    case Source::Computed: return "computed";
  }
  return "computed";
}

struct ExpectedRadius {
  double value;
  Source source;
  double tolerance;  // allowed gap for the estimators at `horizon`
  long horizon;
};

struct Annotation {
  std::string property;  // svep, dunford_c, bishop_beta, decomposable, property_q
  std::string subject;   // "S" or "S*"
  bool holds;
  std::string location;
  Source source;
};

struct CorpusEntry {
  std::string id;
  std::string description;
  std::map<std::string, double> default_params;
  long default_horizon;
  std::map<std::string, ExpectedRadius> expected;
  std::vector<Annotation> annotations;
  std::string notes;

  WeightSequence make(const std::map<std::string, double>& params) const { return named_weight(id, params); }
  WeightSequence make() const { return make(default_params); }
};

inline double s_a_numerical_radius(double a) {
  if (a <= std::sqrt(2.0)) return 1.0;
  return a * a / (2.0 * std::sqrt(a * a - 1.0));
}

inline const std::vector<CorpusEntry>& list_corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    const double s2 = std::sqrt(2.0);
    std::vector<CorpusEntry> v;
    v.push_back({"s_a",
                 "w_0 = a, w_n = 1 for n > 0",
                 {{"a", 2.0}},
                 4096,
                 {{"m", {1.0, Source::Literature, 1e-12, 4096}},
                  {"r1", {1.0, Source::Elementary, 1e-12, 4096}},
                  {"r2", {1.0, Source::Elementary, 1e-3, 4096}},
                  {"r3", {1.0, Source::Elementary, 1e-3, 4096}},
                  {"w", {s_a_numerical_radius(2.0), Source::Literature, 1e-4, 4096}}},
                 {{"bishop_beta", "S", true, "s_a example: unitarily equivalent to the unweighted shift", Source::Literature}},
                 "w(S_a) = a^2 / (2 sqrt(a^2 - 1)) for a > sqrt 2 and 1 otherwise"});
    v.push_back({"periodic",
                 "w_n = p[n mod k]",
                 {{"p0", 2.0}, {"p1", 1.0}},
                 2000,
                 {{"r1", {s2, Source::Literature, 1e-3, 2000}},
                  {"r2", {s2, Source::Literature, 1e-3, 2000}},
                  {"r3", {s2, Source::Literature, 1e-3, 2000}},
                  {"r", {s2, Source::Literature, 1e-3, 2000}}},
                 {{"bishop_beta", "S", true, "periodic weights give Bishop's property", Source::Literature},
                  {"dunford_c", "S", true, "Bishop's property implies Dunford's condition", Source::Literature},
                  {"decomposable", "S", false, "unilateral shifts are decomposable only when quasi-nilpotent",
                   Source::Literature}},
                 "geometric mean of the period decides every radius"});
    v.push_back({"hyponormal_step",
                 "w_n = 2 for n >= 0, 1 for n < 0",
                 {},
                 4096,
                 {{"r1", {1.0, Source::Literature, 1e-9, 4096}},
                  {"r", {2.0, Source::Literature, 1e-9, 4096}},
                  {"q", {1.0, Source::Computed, 1e-9, 4096}}},
                 {{"bishop_beta", "S", true, "hyponormal step example: hyponormal, hence Bishop's property", Source::Literature},
                  {"svep", "S", true, "hyponormal step example", Source::Computed}},
                 "spectrum is the annulus 1 <= |z| <= 2"});
    v.push_back({"atzmon",
                 "w_n = exp(psi(n+1) - psi(n)), psi(x) = |x| sin(log log log(|x| + e^3)) / log(|x| + e)",
                 {},
                 10000,
                 {{"r1", {1.0, Source::Literature, 0.15, 10000}}, {"r", {1.0, Source::Literature, 0.15, 10000}}},
                 {{"dunford_c", "S", true, "almost periodic example: flat local spectra", Source::Literature},
                  {"dunford_c", "S*", true, "almost periodic example: flat local spectra", Source::Literature},
                  {"bishop_beta", "S", false, "almost periodic example", Source::Literature},
                  {"bishop_beta", "S*", false, "almost periodic example", Source::Literature},
                  {"decomposable", "S", false, "decomposable iff S and S* both have Bishop's property", Source::Literature}},
                 "weights tend to 1; estimates approach the radii only like 1/log n"});
    v.push_back({"ridge",
                 "blocks of k^2 weights, the first k equal to 2 and the rest 1",
                 {},
                 10000,
                 {{"r1", {1.0, Source::Literature, 0.05, 10000}},
                  {"r3", {1.0, Source::Literature, 0.05, 10000}},
                  {"r", {2.0, Source::Literature, 1e-6, 10000}},
                  {"m", {1.0, Source::Computed, 1e-12, 10000}}},
                 {{"property_q", "S", true, "ridge example: property (Q) without condition (C)", Source::Literature},
                  {"dunford_c", "S", false, "ridge example: property (Q) without condition (C)", Source::Literature}},
                 "r3 estimates sit above 1 at any finite horizon since every beta_n >= 1"});
    v.push_back({"ki_gap",
                 "k_1 = 1, k_{i+1} = (i+1) k_i + 1; w_{k_i - 1} = 2^{-i k_i}, otherwise 2",
                 {},
                 10000,
                 {{"r2", {0.0, Source::Literature, 0.02, 10000}}, {"r3", {1.0, Source::Literature, 1e-3, 10000}}},
                 {{"svep", "S*", true, "k_i example: adjoint has SVEP", Source::Literature},
                  {"property_q", "S*", false, "k_i example: adjoint lacks property (Q)", Source::Literature}},
                 "k_7 = 8660 is the last gap inside a horizon of 10^4"});
    v.push_back({"square_zeros",
                 "w_n = 0 at perfect squares, 1 elsewhere",
                 {},
                 4096,
                 {{"r", {1.0, Source::Literature, 1e-9, 4096}},
                  {"r2", {0.0, Source::Elementary, 0.0, 4096}},
                  {"r3", {0.0, Source::Elementary, 0.0, 4096}}},
                 {{"property_q", "S", false, "square zeros example: ||S^n|| = 1", Source::Literature},
                  {"svep", "S", true, "point spectrum is {0}", Source::Literature}},
                 "infinitely many zero weights"});
    v.push_back({"reciprocal_step",
                 "w_n = 1/2 for n >= 0, 2 for n < 0",
                 {},
                 4096,
                 {{"r3_plus", {0.5, Source::Computed, 1e-9, 4096}},
                  {"r2_minus", {2.0, Source::Computed, 1e-9, 4096}},
                  {"q", {0.5, Source::Computed, 1e-9, 4096}},
                  {"r", {2.0, Source::Computed, 1e-9, 4096}}},
                 {{"svep", "S", false, "SVEP criterion r2- <= r3+ fails", Source::Computed}},
                 "S has SVEP exactly when r2- <= r3+"});
    return v;
  }();
  return entries;
}

inline const CorpusEntry& corpus_entry(const std::string& id) {
  for (const auto& e : list_corpus())
    if (e.id == id) return e;
  throw ShiftError(ErrorCode::UnknownConstruction, "no corpus entry '" + id + "'");
}

// Radii the literature pins down exactly for a named construction, used to
// override finite-horizon estimates that converge too slowly to be useful.
inline std::map<std::string, double> annotated_exact_radii(const WeightSequence& w) {
  auto* nw = std::get_if<NamedWeights>(&w.structure());
  if (!nw) return {};
  if (nw->id == "atzmon")
    return {{"r1_minus", 1.0}, {"r2_minus", 1.0}, {"r3_minus", 1.0}, {"r_minus", 1.0}, {"r1_plus", 1.0},
            {"r2_plus", 1.0},  {"r3_plus", 1.0},  {"r_plus", 1.0},   {"r1", 1.0},       {"r", 1.0},
            {"q", 1.0}};
  if (nw->id == "s_a") return {{"w", s_a_numerical_radius(nw->params.at("a"))}};
  if (nw->id == "ki_gap") return {{"r1", 0.0}, {"r2", 0.0}, {"r3", 1.0}};
  if (nw->id == "square_zeros") return {{"r", 1.0}};
  return {};
}

}  // namespace shiftspec
