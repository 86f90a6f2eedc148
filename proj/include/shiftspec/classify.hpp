#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftspec/compare.hpp"
#include "shiftspec/corpus.hpp"
#include "shiftspec/radii.hpp"
#include "shiftspec/region.hpp"
#include "shiftspec/weights.hpp"

namespace shiftspec {

enum class Status { Holds, Fails, Unknown, NotApplicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::Unknown: return "Unknown";
    case Status::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

inline Status status_from_string(const std::string& s) {
  for (auto v : {Status::Holds, Status::Fails, Status::Unknown, Status::NotApplicable})
    if (s == to_string(v)) return v;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown verdict status '" + s + "'");
}

struct Verdict {
  Status status = Status::Unknown;
  std::string basis;
  std::string caveat;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline Verdict holds(std::string basis, std::string caveat = {}) { return {Status::Holds, std::move(basis), std::move(caveat)}; }
inline Verdict fails(std::string basis, std::string caveat = {}) { return {Status::Fails, std::move(basis), std::move(caveat)}; }
inline Verdict unknown(std::string basis, std::string caveat = {}) {
  return {Status::Unknown, std::move(basis), std::move(caveat)};
}

inline const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {"svep", "dunford_c", "bishop_beta", "decomposable", "property_q"};
  return names;
}

struct PropertyVerdicts {
  Verdict svep, dunford_c, bishop_beta, decomposable, property_q;

  Verdict& get(const std::string& name) {
    if (name == "svep") return svep;
    if (name == "dunford_c") return dunford_c;
    if (name == "bishop_beta") return bishop_beta;
    if (name == "decomposable") return decomposable;
    if (name == "property_q") return property_q;
    throw ShiftError(ErrorCode::InvalidArgument, "unknown property '" + name + "'");
  }
  const Verdict& get(const std::string& name) const { return const_cast<PropertyVerdicts*>(this)->get(name); }

  friend bool operator==(const PropertyVerdicts&, const PropertyVerdicts&) = default;
};

struct AnnotationCheck {
  Annotation annotation;
  Status engine = Status::Unknown;
  bool conflict = false;
};

struct ClassificationReport {
  Side side = Side::Unilateral;
  PropertyVerdicts subject;  // S
  PropertyVerdicts adjoint;  // S*
  SpectralRegion spectrum;
  SpectralRegion approximate_point;
  bool approximate_point_exact = true;
  std::string approximate_point_caveat;
  SpectralRegion svep_failure;          // where S lacks SVEP
  SpectralRegion svep_failure_adjoint;  // where S* lacks SVEP
  SpectralRegion sigma_beta_candidate;
  Tri h0_dense = Tri::Undecidable;  // unilateral: H_0(S) dense iff r3 = 0
  std::string h0_dense_basis;
  std::vector<AnnotationCheck> annotations;
  std::vector<std::string> notes;

  long annotation_conflicts() const {
    return static_cast<long>(std::count_if(annotations.begin(), annotations.end(), [](const auto& a) { return a.conflict; }));
  }
};

// Structural facts about the operator a report belongs to.
struct ShiftFacts {
  bool periodic = false;
};

// ---------------------------------------------------------------- regions

inline SpectralRegion spectrum(const RadiiReport& rep) {
  if (rep.side == Side::Unilateral) return disc(rep.r.value);
  double q = rep.q ? rep.q->value : 0.0;
  return annulus(q, rep.r.value);
}

struct ApproxPointSpectrum {
  SpectralRegion region;
  bool exact = true;
  std::string caveat;
};

namespace detail {

inline const RadiusEstimate& q_of(const RadiiReport& rep) {
  static const RadiusEstimate zero = RadiusEstimate::make_exact(0.0, ExactReason::QuasiNilpotentStructural);
  return rep.q ? *rep.q : zero;
}

// (qs1) and (qs2): each side's radii collapse to one value, q on the minus
// side and r on the plus side.
inline std::vector<Comparison> qs_conditions(const RadiiReport& rep, const Tolerance& tol) {
  const auto& mi = *rep.minus;
  const auto& pl = rep.plus;
  std::vector<Comparison> out;
  if (rep.invertible()) {
    out.push_back(approx_eq(q_of(rep), mi.r1, "q", "r1-", tol));
    out.push_back(approx_eq(mi.r1, mi.r2, "r1-", "r2-", tol));
    out.push_back(approx_eq(mi.r2, mi.r3, "r2-", "r3-", tol));
    out.push_back(approx_eq(mi.r3, mi.r, "r3-", "r-", tol));
  }
  out.push_back(approx_eq(pl.r1, pl.r2, "r1+", "r2+", tol));
  out.push_back(approx_eq(pl.r2, pl.r3, "r2+", "r3+", tol));
  out.push_back(approx_eq(pl.r3, pl.r, "r3+", "r+", tol));
  out.push_back(approx_eq(pl.r, rep.r, "r+", "r", tol));
  return out;
}

inline Tri all_true(const std::vector<Comparison>& cs) {
  bool und = false;
  for (const auto& c : cs) {
    if (c.is_false()) return Tri::False;
    if (!c.decided()) und = true;
  }
  return und ? Tri::Undecidable : Tri::True;
}

inline std::string joined(const std::vector<Comparison>& cs) {
  std::string s;
  for (const auto& c : cs) s += (s.empty() ? "" : "; ") + c.text;
  return s;
}

inline const Comparison* first_false(const std::vector<Comparison>& cs) {
  for (const auto& c : cs)
    if (c.is_false()) return &c;
  return nullptr;
}

}  // namespace detail

inline ApproxPointSpectrum approximate_point_spectrum(const RadiiReport& rep, const Tolerance& tol = {}) {
  ApproxPointSpectrum out;
  if (rep.side == Side::Unilateral) {
    auto c = approx_eq(rep.r1, rep.r, "r1", "r", tol);
    if (c) {
      out.region = circle(rep.r.value);
    } else {
      out.region = annulus(rep.r1.value, rep.r.value);
      out.exact = false;
      out.caveat = "r1 < r: reported as the enclosing annulus, inner structure not resolved";
    }
    return out;
  }
  auto qs = detail::qs_conditions(rep, tol);
  bool ok = detail::all_true(qs) == Tri::True;
  if (rep.invertible()) {
    if (ok) return {two_circles(detail::q_of(rep).value, rep.r.value), true, {}};
    return {annulus(detail::q_of(rep).value, rep.r.value), false, "radius conditions not met: outer bound only"};
  }
  // Non-invertible: only the plus-side conditions matter here.
  if (ok) return {disc_and_circle(rep.minus->r.value, rep.r.value), true, {}};
  return {disc(rep.r.value), false, "radius conditions not met: outer bound only"};
}

// ---------------------------------------------------------------- unilateral rules

namespace rules {

inline Verdict unilateral_svep() { return holds("unilateral-svep: the point spectrum of S is empty"); }

inline std::pair<Verdict, SpectralRegion> unilateral_adjoint_svep(const RadiiReport& rep, const Tolerance& tol) {
  auto z = is_zero(rep.r2(), "r2", tol);
  std::string basis = "adjoint-svep[r2 = 0]: " + z.text;
  if (z.result == Tri::True) return {holds(basis), empty_region()};
  if (z.result == Tri::False) return {fails(basis), disc(rep.r2().value, false)};
  return {unknown(basis), empty_region()};
}

inline Verdict unilateral_dunford(const RadiiReport& rep, const ShiftFacts& facts, const Tolerance& tol) {
  auto qn = is_zero(rep.r, "r", tol);
  if (qn) return holds("quasi-nilpotent: " + qn.text);
  if (facts.periodic) return holds("periodic-weights: Bishop's property, which implies (C)");
  auto nec = approx_eq(rep.r, rep.r3(), "r", "r3", tol);
  if (nec.is_false()) return fails("dunford-necessary[r = r3]: " + nec.text);
  auto mw = approx_eq(rep.m, rep.w, "m", "w", tol);
  if (mw) return holds("numerical-range[m = w]: decomposable, " + mw.text);
  auto c23 = approx_eq(rep.r2(), rep.r3(), "r2", "r3", tol);
  if (c23 && nec) return holds("convergent-roots[r2 = r3 = r]: " + c23.text + "; " + nec.text);
  return unknown("dunford-necessary[r = r3]: " + nec.text,
                 "r = r3 is necessary; whether it suffices without convergent roots is open");
}

inline std::pair<Verdict, SpectralRegion> unilateral_bishop(const RadiiReport& rep, const ShiftFacts& facts,
                                                            const Tolerance& tol) {
  auto nec = approx_eq(rep.r1, rep.r, "r1", "r", tol);
  SpectralRegion cand = nec ? circle(rep.r.value) : annulus(rep.r1.value, rep.r.value);
  auto qn = is_zero(rep.r, "r", tol);
  if (qn) return {holds("quasi-nilpotent: " + qn.text), disc(0.0)};
  if (facts.periodic) return {holds("periodic-weights: Bishop's property"), cand};
  if (nec.is_false()) return {fails("bishop-necessary[r1 = r]: " + nec.text), cand};
  auto mw = approx_eq(rep.m, rep.w, "m", "w", tol);
  if (mw) return {holds("numerical-range[m = w]: " + mw.text), cand};
  return {unknown("bishop-necessary[r1 = r]: " + nec.text,
                  "with r1 = r either (beta) holds or sigma_beta is the circle |z| = r"),
          cand};
}

inline Verdict unilateral_decomposable(const RadiiReport& rep, const Tolerance& tol) {
  auto qn = is_zero(rep.r, "r", tol);
  std::string basis = "unilateral-decomposable[r = 0]: " + qn.text;
  if (qn.result == Tri::True) return holds(basis);
  if (qn.result == Tri::False) return fails(basis);
  return unknown(basis);
}

struct PropertyQ {
  Verdict verdict;
  Comparison dense;  // H_0(S) dense iff r3 = 0
};

inline PropertyQ unilateral_property_q(const RadiiReport& rep, const Tolerance& tol) {
  auto z3 = is_zero(rep.r3(), "r3", tol);
  auto qn = is_zero(rep.r, "r", tol);
  std::string basis = "property-q[r3 > 0 or r = 0]: " + z3.text + "; " + qn.text;
  PropertyQ out{unknown(basis), z3};
  if (z3.is_false() || qn) out.verdict = holds(basis);
  else if (z3 && qn.is_false()) out.verdict = fails(basis);
  return out;
}

// For the adjoint of an injective unilateral shift every property other
// than SVEP is equivalent to quasi-nilpotence.
inline Verdict unilateral_adjoint(const RadiiReport& rep, const Tolerance& tol) {
  auto qn = is_zero(rep.r, "r", tol);
  std::string basis = "adjoint-unilateral[r = 0]: " + qn.text;
  if (qn.result == Tri::True) return holds(basis);
  if (qn.result == Tri::False) return fails(basis);
  return unknown(basis);
}

// ---------------------------------------------------------------- bilateral rules

struct SvepResult {
  Verdict subject, adjoint;
  SpectralRegion failure, failure_adjoint;
};

inline SvepResult bilateral_svep(const RadiiReport& rep, const Tolerance& tol) {
  const auto& pl = rep.plus;
  const auto& mi = *rep.minus;
  SvepResult out;
  auto s = approx_le(mi.r2, pl.r3, "r2-", "r3+", tol);
  auto a = approx_le(pl.r2, mi.r3, "r2+", "r3-", tol);
  auto verdict = [](const Comparison& c, const std::string& tag) {
    std::string basis = tag + ": " + c.text;
    if (c.result == Tri::True) return holds(basis);
    if (c.result == Tri::False) return fails(basis);
    return unknown(basis);
  };
  out.subject = verdict(s, "svep-bilateral[r2- <= r3+]");
  out.adjoint = verdict(a, "svep-adjoint-bilateral[r2+ <= r3-]");
  out.failure = s.is_false() ? annulus(pl.r3.value, mi.r2.value, false, false) : empty_region();
  out.failure_adjoint = a.is_false() ? annulus(mi.r3.value, pl.r2.value, false, false) : empty_region();
  return out;
}

inline Verdict bilateral_dunford(const RadiiReport& rep, const ShiftFacts& facts, const Verdict& svep, const Tolerance& tol) {
  const auto& pl = rep.plus;
  const auto& mi = *rep.minus;
  auto qn = is_zero(rep.r, "r", tol);
  if (qn) return holds("quasi-nilpotent: " + qn.text);
  if (svep.status == Status::Fails) return fails("(C) implies SVEP; " + svep.basis);
  if (facts.periodic) return holds("periodic-weights: Bishop's property, which implies (C)");
  std::vector<Comparison> nec;
  std::string tag;
  if (rep.invertible()) {
    tag = "dunford-necessary-invertible[r1 = q = r2-, r3+ = r]";
    nec = {approx_eq(rep.r1, detail::q_of(rep), "r1", "q", tol), approx_eq(detail::q_of(rep), mi.r2, "q", "r2-", tol),
           approx_eq(pl.r3, rep.r, "r3+", "r", tol)};
  } else {
    tag = "dunford-necessary-noninvertible[r1 = r2- = 0, r3+ = r]";
    nec = {is_zero(rep.r1, "r1", tol), is_zero(mi.r2, "r2-", tol), approx_eq(pl.r3, rep.r, "r3+", "r", tol)};
  }
  if (auto* bad = detail::first_false(nec)) return fails(tag + ": " + bad->text);
  auto mw = approx_eq(rep.m, rep.w, "m", "w", tol);
  if (mw) return holds("numerical-range[m = w]: decomposable, " + mw.text);
  bool converge = approx_eq(pl.r2, pl.r3, "r2+", "r3+", tol) && approx_eq(mi.r2, mi.r3, "r2-", "r3-", tol);
  if (converge && detail::all_true(nec) == Tri::True) {
    if (!rep.invertible()) return holds("convergent-roots-noninvertible: " + detail::joined(nec));
    auto lt = approx_lt(detail::q_of(rep), rep.r, "q", "r", tol);
    if (lt) return holds("convergent-roots-invertible[q < r]: " + detail::joined(nec) + "; " + lt.text);
  }
  return unknown(tag + ": " + detail::joined(nec),
                 "necessary conditions hold; for circle spectra and non-convergent roots (C) is open");
}

inline std::pair<Verdict, SpectralRegion> bilateral_bishop(const RadiiReport& rep, const ShiftFacts& facts,
                                                           const Verdict& svep, const Tolerance& tol) {
  SpectralRegion cand = rep.invertible() ? two_circles(detail::q_of(rep).value, rep.r.value)
                                         : disc_and_circle(rep.minus->r.value, rep.r.value);
  auto qn = is_zero(rep.r, "r", tol);
  if (qn) return {holds("quasi-nilpotent: " + qn.text), disc(0.0)};
  if (facts.periodic) return {holds("periodic-weights: Bishop's property"), cand};
  if (svep.status == Status::Fails) return {fails("(beta) implies SVEP; " + svep.basis), cand};
  auto qs = detail::qs_conditions(rep, tol);
  const std::string tag = rep.invertible() ? "bishop-necessary[qs1, qs2]" : "bishop-necessary[qs2]";
  if (auto* bad = detail::first_false(qs)) return {fails(tag + ": " + bad->text), cand};
  auto mw = approx_eq(rep.m, rep.w, "m", "w", tol);
  if (mw) return {holds("numerical-range[m = w]: " + mw.text), cand};
  return {unknown(tag + ": " + detail::joined(qs), "radius conditions hold; sigma_beta is then empty or the candidate set"),
          cand};
}

inline Verdict bilateral_decomposable(const RadiiReport& rep, const ShiftFacts& facts, const Tolerance& tol) {
  auto qn = is_zero(rep.r, "r", tol);
  if (qn) return holds("quasi-nilpotent: " + qn.text);
  if (facts.periodic) return holds("periodic-weights: S and S* both have Bishop's property");
  auto mw = approx_eq(rep.m, rep.w, "m", "w", tol);
  if (mw) return holds("numerical-range[m = w]: " + mw.text);
  const std::string tag = "bilateral-decomposable[r = 0 or invertible with q = r]";
  if (qn.is_false()) {
    if (!rep.invertible()) return fails(tag + ": not invertible; " + qn.text);
    auto qr = approx_eq(detail::q_of(rep), rep.r, "q", "r", tol);
    if (qr.is_false()) return fails(tag + ": " + qr.text);
    if (qr) return unknown(tag + ": " + qr.text, "circle spectrum: necessary condition only");
    return unknown(tag + ": " + qr.text);
  }
  return unknown(tag + ": " + qn.text);
}

inline Verdict bilateral_property_q(const Verdict& dunford, const Verdict& svep) {
  if (dunford.status == Status::Holds) return holds("(C) implies property (Q); " + dunford.basis);
  if (svep.status == Status::Fails) return fails("property (Q) implies SVEP; " + svep.basis);
  return unknown("no bilateral criterion for (Q) beyond (C) and SVEP");
}

}  // namespace rules

// The adjoint of a bilateral shift is the bilateral shift with weights
// w_{-n-1}: plus and minus radii trade places.
inline RadiiReport mirror(const RadiiReport& rep) {
  if (rep.side != Side::Bilateral) throw ShiftError(ErrorCode::InvalidArgument, "mirror needs a bilateral report");
  RadiiReport out = rep;
  out.plus = *rep.minus;
  out.minus = rep.plus;
  return out;
}

// Per-operator verdicts and regions for the injective core cases.
struct CoreClassification {
  PropertyVerdicts subject, adjoint;
  SpectralRegion svep_failure, svep_failure_adjoint, sigma_beta_candidate;
  Tri h0_dense = Tri::Undecidable;
  std::string h0_dense_basis;
};

inline CoreClassification classify_unilateral_injective(const RadiiReport& rep, const ShiftFacts& facts,
                                                        const Tolerance& tol) {
  CoreClassification c;
  c.subject.svep = rules::unilateral_svep();
  c.subject.dunford_c = rules::unilateral_dunford(rep, facts, tol);
  std::tie(c.subject.bishop_beta, c.sigma_beta_candidate) = rules::unilateral_bishop(rep, facts, tol);
  c.subject.decomposable = rules::unilateral_decomposable(rep, tol);
  auto q = rules::unilateral_property_q(rep, tol);
  c.subject.property_q = q.verdict;
  c.h0_dense = q.dense.result;
  c.h0_dense_basis = "H_0(S) dense iff r3 = 0: " + q.dense.text;
  std::tie(c.adjoint.svep, c.svep_failure_adjoint) = rules::unilateral_adjoint_svep(rep, tol);
  c.adjoint.dunford_c = c.adjoint.bishop_beta = c.adjoint.decomposable = c.adjoint.property_q =
      rules::unilateral_adjoint(rep, tol);
  return c;
}

// Infinitely many zero weights: S is an orthogonal sum of nilpotent blocks,
// and so is S*.
inline CoreClassification classify_unilateral_infinite_zeros(const RadiiReport& rep, const Tolerance& tol) {
  CoreClassification c;
  auto qn = is_zero(rep.r, "r", tol);
  std::string basis = "infinitely-many-zeros[r = 0]: " + qn.text;
  Verdict v = qn.result == Tri::True ? holds(basis) : qn.result == Tri::False ? fails(basis) : unknown(basis);
  c.subject.svep = holds("infinitely-many-zeros: orthogonal sum of nilpotent blocks");
  c.adjoint.svep = c.subject.svep;
  c.subject.dunford_c = c.subject.bishop_beta = c.subject.decomposable = c.subject.property_q = v;
  c.adjoint.dunford_c = c.adjoint.bishop_beta = c.adjoint.decomposable = c.adjoint.property_q = v;
  c.sigma_beta_candidate = qn ? disc(0.0) : disc(rep.r.value);
  c.h0_dense = Tri::True;
  c.h0_dense_basis = "every basis vector is annihilated by a power of S";
  return c;
}

inline CoreClassification classify_bilateral_injective(const RadiiReport& rep, const ShiftFacts& facts,
                                                       const Tolerance& tol) {
  CoreClassification c;
  auto sv = rules::bilateral_svep(rep, tol);
  c.svep_failure = sv.failure;
  c.svep_failure_adjoint = sv.failure_adjoint;
  auto fill = [&](const RadiiReport& r, const Verdict& svep, PropertyVerdicts& pv, SpectralRegion* cand) {
    pv.svep = svep;
    pv.dunford_c = rules::bilateral_dunford(r, facts, svep, tol);
    auto [b, region] = rules::bilateral_bishop(r, facts, svep, tol);
    pv.bishop_beta = b;
    if (cand) *cand = region;
    pv.decomposable = rules::bilateral_decomposable(r, facts, tol);
    pv.property_q = rules::bilateral_property_q(pv.dunford_c, svep);
  };
  fill(rep, sv.subject, c.subject, &c.sigma_beta_candidate);
  fill(mirror(rep), sv.adjoint, c.adjoint, nullptr);
  c.h0_dense_basis = "density of H_0(S) is tracked for unilateral shifts only";
  return c;
}

// ---------------------------------------------------------------- consistency

namespace detail {

// Known implications between the properties, applied to fill Unknowns and to
// catch contradictions between independent tests. Strongest first:
// decomposable => (beta) => (C) => (Q) => SVEP.
inline void propagate(PropertyVerdicts& v, std::vector<std::string>& notes, const std::string& who) {
  std::vector<Verdict*> chain{&v.decomposable, &v.bishop_beta, &v.dunford_c, &v.property_q, &v.svep};
  const std::vector<std::string> name{"decomposable", "(beta)", "(C)", "(Q)", "SVEP"};
  const int n = static_cast<int>(chain.size());
  int strongest_hold = n, weakest_fail = -1;  // Holds at k gives Holds below; Fails at k gives Fails above
  for (int k = 0; k < n; ++k) {
    if (chain[k]->status == Status::Holds && strongest_hold == n) strongest_hold = k;
    if (chain[k]->status == Status::Fails) weakest_fail = k;
  }
  std::vector<Verdict> orig;
  for (auto* p : chain) orig.push_back(*p);
  if (weakest_fail >= strongest_hold) {
    std::string rule = name[static_cast<std::size_t>(strongest_hold)] + " holds but " +
                       name[static_cast<std::size_t>(weakest_fail)] + " fails";
    notes.push_back(who + ": conflicting tests (" + rule + "): " + orig[static_cast<std::size_t>(strongest_hold)].basis +
                    " | " + orig[static_cast<std::size_t>(weakest_fail)].basis);
    for (int k = strongest_hold; k <= weakest_fail; ++k)
      if (chain[k]->status != Status::NotApplicable) {
        chain[k]->status = Status::Unknown;
        chain[k]->caveat = "conflicting tests: " + rule;
      }
  }
  for (int k = 0; k < n; ++k) {
    Verdict& c = *chain[k];
    if (c.status != Status::Unknown || c.caveat.rfind("conflicting", 0) == 0) continue;
    // nearest source on each side
    int hold_src = -1, fail_src = -1;
    for (int j = k - 1; j >= 0 && hold_src < 0; --j)
      if (orig[static_cast<std::size_t>(j)].status == Status::Holds && chain[j]->status == Status::Holds) hold_src = j;
    for (int j = k + 1; j < n && fail_src < 0; ++j)
      if (orig[static_cast<std::size_t>(j)].status == Status::Fails && chain[j]->status == Status::Fails) fail_src = j;
    const auto& nk = name[static_cast<std::size_t>(k)];
    if (hold_src >= 0)
      c = {Status::Holds, name[static_cast<std::size_t>(hold_src)] + " implies " + nk + "; " + orig[static_cast<std::size_t>(hold_src)].basis, c.caveat};
    else if (fail_src >= 0)
      c = {Status::Fails, "no " + name[static_cast<std::size_t>(fail_src)] + ", so no " + nk + "; " + orig[static_cast<std::size_t>(fail_src)].basis, c.caveat};
  }
}

inline Verdict combine(const Verdict& a, const Verdict& b, const std::string& name_a, const std::string& name_b) {
  if (a.status == Status::Fails) return fails("direct sum, " + name_a + " fails: " + a.basis);
  if (b.status == Status::Fails) return fails("direct sum, " + name_b + " fails: " + b.basis);
  if (a.status == Status::Holds && b.status == Status::Holds)
    return holds("direct sum, both summands hold: " + name_a + ": " + a.basis + " | " + name_b + ": " + b.basis);
  const Verdict& u = a.status == Status::Unknown ? a : b;
  return unknown("direct sum, undecided summand: " + u.basis, u.caveat);
}

inline PropertyVerdicts combine(const PropertyVerdicts& a, const PropertyVerdicts& b, const std::string& name_a,
                                const std::string& name_b) {
  PropertyVerdicts out;
  for (const auto& p : property_names()) out.get(p) = combine(a.get(p), b.get(p), name_a, name_b);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- annotations

inline std::vector<AnnotationCheck> check_annotations(const WeightSequence& w, const BetaCache& beta,
                                                      const PropertyVerdicts& subject, const PropertyVerdicts& adjoint) {
  std::vector<AnnotationCheck> out;
  auto* nw = std::get_if<NamedWeights>(&w.structure());
  if (!nw) return out;
  const CorpusEntry* entry = nullptr;
  for (const auto& e : list_corpus())
    if (e.id == nw->id) entry = &e;
  if (!entry) return out;
  // Statements are about the entry as registered: same side, positive weights.
  if (entry->make().side() != w.side()) return out;
  if (entry->id != "square_zeros" && !beta.zero_indices().empty()) return out;
  for (const auto& a : entry->annotations) {
    const PropertyVerdicts& pv = a.subject == "S*" ? adjoint : subject;
    AnnotationCheck c;
    c.annotation = a;
    c.engine = pv.get(a.property).status;
    c.conflict = (c.engine == Status::Holds && !a.holds) || (c.engine == Status::Fails && a.holds);
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- entry point

struct ClassifyOptions {
  Tolerance tol;
  RadiiOptions radii;
};

namespace detail {

struct SideZeros {
  ZeroCount count = ZeroCount::None;
  std::vector<long> indices;  // observed inside the cache
};

inline SideZeros side_zeros(const WeightSequence& w, const BetaCache& beta, Branch b) {
  SideZeros out;
  for (long z : beta.zero_indices())
    if ((b == Branch::Plus) == (z >= 0)) out.indices.push_back(z);
  ZeroCount declared = w.zeros(b).count;
  if (declared == ZeroCount::Undeclared) {
    if (!out.indices.empty())
      throw ShiftError(ErrorCode::ZeroPatternUndeclared,
                       std::string("zero weights on the ") + to_string(b) + " side without a declared count");
    out.count = ZeroCount::None;
  } else if (declared == ZeroCount::Infinite) {
    out.count = ZeroCount::Infinite;
  } else {
    for (long z : w.zeros(b).indices)
      if (z < -beta.n_minus() || z >= beta.n_plus())
        throw ShiftError(ErrorCode::InsufficientHorizon, "declared zero at index " + std::to_string(z) + " lies outside the horizon");
    out.count = out.indices.empty() ? ZeroCount::None : ZeroCount::Finite;
  }
  return out;
}

// Zeros of the unilateral piece u_i = w_{start + sign * i}.
inline ZeroPattern piece_zeros(const std::vector<long>& parent_zeros, long start, long sign, long horizon, ZeroCount tail) {
  ZeroPattern zp;
  for (long z : parent_zeros) {
    long i = (z - start) * sign;
    if (i >= 0 && i < horizon) zp.indices.push_back(i);
  }
  std::sort(zp.indices.begin(), zp.indices.end());
  if (tail == ZeroCount::Infinite)
    zp.count = ZeroCount::Infinite;
  else
    zp.count = zp.indices.empty() ? ZeroCount::None : ZeroCount::Finite;
  return zp;
}

inline WeightSequence make_piece(const WeightSequence& w, long start, long sign, const ZeroPattern& zp, const std::string& what) {
  // Keep eventual periodicity so the piece still gets exact radii.
  if (auto ev = w.eventual_form()) {
    const auto& per = sign > 0 ? ev->period : ev->minus_period;
    long plen = static_cast<long>(sign > 0 ? ev->prefix.size() : ev->minus_prefix.size());
    if (!per.empty()) {
      // Steps until the index walks past the prefix on the side it is heading to.
      long lead = sign > 0 ? std::max(0L, plen - start) : std::max(0L, start + plen + 1);
      std::vector<double> prefix;
      for (long i = 0; i < lead; ++i) prefix.push_back(w.weight(start + sign * i));
      long past = sign > 0 ? start + lead - plen : lead - start - plen - 1;
      long p = static_cast<long>(per.size());
      std::vector<double> period;
      for (long i = 0; i < p; ++i) period.push_back(per[static_cast<std::size_t>((past + i) % p)]);
      return WeightSequence::eventually_periodic(Side::Unilateral, prefix, period, {}, {}, w.bound());
    }
  }
  auto gen = [w, start, sign](long i) { return w.log_weight(start + sign * i); };
  return WeightSequence(Side::Unilateral, DerivedWeights{what}, w.bound(), gen, zp, ZeroPattern{ZeroCount::None, {}},
                        Invertibility::NotInvertible, what);
}

inline CoreClassification classify_unilateral(const WeightSequence& w, const BetaCache& beta, const RadiiReport& rep,
                                              const ClassifyOptions& opt, std::vector<std::string>& notes, int depth = 0);

inline CoreClassification classify_unilateral_piece(const WeightSequence& piece_w, long horizon, const ClassifyOptions& opt,
                                                    std::vector<std::string>& notes, int depth) {
  auto cache = build_beta(piece_w, horizon);
  auto rep = compute_radii(piece_w, cache, opt.radii);
  return classify_unilateral(piece_w, cache, rep, opt, notes, depth + 1);
}

inline CoreClassification classify_unilateral(const WeightSequence& w, const BetaCache& beta, const RadiiReport& rep,
                                              const ClassifyOptions& opt, std::vector<std::string>& notes, int depth) {
  auto zeros = side_zeros(w, beta, Branch::Plus);
  ShiftFacts facts{w.is_periodic()};
  if (zeros.count == ZeroCount::None) return classify_unilateral_injective(rep, facts, opt.tol);
  if (zeros.count == ZeroCount::Infinite) return classify_unilateral_infinite_zeros(rep, opt.tol);
  if (depth > 2) throw ShiftError(ErrorCode::Internal, "zero splitting did not terminate");
  long z = zeros.indices.back();
  notes.push_back("finitely many zeros: nilpotent block on e_0..e_" + std::to_string(z) +
                  " plus the injective shift with weights w_{n}, n > " + std::to_string(z));
  auto pw = make_piece(w, z + 1, 1, ZeroPattern{ZeroCount::None, {}}, "tail after the last zero");
  auto c = classify_unilateral_piece(pw, beta.n_plus(), opt, notes, depth);
  auto prefix = [&](PropertyVerdicts& pv) {
    for (const auto& p : property_names()) {
      auto& v = pv.get(p);
      v.basis = "nilpotent block plus injective summand: " + v.basis;
    }
  };
  prefix(c.subject);
  prefix(c.adjoint);
  return c;
}

}  // namespace detail

inline ClassificationReport classify(const WeightSequence& w, const BetaCache& beta, const RadiiReport& rep,
                                     const ClassifyOptions& opt = {}) {
  ClassificationReport out;
  out.side = rep.side;
  out.spectrum = spectrum(rep);
  auto ap = approximate_point_spectrum(rep, opt.tol);
  out.approximate_point = ap.region;
  out.approximate_point_exact = ap.exact;
  out.approximate_point_caveat = ap.caveat;
  if (rep.invertibility_presumed)
    out.notes.push_back("invertibility presumed from the observed weights: minimum " + detail::fmt(beta.observed_min()));

  CoreClassification core;
  if (rep.side == Side::Unilateral) {
    core = detail::classify_unilateral(w, beta, rep, opt, out.notes);
  } else {
    auto zp = detail::side_zeros(w, beta, Branch::Plus);
    auto zm = detail::side_zeros(w, beta, Branch::Minus);
    if (zp.count == ZeroCount::None && zm.count == ZeroCount::None) {
      core = classify_bilateral_injective(rep, ShiftFacts{w.is_periodic()}, opt.tol);
    } else {
      // S = T* (+) F: F is the forward shift after the zero z, T the unilateral
      // shift with weights w_{z-1}, w_{z-2}, ... whose adjoint acts below z.
      std::vector<long> all = zm.indices;
      all.insert(all.end(), zp.indices.begin(), zp.indices.end());
      if (all.empty()) throw ShiftError(ErrorCode::InsufficientHorizon, "declared zero weights not visible inside the horizon");
      long z;
      if (zm.count != ZeroCount::Infinite)
        z = all.front();
      else if (zp.count != ZeroCount::Infinite)
        z = all.back();
      else
        z = *std::min_element(all.begin(), all.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
      ZeroCount below = (zm.count == ZeroCount::Infinite) ? ZeroCount::Infinite : ZeroCount::Finite;
      ZeroCount above = (zp.count == ZeroCount::Infinite) ? ZeroCount::Infinite : ZeroCount::Finite;
      long h_below = std::max<long>(64, beta.n_minus());
      long h_above = std::max<long>(64, beta.n_plus());
      auto tz = detail::piece_zeros(all, z - 1, -1, h_below, below);
      auto fz = detail::piece_zeros(all, z + 1, 1, h_above, above);
      out.notes.push_back("zero weight at index " + std::to_string(z) +
                          ": S splits into a backward shift on e_n, n <= z, and a forward shift on e_n, n > z");
      auto tw = detail::make_piece(w, z - 1, -1, tz, "weights w_{z-1-i} below the zero");
      auto fw = detail::make_piece(w, z + 1, 1, fz, "weights w_{z+1+i} above the zero");
      auto tc = detail::classify_unilateral_piece(tw, h_below, opt, out.notes, 0);
      auto fc = detail::classify_unilateral_piece(fw, h_above, opt, out.notes, 0);
      core.subject = detail::combine(tc.adjoint, fc.subject, "backward summand", "forward summand");
      core.adjoint = detail::combine(tc.subject, fc.adjoint, "backward summand adjoint", "forward summand adjoint");
      core.svep_failure = tc.svep_failure_adjoint;
      core.svep_failure_adjoint = fc.svep_failure_adjoint;
      core.sigma_beta_candidate = approximate_point_spectrum(rep, opt.tol).region;
      core.h0_dense_basis = "density of H_0(S) is tracked for unilateral shifts only";
    }
  }
  out.subject = core.subject;
  out.adjoint = core.adjoint;
  out.svep_failure = core.svep_failure;
  out.svep_failure_adjoint = core.svep_failure_adjoint;
  out.sigma_beta_candidate = core.sigma_beta_candidate;
  out.h0_dense = core.h0_dense;
  out.h0_dense_basis = core.h0_dense_basis;
  detail::propagate(out.subject, out.notes, "S");
  detail::propagate(out.adjoint, out.notes, "S*");
  out.annotations = check_annotations(w, beta, out.subject, out.adjoint);
  return out;
}

}  // namespace shiftspec
