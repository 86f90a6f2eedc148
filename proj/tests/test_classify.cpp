#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "shiftspec/shiftspec.hpp"

using namespace shiftspec;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
  RadiiReport radii;
  ClassificationReport cls;
};

Run run(const WeightSequence& w, long h) {
  auto beta = w.side() == Side::Bilateral ? build_beta(w, h, h) : build_beta(w, h);
  auto radii = compute_radii(w, beta);
  return {radii, classify(w, beta, radii)};
}

WeightSequence constant_one() { return WeightSequence::formula(Side::Unilateral, "constant", {{"c", 1.0}}); }

RadiusEstimate est(double v, double spread = 0.0) {
  Diagnostic d;
  d.spread = spread;
  return RadiusEstimate::estimated(v, d);
}

}  // namespace

TEST_CASE("regions are canonical and canonicalization is idempotent", "[classify][region]") {
  CHECK(annulus(1.0, 1.0) == circle(1.0));
  CHECK(annulus(1.0, 1.0, false, true).kind == RegionKind::Empty);
  CHECK(annulus(0.0, 2.0) == disc(2.0));
  CHECK(annulus(0.0, 2.0, false, true).kind == RegionKind::Annulus);
  CHECK(annulus(3.0, 2.0).kind == RegionKind::Empty);
  CHECK(two_circles(2.0, 1.0) == SpectralRegion{RegionKind::UnionOfTwoCircles, 1.0, 2.0, true, true});
  CHECK(two_circles(1.5, 1.5) == circle(1.5));
  CHECK(disc(0.0) == circle(0.0));
  CHECK(disc(0.0, false).kind == RegionKind::Empty);
  CHECK(disc_and_circle(2.0, 1.0) == disc(2.0));
  CHECK_THROWS_AS(annulus(-1.0, 1.0), ShiftError);
  for (const auto& r : {annulus(0.5, 2.0, false, false), disc(1.0, false), two_circles(1.0, 3.0), disc_and_circle(1.0, 2.0),
                        annulus(0.0, 1.0, false, true), circle(0.0)})
    CHECK(canonical(r) == r);
}

TEST_CASE("region membership by modulus", "[classify][region]") {
  auto a = annulus(0.5, 2.0, false, true);
  CHECK_FALSE(a.contains_modulus(0.5));
  CHECK(a.contains_modulus(2.0));
  CHECK(a.contains_modulus(1.0));
  CHECK_FALSE(disc(1.0, false).contains_modulus(1.0));
  CHECK(disc_and_circle(1.0, 2.0).contains_modulus(0.3));
  CHECK_FALSE(disc_and_circle(1.0, 2.0).contains_modulus(1.5));
  CHECK(annulus(0.5, 2.0, false, false).describe() == "Annulus(0.5, 2)");
}

TEST_CASE("tolerance predicates", "[classify][compare]") {
  auto ex = [](double v) { return RadiusEstimate::make_exact(v, ExactReason::Constant); };
  CHECK(approx_eq(ex(1.0), ex(1.0 + 1e-9), "a", "b").result == Tri::True);
  CHECK(approx_eq(ex(1.0), ex(1.001), "a", "b").result == Tri::False);
  // tau covers three combined spreads
  CHECK(approx_eq(est(1.0, 0.001), est(1.005, 0.001), "a", "b").result == Tri::True);
  CHECK(approx_eq(est(1.0, 0.001), est(1.01, 0.001), "a", "b").result == Tri::False);
  CHECK(approx_eq(est(1.0, 0.2), est(1.0), "a", "b").result == Tri::Undecidable);
  CHECK(approx_lt(est(1.0, 0.001), est(1.004, 0.001), "a", "b").result == Tri::Undecidable);
  CHECK(approx_lt(est(1.0, 0.001), est(1.1, 0.001), "a", "b").result == Tri::True);
  CHECK(approx_lt(est(1.1, 0.001), est(1.0, 0.001), "a", "b").result == Tri::False);
  CHECK(approx_le(est(1.004, 0.001), est(1.0, 0.001), "a", "b").result == Tri::True);
  CHECK(is_zero(est(0.01), "r").result == Tri::True);
  CHECK(is_zero(est(0.1), "r").result == Tri::Undecidable);
  CHECK(is_zero(est(0.5), "r").result == Tri::False);
  CHECK(is_zero(ex(1e-300), "r").result == Tri::False);
}

TEST_CASE("infinite operands compare directly", "[classify][compare]") {
  auto inf = est(kInf, 1e9);
  CHECK(approx_lt(est(1.0, 0.3), inf, "r3", "R").result == Tri::True);
  CHECK(approx_lt(inf, est(1.0), "R", "r").result == Tri::False);
  CHECK(approx_le(est(0.0), inf, "a", "b").result == Tri::True);
}

TEST_CASE("constant-1 unilateral shift", "[classify][corpus]") {
  auto [radii, cls] = run(constant_one(), 4096);
  CHECK(cls.spectrum == disc(1.0));
  CHECK(cls.approximate_point == circle(1.0));
  CHECK(cls.svep_failure.kind == RegionKind::Empty);
  CHECK(cls.svep_failure_adjoint == disc(1.0, false));
  CHECK(cls.subject.svep.status == Status::Holds);
  CHECK(cls.subject.decomposable.status == Status::Fails);
  CHECK(cls.adjoint.svep.status == Status::Fails);
  CHECK(cls.adjoint.property_q.status == Status::Fails);
}

TEST_CASE("ridge verdicts", "[classify][corpus]") {
  auto w = named_weight("ridge");
  auto beta = build_beta(w, 10000);
  ClassifyOptions opt;
  opt.radii.exact_shortcuts = false;
  auto radii = compute_radii(w, beta, opt.radii);
  auto cls = classify(w, beta, radii, opt);
  CHECK(cls.subject.property_q.status == Status::Holds);
  CHECK(cls.subject.dunford_c.status == Status::Fails);
  CHECK(cls.subject.bishop_beta.status == Status::Fails);
  CHECK(cls.subject.dunford_c.basis.find("r = r3") != std::string::npos);
  CHECK(cls.annotation_conflicts() == 0);
}

TEST_CASE("k_i gap: the adjoint has SVEP but not (Q)", "[classify][corpus]") {
  auto w = named_weight("ki_gap");
  auto beta = build_beta(w, 10000);
  ClassifyOptions opt;
  opt.radii.exact_shortcuts = false;
  auto cls = classify(w, beta, compute_radii(w, beta, opt.radii), opt);
  CHECK(cls.adjoint.svep.status == Status::Holds);
  CHECK(cls.adjoint.property_q.status != Status::Holds);
  CHECK(cls.svep_failure_adjoint.kind == RegionKind::Empty);
  CHECK(cls.annotation_conflicts() == 0);
}

TEST_CASE("Atzmon: bishop_beta stays Unknown and the annotation is kept", "[classify][corpus]") {
  auto [radii, cls] = run(named_weight("atzmon"), 10000);
  CHECK(cls.subject.bishop_beta.status == Status::Unknown);
  bool seen = false;
  for (const auto& a : cls.annotations)
    if (a.annotation.property == "bishop_beta" && a.annotation.subject == "S") {
      seen = true;
      CHECK_FALSE(a.annotation.holds);
      CHECK(a.engine == Status::Unknown);
      CHECK_FALSE(a.conflict);
    }
  CHECK(seen);
  CHECK(cls.spectrum == circle(1.0));
}

TEST_CASE("hyponormal step regions", "[classify][corpus]") {
  auto [radii, cls] = run(named_weight("hyponormal_step"), 4096);
  CHECK(cls.spectrum == annulus(1.0, 2.0));
  CHECK(cls.approximate_point == two_circles(1.0, 2.0));
  CHECK(cls.svep_failure.kind == RegionKind::Empty);
  CHECK(cls.svep_failure_adjoint == annulus(1.0, 2.0, false, false));
  CHECK(cls.subject.svep.status == Status::Holds);
  CHECK(cls.adjoint.svep.status == Status::Fails);
}

TEST_CASE("reciprocal step lacks SVEP on the open annulus", "[classify][corpus]") {
  auto w = named_weight("reciprocal_step");
  auto [radii, cls] = run(w, 4096);
  CHECK(cls.svep_failure == annulus(0.5, 2.0, false, false));
  CHECK(cls.subject.svep.status == Status::Fails);
  CHECK(cls.subject.property_q.status == Status::Fails);
  auto beta = build_beta(w, 4096, 4096);
  try {
    local_spectrum(radii, beta, VectorSpec::basis(0));
    FAIL("expected SVEPViolated");
  } catch (const ShiftError& e) {
    CHECK(e.code() == ErrorCode::SVEPViolated);
  }
}

TEST_CASE("square zeros: infinitely many zeros", "[classify][corpus]") {
  auto [radii, cls] = run(named_weight("square_zeros"), 4096);
  CHECK(cls.spectrum == disc(1.0));
  CHECK(cls.subject.svep.status == Status::Holds);
  CHECK(cls.adjoint.svep.status == Status::Holds);
  CHECK(cls.subject.property_q.status == Status::Fails);
}

TEST_CASE("no corpus entry contradicts its annotations", "[classify][corpus]") {
  for (const auto& e : list_corpus()) {
    auto [radii, cls] = run(e.make(), e.default_horizon);
    INFO(e.id);
    CHECK(cls.annotation_conflicts() == 0);
    for (const auto& a : cls.annotations) CHECK(a.conflict == (a.engine != Status::Unknown && (a.engine == Status::Holds) != a.annotation.holds));
  }
}

TEST_CASE("quasi-nilpotent weights make every property hold", "[classify]") {
  auto w = WeightSequence::formula(Side::Unilateral, "power_decay", {{"c", 1.0}, {"p", 1.0}});
  auto [radii, cls] = run(w, 4096);
  CHECK(cls.spectrum == circle(0.0));
  for (const auto& p : property_names()) {
    INFO(p);
    CHECK(cls.subject.get(p).status == Status::Holds);
    CHECK(cls.adjoint.get(p).status == Status::Holds);
  }
}

TEST_CASE("implications propagate both ways", "[classify]") {
  PropertyVerdicts v;
  v.bishop_beta = holds("b");
  v.svep = unknown("s");
  std::vector<std::string> notes;
  detail::propagate(v, notes, "S");
  CHECK(v.dunford_c.status == Status::Holds);
  CHECK(v.property_q.status == Status::Holds);
  CHECK(v.svep.status == Status::Holds);
  CHECK(v.decomposable.status == Status::Unknown);

  PropertyVerdicts f;
  f.svep = fails("s");
  detail::propagate(f, notes, "S");
  CHECK(f.property_q.status == Status::Fails);
  CHECK(f.dunford_c.status == Status::Fails);
  CHECK(f.bishop_beta.status == Status::Fails);
  CHECK(f.decomposable.status == Status::Fails);

  PropertyVerdicts c;
  c.dunford_c = holds("c");
  c.svep = fails("s");
  detail::propagate(c, notes, "S");
  CHECK(c.svep.status == Status::Unknown);
  CHECK(c.dunford_c.status == Status::Unknown);
  CHECK_FALSE(c.dunford_c.caveat.empty());
}

TEST_CASE("a bilateral zero splits into backward and forward summands", "[classify]") {
  // w_0 = 0, all other weights 1: S is the backward shift on n <= 0 plus the forward shift on n > 0.
  std::vector<double> plus(64, 1.0);
  plus[0] = 0.0;
  auto w = WeightSequence::from_list(Side::Bilateral, plus, std::vector<double>(64, 1.0), 1.0, 1.0);
  auto [radii, cls] = run(w, 512);
  CHECK(cls.subject.svep.status == Status::Fails);
  CHECK(cls.adjoint.svep.status == Status::Fails);
  CHECK(cls.svep_failure == disc(1.0, false));
  CHECK(cls.svep_failure_adjoint == disc(1.0, false));
  bool noted = false;
  for (const auto& n : cls.notes) noted = noted || n.find("zero weight at index 0") != std::string::npos;
  CHECK(noted);
}

TEST_CASE("split pieces keep the eventual period", "[classify]") {
  auto w = WeightSequence::eventually_periodic(Side::Bilateral, {3.0, 0.0, 2.0}, {1.0, 0.5, 2.0}, {0.7, 1.1},
                                               {1.5, 0.25});
  for (long start : {-6L, -1L, 2L, 5L})
    for (long sign : {1L, -1L}) {
      auto piece = detail::make_piece(w, start, sign, ZeroPattern{ZeroCount::None, {}}, "piece");
      INFO("start " << start << " sign " << sign);
      REQUIRE(piece.eventual_form().has_value());
      for (long i = 0; i < 40; ++i) REQUIRE(piece.weight(i) == w.weight(start + sign * i));
    }
}

TEST_CASE("finitely many zeros leave the tail's (C) intact", "[classify]") {
  auto w = WeightSequence::from_list(Side::Unilateral, {1.0, 2.0, 0.0, 1.5}, {}, 1.0, 2.0);
  auto [radii, cls] = run(w, 2000);
  CHECK(cls.spectrum == disc(1.0, true));
  CHECK(cls.subject.dunford_c.status == Status::Holds);
  CHECK(cls.subject.svep.status == Status::Holds);
  CHECK(cls.sigma_beta_candidate == circle(1.0));
}

TEST_CASE("local spectrum of e_0 for the constant-1 shift", "[classify][local]") {
  auto w = constant_one();
  auto beta = build_beta(w, 4096);
  auto radii = compute_radii(w, beta);
  auto rep = local_spectrum(radii, beta, VectorSpec::basis(0));
  CHECK(rep.region.region == disc(1.0));
  CHECK_FALSE(rep.region.lower_bound);
  CHECK(std::isinf(rep.r_omega->value));
  CHECK_THAT(rep.r_local.value, WithinAbs(1.0, 1e-12));
  CHECK(rep.case_tag.rfind("unilateral-branch-a", 0) == 0);
}

TEST_CASE("local spectrum branches on the vector radius", "[classify][local]") {
  auto w = constant_one();
  auto beta = build_beta(w, 4096);
  auto radii = compute_radii(w, beta);
  auto geo = VectorSpec::geometric(0.5);
  auto a = local_spectrum(radii, beta, geo);
  CHECK_THAT(a.r_omega->value, WithinAbs(2.0, 1e-9));
  CHECK(a.region.region == disc(1.0));
  CHECK_FALSE(a.region.lower_bound);

  // Same vector against a report with r3 = 3: R_omega = 2 is now below r3.
  auto fake = radii;
  fake.plus.r3 = RadiusEstimate::make_exact(3.0, ExactReason::Constant);
  auto b = local_spectrum(fake, beta, geo);
  CHECK(b.case_tag.rfind("unilateral-branch-b", 0) == 0);
  CHECK(b.region.lower_bound);
  CHECK_THAT(b.region.region.rho_out, WithinAbs(2.0, 1e-9));
}

TEST_CASE("bilateral local spectrum of e_0", "[classify][local]") {
  auto w = named_weight("hyponormal_step");
  auto beta = build_beta(w, 4096, 4096);
  auto radii = compute_radii(w, beta);
  auto rep = local_spectrum(radii, beta, VectorSpec::basis(0));
  CHECK(rep.region.region == annulus(1.0, 2.0));
  CHECK_FALSE(rep.region.lower_bound);
  CHECK(rep.r_omega_minus->value == 0.0);
  CHECK(std::isinf(rep.r_omega_plus->value));
}
