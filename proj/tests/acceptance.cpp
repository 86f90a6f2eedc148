// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "shiftspec/shiftspec.hpp"

using namespace shiftspec;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[miss] ";
    }
    detail << what << "; ";
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

RadiiReport estimate_only(const WeightSequence& w, const BetaCache& beta) {
  RadiiOptions opt;
  opt.exact_shortcuts = false;
  return compute_radii(w, beta, opt);
}

ClassificationReport classify_estimates(const WeightSequence& w, const BetaCache& beta, const RadiiReport& rep) {
  ClassifyOptions opt;
  opt.radii.exact_shortcuts = false;
  return classify(w, beta, rep, opt);
}

BetaCache constant_one(long h) { return build_beta(WeightSequence::formula(Side::Unilateral, "constant", {{"c", 1.0}}), h); }

void chain_invariant(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (Side side : {Side::Unilateral, Side::Bilateral}) {
    ChainCheckOptions opt;
    opt.side = side;
    auto rep = random_chain_check(42, 200, 512, opt);
    o.need(rep.passed == 200, std::string(to_string(side)) + " " + std::to_string(rep.passed) + "/200");
  }
  double s = seconds_since(t0);
  o.need(s <= 30.0, "runtime " + num(s) + " s");
}

void periodic_exactness(Outcome& o) {
  auto w = named_weight("periodic", {{"p0", 2.0}, {"p1", 1.0}});
  auto beta = build_beta(w, 2000);
  auto gen = estimate_only(w, beta);
  const double s2 = std::sqrt(2.0);
  for (auto [name, e] : std::vector<std::pair<const char*, const RadiusEstimate*>>{
           {"r1", &gen.r1}, {"r2", &gen.r2()}, {"r3", &gen.r3()}, {"r", &gen.r}})
    o.need(!e->exact && std::fabs(e->value - s2) <= 1e-3, std::string("estimated ") + name + " " + num(e->value));
  auto ex = exact_periodic_radii(w);
  for (auto [name, e] : std::vector<std::pair<const char*, const RadiusEstimate*>>{
           {"r1", &ex.r1}, {"r2", &ex.r2()}, {"r3", &ex.r3()}, {"r", &ex.r}})
    o.need(e->exact && std::fabs(e->value - s2) <= 1e-12, std::string("exact ") + name + " " + num(e->value));
}

void numerical_radius_s_a(Outcome& o) {
  for (auto [a, expect] : std::vector<std::pair<double, double>>{{2.0, 2.0 / std::sqrt(3.0)}, {1.2, 1.0}}) {
    auto t0 = std::chrono::steady_clock::now();
    auto e = numerical_radius(named_weight("s_a", {{"a", a}}), 10000, 1e-8);
    double s = seconds_since(t0);
    o.need(std::fabs(e.value - expect) <= 1e-4, "a = " + num(a) + ": w = " + num(e.value));
    o.need(s <= 10.0, "runtime " + num(s) + " s");
  }
}

void ridge(Outcome& o) {
  auto w = named_weight("ridge");
  auto beta = build_beta(w, 10000);
  auto rep = estimate_only(w, beta);
  o.need(std::fabs(rep.r.value - 2.0) <= 1e-6, "r = " + num(rep.r.value));
  o.need(rep.r3().value >= 0.95 && rep.r3().value <= 1.0, "r3 = " + num(rep.r3().value) + " in [0.95, 1]");
  o.need(rep.r1.value >= 1.0 && rep.r1.value <= 1.05, "r1 = " + num(rep.r1.value));
  auto cls = classify_estimates(w, beta, rep);
  o.need(cls.subject.property_q.status == Status::Holds, std::string("property_q ") + to_string(cls.subject.property_q.status));
  o.need(cls.subject.dunford_c.status == Status::Fails, std::string("dunford_c ") + to_string(cls.subject.dunford_c.status));
  o.need(cls.subject.bishop_beta.status == Status::Fails,
         std::string("bishop_beta ") + to_string(cls.subject.bishop_beta.status));
}

void ki_gap(Outcome& o) {
  auto w = named_weight("ki_gap");
  auto beta = build_beta(w, 10000);
  auto rep = estimate_only(w, beta);
  o.need(rep.r2().value <= 0.02, "r2 = " + num(rep.r2().value));
  o.need(rep.r3().value >= 0.999, "r3 = " + num(rep.r3().value));
  auto cls = classify_estimates(w, beta, rep);
  o.need(cls.adjoint.svep.status == Status::Holds, std::string("S* svep ") + to_string(cls.adjoint.svep.status));
  o.need(cls.adjoint.property_q.status != Status::Holds,
         std::string("S* property_q ") + to_string(cls.adjoint.property_q.status));
  bool annotated = false;
  for (const auto& a : cls.annotations)
    if (a.annotation.property == "property_q" && a.annotation.subject == "S*" && !a.annotation.holds) annotated = !a.conflict;
  o.need(annotated, "S* property_q Fails annotation kept without conflict");
}

void svep_oracle(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto w = named_weight("reciprocal_step");
  auto beta = build_beta(w, 4096, 4096);
  auto cls = classify(w, beta, compute_radii(w, beta));
  o.need(cls.svep_failure == annulus(0.5, 2.0, false, false), "failure region " + cls.svep_failure.describe());
  for (double lam : {0.8, 1.0, 1.5}) {
    double res = eigenvector_residual(beta, lam, 60);
    o.need(res <= 1e-10, "residual at " + num(lam) + " = " + num(res));
  }
  bool diverged = false;
  try {
    eigenvector_residual(beta, 3.0, 60);
  } catch (const ShiftError& e) {
    diverged = e.code() == ErrorCode::SeriesDiverged;
  }
  o.need(diverged, "lambda = 3 gives SeriesDiverged");
  double s = seconds_since(t0);
  o.need(s <= 1.0, "runtime " + num(s) + " s");
}

void local_resolvent(Outcome& o) {
  auto beta = constant_one(4096);
  auto x = VectorSpec::basis(0);
  int inner = 0, outer = 0;
  for (int k = 0; k < 40; ++k) {
    cplx u = std::polar(1.0, 2.0 * M_PI * k / 40.0);
    inner += resolvent_recurrence(beta, x, 0.5 * u, 4096).decision == Membership::InLocalSpectrum;
    outer += resolvent_recurrence(beta, x, 2.0 * u, 4096).decision == Membership::InLocalResolvent;
  }
  o.need(inner == 40, "|lambda| = 0.5: " + std::to_string(inner) + "/40 in local spectrum");
  o.need(outer == 40, "|lambda| = 2: " + std::to_string(outer) + "/40 in local resolvent");
}

void contour(Outcome& o) {
  auto rec = contour_reconstruct(constant_one(4096), VectorSpec::from_map({{0, 1.0}, {1, 1.0}}), 1.5, 512);
  o.need(rec.distance <= 1e-10, "distance " + num(rec.distance));
}

void corpus_soundness(Outcome& o) {
  long conflicts = 0;
  for (const auto& e : list_corpus()) {
    auto w = e.make();
    long h = e.default_horizon;
    auto beta = w.side() == Side::Bilateral ? build_beta(w, h, h) : build_beta(w, h);
    auto cls = classify(w, beta, compute_radii(w, beta));
    conflicts += cls.annotation_conflicts();
    if (e.id == "atzmon") {
      o.need(cls.subject.bishop_beta.status == Status::Unknown,
             std::string("atzmon bishop_beta ") + to_string(cls.subject.bishop_beta.status));
      bool kept = false;
      for (const auto& a : cls.annotations)
        kept = kept || (a.annotation.property == "bishop_beta" && a.annotation.subject == "S" && !a.annotation.holds);
      o.need(kept, "atzmon Fails annotation in report");
    }
  }
  o.need(conflicts == 0, std::to_string(conflicts) + " conflicts");
}

void brute_force(Outcome& o) {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto rng = XorShift64Star::for_sample(seed, 7);
    const long W = 64;
    std::vector<double> vals(W);
    for (auto& v : vals) v = rng.uniform(0.1, 3.0);
    auto w = WeightSequence::from_list(Side::Unilateral, vals, {}, 1.0, 3.0);
    auto beta = build_beta(w, W);
    std::vector<double> x(W + 1, 0.0);
    x[0] = rng.uniform(0.5, 1.0);
    x[2] = rng.uniform(-1.0, 1.0);
    auto pn = power_norms(beta, VectorSpec::from_map({{0, x[0]}, {2, x[2]}}), W - 3);
    // dense lower-shift matrix applied column by column
    std::vector<std::vector<double>> S(W + 1, std::vector<double>(W + 1, 0.0));
    for (long j = 0; j < W; ++j) S[j + 1][j] = vals[j];
    for (long n = 0; n <= W - 3; ++n) {
      double nn = 0.0;
      for (double v : x) nn += v * v;
      nn = std::sqrt(nn);
      worst = std::max(worst, std::fabs(pn.norm(n) - nn) / nn);
      std::vector<double> y(W + 1, 0.0);
      for (long i = 0; i <= W; ++i)
        for (long j = 0; j <= W; ++j) y[i] += S[i][j] * x[j];
      x = y;
    }
  }
  o.need(worst <= 1e-12, "worst relative gap " + num(worst));
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<Criterion> all{
      {"1 chain invariant", chain_invariant},     {"2 periodic exactness", periodic_exactness},
      {"3 numerical radius s_a", numerical_radius_s_a}, {"4 ridge", ridge},
      {"5 ki_gap", ki_gap},                       {"6 SVEP oracle", svep_oracle},
      {"7 local resolvent", local_resolvent},     {"8 contour reconstruction", contour},
      {"9 corpus soundness", corpus_soundness},   {"10 brute-force power norms", brute_force},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s  %s: %s\n", o.ok ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
    failed += !o.ok;
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
