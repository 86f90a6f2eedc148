#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftspec/corpus.hpp"
#include "shiftspec/tridiagonal.hpp"
#include "shiftspec/weights.hpp"

namespace shiftspec {

enum class ExactReason { PeriodicGeometricMean, Constant, QuasiNilpotentStructural, CorpusAnnotation };

inline const char* to_string(ExactReason r) {
  switch (r) {
    case ExactReason::PeriodicGeometricMean: return "periodic-geometric-mean";
    case ExactReason::Constant: return "constant";
    case ExactReason::QuasiNilpotentStructural: return "quasi-nilpotent-structural";
    case ExactReason::CorpusAnnotation: return "corpus-annotation";
  }
  return "constant";
}

struct Diagnostic {
  long horizon = 0;
  double spread = 0.0;  // max - min of the running estimates over the final 10%
  bool monotone = true;
  std::string note;
  double upper = kInf;  // certified upper bound when the estimate is a lower bound
};

struct RadiusEstimate {
  double value = 0.0;
  bool exact = false;
  ExactReason reason = ExactReason::Constant;
  Diagnostic diag;

  static RadiusEstimate make_exact(double v, ExactReason why) {
    RadiusEstimate e;
    e.value = v;
    e.exact = true;
    e.reason = why;
    return e;
  }
  static RadiusEstimate estimated(double v, Diagnostic d) {
    RadiusEstimate e;
    e.value = v;
    e.diag = std::move(d);
    return e;
  }
  // Spread that comparisons should honour; exact values carry none.
  double uncertainty() const { return exact ? 0.0 : diag.spread; }
};

struct SideRadii {
  RadiusEstimate r1, r2, r3, r;
};

struct RadiiReport {
  Side side = Side::Unilateral;
  SideRadii plus;                  // unilateral: the radii of S
  std::optional<SideRadii> minus;  // bilateral only
  RadiusEstimate r1, r;            // bilateral: min / max over the sides
  std::optional<RadiusEstimate> q;
  RadiusEstimate m, w, norm;
  Invertibility invertibility = Invertibility::NotInvertible;
  bool invertibility_presumed = false;
  bool chain_ok = false;
  std::vector<std::string> chain_violations;

  const RadiusEstimate& r2() const { return plus.r2; }
  const RadiusEstimate& r3() const { return plus.r3; }
  const SideRadii& side_radii(Branch b) const { return b == Branch::Plus ? plus : *minus; }
  bool invertible() const { return invertibility == Invertibility::Invertible; }
};

struct RadiiOptions {
  long n_max = 20;
  long k_max = -1;         // -1: horizon - n_max
  long w_trunc = -1;       // -1: whole cache
  double w_tol = 1e-10;
  bool exact_shortcuts = true;
};

namespace detail {

inline double exp_or_zero(double l) { return l == -kInf ? 0.0 : std::exp(l); }

struct RunningWindow {
  std::vector<double> low;   // running window minima, n over the final 10%
  std::vector<double> high;  // running window maxima
};

// Running min/max of s over windows [ceil(n/2), n] for n in [n0, H].
inline RunningWindow running_half_window(const std::vector<double>& s, long H, long n0) {
  RunningWindow out;
  std::deque<long> mn, mx;
  long right = 0;
  for (long n = n0; n <= H; ++n) {
    long left = (n + 1) / 2;
    while (right < n) {
      ++right;
      while (!mn.empty() && s[mn.back()] >= s[right]) mn.pop_back();
      mn.push_back(right);
      while (!mx.empty() && s[mx.back()] <= s[right]) mx.pop_back();
      mx.push_back(right);
    }
    while (mn.front() < left) mn.pop_front();
    while (mx.front() < left) mx.pop_front();
    out.low.push_back(s[mn.front()]);
    out.high.push_back(s[mx.front()]);
  }
  return out;
}

inline Diagnostic running_diag(const std::vector<double>& run, long horizon) {
  Diagnostic d;
  d.horizon = horizon;
  auto [lo, hi] = std::minmax_element(run.begin(), run.end());
  d.spread = *hi - *lo;
  bool inc = std::is_sorted(run.begin(), run.end());
  bool dec = std::is_sorted(run.rbegin(), run.rend());
  d.monotone = inc || dec;
  return d;
}

inline double geometric_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    if (x == 0.0) return 0.0;
    s += std::log(x);
  }
  return std::exp(s / static_cast<double>(v.size()));
}

}  // namespace detail

// s_n = beta_n^{1/n} on the plus side, (1 / beta_{-n})^{1/n} on the minus side.
inline std::vector<double> root_sequence(const BetaCache& beta, Branch b) {
  long H = beta.horizon(b);
  std::vector<double> s(static_cast<std::size_t>(H + 1), 0.0);
  for (long n = 1; n <= H; ++n) s[n] = detail::exp_or_zero(beta.side_log_beta(b, n) / static_cast<double>(n));
  return s;
}

inline std::pair<RadiusEstimate, RadiusEstimate> estimate_r2_r3(const BetaCache& beta, Branch b) {
  if (beta.side() == Side::Unilateral && b == Branch::Minus)
    throw ShiftError(ErrorCode::HorizonMismatch, "unilateral cache has no minus side");
  long H = beta.horizon(b);
  if (H < 64) throw ShiftError(ErrorCode::InsufficientHorizon, "estimate_r2_r3 needs a horizon of at least 64");

  // A zero weight on this side makes beta vanish from there on.
  if (beta.side_log_beta(b, H) == -kInf) {
    auto z = RadiusEstimate::make_exact(0.0, ExactReason::QuasiNilpotentStructural);
    z.diag.horizon = H;
    z.diag.note = "zero weight on the side";
    return {z, z};
  }

  auto s = root_sequence(beta, b);
  long n0 = std::max<long>(2, static_cast<long>(std::ceil(0.9 * static_cast<double>(H))));
  auto run = detail::running_half_window(s, H, n0);
  auto d2 = detail::running_diag(run.low, H);
  auto d3 = detail::running_diag(run.high, H);
  return {RadiusEstimate::estimated(run.low.back(), d2), RadiusEstimate::estimated(run.high.back(), d3)};
}

inline std::pair<RadiusEstimate, RadiusEstimate> estimate_r_r1(const BetaCache& beta, Branch b, long n_max, long k_max) {
  if (beta.side() == Side::Unilateral && b == Branch::Minus)
    throw ShiftError(ErrorCode::HorizonMismatch, "unilateral cache has no minus side");
  long H = beta.horizon(b);
  long k_lo = b == Branch::Plus ? 0 : 1;
  if (n_max < 1 || k_max < k_lo || n_max + k_max > H)
    throw ShiftError(ErrorCode::InsufficientHorizon, "estimate_r_r1 needs n_max + k_max <= horizon");

  std::vector<double> upper, lower;  // running exp(min g), exp(max h)
  double best_g = kInf, best_h = -kInf, g = 0, h = 0;
  for (long n = 1; n <= n_max; ++n) {
    g = -kInf;
    h = kInf;
    for (long k = k_lo; k <= k_max; ++k) {
      double l = beta.side_window(b, k, n) / static_cast<double>(n);
      g = std::max(g, l);
      h = std::min(h, l);
    }
    best_g = std::min(best_g, g);
    best_h = std::max(best_h, h);
    upper.push_back(detail::exp_or_zero(best_g));
    lower.push_back(detail::exp_or_zero(best_h));
  }
  std::size_t tail = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(n_max))) - 1;
  std::vector<double> up_tail(upper.begin() + static_cast<long>(tail), upper.end());
  std::vector<double> lo_tail(lower.begin() + static_cast<long>(tail), lower.end());
  auto dr = detail::running_diag(up_tail, H);
  auto d1 = detail::running_diag(lo_tail, H);
  dr.note = "g(n_max) = " + std::to_string(g);
  d1.note = "h(n_max) = " + std::to_string(h);
  return {RadiusEstimate::estimated(upper.back(), dr), RadiusEstimate::estimated(lower.back(), d1)};
}

// inf_k beta_{n+k} / beta_k over every window of length n inside the cache.
inline double lower_bound_m(const BetaCache& beta, long n) {
  long lo = -beta.n_minus(), hi = beta.n_plus();
  if (n < 1 || n > hi - lo) throw ShiftError(ErrorCode::InsufficientHorizon, "lower_bound_m window exceeds the horizon");
  double best = kInf;
  for (long k = lo; k + n <= hi; ++k) best = std::min(best, beta.log_window(k, k + n));
  return detail::exp_or_zero(best);
}

namespace detail {

// Top eigenvalue of Re S truncated to the weights w_lo .. w_{hi-1}.
inline double truncated_w(const std::function<double(long)>& log_weight, long lo, long hi, double tol) {
  std::vector<double> b;
  b.reserve(static_cast<std::size_t>(std::max<long>(0, hi - lo)));
  for (long j = lo; j < hi; ++j) b.push_back(0.5 * exp_or_zero(log_weight(j)));
  return largest_eigenvalue(b, tol);
}

inline RadiusEstimate numerical_radius_estimate(const std::function<double(long)>& log_weight, Side side, long trunc,
                                                double tol) {
  if (trunc < 2) throw ShiftError(ErrorCode::InvalidArgument, "numerical_radius needs trunc >= 2");
  auto range = [&](long t) -> std::pair<long, long> {
    if (side == Side::Unilateral) return {0, t - 1};
    return {-(t / 2), t / 2};
  };
  auto at = [&](long t) {
    auto [lo, hi] = range(std::max<long>(2, t));
    return truncated_w(log_weight, lo, hi, tol);
  };
  double full = at(trunc), half = at(trunc / 2), quarter = at(trunc / 4);
  // Truncations only grow towards w. The last two increments give a
  // geometric tail estimate; the ratio is capped at 0.9.
  double e2 = std::max(0.0, full - half), e1 = std::max(0.0, half - quarter);
  double rho = e1 > 0.0 ? std::min(0.9, e2 / e1) : 0.0;
  auto [lo, hi] = range(trunc);
  double gersh = 0.0, prev = 0.0;
  for (long j = lo; j < hi; ++j) {
    double cur = exp_or_zero(log_weight(j));
    gersh = std::max(gersh, 0.5 * (prev + cur));
    prev = cur;
  }
  Diagnostic d;
  d.horizon = trunc;
  d.upper = std::max(gersh, 0.5 * prev);
  d.spread = std::max(e2, e2 * rho / (1.0 - rho));
  d.monotone = full >= half - tol && half >= quarter - tol;
  d.note = "lower bound; spread = tail estimate from the last two doublings";
  return RadiusEstimate::estimated(full, d);
}

// Largest eigenvalue of the k x k cyclic matrix with entries w_j / 2 on the
// (j, j+1 mod k) positions: the numerical radius of a periodic shift.
inline RadiusEstimate periodic_numerical_radius(const std::vector<double>& period) {
  const std::size_t k = period.size();
  double c = 0.0;
  for (double x : period) c = std::max(c, x);
  std::vector<double> x(k, 1.0), y(k);
  double lambda = 0.0, delta = kInf;
  for (int it = 0; it < 200000 && delta > 1e-15 * std::max(1.0, lambda); ++it) {
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t prev = (j + k - 1) % k, next = (j + 1) % k;
      y[j] = 0.5 * period[prev] * x[prev] + 0.5 * period[j] * x[next] + c * x[j];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      num += x[j] * y[j];
      den += x[j] * x[j];
    }
    double next_lambda = num / den - c;
    delta = std::fabs(next_lambda - lambda);
    lambda = next_lambda;
    double norm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    for (std::size_t j = 0; j < k; ++j) x[j] = y[j] / norm;
  }
  Diagnostic d;
  d.spread = delta;
  d.note = "Perron root of the period matrix";
  return RadiusEstimate::estimated(lambda, d);
}

}  // namespace detail

inline RadiusEstimate numerical_radius(const WeightSequence& w, long trunc, double tol) {
  auto est = detail::numerical_radius_estimate([&w](long j) { return w.log_weight(j); }, w.side(), trunc, tol);
  if (est.diag.spread > 100.0 * tol)
    throw ShiftError(ErrorCode::NonConvergence, "numerical radius still moving by " + std::to_string(est.diag.spread) +
                                                    " over the last doubling of trunc " + std::to_string(trunc));
  return est;
}

inline RadiusEstimate numerical_radius(const BetaCache& beta, long trunc, double tol) {
  auto est = detail::numerical_radius_estimate([&beta](long j) { return beta.log_weight(j); }, beta.side(), trunc, tol);
  return est;
}

namespace detail {

inline void finish_combined(RadiiReport& rep) {
  if (rep.side == Side::Unilateral) {
    rep.r1 = rep.plus.r1;
    rep.r = rep.plus.r;
    return;
  }
  rep.r1 = rep.plus.r1.value <= rep.minus->r1.value ? rep.plus.r1 : rep.minus->r1;
  rep.r = rep.plus.r.value >= rep.minus->r.value ? rep.plus.r : rep.minus->r;
}

inline void check_chain(RadiiReport& rep) {
  rep.chain_violations.clear();
  auto le = [&](const RadiusEstimate& a, const RadiusEstimate& b, const std::string& what) {
    double slack = 1e-9 + a.uncertainty() + b.uncertainty();
    double top = b.value + slack;
    if (!b.exact && b.diag.upper < kInf) top = std::max(top, b.diag.upper + 1e-9);
    if (!(a.value <= top))
      rep.chain_violations.push_back(what + ": " + std::to_string(a.value) + " > " + std::to_string(b.value));
  };
  auto side_chain = [&](const SideRadii& s, const std::string& tag) {
    le(s.r1, s.r2, "r1" + tag + " <= r2" + tag);
    le(s.r2, s.r3, "r2" + tag + " <= r3" + tag);
    le(s.r3, s.r, "r3" + tag + " <= r" + tag);
  };
  le(rep.m, rep.r1, "m <= r1");
  if (rep.side == Side::Unilateral) {
    side_chain(rep.plus, "");
  } else {
    side_chain(rep.plus, "+");
    side_chain(*rep.minus, "-");
    if (rep.q) le(*rep.q, rep.r, "q <= r");
    double mn = std::min(rep.plus.r1.value, rep.minus->r1.value);
    double mx = std::max(rep.plus.r.value, rep.minus->r.value);
    if (rep.r1.value != mn) rep.chain_violations.push_back("r1 != min(r1-, r1+)");
    if (rep.r.value != mx) rep.chain_violations.push_back("r != max(r-, r+)");
  }
  le(rep.r, rep.w, "r <= w");
  le(rep.w, rep.norm, "w <= norm");
  rep.chain_ok = rep.chain_violations.empty();
}

}  // namespace detail

// Generic finite-horizon estimates, no structural shortcuts.
inline RadiiReport estimate_radii(const WeightSequence& w, const BetaCache& beta, const RadiiOptions& opt = {}) {
  RadiiReport rep;
  rep.side = beta.side();
  auto side_estimates = [&](Branch b) {
    SideRadii s;
    std::tie(s.r2, s.r3) = estimate_r2_r3(beta, b);
    long H = beta.horizon(b);
    long n_max = std::min(opt.n_max, H / 2);
    long k_max = opt.k_max >= 0 ? opt.k_max : H - n_max;
    std::tie(s.r, s.r1) = estimate_r_r1(beta, b, n_max, k_max);
    return s;
  };
  rep.plus = side_estimates(Branch::Plus);
  if (rep.side == Side::Bilateral) rep.minus = side_estimates(Branch::Minus);
  detail::finish_combined(rep);

  Diagnostic md;
  md.horizon = beta.n_plus() + beta.n_minus();
  md.note = "inf of the weights inside the horizon";
  rep.m = RadiusEstimate::estimated(lower_bound_m(beta, 1), md);
  Diagnostic nd;
  nd.horizon = md.horizon;
  nd.note = "max of the weights inside the horizon";
  rep.norm = RadiusEstimate::estimated(beta.observed_max(), nd);
  long trunc = opt.w_trunc > 0 ? opt.w_trunc
                               : (rep.side == Side::Unilateral ? beta.n_plus() + 1 : 2 * std::min(beta.n_minus(), beta.n_plus()));
  rep.w = numerical_radius(beta, trunc, opt.w_tol);

  rep.invertibility = w.invertibility();
  if (rep.side == Side::Bilateral) {
    if (rep.invertibility == Invertibility::Undeclared) {
      rep.invertibility = beta.observed_min() > 0.0 ? Invertibility::Invertible : Invertibility::NotInvertible;
      rep.invertibility_presumed = true;
    }
    if (rep.invertible()) {
      auto inv = reciprocal_cache(beta);
      RadiiOptions o = opt;
      auto ri = [&](Branch b) {
        long H = inv.horizon(b);
        long n_max = std::min(o.n_max, H / 2);
        return estimate_r_r1(inv, b, n_max, o.k_max >= 0 ? o.k_max : H - n_max).first;
      };
      auto rp = ri(Branch::Plus), rm = ri(Branch::Minus);
      const RadiusEstimate& top = rp.value >= rm.value ? rp : rm;
      Diagnostic qd = top.diag;
      qd.note = "1 / r(S^-1) from the reciprocal weights";
      qd.spread = top.value > 0 ? top.diag.spread / (top.value * top.value) : 0.0;
      rep.q = RadiusEstimate::estimated(top.value > 0 ? 1.0 / top.value : kInf, qd);
    } else {
      Diagnostic qd;
      qd.note = "not invertible";
      rep.q = RadiusEstimate::estimated(0.0, qd);
    }
  }
  detail::check_chain(rep);
  return rep;
}

// Radii of periodic and eventually periodic sequences: the tail period of
// each side fixes every limit.
inline RadiiReport exact_periodic_radii(const WeightSequence& w, long trunc = 4096) {
  auto ev = w.eventual_form();
  if (!ev) throw ShiftError(ErrorCode::NotPeriodic, "sequence has no periodic tail");
  auto constant = w.constant_value();
  ExactReason why = constant ? ExactReason::Constant : ExactReason::PeriodicGeometricMean;
  auto side_of = [&](double g) {
    auto e = RadiusEstimate::make_exact(g, why);
    return SideRadii{e, e, e, e};
  };
  RadiiReport rep;
  rep.side = w.side();
  rep.plus = side_of(detail::geometric_mean(ev->period));
  if (rep.side == Side::Bilateral) rep.minus = side_of(detail::geometric_mean(ev->minus_period));
  // A zero in the prefix kills beta_n and every window through it, so only r keeps the period's value.
  auto zero_prefix = [](const std::vector<double>& v) { return std::find(v.begin(), v.end(), 0.0) != v.end(); };
  auto vanish = [](SideRadii& sr) { sr.r1 = sr.r2 = sr.r3 = RadiusEstimate::make_exact(0.0, ExactReason::QuasiNilpotentStructural); };
  if (zero_prefix(ev->prefix)) vanish(rep.plus);
  if (rep.minus && zero_prefix(ev->minus_prefix)) vanish(*rep.minus);
  detail::finish_combined(rep);

  std::vector<double> all;
  for (auto* l : {&ev->prefix, &ev->period, &ev->minus_prefix, &ev->minus_period}) all.insert(all.end(), l->begin(), l->end());
  Diagnostic sd;
  sd.note = "min / max over prefix and period";
  if (constant) {
    rep.m = rep.w = rep.norm = RadiusEstimate::make_exact(*constant, ExactReason::Constant);
  } else {
    rep.m = RadiusEstimate::estimated(*std::min_element(all.begin(), all.end()), sd);
    rep.norm = RadiusEstimate::estimated(*std::max_element(all.begin(), all.end()), sd);
    if (auto p = w.periodic_form(); p && p->size() <= 4096)
      rep.w = detail::periodic_numerical_radius(*p);
    else
      rep.w = detail::numerical_radius_estimate([&w](long j) { return w.log_weight(j); }, w.side(), trunc, 1e-10);
  }
  rep.invertibility = w.invertibility();
  if (rep.side == Side::Bilateral) {
    if (rep.invertible())
      rep.q = rep.r1;
    else
      rep.q = RadiusEstimate::make_exact(0.0, why);
  }
  detail::check_chain(rep);
  return rep;
}

namespace detail {

inline void overlay(RadiusEstimate& target, const std::map<std::string, double>& ann, const std::string& key) {
  auto it = ann.find(key);
  if (it == ann.end()) return;
  auto e = RadiusEstimate::make_exact(it->second, ExactReason::CorpusAnnotation);
  e.diag.horizon = target.diag.horizon;
  e.diag.note = "estimate " + std::to_string(target.value);
  target = e;
}

}  // namespace detail

// The report used by the rest of the toolkit: structure-exact values where
// available, estimates elsewhere.
inline RadiiReport compute_radii(const WeightSequence& w, const BetaCache& beta, const RadiiOptions& opt = {}) {
  RadiiReport est = estimate_radii(w, beta, opt);
  if (!opt.exact_shortcuts) return est;

  RadiiReport rep = est;
  if (w.eventual_form()) {
    RadiiReport ex = exact_periodic_radii(w, rep.side == Side::Unilateral ? beta.n_plus() : 2 * beta.n_plus());
    rep.plus = ex.plus;
    rep.minus = ex.minus;
    rep.q = ex.q;
    if (w.periodic_form()) {
      rep.m = ex.m;
      rep.w = ex.w;
      rep.norm = ex.norm;
    }
  }
  if (auto* f = std::get_if<FormulaWeights>(&w.structure()); f && f->name == "power_decay") {
    auto z = RadiusEstimate::make_exact(0.0, ExactReason::QuasiNilpotentStructural);
    rep.plus = SideRadii{z, z, z, z};
    if (rep.minus) rep.minus = SideRadii{z, z, z, z};
    if (rep.q) rep.q = z;
    rep.m = z;
  }
  auto ann = annotated_exact_radii(w);
  if (!ann.empty()) {
    const bool uni = rep.side == Side::Unilateral;
    for (const char* k : {"r1", "r2", "r3", "r"}) {
      RadiusEstimate& t = std::string(k) == "r1" ? rep.plus.r1
                          : std::string(k) == "r2" ? rep.plus.r2
                          : std::string(k) == "r3" ? rep.plus.r3
                                                   : rep.plus.r;
      detail::overlay(t, ann, uni ? std::string(k) : std::string(k) + "_plus");
      if (!uni) {
        RadiusEstimate& mt = std::string(k) == "r1" ? rep.minus->r1
                             : std::string(k) == "r2" ? rep.minus->r2
                             : std::string(k) == "r3" ? rep.minus->r3
                                                      : rep.minus->r;
        detail::overlay(mt, ann, std::string(k) + "_minus");
      }
    }
    detail::overlay(rep.w, ann, "w");
    if (rep.q) detail::overlay(*rep.q, ann, "q");
  }
  detail::finish_combined(rep);
  detail::check_chain(rep);
  return rep;
}

// Decimated (n, s_n) trace for plotting; block minima and maxima are kept so
// isolated dips survive the thinning.
inline std::vector<std::pair<long, double>> root_trace(const BetaCache& beta, Branch b, std::size_t max_points = 1000) {
  auto s = root_sequence(beta, b);
  long H = beta.horizon(b);
  std::vector<std::pair<long, double>> out;
  long block = std::max<long>(1, static_cast<long>(2 * H / static_cast<long>(std::max<std::size_t>(2, max_points))));
  for (long start = 1; start <= H; start += block) {
    long end = std::min(H, start + block - 1);
    long imin = start, imax = start;
    for (long n = start; n <= end; ++n) {
      if (s[n] < s[imin]) imin = n;
      if (s[n] > s[imax]) imax = n;
    }
    out.emplace_back(std::min(imin, imax), s[std::min(imin, imax)]);
    if (imin != imax) out.emplace_back(std::max(imin, imax), s[std::max(imin, imax)]);
  }
  return out;
}

// Running Fekete bounds exp(min_{n' <= n} g(n')) and exp(max_{n' <= n} h(n')).
inline std::pair<std::vector<double>, std::vector<double>> fekete_trace(const BetaCache& beta, Branch b, long n_max) {
  long H = beta.horizon(b);
  n_max = std::min(n_max, H / 2);
  long k_lo = b == Branch::Plus ? 0 : 1;
  std::vector<double> up, lo;
  double best_g = kInf, best_h = -kInf;
  for (long n = 1; n <= n_max; ++n) {
    double g = -kInf, h = kInf;
    for (long k = k_lo; k + n <= H; ++k) {
      double l = beta.side_window(b, k, n) / static_cast<double>(n);
      g = std::max(g, l);
      h = std::min(h, l);
    }
    best_g = std::min(best_g, g);
    best_h = std::max(best_h, h);
    up.push_back(detail::exp_or_zero(best_g));
    lo.push_back(detail::exp_or_zero(best_h));
  }
  return {up, lo};
}

}  // namespace shiftspec
