#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "shiftspec/parallel.hpp"
#include "shiftspec/radii.hpp"
#include "shiftspec/rng.hpp"
#include "shiftspec/vector.hpp"
#include "shiftspec/weights.hpp"

namespace shiftspec {

struct TruncatedVector {
  Side side = Side::Unilateral;
  long lo = 0;  // index of values[0]
  std::vector<cplx> values;

  long hi() const { return lo + static_cast<long>(values.size()) - 1; }
  cplx at(long n) const { return n < lo || n > hi() ? cplx(0.0) : values[static_cast<std::size_t>(n - lo)]; }
};

// Complex number m * exp(s): keeps magnitudes far outside double range.
struct ScaledComplex {
  cplx m = 0.0;
  double s = 0.0;

  static ScaledComplex from_log(double log_abs, double phase) {
    if (log_abs == -kInf) return {};
    return {std::polar(1.0, phase), log_abs};
  }

  bool is_zero() const { return m == cplx(0.0); }
  double log_abs() const { return is_zero() ? -kInf : s + std::log(std::abs(m)); }

  ScaledComplex& operator+=(const ScaledComplex& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      *this = o;
      return *this;
    }
    if (o.s > s) {
      m = m * std::exp(s - o.s) + o.m;
      s = o.s;
    } else {
      m += o.m * std::exp(o.s - s);
    }
    normalize();
    return *this;
  }

  ScaledComplex operator-() const { return {-m, s}; }

  void normalize() {
    double a = std::abs(m);
    if (a == 0.0) {
      m = 0.0;
      s = 0.0;
      return;
    }
    m /= a;
    s += std::log(a);
  }
};

namespace detail {

inline double log_sum_exp(const std::vector<double>& v) {
  double top = -kInf;
  for (double x : v) top = std::max(top, x);
  if (top == -kInf || top == kInf) return top;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - top);
  return top + std::log(acc);
}

// Index window of x inside the cache after truncating infinite tails.
inline std::pair<long, long> support_window(const BetaCache& beta, const VectorSpec& x, long reserve_plus) {
  long lo = x.min_index(), hi = x.max_index();
  if (x.min_index() == std::numeric_limits<long>::min()) lo = -beta.n_minus();
  if (x.max_index() == std::numeric_limits<long>::max()) hi = beta.n_plus() - reserve_plus;
  if (lo < -beta.n_minus() || hi + reserve_plus > beta.n_plus() || lo > hi)
    throw ShiftError(ErrorCode::InsufficientHorizon, "vector support plus n_max exceeds the beta horizon");
  return {lo, hi};
}

}  // namespace detail

struct PowerNorms {
  std::vector<double> log_norms;  // log ||S^n x||, n = 0 .. n_max
  std::vector<double> roots;      // ||S^n x||^{1/n}; roots[0] unused
  RadiusEstimate r_local;
  long support_lo = 0, support_hi = 0;

  double norm(long n) const { return std::exp(log_norms[static_cast<std::size_t>(n)]); }
};

// ||S^n x||^2 = sum_k |a_k|^2 (beta_{n+k} / beta_k)^2, summed in the log domain.
inline PowerNorms power_norms(const BetaCache& beta, const VectorSpec& x, long n_max) {
  x.validate(beta.side());
  if (n_max < 2) throw ShiftError(ErrorCode::InvalidArgument, "power_norms needs n_max >= 2");
  auto [lo, hi] = detail::support_window(beta, x, n_max);
  PowerNorms out;
  out.support_lo = lo;
  out.support_hi = hi;
  std::vector<double> log_a;
  for (long k = lo; k <= hi; ++k) log_a.push_back(x.log_abs(k));

  out.log_norms.resize(static_cast<std::size_t>(n_max + 1));
  out.roots.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  std::vector<double> terms(log_a.size());
  for (long n = 0; n <= n_max; ++n) {
    for (long k = lo; k <= hi; ++k) {
      double la = log_a[static_cast<std::size_t>(k - lo)];
      terms[static_cast<std::size_t>(k - lo)] = la == -kInf ? -kInf : 2.0 * (la + beta.log_window(k, k + n));
    }
    double l = 0.5 * detail::log_sum_exp(terms);
    out.log_norms[static_cast<std::size_t>(n)] = l;
    if (n > 0) out.roots[static_cast<std::size_t>(n)] = detail::exp_or_zero(l / static_cast<double>(n));
  }
  long n0 = std::max<long>(2, static_cast<long>(std::ceil(0.9 * static_cast<double>(n_max))));
  auto run = detail::running_half_window(out.roots, n_max, n0);
  auto d = detail::running_diag(run.high, n_max);
  d.note = "limsup of ||S^n x||^{1/n} over the window [n/2, n]";
  out.r_local = RadiusEstimate::estimated(run.high.back(), d);
  return out;
}

// ||(S - lambda) f|| / ||f|| for f = sum_{|n| <= trunc} beta_n lambda^{-n} e_n.
inline double eigenvector_residual(const BetaCache& beta, cplx lambda, long trunc) {
  if (beta.side() != Side::Bilateral)
    throw ShiftError(ErrorCode::InvalidArgument, "eigenvector_residual needs a bilateral shift");
  if (lambda == cplx(0.0)) throw ShiftError(ErrorCode::InvalidArgument, "eigenvector_residual needs lambda != 0");
  if (trunc < 1 || trunc + 1 > beta.n_plus() || trunc > beta.n_minus())
    throw ShiftError(ErrorCode::InsufficientHorizon, "eigenvector_residual needs trunc + 1 <= horizon");
  const double ll = std::log(std::abs(lambda));
  std::vector<double> sq;
  for (long n = -trunc; n <= trunc; ++n) sq.push_back(2.0 * (beta.logbeta(n) - static_cast<double>(n) * ll));
  double log_norm_sq = detail::log_sum_exp(sq);
  if (!(log_norm_sq <= std::log(1e12)))
    throw ShiftError(ErrorCode::SeriesDiverged, "partial sums of |beta_n / lambda^n|^2 exceed 1e12");
  std::vector<double> boundary = {2.0 * (beta.logbeta(trunc + 1) - static_cast<double>(trunc) * ll),
                                  2.0 * (beta.logbeta(-trunc) + static_cast<double>(trunc + 1) * ll)};
  return std::exp(0.5 * (detail::log_sum_exp(boundary) - log_norm_sq));
}

// ||(S - lambda)^* k|| / ||k|| for k = sum (conj lambda)^n / beta_n e_n truncated at |n| <= trunc.
inline double adjoint_kernel_residual(const BetaCache& beta, cplx lambda, long trunc) {
  const bool uni = beta.side() == Side::Unilateral;
  if (trunc < 1 || trunc > beta.n_plus() || (!uni && trunc + 1 > beta.n_minus()))
    throw ShiftError(ErrorCode::InsufficientHorizon, "adjoint_kernel_residual needs trunc within the horizon");
  if (lambda == cplx(0.0)) {
    if (!uni) throw ShiftError(ErrorCode::InvalidArgument, "bilateral adjoint kernel needs lambda != 0");
    return 0.0;
  }
  const double ll = std::log(std::abs(lambda));
  std::vector<double> sq;
  for (long n = uni ? 0 : -trunc; n <= trunc; ++n) sq.push_back(2.0 * (static_cast<double>(n) * ll - beta.logbeta(n)));
  double log_norm_sq = detail::log_sum_exp(sq);
  if (!(log_norm_sq <= std::log(1e12)))
    throw ShiftError(ErrorCode::SeriesDiverged, "partial sums of |lambda^n / beta_n|^2 exceed 1e12");
  std::vector<double> boundary = {2.0 * (static_cast<double>(trunc + 1) * ll - beta.logbeta(trunc))};
  if (!uni) boundary.push_back(2.0 * (-static_cast<double>(trunc) * ll - beta.logbeta(-trunc - 1)));
  return std::exp(0.5 * (detail::log_sum_exp(boundary) - log_norm_sq));
}

enum class Membership { InLocalResolvent, InLocalSpectrum, Inconclusive };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::InLocalResolvent: return "in-local-resolvent";
    case Membership::InLocalSpectrum: return "in-local-spectrum";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct MembershipVerdict {
  cplx lambda;
  Membership decision = Membership::Inconclusive;
  std::string evidence;
  double log_ratio = 0.0;  // log(tail max / head max) of the deciding end
};

namespace detail {

enum class EndTrend { Decays, Grows, Unclear };

struct EndStats {
  EndTrend trend = EndTrend::Unclear;
  double log_ratio = 0.0;
};

// logA is indexed by distance from 0 towards the end being judged.
inline EndStats judge_end(const std::vector<double>& logA, const std::vector<double>& logC, long support_reach,
                          double log_scale_t) {
  const long N = static_cast<long>(logA.size()) - 1;
  const double evidence = std::log(1e3);
  long head_end = std::max<long>(static_cast<long>(std::ceil(0.2 * static_cast<double>(N))), support_reach);
  long tail_start = static_cast<long>(std::ceil(0.8 * static_cast<double>(N)));
  EndStats st;
  if (head_end >= tail_start) return st;
  double head = -kInf, tail_max = -kInf, c_tail_max = -kInf;
  for (long n = 0; n <= head_end; ++n) head = std::max(head, logA[static_cast<std::size_t>(n)]);
  for (long n = tail_start; n <= N; ++n) {
    tail_max = std::max(tail_max, logA[static_cast<std::size_t>(n)]);
    c_tail_max = std::max(c_tail_max, logC[static_cast<std::size_t>(n)]);
  }
  if (tail_max == -kInf) {
    st.trend = EndTrend::Decays;
    st.log_ratio = -kInf;
    return st;
  }
  st.log_ratio = tail_max - head;
  bool settling = logA[static_cast<std::size_t>(N)] <= logA[static_cast<std::size_t>(tail_start)];
  if (st.log_ratio <= -evidence && settling) {
    st.trend = EndTrend::Decays;
  } else if (st.log_ratio >= evidence) {
    // Growth built on a sum that cancelled to rounding level is not evidence.
    if (c_tail_max >= log_scale_t + std::log(1e-10)) st.trend = EndTrend::Grows;
  }
  return st;
}

}  // namespace detail

// Solves (S - lambda) f = x coefficientwise: A_n = (beta_n / lambda^n) C_n with
// C_{n+1} = C_n - a_{n+1} lambda^n / beta_{n+1}. The unilateral boundary fixes
// C; bilateral shifts try both the decaying-left and decaying-right choices.
inline MembershipVerdict resolvent_recurrence(const BetaCache& beta, const VectorSpec& x, cplx lambda, long n_max) {
  MembershipVerdict v;
  v.lambda = lambda;
  x.validate(beta.side());
  if (lambda == cplx(0.0)) {
    v.evidence = "lambda = 0 is not covered by the recurrence";
    return v;
  }
  const bool uni = beta.side() == Side::Unilateral;
  long np = std::min(n_max, beta.n_plus());
  long nm = uni ? 0 : std::min(n_max, beta.n_minus());
  long lo = -nm, hi = np;
  long ext_lo = lo, ext_hi = hi;
  if (x.max_index() == std::numeric_limits<long>::max()) ext_hi = beta.n_plus();
  if (x.min_index() == std::numeric_limits<long>::min()) ext_lo = -beta.n_minus();
  if (x.finitely_supported() && (x.min_index() < lo || x.max_index() > hi)) {
    v.evidence = "support of x is wider than the window";
    return v;
  }
  for (long n = ext_lo; n <= ext_hi; ++n) {
    if (beta.logbeta(n) == -kInf || beta.logbeta(n) == kInf) {
      v.evidence = "zero weight inside the window";
      return v;
    }
  }
  const double ll = std::log(std::abs(lambda)), al = std::arg(lambda);
  const std::size_t len = static_cast<std::size_t>(ext_hi - ext_lo + 1);
  std::vector<ScaledComplex> t(len);
  double log_scale_t = -kInf;
  for (long j = ext_lo; j <= ext_hi; ++j) {
    double la = x.log_abs(j);
    if (la == -kInf) continue;
    double lt = la + static_cast<double>(j - 1) * ll - beta.logbeta(j);
    t[static_cast<std::size_t>(j - ext_lo)] = ScaledComplex::from_log(lt, x.phase(j) + static_cast<double>(j - 1) * al);
    log_scale_t = std::max(log_scale_t, lt);
  }

  // Candidate "left": C_n = -sum_{j <= n} t_j. Candidate "right": C_n = sum_{j > n} t_j.
  std::vector<double> logC_left(len), logC_right(len);
  ScaledComplex acc;
  for (std::size_t i = 0; i < len; ++i) {
    acc += -t[i];
    logC_left[i] = acc.log_abs();
  }
  acc = {};
  for (std::size_t i = len; i-- > 0;) {
    logC_right[i] = acc.log_abs();
    acc += t[i];
  }

  long reach_plus = x.finitely_supported() ? std::max<long>(0, x.max_index()) : 0;
  long reach_minus = x.finitely_supported() ? std::max<long>(0, -x.min_index()) : 0;
  auto ends_for = [&](const std::vector<double>& logC) {
    auto logA = [&](long n) {
      double c = logC[static_cast<std::size_t>(n - ext_lo)];
      return c == -kInf ? -kInf : beta.logbeta(n) - static_cast<double>(n) * ll + c;
    };
    std::vector<detail::EndStats> ends;
    std::vector<double> a_plus, c_plus;
    for (long n = 0; n <= hi; ++n) {
      a_plus.push_back(logA(n));
      c_plus.push_back(logC[static_cast<std::size_t>(n - ext_lo)]);
    }
    ends.push_back(detail::judge_end(a_plus, c_plus, reach_plus, log_scale_t));
    if (!uni) {
      std::vector<double> a_minus, c_minus;
      for (long n = 0; n >= lo; --n) {
        a_minus.push_back(logA(n));
        c_minus.push_back(logC[static_cast<std::size_t>(n - ext_lo)]);
      }
      ends.push_back(detail::judge_end(a_minus, c_minus, reach_minus, log_scale_t));
    }
    return ends;
  };

  std::vector<std::vector<detail::EndStats>> candidates = {ends_for(logC_left)};
  if (!uni) candidates.push_back(ends_for(logC_right));
  bool all_grow = true;
  double worst = -kInf;
  for (const auto& ends : candidates) {
    bool decays = std::all_of(ends.begin(), ends.end(), [](const auto& e) { return e.trend == detail::EndTrend::Decays; });
    bool grows = std::any_of(ends.begin(), ends.end(), [](const auto& e) { return e.trend == detail::EndTrend::Grows; });
    double r = -kInf;
    for (const auto& e : ends) r = std::max(r, e.log_ratio);
    if (decays) {
      v.decision = Membership::InLocalResolvent;
      v.log_ratio = r;
      v.evidence = "coefficients decay: tail/head ratio exp(" + std::to_string(r) + ")";
      return v;
    }
    all_grow = all_grow && grows;
    worst = std::max(worst, r);
  }
  v.log_ratio = worst;
  if (all_grow) {
    v.decision = Membership::InLocalSpectrum;
    v.evidence = "every solution candidate grows: tail/head ratio exp(" + std::to_string(worst) + ")";
  } else {
    v.evidence = "no decisive trend within n_max; tail/head ratio exp(" + std::to_string(worst) + ")";
  }
  return v;
}

struct Reconstruction {
  TruncatedVector vector;
  double distance = 0.0;
};

// Trapezoidal rule for (1/2 pi i) closed integral of f(lambda) sum beta_n lambda^{-n-1} e_n over
// |lambda| = radius, f(lambda) = sum (a_n / beta_n) lambda^n.
inline Reconstruction contour_reconstruct(const BetaCache& beta, const VectorSpec& x, double radius, long nodes) {
  if (beta.side() != Side::Unilateral)
    throw ShiftError(ErrorCode::InvalidArgument, "contour_reconstruct covers unilateral shifts");
  x.validate(beta.side());
  if (!x.finitely_supported()) throw ShiftError(ErrorCode::InvalidArgument, "contour_reconstruct needs finite support");
  if (nodes < 64 || (nodes & (nodes - 1)) != 0)
    throw ShiftError(ErrorCode::InvalidArgument, "nodes must be a power of two >= 64");
  if (x.max_index() > beta.n_plus())
    throw ShiftError(ErrorCode::InsufficientHorizon, "support of x exceeds the beta horizon");
  double r3 = estimate_r2_r3(beta, Branch::Plus).second.value;
  if (!(radius > r3))
    throw ShiftError(ErrorCode::RadiusInsideSpectrum,
                     "radius " + std::to_string(radius) + " <= r3 estimate " + std::to_string(r3));

  const double lr = std::log(radius);
  const std::size_t M = static_cast<std::size_t>(nodes);
  std::vector<cplx> f(M, 0.0);
  for (std::size_t j = 0; j < M; ++j) {
    double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(M);
    for (const auto& [k, a] : x.coefficients()) {
      double l = std::log(std::abs(a)) - beta.logbeta(k) + static_cast<double>(k) * lr;
      f[j] += std::polar(std::exp(l), std::arg(a) + static_cast<double>(k) * theta);
    }
  }
  std::vector<cplx> F(M, 0.0);
  for (std::size_t p = 0; p < M; ++p) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < M; ++j)
      s += f[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>((p * j) % M) / static_cast<double>(M));
    F[p] = s / static_cast<double>(M);
  }

  Reconstruction out;
  out.vector.side = Side::Unilateral;
  out.vector.lo = 0;
  double dist_sq = 0.0;
  for (long n = 0; n <= beta.n_plus(); ++n) {
    double scale = detail::exp_or_zero(beta.logbeta(n) - static_cast<double>(n) * lr);
    cplx c = scale * F[static_cast<std::size_t>(n) % M];
    out.vector.values.push_back(c);
    dist_sq += std::norm(c - x.coefficient(n));
  }
  out.distance = std::sqrt(dist_sq);
  return out;
}

struct ChainCheckOptions {
  Side side = Side::Unilateral;
  double weight_lo = 0.1;
  double weight_hi = 3.0;
};

struct ChainCheckReport {
  long passed = 0;
  long failed = 0;
  double worst_margin = kInf;        // smallest b - a over the chain pairs, slack excluded
  double worst_identity_error = 0.0;  // bilateral min / max identities
  double worst_local_gap = 0.0;       // |r_S(e_0) - r3| from two independent code paths
  std::vector<std::string> failures;
};

inline ChainCheckReport random_chain_check(std::uint64_t seed, long count, long horizon, const ChainCheckOptions& opt = {}) {
  if (count < 1) throw ShiftError(ErrorCode::InvalidArgument, "random_chain_check needs count >= 1");
  struct Sample {
    bool ok = true;
    double margin = kInf, identity = 0.0, local_gap = 0.0;
    std::string failure;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(count));
  const bool bi = opt.side == Side::Bilateral;

  parallel_for(samples.size(), [&](std::size_t i) {
    auto rng = XorShift64Star::for_sample(seed, i);
    std::vector<double> plus(static_cast<std::size_t>(horizon)), minus;
    for (auto& w : plus) w = rng.uniform(opt.weight_lo, opt.weight_hi);
    if (bi) {
      minus.resize(static_cast<std::size_t>(horizon));
      for (auto& w : minus) w = rng.uniform(opt.weight_lo, opt.weight_hi);
    }
    auto w = WeightSequence::from_list(opt.side, plus, minus, 1.0, std::max(3.0, opt.weight_hi));
    auto beta = build_beta(w, bi ? horizon : 0, horizon);
    RadiiOptions ro;
    ro.exact_shortcuts = false;
    auto rep = estimate_radii(w, beta, ro);
    Sample& s = samples[i];
    std::string tag = "sample " + std::to_string(i) + ": ";
    if (!rep.chain_ok) {
      s.ok = false;
      s.failure = tag + rep.chain_violations.front();
    }
    auto gap = [&](const RadiusEstimate& a, const RadiusEstimate& b) { s.margin = std::min(s.margin, b.value - a.value); };
    gap(rep.m, rep.r1);
    for (const SideRadii* sr : {&rep.plus, rep.minus ? &*rep.minus : nullptr}) {
      if (!sr) continue;
      gap(sr->r1, sr->r2);
      gap(sr->r2, sr->r3);
      gap(sr->r3, sr->r);
    }
    gap(rep.r, rep.w);
    gap(rep.w, rep.norm);

    // Windows of length n_max bound r1 from below.
    long n = std::min<long>(ro.n_max, horizon / 2);
    double mn = std::pow(lower_bound_m(beta, n), 1.0 / static_cast<double>(n));
    if (mn > rep.r1.value + 1e-12) {
      s.ok = false;
      s.failure = tag + "window infimum " + std::to_string(mn) + " > r1 " + std::to_string(rep.r1.value);
    }
    if (bi) {
      s.identity = std::max(std::fabs(rep.r1.value - std::min(rep.plus.r1.value, rep.minus->r1.value)),
                            std::fabs(rep.r.value - std::max(rep.plus.r.value, rep.minus->r.value)));
      if (s.identity > 1e-12) {
        s.ok = false;
        s.failure = tag + "min/max identity off by " + std::to_string(s.identity);
      }
    }
    auto pn = power_norms(beta, VectorSpec::basis(0), horizon);
    s.local_gap = std::fabs(pn.r_local.value - rep.plus.r3.value);
    if (s.local_gap > 1e-9 + pn.r_local.uncertainty() + rep.plus.r3.uncertainty()) {
      s.ok = false;
      s.failure = tag + "r_S(e_0) " + std::to_string(pn.r_local.value) + " vs r3 " + std::to_string(rep.plus.r3.value);
    }
  });

  ChainCheckReport out;
  for (const auto& s : samples) {
    if (s.ok)
      ++out.passed;
    else {
      ++out.failed;
      out.failures.push_back(s.failure);
    }
    out.worst_margin = std::min(out.worst_margin, s.margin);
    out.worst_identity_error = std::max(out.worst_identity_error, s.identity);
    out.worst_local_gap = std::max(out.worst_local_gap, s.local_gap);
  }
  return out;
}

}  // namespace shiftspec
