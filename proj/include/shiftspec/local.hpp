#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shiftspec/classify.hpp"
#include "shiftspec/oracle.hpp"

namespace shiftspec {

struct LocalSpectrumReport {
  LocalRegion region;
  std::vector<SpectralRegion> contained;  // sets always inside sigma_S(x)
  std::optional<RadiusEstimate> r_omega;  // unilateral
  std::optional<RadiusEstimate> r_omega_minus, r_omega_plus;
  RadiusEstimate r_local;
  std::string case_tag;
  std::string caveat;
};

namespace detail {

// Tail-window liminf (low) or limsup (high) of exp(l_n / n), n = 1..H, where
// l_n = -inf marks a skipped index. All-skipped windows give +inf (low) or 0 (high).
inline RadiusEstimate tail_root_estimate(const std::vector<double>& l, long H, bool low, const std::string& note) {
  std::vector<double> s(static_cast<std::size_t>(H + 1), 0.0);
  for (long n = 1; n <= H; ++n) {
    double v = l[static_cast<std::size_t>(n)];
    s[static_cast<std::size_t>(n)] = v == -kInf ? (low ? kInf : 0.0) : std::exp(v / static_cast<double>(n));
  }
  long n0 = std::max<long>(2, static_cast<long>(std::ceil(0.9 * static_cast<double>(H))));
  auto run = running_half_window(s, H, n0);
  const auto& series = low ? run.low : run.high;
  Diagnostic d;
  d.horizon = H;
  d.note = note;
  bool finite = std::all_of(series.begin(), series.end(), [](double x) { return std::isfinite(x); });
  if (finite) {
    d = running_diag(series, H);
    d.note = note;
  }
  return RadiusEstimate::estimated(series.back(), d);
}

inline RadiusEstimate infinite_radius(const std::string& note) {
  Diagnostic d;
  d.note = note;
  return RadiusEstimate::estimated(kInf, d);
}

inline RadiusEstimate zero_radius(const std::string& note) {
  Diagnostic d;
  d.note = note;
  return RadiusEstimate::estimated(0.0, d);
}

// liminf_n |beta_n / a_n|^{1/n} over the plus support.
inline RadiusEstimate r_omega_plus(const BetaCache& beta, const VectorSpec& x) {
  if (x.max_index() < 1) return infinite_radius("no support beyond index 0");
  if (x.finitely_supported()) return infinite_radius("finitely supported: +inf");
  long H = beta.n_plus();
  std::vector<double> l(static_cast<std::size_t>(H + 1), -kInf);
  for (long n = 1; n <= H; ++n) {
    double la = x.log_abs(n);
    if (la != -kInf) l[static_cast<std::size_t>(n)] = beta.logbeta(n) - la;
  }
  return tail_root_estimate(l, H, true, "liminf |beta_n / a_n|^{1/n}, zero coefficients skipped");
}

// limsup_n |a_{-n} / beta_{-n}|^{1/n}.
inline RadiusEstimate r_omega_minus(const BetaCache& beta, const VectorSpec& x) {
  if (x.min_index() > -1) return zero_radius("no support below index 0");
  if (x.finitely_supported()) return zero_radius("finitely supported: 0");
  long H = beta.n_minus();
  std::vector<double> l(static_cast<std::size_t>(H + 1), -kInf);
  for (long n = 1; n <= H; ++n) {
    double la = x.log_abs(-n);
    if (la != -kInf) l[static_cast<std::size_t>(n)] = la - beta.logbeta(-n);
  }
  return tail_root_estimate(l, H, false, "limsup |a_{-n} / beta_{-n}|^{1/n}");
}

inline RadiusEstimate local_radius(const BetaCache& beta, const VectorSpec& x) {
  long n_max = x.finitely_supported() ? beta.n_plus() - std::max<long>(0, x.max_index()) : beta.n_plus() / 2;
  if (n_max < 2) throw ShiftError(ErrorCode::InsufficientHorizon, "horizon leaves no room for powers of x");
  return power_norms(beta, x, n_max).r_local;
}

}  // namespace detail

inline LocalSpectrumReport local_spectrum(const RadiiReport& rep, const BetaCache& beta, const VectorSpec& x,
                                          const Tolerance& tol = {}) {
  x.validate(beta.side());
  LocalSpectrumReport out;
  if (rep.side == Side::Bilateral) {
    auto sv = approx_le(rep.minus->r2, rep.plus.r3, "r2-", "r3+", tol);
    if (sv.is_false()) throw ShiftError(ErrorCode::SVEPViolated, "S lacks SVEP: " + sv.text);
  }
  out.r_local = detail::local_radius(beta, x);

  if (!beta.zero_indices().empty()) {
    out.region = {empty_region(), true};
    out.case_tag = "non-injective";
    out.caveat = "the branch rules assume non-zero weights; only r_local is reported";
    return out;
  }

  if (rep.side == Side::Unilateral) {
    const auto& r2 = rep.r2();
    const auto& r3 = rep.r3();
    out.contained.push_back(disc(r2.value));
    out.r_omega = detail::r_omega_plus(beta, x);
    auto a = approx_lt(r3, *out.r_omega, "r3", "R_omega", tol);
    if (a) {
      out.region = {disc(r3.value), false};
      out.case_tag = "unilateral-branch-a[r3 < R_omega]: " + a.text;
    } else if (a.is_false()) {
      out.region = {disc(out.r_omega->value), true};
      out.case_tag = "unilateral-branch-b[r3 >= R_omega]: " + a.text;
      out.caveat = "containment only; the local spectrum may be larger";
    } else {
      out.region = {disc(r2.value), true};
      out.case_tag = "unilateral-undecided: " + a.text;
      out.caveat = "branch not decidable at this horizon; universal containment reported";
    }
    return out;
  }

  const auto& pl = rep.plus;
  const auto& mi = *rep.minus;
  out.contained.push_back(annulus(mi.r3.value, pl.r2.value, false, false));
  out.r_omega_minus = detail::r_omega_minus(beta, x);
  out.r_omega_plus = detail::r_omega_plus(beta, x);
  const auto& Rm = *out.r_omega_minus;
  const auto& Rp = *out.r_omega_plus;

  // x supported on a right half-line with r2- = 0: unilateral branch logic.
  auto z2 = is_zero(mi.r2, "r2-", tol);
  if (z2 && x.min_index() != std::numeric_limits<long>::min()) {
    auto a = approx_lt(pl.r3, Rp, "r3+", "R+", tol);
    if (a) {
      out.region = {disc(pl.r3.value), false};
      out.case_tag = "half-line-branch-a[r2- = 0, r3+ < R+]: " + a.text;
    } else if (a.is_false()) {
      out.region = {disc(Rp.value), true};
      out.case_tag = "half-line-branch-b[r2- = 0, r3+ >= R+]: " + a.text;
      out.caveat = "containment only; the local spectrum may be larger";
    } else {
      out.region = {out.contained.front(), true};
      out.case_tag = "half-line-undecided: " + a.text;
      out.caveat = "branch not decidable at this horizon; universal containment reported";
    }
    return out;
  }

  auto lm = approx_lt(Rm, mi.r2, "R-", "r2-", tol);
  auto lp = approx_lt(pl.r3, Rp, "r3+", "R+", tol);
  if (lm && lp) {
    out.region = {annulus(mi.r2.value, pl.r3.value), false};
    out.case_tag = "bilateral-branch-a[R- < r2-, r3+ < R+]: " + lm.text + "; " + lp.text;
    return out;
  }
  double inner = std::max(Rm.value, mi.r2.value), outer = std::min(Rp.value, pl.r3.value);
  out.region = {annulus(inner, outer, false, false), true};
  out.case_tag = "bilateral-branch-b: " + lm.text + "; " + lp.text;
  out.caveat = "containment only; the local spectrum may be larger";
  if (!lm.decided() || !lp.decided()) out.caveat += "; branch a not decidable at this horizon";
  return out;
}

}  // namespace shiftspec
