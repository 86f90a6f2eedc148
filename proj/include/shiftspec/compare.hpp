#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "shiftspec/radii.hpp"

namespace shiftspec {

enum class Tri { True, False, Undecidable };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Undecidable: return "undecidable";
  }
  return "undecidable";
}

struct Tolerance {
  double tau_floor = 1e-6;       // relative floor of tau
  double spread_factor = 3.0;    // tau also covers this many combined spreads
  double max_rel_spread = 0.05;  // beyond this an estimate decides nothing
  double zero_tol = 0.02;        // estimates at or below this count as zero
  double nonzero_tol = 0.2;      // estimates above this count as non-zero
};

// Result of one comparison plus the text that goes into a verdict basis.
struct Comparison {
  Tri result = Tri::Undecidable;
  std::string text;

  explicit operator bool() const { return result == Tri::True; }
  bool is_false() const { return result == Tri::False; }
  bool decided() const { return result != Tri::Undecidable; }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline bool too_loose(const RadiusEstimate& a, const Tolerance& tol) {
  if (a.exact) return false;
  double s = a.uncertainty();
  return s > tol.max_rel_spread * std::max(std::fabs(a.value), 1e-12) && s > tol.tau_floor;
}

inline double slack(const RadiusEstimate& a, const RadiusEstimate& b, const Tolerance& tol) {
  double scale = std::max(std::fabs(a.value), std::fabs(b.value));
  return std::max(tol.tau_floor * scale, tol.spread_factor * (a.uncertainty() + b.uncertainty()));
}

inline Comparison compare_result(Tri t, const std::string& lhs, const std::string& op, const std::string& rhs,
                                 const RadiusEstimate& a, const RadiusEstimate& b) {
  const char* word = t == Tri::True ? "yes" : t == Tri::False ? "no" : "undecidable";
  return {t, lhs + " " + op + " " + rhs + " within tau: " + fmt(a.value) + " vs " + fmt(b.value) + " -> " + word};
}

}  // namespace detail

inline Comparison approx_eq(const RadiusEstimate& a, const RadiusEstimate& b, const std::string& lhs,
                            const std::string& rhs, const Tolerance& tol = {}) {
  Tri t;
  if (a.exact && b.exact)
    t = std::fabs(a.value - b.value) <= tol.tau_floor * std::max(std::fabs(a.value), std::fabs(b.value)) ? Tri::True : Tri::False;
  else if (detail::too_loose(a, tol) || detail::too_loose(b, tol))
    t = Tri::Undecidable;
  else
    t = std::fabs(a.value - b.value) <= detail::slack(a, b, tol) ? Tri::True : Tri::False;
  return detail::compare_result(t, lhs, "=", rhs, a, b);
}

// a <= b, where a within tau of b counts as <=.
inline Comparison approx_le(const RadiusEstimate& a, const RadiusEstimate& b, const std::string& lhs,
                            const std::string& rhs, const Tolerance& tol = {}) {
  Tri t;
  if (std::isinf(a.value) || std::isinf(b.value))
    t = a.value <= b.value ? Tri::True : Tri::False;
  else if (detail::too_loose(a, tol) || detail::too_loose(b, tol))
    t = Tri::Undecidable;
  else
    t = a.value <= b.value + detail::slack(a, b, tol) ? Tri::True : Tri::False;
  return detail::compare_result(t, lhs, "<=", rhs, a, b);
}

// a < b by more than tau; within tau it is undecidable.
inline Comparison approx_lt(const RadiusEstimate& a, const RadiusEstimate& b, const std::string& lhs,
                            const std::string& rhs, const Tolerance& tol = {}) {
  Tri t;
  if (std::isinf(a.value) || std::isinf(b.value)) {
    t = a.value < b.value ? Tri::True : Tri::False;
  } else if (detail::too_loose(a, tol) || detail::too_loose(b, tol)) {
    t = Tri::Undecidable;
  } else if (a.exact && b.exact) {
    t = a.value < b.value ? Tri::True : Tri::False;
  } else {
    double s = detail::slack(a, b, tol);
    t = b.value - a.value > s ? Tri::True : a.value - b.value > s ? Tri::False : Tri::Undecidable;
  }
  return detail::compare_result(t, lhs, "<", rhs, a, b);
}

inline Comparison is_zero(const RadiusEstimate& a, const std::string& name, const Tolerance& tol = {}) {
  Tri t;
  if (a.exact)
    t = a.value == 0.0 ? Tri::True : Tri::False;
  else if (a.value <= tol.zero_tol)
    t = Tri::True;
  else if (a.value > tol.nonzero_tol)
    t = Tri::False;
  else
    t = Tri::Undecidable;
  const char* word = t == Tri::True ? "yes" : t == Tri::False ? "no" : "undecidable";
  return {t, name + " = 0: " + detail::fmt(a.value) + " -> " + word};
}

}  // namespace shiftspec
