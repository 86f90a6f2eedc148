#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "shiftspec/error.hpp"

namespace shiftspec {

// Rotation-invariant subsets of the plane, described by moduli only.
//   Circle            |z| = rho_out (rho_in == rho_out)
//   Disc              |z| <= rho_out, or < when closed_out is false
//   Annulus           rho_in <|<= |z| <|<= rho_out
//   UnionOfTwoCircles |z| = rho_in  or  |z| = rho_out
//   DiscAndCircle     |z| <= rho_in or  |z| = rho_out
enum class RegionKind { Empty, Circle, Disc, Annulus, UnionOfTwoCircles, DiscAndCircle };

inline const char* to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Empty: return "Empty";
    case RegionKind::Circle: return "Circle";
    case RegionKind::Disc: return "Disc";
    case RegionKind::Annulus: return "Annulus";
    case RegionKind::UnionOfTwoCircles: return "UnionOfTwoCircles";
    case RegionKind::DiscAndCircle: return "DiscAndCircle";
  }
  return "Empty";
}

inline RegionKind region_kind_from_string(const std::string& s) {
  for (auto k : {RegionKind::Empty, RegionKind::Circle, RegionKind::Disc, RegionKind::Annulus,
                 RegionKind::UnionOfTwoCircles, RegionKind::DiscAndCircle})
    if (s == to_string(k)) return k;
  throw ShiftError(ErrorCode::MalformedSpec, "unknown region kind '" + s + "'");
}

struct SpectralRegion {
  RegionKind kind = RegionKind::Empty;
  double rho_in = 0.0;
  double rho_out = 0.0;
  bool closed_in = true;
  bool closed_out = true;

  friend bool operator==(const SpectralRegion&, const SpectralRegion&) = default;

  double outer_radius() const { return kind == RegionKind::Empty ? 0.0 : rho_out; }

  bool contains_modulus(double t) const {
    auto in_annulus = [&](double a, double b, bool ca, bool cb) {
      bool lo = ca ? t >= a : t > a;
      bool hi = cb ? t <= b : t < b;
      return lo && hi;
    };
    switch (kind) {
      case RegionKind::Empty: return false;
      case RegionKind::Circle: return t == rho_out;
      case RegionKind::Disc: return in_annulus(0.0, rho_out, true, closed_out);
      case RegionKind::Annulus: return in_annulus(rho_in, rho_out, closed_in, closed_out);
      case RegionKind::UnionOfTwoCircles: return t == rho_in || t == rho_out;
      case RegionKind::DiscAndCircle: return t <= rho_in || t == rho_out;
    }
    return false;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(6);
    switch (kind) {
      case RegionKind::Empty: os << "Empty"; break;
      case RegionKind::Circle: os << "Circle(" << rho_out << ")"; break;
      case RegionKind::Disc: os << (closed_out ? "Disc(" : "OpenDisc(") << rho_out << ")"; break;
      case RegionKind::Annulus:
        os << "Annulus" << (closed_in ? "[" : "(") << rho_in << ", " << rho_out << (closed_out ? "]" : ")");
        break;
      case RegionKind::UnionOfTwoCircles: os << "Circle(" << rho_in << ") + Circle(" << rho_out << ")"; break;
      case RegionKind::DiscAndCircle: os << "Disc(" << rho_in << ") + Circle(" << rho_out << ")"; break;
    }
    return os.str();
  }
};

inline SpectralRegion canonical(SpectralRegion r) {
  if (r.rho_in < 0.0 || r.rho_out < 0.0 || std::isnan(r.rho_in) || std::isnan(r.rho_out))
    throw ShiftError(ErrorCode::InvalidArgument, "region radii must be non-negative");
  switch (r.kind) {
    case RegionKind::Empty: return SpectralRegion{};
    case RegionKind::Circle: return SpectralRegion{RegionKind::Circle, r.rho_out, r.rho_out, true, true};
    case RegionKind::Disc:
      if (r.rho_out == 0.0) return r.closed_out ? SpectralRegion{RegionKind::Circle, 0.0, 0.0, true, true} : SpectralRegion{};
      return SpectralRegion{RegionKind::Disc, 0.0, r.rho_out, true, r.closed_out};
    case RegionKind::Annulus:
      if (r.rho_in > r.rho_out) return SpectralRegion{};
      if (r.rho_in == r.rho_out)
        return r.closed_in && r.closed_out ? SpectralRegion{RegionKind::Circle, r.rho_out, r.rho_out, true, true}
                                           : SpectralRegion{};
      if (r.rho_in == 0.0 && r.closed_in) return canonical(SpectralRegion{RegionKind::Disc, 0.0, r.rho_out, true, r.closed_out});
      return r;
    case RegionKind::UnionOfTwoCircles: {
      double a = std::min(r.rho_in, r.rho_out), b = std::max(r.rho_in, r.rho_out);
      if (a == b) return SpectralRegion{RegionKind::Circle, b, b, true, true};
      return SpectralRegion{RegionKind::UnionOfTwoCircles, a, b, true, true};
    }
    case RegionKind::DiscAndCircle:
      if (r.rho_in == 0.0) return canonical(SpectralRegion{RegionKind::UnionOfTwoCircles, 0.0, r.rho_out});
      if (r.rho_in >= r.rho_out) return SpectralRegion{RegionKind::Disc, 0.0, r.rho_in, true, true};
      return SpectralRegion{RegionKind::DiscAndCircle, r.rho_in, r.rho_out, true, true};
  }
  return SpectralRegion{};
}

inline SpectralRegion empty_region() { return {}; }
inline SpectralRegion circle(double rho) { return canonical({RegionKind::Circle, rho, rho}); }
inline SpectralRegion disc(double rho, bool closed = true) { return canonical({RegionKind::Disc, 0.0, rho, true, closed}); }
inline SpectralRegion annulus(double a, double b, bool closed_in = true, bool closed_out = true) {
  return canonical({RegionKind::Annulus, a, b, closed_in, closed_out});
}
inline SpectralRegion two_circles(double a, double b) { return canonical({RegionKind::UnionOfTwoCircles, a, b}); }
inline SpectralRegion disc_and_circle(double a, double b) { return canonical({RegionKind::DiscAndCircle, a, b}); }

// A region known only to be contained in the set it describes.
struct LocalRegion {
  SpectralRegion region;
  bool lower_bound = false;

  std::string describe() const { return lower_bound ? "contains " + region.describe() : region.describe(); }
};

}  // namespace shiftspec
