#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>

#include "shiftspec/weights.hpp"

namespace shiftspec {

using cplx = std::complex<double>;

// x = sum a_n e_n, either a finite list or a two-sided geometric profile
// a_n = scale * ratio_plus^n (n >= 0), scale * ratio_minus^{-n} (n < 0).
class VectorSpec {
 public:
  enum class Kind { Explicit, Geometric };

  static VectorSpec basis(long n) { return from_map({{n, cplx(1.0, 0.0)}}); }

  static VectorSpec from_map(std::map<long, cplx> coeffs) {
    VectorSpec v;
    v.kind_ = Kind::Explicit;
    for (auto it = coeffs.begin(); it != coeffs.end();) {
      if (it->second == cplx(0.0, 0.0))
        it = coeffs.erase(it);
      else
        ++it;
    }
    v.coeffs_ = std::move(coeffs);
    return v;
  }

  static VectorSpec geometric(cplx ratio_plus, cplx ratio_minus = 0.0, double scale = 1.0) {
    if (std::abs(ratio_plus) >= 1.0 || std::abs(ratio_minus) >= 1.0)
      throw ShiftError(ErrorCode::InvalidArgument, "geometric vector needs ratios of modulus < 1");
    VectorSpec v;
    v.kind_ = Kind::Geometric;
    v.ratio_plus_ = ratio_plus;
    v.ratio_minus_ = ratio_minus;
    v.scale_ = scale;
    return v;
  }

  Kind kind() const { return kind_; }
  const std::map<long, cplx>& coefficients() const { return coeffs_; }
  cplx ratio_plus() const { return ratio_plus_; }
  cplx ratio_minus() const { return ratio_minus_; }
  double scale() const { return scale_; }

  bool finitely_supported() const {
    if (kind_ == Kind::Explicit) return true;
    return ratio_plus_ == cplx(0.0) && ratio_minus_ == cplx(0.0);
  }

  bool is_zero() const { return kind_ == Kind::Explicit ? coeffs_.empty() : scale_ == 0.0; }

  long min_index() const {
    if (kind_ == Kind::Explicit) return coeffs_.empty() ? 0 : coeffs_.begin()->first;
    return ratio_minus_ == cplx(0.0) ? 0 : std::numeric_limits<long>::min();
  }

  long max_index() const {
    if (kind_ == Kind::Explicit) return coeffs_.empty() ? 0 : coeffs_.rbegin()->first;
    return ratio_plus_ == cplx(0.0) ? 0 : std::numeric_limits<long>::max();
  }

  cplx coefficient(long n) const {
    if (kind_ == Kind::Explicit) {
      auto it = coeffs_.find(n);
      return it == coeffs_.end() ? cplx(0.0) : it->second;
    }
    double la = log_abs(n);
    if (la == -kInf) return 0.0;
    return std::polar(std::exp(la), phase(n));
  }

  double log_abs(long n) const {
    if (kind_ == Kind::Explicit) {
      auto it = coeffs_.find(n);
      return it == coeffs_.end() ? -kInf : std::log(std::abs(it->second));
    }
    if (scale_ == 0.0) return -kInf;
    cplx r = n >= 0 ? ratio_plus_ : ratio_minus_;
    long p = n >= 0 ? n : -n;
    if (p == 0) return std::log(std::fabs(scale_));
    if (r == cplx(0.0)) return -kInf;
    return std::log(std::fabs(scale_)) + static_cast<double>(p) * std::log(std::abs(r));
  }

  double phase(long n) const {
    if (kind_ == Kind::Explicit) return std::arg(coefficient(n));
    cplx r = n >= 0 ? ratio_plus_ : ratio_minus_;
    long p = n >= 0 ? n : -n;
    double base = scale_ < 0 ? M_PI : 0.0;
    return base + (p == 0 ? 0.0 : static_cast<double>(p) * std::arg(r));
  }

  void validate(Side side) const {
    if (is_zero()) throw ShiftError(ErrorCode::ZeroVector, "vector is identically zero");
    if (side == Side::Unilateral && min_index() < 0)
      throw ShiftError(ErrorCode::InvalidArgument, "unilateral vectors have no negative indices");
  }

 private:
  Kind kind_ = Kind::Explicit;
  std::map<long, cplx> coeffs_;
  cplx ratio_plus_ = 0.0;
  cplx ratio_minus_ = 0.0;
  double scale_ = 1.0;
};

}  // namespace shiftspec
