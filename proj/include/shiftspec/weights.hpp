#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shiftspec/error.hpp"

namespace shiftspec {

enum class Side { Unilateral, Bilateral };
enum class Branch { Plus, Minus };

inline const char* to_string(Side s) { return s == Side::Unilateral ? "unilateral" : "bilateral"; }
inline const char* to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline long floor_mod(long n, long k) {
  long r = n % k;
  return r < 0 ? r + k : r;
}

// How many zero weights one side of the index set carries. The cache only
// sees a finite window, so the finite/infinite question is declared here.
enum class ZeroCount { None, Finite, Infinite, Undeclared };

struct ZeroPattern {
  ZeroCount count = ZeroCount::Undeclared;
  std::vector<long> indices;  // all zeros of the side when count == Finite
};

inline const char* to_string(ZeroCount z) {
  switch (z) {
    case ZeroCount::None: return "none";
    case ZeroCount::Finite: return "finite";
    case ZeroCount::Infinite: return "infinite";
    case ZeroCount::Undeclared: return "undeclared";
  }
  return "undeclared";
}

enum class Invertibility { Invertible, NotInvertible, Undeclared };

struct ExplicitWeights {
  std::vector<double> values;        // n = 0, 1, ...
  std::vector<double> minus_values;  // n = -1, -2, ...
  double tail = 1.0;                 // every index not listed
};

struct PeriodicWeights {
  std::vector<double> period;  // w_n = period[n mod k] on the whole index set
};

struct EventuallyPeriodicWeights {
  std::vector<double> prefix;
  std::vector<double> period;
  std::vector<double> minus_prefix;  // n = -1, -2, ...
  std::vector<double> minus_period;
};

struct FormulaWeights {
  std::string name;
  std::map<std::string, double> params;
};

struct NamedWeights {
  std::string id;
  std::map<std::string, double> params;
  std::vector<double> period;                         // set when the construction is periodic
  std::optional<EventuallyPeriodicWeights> eventual;  // set when it is eventually periodic
};

// Pieces cut out of another sequence (direct summands, inverses).
struct DerivedWeights {
  std::string description;
};

using Structure = std::variant<ExplicitWeights, PeriodicWeights, EventuallyPeriodicWeights,
                               FormulaWeights, NamedWeights, DerivedWeights>;

inline std::string structure_name(const Structure& s) {
  switch (s.index()) {
    case 0: return "explicit";
    case 1: return "periodic";
    case 2: return "eventually_periodic";
    case 3: return "formula";
    case 4: return "named";
    default: return "derived";
  }
}

namespace detail {

inline void check_weights(const std::vector<double>& v, double bound, const char* what) {
  for (double x : v) {
    if (!(x >= 0.0)) throw ShiftError(ErrorCode::NegativeWeight, std::string(what) + " contains a negative or NaN weight");
    if (x > bound * (1.0 + 1e-12))
      throw ShiftError(ErrorCode::BoundExceeded, std::string(what) + " exceeds the declared bound");
  }
}

inline double safe_log(double w) { return w == 0.0 ? -kInf : std::log(w); }

inline double max_of(std::initializer_list<const std::vector<double>*> lists, double extra = 0.0) {
  double m = extra;
  for (auto* l : lists)
    for (double x : *l) m = std::max(m, x);
  return m;
}

inline ZeroPattern zeros_in_list(const std::vector<double>& v, long sign, long offset) {
  ZeroPattern z;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == 0.0) z.indices.push_back(sign * (static_cast<long>(i) + offset));
  std::sort(z.indices.begin(), z.indices.end());
  z.count = z.indices.empty() ? ZeroCount::None : ZeroCount::Finite;
  return z;
}

inline bool all_positive(std::initializer_list<const std::vector<double>*> lists) {
  for (auto* l : lists)
    for (double x : *l)
      if (!(x > 0.0)) return false;
  return true;
}

}  // namespace detail

class WeightSequence {
 public:
  // Generators return log w_n, with -inf for a zero weight. Working in logs
  // keeps constructions like the k_i gaps (weights near 2^-60000) exact.
  using LogGenerator = std::function<double(long)>;

  WeightSequence(Side side, Structure structure, double bound, LogGenerator gen, ZeroPattern zeros_plus,
                 ZeroPattern zeros_minus, Invertibility inv, std::string label)
      : side_(side),
        structure_(std::move(structure)),
        bound_(bound),
        gen_(std::move(gen)),
        zeros_plus_(std::move(zeros_plus)),
        zeros_minus_(std::move(zeros_minus)),
        invertibility_(side == Side::Unilateral ? Invertibility::NotInvertible : inv),
        label_(std::move(label)) {
    if (!(bound_ > 0.0) || !std::isfinite(bound_))
      throw ShiftError(ErrorCode::InvalidArgument, "bound must be a positive finite number");
    if (side_ == Side::Unilateral) zeros_minus_ = ZeroPattern{ZeroCount::None, {}};
  }

  Side side() const { return side_; }
  const Structure& structure() const { return structure_; }
  double bound() const { return bound_; }
  const ZeroPattern& zeros(Branch b) const { return b == Branch::Plus ? zeros_plus_ : zeros_minus_; }
  Invertibility invertibility() const { return invertibility_; }
  const std::string& label() const { return label_; }

  double log_weight(long n) const {
    if (side_ == Side::Unilateral && n < 0)
      throw ShiftError(ErrorCode::InvalidArgument, "unilateral sequence queried at negative index " + std::to_string(n));
    double l = gen_(n);
    if (std::isnan(l)) throw ShiftError(ErrorCode::NegativeWeight, "weight at index " + std::to_string(n) + " is negative or NaN");
    return l;
  }

  double weight(long n) const { return std::exp(log_weight(n)); }

  // Period of a purely periodic sequence, whatever structure tag carries it.
  std::optional<std::vector<double>> periodic_form() const {
    if (auto* p = std::get_if<PeriodicWeights>(&structure_)) return p->period;
    if (auto* f = std::get_if<FormulaWeights>(&structure_); f && f->name == "constant")
      return std::vector<double>{f->params.at("c")};
    if (auto* nw = std::get_if<NamedWeights>(&structure_); nw && !nw->period.empty()) return nw->period;
    return std::nullopt;
  }

  bool is_periodic() const { return periodic_form().has_value(); }

  std::optional<double> constant_value() const {
    auto p = periodic_form();
    if (p && std::all_of(p->begin(), p->end(), [&](double x) { return x == p->front(); })) return p->front();
    return std::nullopt;
  }

  // Prefix/tail description; the minus side lists w_{-1}, w_{-2}, ...
  std::optional<EventuallyPeriodicWeights> eventual_form() const {
    if (auto* e = std::get_if<EventuallyPeriodicWeights>(&structure_)) return *e;
    if (auto* x = std::get_if<ExplicitWeights>(&structure_))
      return EventuallyPeriodicWeights{x->values, {x->tail}, x->minus_values,
                                       side_ == Side::Bilateral ? std::vector<double>{x->tail} : std::vector<double>{}};
    if (auto* nw = std::get_if<NamedWeights>(&structure_); nw && nw->eventual) return nw->eventual;
    if (auto* f = std::get_if<FormulaWeights>(&structure_); f && f->name == "step") {
      double p = f->params.at("plus");
      double m = side_ == Side::Bilateral ? f->params.at("minus") : p;
      return EventuallyPeriodicWeights{{}, {p}, {}, side_ == Side::Bilateral ? std::vector<double>{m} : std::vector<double>{}};
    }
    if (auto p = periodic_form()) {
      std::vector<double> minus;
      if (side_ == Side::Bilateral) minus.assign(p->rbegin(), p->rend());
      return EventuallyPeriodicWeights{{}, *p, {}, minus};
    }
    return std::nullopt;
  }

  // --- factories -------------------------------------------------------

  static WeightSequence from_list(Side side, std::vector<double> values, std::vector<double> minus_values, double tail,
                                  double bound) {
    if (side == Side::Unilateral && !minus_values.empty())
      throw ShiftError(ErrorCode::MalformedSpec, "unilateral sequence given minus-side values");
    std::vector<double> t{tail};
    detail::check_weights(values, bound, "values");
    detail::check_weights(minus_values, bound, "minus_values");
    detail::check_weights(t, bound, "tail");
    ZeroPattern zp = detail::zeros_in_list(values, 1, 0);
    ZeroPattern zm = detail::zeros_in_list(minus_values, -1, 1);
    if (tail == 0.0) {
      zp = ZeroPattern{ZeroCount::Infinite, {}};
      zm = ZeroPattern{ZeroCount::Infinite, {}};
    }
    Invertibility inv = (tail > 0.0 && detail::all_positive({&values, &minus_values})) ? Invertibility::Invertible
                                                                                       : Invertibility::NotInvertible;
    ExplicitWeights s{values, minus_values, tail};
    auto gen = [values = std::move(values), minus_values = std::move(minus_values), tail](long n) {
      if (n >= 0) return detail::safe_log(static_cast<std::size_t>(n) < values.size() ? values[n] : tail);
      std::size_t j = static_cast<std::size_t>(-n - 1);
      return detail::safe_log(j < minus_values.size() ? minus_values[j] : tail);
    };
    return WeightSequence(side, std::move(s), bound, gen, zp, zm, inv, "explicit");
  }

  static WeightSequence periodic(Side side, std::vector<double> period, std::optional<double> bound = std::nullopt) {
    if (period.empty()) throw ShiftError(ErrorCode::MalformedSpec, "empty period");
    double b = bound.value_or(detail::max_of({&period}));
    if (!(b > 0.0)) b = 1.0;
    detail::check_weights(period, b, "period");
    bool has_zero = std::any_of(period.begin(), period.end(), [](double x) { return x == 0.0; });
    ZeroPattern z{has_zero ? ZeroCount::Infinite : ZeroCount::None, {}};
    Invertibility inv = has_zero ? Invertibility::NotInvertible : Invertibility::Invertible;
    PeriodicWeights s{period};
    auto gen = [period = std::move(period)](long n) {
      return detail::safe_log(period[floor_mod(n, static_cast<long>(period.size()))]);
    };
    return WeightSequence(side, std::move(s), b, gen, z, z, inv, "periodic");
  }

  static WeightSequence eventually_periodic(Side side, std::vector<double> prefix, std::vector<double> period,
                                            std::vector<double> minus_prefix, std::vector<double> minus_period,
                                            std::optional<double> bound = std::nullopt) {
    if (period.empty()) throw ShiftError(ErrorCode::MalformedSpec, "empty period");
    if (side == Side::Unilateral && !(minus_prefix.empty() && minus_period.empty()))
      throw ShiftError(ErrorCode::MalformedSpec, "unilateral sequence given minus-side data");
    if (side == Side::Bilateral && minus_period.empty())
      throw ShiftError(ErrorCode::MalformedSpec, "bilateral eventually periodic sequence needs a minus period");
    double b = bound.value_or(detail::max_of({&prefix, &period, &minus_prefix, &minus_period}));
    if (!(b > 0.0)) b = 1.0;
    detail::check_weights(prefix, b, "prefix");
    detail::check_weights(period, b, "period");
    detail::check_weights(minus_prefix, b, "minus_prefix");
    detail::check_weights(minus_period, b, "minus_period");

    auto side_zeros = [](const std::vector<double>& pre, const std::vector<double>& per, long sign, long offset) {
      if (std::any_of(per.begin(), per.end(), [](double x) { return x == 0.0; })) return ZeroPattern{ZeroCount::Infinite, {}};
      return detail::zeros_in_list(pre, sign, offset);
    };
    ZeroPattern zp = side_zeros(prefix, period, 1, 0);
    ZeroPattern zm = side == Side::Bilateral ? side_zeros(minus_prefix, minus_period, -1, 1) : ZeroPattern{ZeroCount::None, {}};
    Invertibility inv = detail::all_positive({&prefix, &period, &minus_prefix, &minus_period}) ? Invertibility::Invertible
                                                                                               : Invertibility::NotInvertible;
    EventuallyPeriodicWeights s{prefix, period, minus_prefix, minus_period};
    auto gen = [s](long n) {
      if (n >= 0) {
        std::size_t P = s.prefix.size();
        if (static_cast<std::size_t>(n) < P) return detail::safe_log(s.prefix[n]);
        return detail::safe_log(s.period[(static_cast<std::size_t>(n) - P) % s.period.size()]);
      }
      std::size_t j = static_cast<std::size_t>(-n - 1);
      std::size_t P = s.minus_prefix.size();
      if (j < P) return detail::safe_log(s.minus_prefix[j]);
      return detail::safe_log(s.minus_period[(j - P) % s.minus_period.size()]);
    };
    return WeightSequence(side, std::move(s), b, gen, zp, zm, inv, "eventually_periodic");
  }

  // Closed forms: constant{c}, step{plus, minus}, power_decay{c, p}.
  static WeightSequence formula(Side side, const std::string& name, const std::map<std::string, double>& params) {
    auto need = [&](const char* key) {
      auto it = params.find(key);
      if (it == params.end()) throw ShiftError(ErrorCode::MalformedSpec, "formula '" + name + "' needs parameter '" + key + "'");
      return it->second;
    };
    FormulaWeights s{name, params};
    if (name == "constant") {
      double c = need("c");
      if (!(c >= 0.0)) throw ShiftError(ErrorCode::NegativeWeight, "constant weight is negative");
      ZeroPattern z{c == 0.0 ? ZeroCount::Infinite : ZeroCount::None, {}};
      double lc = detail::safe_log(c);
      return WeightSequence(side, s, c > 0 ? c : 1.0, [lc](long) { return lc; }, z, z,
                            c > 0 ? Invertibility::Invertible : Invertibility::NotInvertible, "constant");
    }
    if (name == "step") {
      double p = need("plus");
      double m = side == Side::Bilateral ? need("minus") : p;
      if (!(p >= 0.0) || !(m >= 0.0)) throw ShiftError(ErrorCode::NegativeWeight, "step weight is negative");
      ZeroPattern zp{p == 0.0 ? ZeroCount::Infinite : ZeroCount::None, {}};
      ZeroPattern zm{m == 0.0 ? ZeroCount::Infinite : ZeroCount::None, {}};
      double lp = detail::safe_log(p), lm = detail::safe_log(m);
      double b = std::max({p, m, 1e-300});
      return WeightSequence(side, s, b, [lp, lm](long n) { return n >= 0 ? lp : lm; }, zp, zm,
                            (p > 0 && m > 0) ? Invertibility::Invertible : Invertibility::NotInvertible, "step");
    }
    if (name == "power_decay") {
      double c = need("c"), p = need("p");
      if (!(c > 0.0) || !(p > 0.0)) throw ShiftError(ErrorCode::InvalidArgument, "power_decay needs c > 0 and p > 0");
      ZeroPattern z{ZeroCount::None, {}};
      double lc = std::log(c);
      return WeightSequence(side, s, c, [lc, p](long n) { return lc - p * std::log(std::fabs(static_cast<double>(n)) + 1.0); },
                            z, z, Invertibility::NotInvertible, "power_decay");
    }
    throw ShiftError(ErrorCode::UnknownConstruction, "unknown formula '" + name + "'");
  }

  static WeightSequence from_function(Side side, std::function<double(long)> weight_fn, double bound, ZeroPattern zeros_plus,
                                      ZeroPattern zeros_minus, Invertibility inv, std::string label) {
    auto gen = [fn = std::move(weight_fn)](long n) {
      double w = fn(n);
      if (!(w >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
      return detail::safe_log(w);
    };
    return WeightSequence(side, DerivedWeights{label}, bound, gen, std::move(zeros_plus), std::move(zeros_minus), inv, label);
  }

 private:
  Side side_;
  Structure structure_;
  double bound_;
  LogGenerator gen_;
  ZeroPattern zeros_plus_;
  ZeroPattern zeros_minus_;
  Invertibility invertibility_;
  std::string label_;
};

// log beta_n over [-N_minus, N_plus] plus windowed log products of weights.
class BetaCache {
 public:
  BetaCache() = default;

  Side side() const { return side_; }
  long n_minus() const { return n_minus_; }
  long n_plus() const { return n_plus_; }
  long horizon(Branch b) const { return b == Branch::Plus ? n_plus_ : n_minus_; }

  double logbeta(long n) const {
    check_beta_index(n);
    std::size_t i = static_cast<std::size_t>(n + n_minus_);
    if (n > 0 && zc_[i] > 0) return -kInf;
    if (n < 0 && zc_[i] != 0) return kInf;
    return fin_[i];
  }

  double beta(long n) const { return std::exp(logbeta(n)); }

  double log_weight(long j) const {
    if (j < -n_minus_ || j >= n_plus_) throw ShiftError(ErrorCode::InsufficientHorizon, "weight index outside cache");
    return logw_[static_cast<std::size_t>(j + n_minus_)];
  }

  // log of w_a * ... * w_{b-1}; -inf when a zero weight lies inside.
  double log_window(long a, long b) const {
    if (a > b || a < -n_minus_ || b > n_plus_) throw ShiftError(ErrorCode::InsufficientHorizon, "window outside cache");
    std::size_t ia = static_cast<std::size_t>(a + n_minus_), ib = static_cast<std::size_t>(b + n_minus_);
    if (zc_[ib] - zc_[ia] > 0) return -kInf;
    return fin_[ib] - fin_[ia];
  }

  const std::vector<long>& zero_indices() const { return zero_indices_; }
  double observed_max() const { return observed_max_; }
  double observed_min() const { return observed_min_; }

  bool has_zero_on(Branch b) const {
    for (long z : zero_indices_)
      if ((b == Branch::Plus) == (z >= 0)) return true;
    return false;
  }

  // Side-relative view used by the estimators: the minus side is read as a
  // unilateral sequence with weights w_{-1}, w_{-2}, ...
  //   side_log_beta(Minus, n) = log(w_{-n} ... w_{-1}) = -logbeta(-n)
  //   side_window(Minus, k, n) = log(w_{-n-k} ... w_{-k-1})
  double side_log_beta(Branch b, long n) const {
    if (b == Branch::Plus) return logbeta(n);
    double l = logbeta(-n);
    return -l;
  }
  double side_window(Branch b, long k, long n) const {
    if (b == Branch::Plus) return log_window(k, k + n);
    return log_window(-n - k, -k);
  }

 private:
  friend BetaCache build_beta_from(Side, const std::function<double(long)>&, double, long, long);

  void check_beta_index(long n) const {
    if (n < -n_minus_ || n > n_plus_)
      throw ShiftError(ErrorCode::InsufficientHorizon, "index " + std::to_string(n) + " outside cache horizon");
  }

  Side side_ = Side::Unilateral;
  long n_minus_ = 0;
  long n_plus_ = 0;
  std::vector<double> logw_;  // weights w_j, j in [-N_minus, N_plus - 1]
  std::vector<double> fin_;   // finite part of log beta, zeros skipped
  std::vector<long> zc_;      // signed zero counts, same convention as fin_
  std::vector<long> zero_indices_;
  double observed_max_ = 0.0;
  double observed_min_ = kInf;
};

// Builds a cache from any log-weight source; `log_bound` = +inf skips the
// bound check.
inline BetaCache build_beta_from(Side side, const std::function<double(long)>& log_weight, double log_bound, long n_minus,
                                 long n_plus) {
  if (n_minus < 0 || n_plus < 0) throw ShiftError(ErrorCode::HorizonMismatch, "negative horizon");
  if (side == Side::Unilateral && n_minus > 0)
    throw ShiftError(ErrorCode::HorizonMismatch, "unilateral sequence has no minus side");
  BetaCache c;
  c.side_ = side;
  c.n_minus_ = n_minus;
  c.n_plus_ = n_plus;
  std::size_t len = static_cast<std::size_t>(n_minus + n_plus + 1);
  c.fin_.assign(len, 0.0);
  c.zc_.assign(len, 0);
  c.logw_.assign(len - 1, 0.0);

  auto take = [&](long j) {
    double l = log_weight(j);
    if (l > log_bound)
      throw ShiftError(ErrorCode::BoundExceeded, "weight at index " + std::to_string(j) + " exceeds the declared bound");
    c.logw_[static_cast<std::size_t>(j + n_minus)] = l;
    double v = std::exp(l);
    c.observed_max_ = std::max(c.observed_max_, v);
    c.observed_min_ = std::min(c.observed_min_, v);
    if (l == -kInf) c.zero_indices_.push_back(j);
    return l;
  };

  // Sequential accumulation outward from index 0 keeps shared prefixes
  // bit-identical across horizons.
  for (long n = 0; n < n_plus; ++n) {
    double l = take(n);
    std::size_t i = static_cast<std::size_t>(n + n_minus);
    bool zero = (l == -kInf);
    c.fin_[i + 1] = c.fin_[i] + (zero ? 0.0 : l);
    c.zc_[i + 1] = c.zc_[i] + (zero ? 1 : 0);
  }
  for (long n = 0; n > -n_minus; --n) {
    double l = take(n - 1);
    std::size_t i = static_cast<std::size_t>(n + n_minus);
    bool zero = (l == -kInf);
    c.fin_[i - 1] = c.fin_[i] - (zero ? 0.0 : l);
    c.zc_[i - 1] = c.zc_[i] - (zero ? 1 : 0);
  }
  std::sort(c.zero_indices_.begin(), c.zero_indices_.end());
  if (c.observed_min_ == kInf) c.observed_min_ = 0.0;
  return c;
}

inline BetaCache build_beta(const WeightSequence& w, long n_minus, long n_plus) {
  return build_beta_from(
      w.side(), [&w](long j) { return w.log_weight(j); }, std::log(w.bound()) + 1e-12, n_minus, n_plus);
}

inline BetaCache build_beta(const WeightSequence& w, long n_plus) { return build_beta(w, 0, n_plus); }

// Cache of the inverse of a bilateral shift, relabelled as a forward shift:
// its weights are 1 / w_{-m-1}.
inline BetaCache reciprocal_cache(const BetaCache& beta) {
  if (beta.side() != Side::Bilateral) throw ShiftError(ErrorCode::InvalidArgument, "only bilateral shifts can be invertible");
  return build_beta_from(
      Side::Bilateral, [&beta](long m) { return -beta.log_weight(-m - 1); }, kInf, beta.n_plus(), beta.n_minus());
}

}  // namespace shiftspec
