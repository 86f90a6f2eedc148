#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "shiftspec/weights.hpp"

namespace shiftspec {

namespace constructions {

// w_0 = a, w_n = 1 for n > 0.
inline WeightSequence s_a(double a) {
  if (!(a > 0.0)) throw ShiftError(ErrorCode::InvalidArgument, "s_a needs a > 0");
  EventuallyPeriodicWeights e{{a}, {1.0}, {}, {}};
  auto w = WeightSequence::eventually_periodic(Side::Unilateral, e.prefix, e.period, {}, {}, std::max(a, 1.0));
  NamedWeights nw{"s_a", {{"a", a}}, {}, e};
  return WeightSequence(Side::Unilateral, nw, w.bound(), [w](long n) { return w.log_weight(n); }, w.zeros(Branch::Plus),
                        w.zeros(Branch::Minus), Invertibility::NotInvertible, "s_a");
}

inline WeightSequence periodic(const std::vector<double>& period, Side side) {
  auto w = WeightSequence::periodic(side, period);
  std::map<std::string, double> params;
  for (std::size_t i = 0; i < period.size(); ++i) params["p" + std::to_string(i)] = period[i];
  NamedWeights nw{"periodic", params, period, w.eventual_form()};
  return WeightSequence(side, nw, w.bound(), [w](long n) { return w.log_weight(n); }, w.zeros(Branch::Plus),
                        w.zeros(Branch::Minus), w.invertibility(), "periodic");
}

inline WeightSequence two_sided_step(const std::string& id, double plus, double minus) {
  EventuallyPeriodicWeights e{{}, {plus}, {}, {minus}};
  double lp = std::log(plus), lm = std::log(minus);
  NamedWeights nw{id, {}, {}, e};
  return WeightSequence(Side::Bilateral, nw, std::max(plus, minus), [lp, lm](long n) { return n >= 0 ? lp : lm; },
                        ZeroPattern{ZeroCount::None, {}}, ZeroPattern{ZeroCount::None, {}}, Invertibility::Invertible, id);
}

// Log of the growth profile: w_n is the ratio of exp(psi) at n+1 and n.
inline double atzmon_psi(double x) {
  double ax = std::fabs(x);
  return ax * std::sin(std::log(std::log(std::log(ax + std::exp(3.0))))) / std::log(ax + std::exp(1.0));
}

inline WeightSequence atzmon() {
  NamedWeights nw{"atzmon", {}, {}, std::nullopt};
  return WeightSequence(Side::Bilateral, nw, 2.0,
                        [](long n) { return atzmon_psi(static_cast<double>(n + 1)) - atzmon_psi(static_cast<double>(n)); },
                        ZeroPattern{ZeroCount::None, {}}, ZeroPattern{ZeroCount::None, {}}, Invertibility::Invertible,
                        "atzmon");
}

// First index of the k-th block (k >= 1): 0^2 + 1^2 + ... + (k-1)^2.
inline long ridge_block_start(long k) { return (k - 1) * k * (2 * k - 1) / 6; }

// Blocks of k^2 weights; the first k weights of each block are 2, the rest 1.
inline WeightSequence ridge() {
  NamedWeights nw{"ridge", {}, {}, std::nullopt};
  const double l2 = std::log(2.0);
  auto gen = [l2](long n) {
    long k = std::max(1L, static_cast<long>(std::cbrt(3.0 * static_cast<double>(n))));
    while (ridge_block_start(k) > n) --k;
    while (ridge_block_start(k + 1) <= n) ++k;
    return n - ridge_block_start(k) < k ? l2 : 0.0;
  };
  return WeightSequence(Side::Unilateral, nw, 2.0, gen, ZeroPattern{ZeroCount::None, {}}, ZeroPattern{ZeroCount::None, {}},
                        Invertibility::NotInvertible, "ridge");
}

// k_1 = 1, k_{i+1} = (i+1) k_i + 1, up to the largest value below `limit`.
inline std::vector<long> ki_indices(long limit) {
  std::vector<long> ks{1};
  for (long i = 1;; ++i) {
    long next = (i + 1) * ks.back() + 1;
    if (next > limit || next < 0) break;
    ks.push_back(next);
  }
  return ks;
}

// w_{k_i - 1} = 2^{-i k_i}, every other weight 2.
inline WeightSequence ki_gap() {
  NamedWeights nw{"ki_gap", {}, {}, std::nullopt};
  const double l2 = std::log(2.0);
  auto ks = ki_indices(1L << 52);
  auto gen = [l2, ks](long n) {
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (ks[i] - 1 == n) return -static_cast<double>(i + 1) * static_cast<double>(ks[i]) * l2;
    return l2;
  };
  return WeightSequence(Side::Unilateral, nw, 2.0, gen, ZeroPattern{ZeroCount::None, {}}, ZeroPattern{ZeroCount::None, {}},
                        Invertibility::NotInvertible, "ki_gap");
}

inline bool is_square(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

// Zero at every perfect square, 1 elsewhere.
inline WeightSequence square_zeros() {
  NamedWeights nw{"square_zeros", {}, {}, std::nullopt};
  return WeightSequence(Side::Unilateral, nw, 1.0, [](long n) { return is_square(n) ? -kInf : 0.0; },
                        ZeroPattern{ZeroCount::Infinite, {}}, ZeroPattern{ZeroCount::None, {}}, Invertibility::NotInvertible,
                        "square_zeros");
}

}  // namespace constructions

inline const std::vector<std::string>& construction_ids() {
  static const std::vector<std::string> ids{"s_a",  "periodic", "hyponormal_step", "atzmon",
                                            "ridge", "ki_gap",  "square_zeros",   "reciprocal_step"};
  return ids;
}

// Parameters: s_a takes {a}; periodic takes {p0, p1, ...} and an optional
// {bilateral} flag. The other constructions take none.
inline WeightSequence named_weight(const std::string& id, const std::map<std::string, double>& params = {}) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (id == "s_a") return constructions::s_a(get("a", 2.0));
  if (id == "periodic") {
    std::vector<double> period;
    for (std::size_t i = 0;; ++i) {
      auto it = params.find("p" + std::to_string(i));
      if (it == params.end()) break;
      period.push_back(it->second);
    }
    if (period.empty()) period = {2.0, 1.0};
    return constructions::periodic(period, get("bilateral", 0.0) != 0.0 ? Side::Bilateral : Side::Unilateral);
  }
  if (id == "hyponormal_step") return constructions::two_sided_step(id, 2.0, 1.0);
  if (id == "reciprocal_step") return constructions::two_sided_step(id, 0.5, 2.0);
  if (id == "atzmon") return constructions::atzmon();
  if (id == "ridge") return constructions::ridge();
  if (id == "ki_gap") return constructions::ki_gap();
  if (id == "square_zeros") return constructions::square_zeros();
  throw ShiftError(ErrorCode::UnknownConstruction, "no construction named '" + id + "'");
}

// Positional form used by the command line: "--params 2,1".
inline std::map<std::string, double> positional_params(const std::string& id, const std::vector<double>& values) {
  std::map<std::string, double> out;
  if (id == "s_a") {
    if (!values.empty()) out["a"] = values[0];
  } else if (id == "periodic") {
    for (std::size_t i = 0; i < values.size(); ++i) out["p" + std::to_string(i)] = values[i];
  } else if (!values.empty()) {
    throw ShiftError(ErrorCode::InvalidArgument, "construction '" + id + "' takes no parameters");
  }
  return out;
}

}  // namespace shiftspec
