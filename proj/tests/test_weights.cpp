#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "shiftspec/io.hpp"

using namespace shiftspec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant weight 1 has logbeta identically zero", "[weights]") {
  auto w = WeightSequence::formula(Side::Unilateral, "constant", {{"c", 1.0}});
  auto beta = build_beta(w, 5);
  for (long n = 0; n <= 5; ++n) CHECK(beta.logbeta(n) == 0.0);
}

TEST_CASE("periodic (2,1) products", "[weights]") {
  auto w = WeightSequence::periodic(Side::Unilateral, {2.0, 1.0});
  auto beta = build_beta(w, 4);
  std::vector<double> expect{1, 2, 2, 4, 4};
  for (long n = 0; n <= 4; ++n) CHECK_THAT(beta.beta(n), WithinRel(expect[n], 1e-15));
}

TEST_CASE("bilateral step products on both sides", "[weights]") {
  auto w = WeightSequence::formula(Side::Bilateral, "step", {{"plus", 2.0}, {"minus", 1.0}});
  auto beta = build_beta(w, 3, 3);
  std::vector<double> expect{1, 1, 1, 1, 2, 4, 8};
  for (long n = -3; n <= 3; ++n) CHECK_THAT(beta.beta(n), WithinRel(expect[n + 3], 1e-15));
}

TEST_CASE("minus side products are reciprocals", "[weights]") {
  auto w = WeightSequence::from_list(Side::Bilateral, {1.0}, {3.0, 0.5, 4.0}, 1.0, 4.0);
  auto beta = build_beta(w, 3, 1);
  CHECK_THAT(beta.beta(-1), WithinRel(1.0 / 3.0, 1e-15));
  CHECK_THAT(beta.beta(-2), WithinRel(1.0 / (0.5 * 3.0), 1e-15));
  CHECK_THAT(beta.beta(-3), WithinRel(1.0 / (4.0 * 0.5 * 3.0), 1e-15));
  CHECK_THAT(beta.side_log_beta(Branch::Minus, 3), WithinAbs(std::log(6.0), 1e-15));
}

TEST_CASE("a larger horizon reproduces the smaller cache exactly", "[weights]") {
  auto w = named_weight("atzmon");
  auto small = build_beta(w, 300, 500);
  auto large = build_beta(w, 900, 2000);
  for (long n = -300; n <= 500; ++n) REQUIRE(small.logbeta(n) == large.logbeta(n));
}

TEST_CASE("periodic logbeta at multiples of the period", "[weights]") {
  std::vector<double> p{2.0, 0.7, 1.3};
  auto w = WeightSequence::periodic(Side::Unilateral, p);
  auto beta = build_beta(w, 3000);
  double lg = (std::log(2.0) + std::log(0.7) + std::log(1.3)) / 3.0;
  for (long m = 1; m <= 1000; ++m) REQUIRE_THAT(beta.logbeta(3 * m), WithinAbs(3.0 * m * lg, 1e-9 * 3.0 * m));
}

TEST_CASE("zero weights are tracked and kill later products", "[weights]") {
  auto w = WeightSequence::from_list(Side::Unilateral, {1.0, 0.0, 2.0}, {}, 1.0, 2.0);
  auto beta = build_beta(w, 10);
  REQUIRE(beta.zero_indices() == std::vector<long>{1});
  CHECK(beta.logbeta(1) == 0.0);
  for (long n = 2; n <= 10; ++n) CHECK(beta.logbeta(n) == -kInf);
  CHECK(beta.log_window(2, 8) == std::log(2.0));
  CHECK(w.zeros(Branch::Plus).count == ZeroCount::Finite);
}

TEST_CASE("invalid weights are rejected", "[weights]") {
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const ShiftError& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code([] { WeightSequence::from_list(Side::Unilateral, {1.0, -0.5}, {}, 1.0, 2.0); }) == ErrorCode::NegativeWeight);
  CHECK(code([] { WeightSequence::from_list(Side::Unilateral, {3.0}, {}, 1.0, 2.0); }) == ErrorCode::BoundExceeded);
  CHECK(code([] { WeightSequence::from_list(Side::Unilateral, {1.0}, {1.0}, 1.0, 2.0); }) == ErrorCode::MalformedSpec);
  CHECK(code([] { named_weight("nope"); }) == ErrorCode::UnknownConstruction);
  CHECK(code([] {
          auto w = WeightSequence::from_function(Side::Unilateral, [](long n) { return n == 7 ? 5.0 : 1.0; }, 2.0,
                                                 {ZeroCount::None, {}}, {ZeroCount::None, {}}, Invertibility::NotInvertible, "f");
          build_beta(w, 20);
        }) == ErrorCode::BoundExceeded);
}

TEST_CASE("s_a weights", "[weights][constructions]") {
  auto w = named_weight("s_a", {{"a", 2.0}});
  CHECK(w.weight(0) == 2.0);
  for (long n = 1; n < 50; ++n) CHECK(w.weight(n) == 1.0);
}

TEST_CASE("ridge blocks of k^2 weights", "[weights][constructions]") {
  // Reference sequence written out block by block.
  std::vector<double> ref;
  for (long k = 1; ref.size() < 5000; ++k)
    for (long j = 0; j < k * k; ++j) ref.push_back(j < k ? 2.0 : 1.0);
  auto w = named_weight("ridge");
  for (long n = 0; n < 5000; ++n) REQUIRE(w.weight(n) == ref[static_cast<std::size_t>(n)]);
}

TEST_CASE("atzmon weights follow the exponential ratio", "[weights][constructions]") {
  auto phi = [](double x) {
    double a = std::abs(x);
    return a * std::sin(std::log(std::log(std::log(a + std::exp(3.0))))) / std::log(a + M_E);
  };
  auto w = named_weight("atzmon");
  for (long n = -2000; n <= 2000; n += 37) CHECK_THAT(w.weight(n), WithinRel(std::exp(phi(n + 1.0) - phi(n)), 1e-12));
  auto beta = build_beta(w, 10000, 10000);
  CHECK(beta.observed_max() <= 2.0);
  CHECK(beta.observed_min() > 0.5);
}

TEST_CASE("k_i gap indices and weights", "[weights][constructions]") {
  auto ks = constructions::ki_indices(10000);
  CHECK(ks == std::vector<long>{1, 3, 10, 41, 206, 1237, 8660});
  auto w = named_weight("ki_gap");
  CHECK_THAT(w.log_weight(40), WithinRel(-4.0 * 41.0 * std::log(2.0), 1e-14));
  CHECK(w.weight(41) == 2.0);
  auto beta = build_beta(w, 10000);
  // beta_{k_i} = 2^{k_i - i} * prod_{j <= i} 2^{-j k_j}
  double gaps = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double idx = static_cast<double>(i + 1);
    gaps += idx * static_cast<double>(ks[i]);
    double expect = (static_cast<double>(ks[i]) - idx - gaps) * std::log(2.0);
    CHECK_THAT(beta.logbeta(ks[i]), WithinRel(expect, 1e-12));
  }
}

TEST_CASE("square zeros sit on the perfect squares", "[weights][constructions]") {
  auto w = named_weight("square_zeros");
  auto beta = build_beta(w, 200);
  std::vector<long> squares;
  for (long r = 0; r * r < 200; ++r) squares.push_back(r * r);
  CHECK(beta.zero_indices() == squares);
  CHECK(w.zeros(Branch::Plus).count == ZeroCount::Infinite);
}

TEST_CASE("weight specs round-trip through JSON", "[weights][json]") {
  std::vector<WeightSequence> ws{
      WeightSequence::from_list(Side::Bilateral, {1.0, 2.0}, {0.5}, 1.5, 2.0),
      WeightSequence::periodic(Side::Unilateral, {2.0, 1.0}),
      WeightSequence::eventually_periodic(Side::Bilateral, {3.0}, {1.0, 2.0}, {0.5}, {1.0}),
      WeightSequence::formula(Side::Unilateral, "power_decay", {{"c", 1.0}, {"p", 0.5}}),
      named_weight("periodic", {{"p0", 3.0}, {"p1", 0.5}, {"p2", 1.0}}),
      named_weight("ridge"),
  };
  for (const auto& w : ws) {
    auto j = weight_spec_to_json(w);
    auto back = weight_spec_from_json(json::parse(j.dump()));
    CHECK(weight_spec_to_json(back) == j);
    long lo = w.side() == Side::Bilateral ? -200 : 0;
    for (long n = lo; n < 200; ++n) REQUIRE(back.log_weight(n) == w.log_weight(n));
  }
}

TEST_CASE("malformed specs report MalformedSpec", "[weights][json]") {
  auto code = [](const char* text) {
    try {
      weight_spec_from_json(json::parse(text));
    } catch (const ShiftError& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code(R"({"side":"unilateral"})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"side":"sideways","structure":{"type":"periodic","period":[1]}})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"schema":2,"side":"unilateral","structure":{"type":"periodic","period":[1]}})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"side":"unilateral","structure":{"type":"spiral"}})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"side":"unilateral","structure":{"type":"periodic","period":"x"}})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"side":"bilateral","structure":{"type":"named","id":"ridge"}})") == ErrorCode::MalformedSpec);
  CHECK(code(R"({"side":"unilateral","structure":{"type":"periodic","period":[1,-1]}})") == ErrorCode::NegativeWeight);
}
