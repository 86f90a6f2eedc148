#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cstdlib>
#include <vector>

#include "shiftspec/oracle.hpp"
#include "shiftspec/parallel.hpp"

using namespace shiftspec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BetaCache constant_one(long h) {
  return build_beta(WeightSequence::formula(Side::Unilateral, "constant", {{"c", 1.0}}), h);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ShiftError& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("reference outputs of the generators", "[oracle][rng]") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(42) == 0xbdd732262feb6e95ULL);
  XorShift64Star g(1);
  CHECK(g.next() == 0x47e4ce4b896cdd1dULL);
  CHECK(g.next() == 0xabcfa6a8e079651dULL);
  CHECK(g.next() == 0xb9d10d8feb731f57ULL);
  auto u = XorShift64Star::for_sample(3, 9);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
  }
}

TEST_CASE("power norms match dense truncated matrices", "[oracle][brute]") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto rng = XorShift64Star::for_sample(seed, 0);
    const bool bilateral = seed % 2 == 0;
    const long W = 16 + static_cast<long>(rng.next() % 49);  // 16..64
    std::vector<double> plus(static_cast<std::size_t>(W)), minus(static_cast<std::size_t>(W));
    for (auto& v : plus) v = rng.uniform(0.2, 2.5);
    for (auto& v : minus) v = rng.uniform(0.2, 2.5);
    auto w = WeightSequence::from_list(bilateral ? Side::Bilateral : Side::Unilateral, plus,
                                       bilateral ? minus : std::vector<double>{}, 1.0, 2.5);
    auto beta = bilateral ? build_beta(w, W, W) : build_beta(w, W);

    // Dense S on e_lo..e_{W}: column j maps to row j + 1 with weight w_{lo + j}.
    const long lo = bilateral ? -W / 2 : 0;
    const long dim = W - lo + 1;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim, dim);
    for (long j = 0; j + 1 < dim; ++j) S(j + 1, j) = w.weight(lo + j);

    std::map<long, cplx> coeffs;
    for (long k = 0; k < 3; ++k) coeffs[lo + 1 + k * 2] = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    auto x = VectorSpec::from_map(coeffs);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (const auto& [k, a] : coeffs) v(k - lo) = a;

    const long n_max = W - (lo + 5) - 1;  // keeps S^n x inside the matrix
    auto pn = power_norms(beta, x, n_max);
    for (long n = 0; n <= n_max; ++n) {
      INFO("seed " << seed << " n " << n);
      REQUIRE_THAT(pn.norm(n), WithinRel(v.norm(), 1e-12));
      v = S.cast<cplx>() * v;
    }
  }
}

TEST_CASE("local radius of e_0 is the limsup of beta roots", "[oracle]") {
  auto beta = constant_one(2000);
  auto pn = power_norms(beta, VectorSpec::basis(0), 2000);
  CHECK_THAT(pn.r_local.value, WithinAbs(1.0, 1e-12));
  auto geo = power_norms(beta, VectorSpec::geometric(0.5), 500);
  CHECK_THAT(geo.norm(0), WithinRel(std::sqrt(1.0 / (1.0 - 0.25)), 1e-12));
}

TEST_CASE("eigenvector residual inside the SVEP failure annulus", "[oracle]") {
  auto beta = build_beta(named_weight("reciprocal_step"), 200, 200);
  // f_lambda = sum beta_n lambda^{-n} e_n has tails (1/(2 lambda))^n and (lambda/2)^m; the
  // truncation leaves lambda (lambda/2)^T at e_{-T} as the dominant boundary term.
  for (double lam : {0.8, 1.0}) CHECK(eigenvector_residual(beta, lam, 60) <= 1e-10);
  double r15 = eigenvector_residual(beta, 1.5, 60);
  CHECK_THAT(r15, WithinRel(1.5 * std::pow(0.75, 60) / std::sqrt(1.0 / (1.0 - 0.5625) + 1.0 / (1.0 - 1.0 / 9.0) - 1.0), 1e-3));
  CHECK(eigenvector_residual(beta, 1.5, 120) <= 1e-10);
  CHECK(code_of([&] { eigenvector_residual(beta, 3.0, 60); }) == ErrorCode::SeriesDiverged);
  CHECK(code_of([&] { eigenvector_residual(beta, 1.0, 500); }) == ErrorCode::InsufficientHorizon);
}

TEST_CASE("adjoint kernel residual inside the disc", "[oracle]") {
  auto beta = constant_one(400);
  CHECK_THAT(adjoint_kernel_residual(beta, 0.5, 100), WithinRel(std::pow(0.5, 101) * std::sqrt(0.75), 1e-6));
  CHECK(adjoint_kernel_residual(beta, 0.0, 10) == 0.0);
  CHECK(code_of([&] { adjoint_kernel_residual(beta, 2.0, 200); }) == ErrorCode::SeriesDiverged);
}

TEST_CASE("resolvent recurrence on the constant-1 shift", "[oracle]") {
  auto beta = constant_one(4096);
  auto x = VectorSpec::basis(0);
  for (int k = 0; k < 40; ++k) {
    cplx u = std::polar(1.0, 2.0 * M_PI * k / 40.0);
    CHECK(resolvent_recurrence(beta, x, 0.5 * u, 4096).decision == Membership::InLocalSpectrum);
    CHECK(resolvent_recurrence(beta, x, 2.0 * u, 4096).decision == Membership::InLocalResolvent);
  }
}

TEST_CASE("contour reconstruction", "[oracle]") {
  auto beta = constant_one(4096);
  auto x = VectorSpec::from_map({{0, 1.0}, {1, 1.0}});
  auto rec = contour_reconstruct(beta, x, 1.5, 512);
  CHECK(rec.distance <= 1e-10);
  CHECK(std::abs(rec.vector.at(1) - cplx(1.0)) <= 1e-12);
  auto w = named_weight("periodic", {{"p0", 2.0}, {"p1", 1.0}});
  auto pb = build_beta(w, 2000);
  auto y = VectorSpec::from_map({{0, 1.0}, {3, cplx(0.0, -2.0)}});
  CHECK(contour_reconstruct(pb, y, 2.0, 256).distance <= 1e-10);
  CHECK(code_of([&] { contour_reconstruct(beta, x, 0.9, 512); }) == ErrorCode::RadiusInsideSpectrum);
  CHECK(code_of([&] { contour_reconstruct(beta, x, 1.5, 100); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("results do not depend on the thread count", "[oracle][parallel]") {
  auto once = [](const char* threads) {
    setenv("SHIFTSPEC_THREADS", threads, 1);
    auto rep = random_chain_check(11, 24, 256);
    auto beta = constant_one(1024);
    std::vector<int> decisions(64);
    parallel_for(decisions.size(), [&](std::size_t i) {
      decisions[i] = static_cast<int>(resolvent_recurrence(beta, VectorSpec::basis(0), std::polar(0.3 + 0.05 * i, 0.1 * i), 1024).decision);
    });
    return std::make_tuple(rep.passed, rep.worst_margin, decisions);
  };
  auto one = once("1");
  auto four = once("4");
  unsetenv("SHIFTSPEC_THREADS");
  CHECK(one == four);
}

TEST_CASE("chain check acceptance sizes", "[oracle][property]") {
  for (Side side : {Side::Unilateral, Side::Bilateral}) {
    ChainCheckOptions opt;
    opt.side = side;
    auto rep = random_chain_check(42, 200, 512, opt);
    INFO(to_string(side) << ": " << (rep.failures.empty() ? "" : rep.failures.front()));
    CHECK(rep.passed == 200);
  }
}
