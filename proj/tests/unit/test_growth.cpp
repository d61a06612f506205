#include "momsum/borel_laplace.hpp"
#include "momsum/errors.hpp"
#include "momsum/growth.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace momsum;
using Catch::Matchers::WithinAbs;

namespace {

MomentSequence factorials(int N) {
    return MomentSequence::make(SequenceKind::factorial_power, {{"s", 1.0}}, N);
}

// log (2n)!
std::vector<double> log_double_factorials(int N) {
    std::vector<double> v;
    for (int n = 0; n <= N; ++n) v.push_back(std::lgamma(2.0 * n + 1.0));
    return v;
}

std::vector<double> log_factorial_power(int N, double s) {
    std::vector<double> v;
    for (int n = 0; n <= N; ++n) v.push_back(s * std::lgamma(n + 1.0));
    return v;
}

}  // namespace

TEST_CASE("growth fit recovers factorial powers", "[growth]") {
    const auto fit = fit_growth_log(log_factorial_power(60, 2.0), factorials(60), {20, 60});
    CHECK_THAT(fit.s_est, WithinAbs(2.0, 0.1));
    CHECK_THAT(fit.logA, WithinAbs(0.0, 1e-6));
    CHECK(fit.residual >= 0.0);
    CHECK(fit.used == 41);

    std::vector<double> sq;
    for (int n = 0; n <= 60; ++n) sq.push_back(std::pow(std::tgamma(n + 1.0), 2));
    CHECK_THAT(fit_growth(sq, factorials(60), {20, 60}).s_est, WithinAbs(2.0, 0.1));
}

TEST_CASE("growth fit of (2n)!", "[growth]") {
    // (2n)! ~ 4^n (n!)^2 / sqrt(pi n)
    const auto fit = fit_growth_log(log_double_factorials(60), factorials(60), {20, 60});
    CHECK_THAT(fit.s_est, WithinAbs(2.0, 0.1));
    CHECK_THAT(fit.logA, WithinAbs(std::log(4.0), 0.15 * std::log(4.0)));
}

TEST_CASE("constant magnitudes have level zero", "[growth]") {
    const auto fit = fit_growth(std::vector<double>(61, 1.0), factorials(60), {20, 60});
    CHECK_THAT(fit.s_est, WithinAbs(0.0, 1e-8));
    CHECK_THAT(fit.logA, WithinAbs(0.0, 1e-8));
}

TEST_CASE("growth fit is scale equivariant", "[growth][property]") {
    const auto base = log_double_factorials(60);
    auto scaled = base;
    for (auto& x : scaled) x += std::log(37.5);
    const auto a = fit_growth_log(base, factorials(60), {20, 60});
    const auto b = fit_growth_log(scaled, factorials(60), {20, 60});
    CHECK_THAT(b.s_est, WithinAbs(a.s_est, 1e-9));
    CHECK_THAT(b.logA, WithinAbs(a.logA, 1e-9));
    CHECK_THAT(b.logC - a.logC, WithinAbs(std::log(37.5), 1e-8));
}

TEST_CASE("growth fit is stable across windows", "[growth][property]") {
    for (const auto& mags : {log_double_factorials(60), log_factorial_power(60, 2.0)}) {
        const auto lo = fit_growth_log(mags, factorials(60), {20, 40});
        const auto hi = fit_growth_log(mags, factorials(60), {40, 60});
        CHECK(std::abs(lo.s_est - hi.s_est) < 0.05);
    }
}

TEST_CASE("growth fit under a change of base", "[growth][property]") {
    // level t against M^s equals level s t against M
    const double s = 1.5;
    const auto Ms = combine_power(factorials(60), s);
    const auto mags = log_double_factorials(60);
    const auto against_M = fit_growth_log(mags, factorials(60), {20, 60});
    const auto against_Ms = fit_growth_log(mags, Ms, {20, 60});
    CHECK_THAT(s * against_Ms.s_est, WithinAbs(against_M.s_est, 0.05));
}

TEST_CASE("degenerate growth inputs", "[growth]") {
    CHECK_THROWS_AS(fit_growth(std::vector<double>(61, 0.0), factorials(60), {20, 60}), DegenerateInputError);
    const auto ones = MomentSequence::from_values(std::vector<double>(61, 1.0));
    CHECK_THROWS_AS(fit_growth_log(log_double_factorials(60), ones, {20, 60}), DegenerateInputError);
    CHECK_THROWS_AS(fit_growth_log(log_double_factorials(60), factorials(60), {20, 25}), DomainError);
    CHECK_THROWS_AS(fit_growth_log(log_double_factorials(30), factorials(60), {20, 60}), ShapeError);
}

TEST_CASE("asymptotic remainder of the Euler sum", "[growth][remainder]") {
    const auto k = make_gevrey_kernel(1.0);
    const std::vector<Complex> grid = {0.05, 0.1, 0.15, 0.2};
    const auto f = Series<Complex>(Var::z, oracle::alternating_factorial_power(30, 1));
    const auto sums = borel_sum(f, factorials(30), k, 0.0, grid);
    std::vector<RemainderSample> samples;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RemainderSample s{grid[i], sums.values[i], {}};
        Complex acc = 0.0, zp = 1.0;
        for (int N = 0; N <= 10; ++N) {
            s.partial_sums.push_back(acc);
            acc += f[N] * zp;
            zp *= grid[i];
        }
        samples.push_back(s);
    }
    const auto fit = check_asymptotic_remainder(samples, factorials(30));
    CHECK(fit.consistent);
    CHECK(std::isfinite(fit.C));
    CHECK(std::isfinite(fit.A));
    // the remainder is bounded by the first omitted term: A <= 1 suffices
    CHECK(fit.A <= 1.05);
}

TEST_CASE("asymptotic remainder of a convergent sum", "[growth][remainder]") {
    // f = 1/(1 - 2z), partial sums of sum (2z)^p; M = 1 gives A near the inverse radius 2
    const auto ones = MomentSequence::from_values(std::vector<double>(31, 1.0));
    std::vector<RemainderSample> samples;
    for (double z : {0.05, 0.1, 0.2}) {
        RemainderSample s{z, 1.0 / (1.0 - 2.0 * z), {}};
        Complex acc = 0.0;
        for (int N = 0; N <= 20; ++N) {
            s.partial_sums.push_back(acc);
            acc += std::pow(2.0 * z, N);
        }
        samples.push_back(s);
    }
    const auto fit = check_asymptotic_remainder(samples, ones);
    CHECK(fit.consistent);
    CHECK(fit.A >= 1.9);
    CHECK(fit.A <= 2.2);
}

TEST_CASE("asymptotic remainder of a constant", "[growth][remainder]") {
    RemainderSample s{0.1, 3.0, {0.0, 3.0}};
    const auto fit = check_asymptotic_remainder({s}, factorials(10));
    CHECK(fit.consistent);
}
