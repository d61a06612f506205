#include "momsum/borel_laplace.hpp"
#include "momsum/errors.hpp"
#include "momsum/io.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace momsum;

namespace {

MomentSequence factorials(int N) {
    return MomentSequence::make(SequenceKind::factorial_power, {{"s", 1.0}}, N);
}

MomentSequence gevrey(double s, int N) {
    return MomentSequence::make(SequenceKind::factorial_power, {{"s", s}}, N);
}

Series<Complex> euler(int N) { return Series<Complex>(Var::z, oracle::alternating_factorial_power(N, 1)); }

Series<Complex> geometric(int N) {
    return Series<Complex>(Var::z, std::vector<Complex>(static_cast<std::size_t>(N) + 1, Complex(1.0)));
}

Series<Complex> times_z(const Series<Complex>& u) {
    std::vector<Complex> c(u.size() + 1);
    for (std::size_t p = 0; p < u.size(); ++p) c[p + 1] = u[p];
    return Series<Complex>(Var::z, c);
}

Level level(double s, int N) { return {gevrey(s, N), make_gevrey_kernel(s)}; }

}  // namespace

TEST_CASE("Pade continuation of the Borel transformed Euler series", "[borel]") {
    std::vector<Complex> b;
    for (int p = 0; p <= 7; ++p) b.push_back(p % 2 ? -1.0 : 1.0);
    ContinuationStrategy strat;
    strat.L = 3;
    strat.M = 3;
    const auto c = continue_borel(Series<Complex>(Var::z, b), 0.0, strat);
    for (double r : {0.0, 0.5, 2.0, 10.0, 100.0}) CHECK(std::abs(c(r) - 1.0 / (1.0 + r)) < 1e-12);
    CHECK_THROWS_AS(continue_borel(Series<Complex>(Var::z, b), kPi, strat), SingularDirectionError);
}

TEST_CASE("Pade continuation of an entire function", "[borel]") {
    std::vector<Complex> b;
    double f = 1.0;
    for (int p = 0; p <= 30; ++p) {
        if (p > 0) f *= p;
        b.push_back(1.0 / f);
    }
    for (double d : {0.0, 1.0, kPi}) {
        const auto c = continue_borel(Series<Complex>(Var::z, b), d);
        for (double r : {0.5, 2.0, 5.0}) {
            const Complex zeta = std::polar(r, d);
            CHECK(std::abs(c(r) - std::exp(zeta)) < 1e-8 * std::abs(std::exp(zeta)));
        }
    }
}

TEST_CASE("Laplace transform along a ray", "[borel]") {
    const auto k = make_gevrey_kernel(1.0);
    CHECK(std::abs(laplace_along(k, [](double) { return Complex(1.0); }, 0.0, 0.5).value - 1.0) < 1e-10);
    for (double z : {0.1, 0.7, 2.0})
        CHECK(std::abs(laplace_along(k, [](double u) { return Complex(u); }, 0.0, z).value - z) < 1e-10 * z);
    const auto v = laplace_along(k, [](double u) { return Complex(1.0 / (1.0 + u)); }, 0.0, 0.1);
    CHECK(std::abs(v.value - oracle::euler_integral(0.1)) < 1e-10);
    CHECK_THAT(v.value.real(), Catch::Matchers::WithinAbs(0.91563, 1e-5));
    CHECK_THROWS_AS(laplace_along(k, [](double) { return Complex(1.0); }, 0.0, Complex(-0.5)), DomainError);
}

TEST_CASE("single-level Borel sums", "[borel]") {
    const auto k = make_gevrey_kernel(1.0);
    const auto r1 = borel_sum(geometric(30), factorials(30), k, kPi, {Complex(-0.5)});
    CHECK(std::abs(r1.values[0] - 2.0 / 3.0) < 1e-8);
    const auto r2 = borel_sum(euler(30), factorials(30), k, 0.0, {0.05, 0.1, 0.2});
    for (std::size_t i = 0; i < r2.grid.size(); ++i)
        CHECK(std::abs(r2.values[i] - oracle::euler_integral(r2.grid[i].real())) < 1e-6);
    CHECK(r2.growth.ok);
    const auto r3 = borel_sum(Series<Complex>(Var::z, 30), factorials(30), k, 0.0, {0.1, Complex(0.1, 0.05)});
    for (const auto& v : r3.values) CHECK(v == Complex(0.0));
}

TEST_CASE("Euler series in the singular direction", "[borel]") {
    CHECK_THROWS_AS(borel_sum(euler(30), factorials(30), make_gevrey_kernel(1.0), kPi, {Complex(-0.1)}),
                    SingularDirectionError);
}

TEST_CASE("growth classification", "[borel]") {
    const auto M = factorials(60);
    const auto e = growth_classify([](double r) { return Complex(std::exp(r)); }, M);
    CHECK(e.ok);
    CHECK_THAT(e.K, Catch::Matchers::WithinRel(1.0, 0.25));
    CHECK_FALSE(growth_classify([](double r) { return Complex(std::exp(r * r)); }, M).ok);
    const auto b = growth_classify([](double r) { return Complex(std::sin(r)); }, M);
    CHECK(b.ok);
    CHECK(b.C <= 1.0 + 1e-9);
}

TEST_CASE("Borel sums do not depend on the direction", "[borel]") {
    const auto k = make_gevrey_kernel(1.0);
    const std::vector<Complex> grid = {0.1, Complex(0.1, 0.02)};
    const auto r0 = borel_sum(euler(40), factorials(40), k, 0.0, grid);
    for (double d : {-0.3, 0.3}) {
        const auto r = borel_sum(euler(40), factorials(40), k, d, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(r.values[i] - r0.values[i]) < 2e-6);
    }
}

TEST_CASE("single-level z-shift", "[borel][property]") {
    const auto k = make_gevrey_kernel(1.0);
    const std::vector<Complex> grid = {0.04, 0.08, 0.12, 0.16, 0.2};
    const auto f = euler(30);
    const auto sf = borel_sum(f, factorials(31), k, 0.0, grid);
    const auto sg = borel_sum(times_z(f), factorials(31), k, 0.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(sg.values[i] - grid[i] * sf.values[i]) < 1e-8);
}

TEST_CASE("multisum of a split series", "[borel][multisum]") {
    const int N = 30;
    const auto l1 = level(1.0, N);
    const auto l2 = level(2.0, N);
    const auto md = make_multidirection(0.0, 0.0, l1, l2);
    const auto f1 = euler(N);
    const Series<Complex> f2(Var::z, oracle::alternating_factorial_power(N, 2));
    const auto rep = split_multisum_check(f1, f2, md, l1, l2, {0.05});
    CHECK(rep.max_deviation <= 1e-5);
    // independent oracles for both parts
    CHECK(std::abs(rep.part1.values[0] - oracle::euler_integral(0.05)) < 1e-6);
    CHECK(std::abs(rep.part2.values[0] - oracle::double_euler_integral(0.05)) < 1e-5);
    CHECK(rep.combined.multilevel);
    CHECK(rep.combined.stages.size() >= 2);
}

TEST_CASE("multisum of convergent and zero series", "[borel][multisum]") {
    const int N = 30;
    const auto l1 = level(1.0, N);
    const auto l2 = level(2.0, N);
    const auto md = make_multidirection(0.0, 0.0, l1, l2);
    const std::vector<Complex> grid = {0.15, Complex(0.1, 0.1), Complex(0.05, -0.1)};
    std::vector<Complex> half;
    for (int p = 0; p <= N; ++p) half.push_back(std::pow(0.5, p));
    const auto r = multisum(Series<Complex>(Var::z, half), l1, l2, md, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(r.values[i] - 1.0 / (1.0 - 0.5 * grid[i])) < 1e-8);
    const auto z = multisum(Series<Complex>(Var::z, N), l1, l2, md, grid);
    for (const auto& v : z.values) CHECK(v == Complex(0.0));
    const auto split = split_multisum_check(Series<Complex>(Var::z, half), Series<Complex>(Var::z, N), md, l1, l2, grid);
    CHECK(split.max_deviation <= 1e-8);
}

TEST_CASE("inadmissible multidirections are rejected", "[borel][multisum]") {
    CHECK_THROWS_AS(check_admissible({0.0, 2.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(check_admissible({0.0, 0.0, 2.0, 1.0}), DomainError);
    CHECK_NOTHROW(check_admissible({0.0, 1.5, 1.0, 2.0}));
    try {
        check_admissible({0.0, 2.0, 1.0, 2.0});
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("pi") != std::string::npos);
    }
}

TEST_CASE("multisum z-shift", "[borel][multisum][property]") {
    const int N = 30;
    const auto l1 = level(1.0, N + 1);
    const auto l2 = level(2.0, N + 1);
    const auto md = make_multidirection(0.0, 0.0, l1, l2);
    const std::vector<Complex> grid = {0.02, 0.04, 0.06, 0.08, 0.1};
    auto c = oracle::alternating_factorial_power(N, 1);
    const auto c2 = oracle::alternating_factorial_power(N, 2);
    for (int p = 0; p <= N; ++p) c[p] += c2[p];
    const Series<Complex> f(Var::z, c);
    const auto sf = multisum(f, l1, l2, md, grid);
    const auto sg = multisum(times_z(f), l1, l2, md, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(sg.values[i] - grid[i] * sf.values[i]) < 1e-5);
}

TEST_CASE("continuation avoids poles just beyond the trust radius", "[borel][multisum]") {
    // The shipped split example: last-ulp differences in its coefficients leave
    // a Pade pole on the positive axis of the default degree pair.
    const auto cfg = io::read_json_file(std::string(MOMSUM_DATA_DIR) + "/configs/multisum.json");
    const auto& split = cfg["experiments"][0]["split"];
    const auto u = add(io::series_from_json<Complex>(split["f1"]), io::series_from_json<Complex>(split["f2"]));
    const int N = u.N();
    const auto k1 = make_gevrey_kernel(1.0);
    const auto b = formal_borel(formal_borel(u, k1.moments(N)), k1.moments(N));
    const auto cont = continue_borel(b, 0.0);
    CHECK(cont.M() < N / 2);
    for (const auto& pole : cont.poles())
        if (std::abs(std::arg(pole)) < 0.05) CHECK(std::abs(pole) > 4.0 * cont.trust_radius());
    for (double r : {0.5, 1.0, 2.0})
        CHECK(std::abs(cont(r) - (std::exp(-r) + 1.0 / (1.0 + r))) < 1e-5);

    const auto l1 = level(1.0, N);
    const auto l2 = level(2.0, N);
    const auto r = multisum(u, l1, l2, make_multidirection(0.0, 0.0, l1, l2), {0.05, 0.08});
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        const double z = r.grid[i].real();
        CHECK(std::abs(r.values[i] - oracle::euler_integral(z) - oracle::double_euler_integral(z)) < 1e-5);
    }
}
