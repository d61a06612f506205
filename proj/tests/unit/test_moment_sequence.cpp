#include "momsum/errors.hpp"
#include "momsum/moment_sequence.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace momsum;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

MomentSequence gevrey(double s, int N) {
    return MomentSequence::make(SequenceKind::factorial_power, {{"s", s}}, N);
}

// sup_p (p log t - log M_p) by brute force over a prefix.
double brute_associated(const MomentSequence& m, double t) {
    double best = 0.0;
    for (int p = 0; p <= m.N(); ++p) best = std::max(best, p * std::log(t) - m.log_value(p));
    return best;
}

}  // namespace

TEST_CASE("factorial powers hold exact factorials", "[sequence]") {
    const auto m = gevrey(1.0, 30);
    REQUIRE(m.has_exact());
    for (unsigned p = 0; p <= 30; ++p) CHECK(m.exact(p) == oracle::factorial(p));
    const auto m2 = gevrey(2.0, 20);
    for (unsigned p = 0; p <= 20; ++p) CHECK(m2.exact(p) == oracle::factorial(p) * oracle::factorial(p));
    CHECK_THAT(gevrey(0.5, 10)[9], WithinRel(std::sqrt(362880.0), 1e-14));
}

TEST_CASE("gamma Gevrey values", "[sequence]") {
    const auto m = MomentSequence::make(SequenceKind::gamma_gevrey, {{"s", 0.5}}, 10);
    CHECK_THAT(m[2], WithinRel(1.0, 1e-15));
    for (int p = 0; p <= 10; ++p) CHECK_THAT(m[p], WithinRel(std::tgamma(1.0 + 0.5 * p), 1e-13));
    const auto m2 = MomentSequence::make(SequenceKind::gamma_gevrey, {{"s", 2.0}}, 8);
    CHECK(m2.exact(4) == oracle::factorial(8));
}

TEST_CASE("q-factorials", "[sequence]") {
    const auto m = MomentSequence::make(SequenceKind::q_factorial, {{"q", 0.5}}, 10);
    // [1]_q [2]_q [3]_q = 1 * 3/2 * 7/4
    CHECK(m.exact(3) == Rational(21, 8));
    CHECK_THAT(m[3], WithinRel(21.0 / 8.0, 1e-15));
    CHECK(m.exact(0) == 1);
}

TEST_CASE("invalid sequence parameters are rejected", "[sequence]") {
    CHECK_THROWS_AS(gevrey(0.0, 10), DomainError);
    CHECK_THROWS_AS(gevrey(-1.0, 10), DomainError);
    CHECK_THROWS_AS(MomentSequence::make(SequenceKind::q_factorial, {{"q", 1.0}}, 10), DomainError);
    CHECK_THROWS_AS(gevrey(1.0, 1), DomainError);
    CHECK_THROWS_AS(MomentSequence::from_values({1.0, 0.0, 2.0}), DomainError);
    CHECK_THROWS_AS(MomentSequence::from_values({1.0, 2.0}), DomainError);
}

TEST_CASE("combinations of sequences", "[sequence]") {
    const auto a = gevrey(1.0, 20);
    const auto prod = combine_product(a, a);
    const auto sq = gevrey(2.0, 20);
    for (int p = 0; p <= 20; ++p) CHECK_THAT(prod.log_value(p), WithinAbs(sq.log_value(p), 1e-10));
    CHECK(prod.exact(7) == sq.exact(7));
    const auto quot = combine_quotient(sq, a);
    for (int p = 0; p <= 20; ++p) CHECK_THAT(quot.log_value(p), WithinAbs(a.log_value(p), 1e-10));
    const auto pw = combine_power(a, 1.5);
    CHECK_THAT(pw.log_value(10), WithinRel(1.5 * std::lgamma(11.0), 1e-13));
    CHECK_THROWS_AS(combine_product(a, gevrey(1.0, 10)), ShapeError);
}

TEST_CASE("associated function matches the brute-force supremum", "[sequence]") {
    const auto m = gevrey(1.0, 60);
    for (double t : {0.5, 1.0, 2.0, 7.5, 20.0, 40.0}) {
        const auto av = associated_function(m, t);
        CHECK_THAT(av.value, WithinAbs(brute_associated(m, t), 1e-12));
        CHECK_FALSE(av.truncation_limited);
        CHECK_THAT(associated_function_extended(m, t), WithinAbs(av.value, 1e-9));
    }
    CHECK(associated_function(m, 1e3).truncation_limited);
    CHECK(associated_function(m, 0.5).value == 0.0);
}

TEST_CASE("strong regularity of Gevrey powers", "[sequence]") {
    for (double s : {0.5, 1.0, 1.5}) {
        const auto rep = check_strongly_regular(gevrey(s, 50));
        INFO("s = " << s);
        CHECK(rep.lc_ok);
        CHECK(rep.mg_ok);
        CHECK(rep.snq_ok);
        CHECK(rep.snq_verdict == Verdict::pass);
        CHECK(std::isfinite(rep.A1));
        CHECK(std::isfinite(rep.A2));
    }
}

TEST_CASE("q-factorials fail strong non-quasianalyticity", "[sequence]") {
    const auto rep = check_strongly_regular(MomentSequence::make(SequenceKind::q_factorial, {{"q", 0.5}}, 50));
    CHECK(rep.lc_ok);
    CHECK_FALSE(rep.snq_ok);
    CHECK(rep.snq_verdict == Verdict::fail);
}

TEST_CASE("non-log-convex sequences fail lc", "[sequence]") {
    std::vector<double> v;
    for (int p = 0; p <= 20; ++p) v.push_back(p % 2 ? 3.0 : 1.0);
    CHECK_FALSE(check_strongly_regular(MomentSequence::from_values(v)).lc_ok);
    CHECK_THROWS_AS(check_strongly_regular(gevrey(1.0, 8)), DomainError);
}

TEST_CASE("growth index estimates", "[sequence]") {
    for (double s : {0.5, 1.0, 1.5}) {
        const auto est = estimate_omega(gevrey(s, 50));
        INFO("s = " << s);
        CHECK_THAT(est.omega, WithinRel(s, 0.05));
    }
    // explicit prefix of p!: radii beyond N put the supremum at the last index
    const auto m = gevrey(1.0, 150);
    const auto ex = MomentSequence::from_values(std::vector<double>(m.values().begin(), m.values().end()));
    const auto est = estimate_omega(ex, {2.0, 400.0, 20});
    CHECK(est.truncation_limited_points > 0);
    CHECK_FALSE(est.used_extension);
    CHECK_THROWS_AS(estimate_omega(ex, {200.0, 1e6, 20}), AccuracyError);
    CHECK(growth_index(gevrey(1.5, 20)) == 1.5);
}

TEST_CASE("equivalence of sequences", "[sequence]") {
    const auto g = MomentSequence::make(SequenceKind::gamma_gevrey, {{"s", 1.0}}, 40);
    CHECK(check_equivalence(gevrey(1.0, 40), g).equivalent);
    CHECK_FALSE(check_equivalence(gevrey(1.0, 40), gevrey(2.0, 40)).equivalent);
    // geometric factors keep equivalence: b_p = 3^p a_p
    const auto a = gevrey(1.0, 40);
    std::vector<double> b;
    for (int p = 0; p <= 40; ++p) b.push_back(std::pow(3.0, p) * a[p]);
    const auto rep = check_equivalence(a, MomentSequence::from_values(b));
    CHECK(rep.equivalent);
    CHECK_THAT(rep.D, WithinRel(3.0, 1e-6));
}

TEST_CASE("rho factor of Gevrey powers", "[sequence]") {
    // M(t) ~ t^{1/s} gives rho(2) close to 2^s.
    for (double s : {0.5, 1.0, 1.5}) {
        INFO("s = " << s);
        CHECK_THAT(rho_factor(gevrey(s, 20), 2.0), WithinRel(std::pow(2.0, s), 0.05));
    }
    CHECK(rho_factor(gevrey(1.0, 20), 1.0) == 1.0);
    CHECK_THROWS_AS(rho_factor(gevrey(1.0, 20), 0.5), DomainError);
}

TEST_CASE("re-materialized sequences agree on the shared prefix", "[sequence]") {
    const auto a = gevrey(1.5, 20);
    const auto b = a.with_length(40);
    for (int p = 0; p <= 20; ++p) CHECK(a.log_value(p) == b.log_value(p));
    const auto e = MomentSequence::from_values({1.0, 2.0, 5.0, 20.0});
    CHECK_THROWS_AS(e.with_length(10), ShapeError);
    CHECK(e.with_length(2).N() == 2);
}
