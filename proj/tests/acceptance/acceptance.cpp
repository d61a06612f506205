// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "momsum/borel_laplace.hpp"
#include "momsum/errors.hpp"
#include "momsum/formal_series.hpp"
#include "momsum/growth.hpp"
#include "momsum/kernel.hpp"
#include "momsum/mde.hpp"
#include "momsum/moment_sequence.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace momsum;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  ///< seconds, 0 when the criterion states none
    std::function<Outcome()> run;
};

MomentSequence gevrey(double s, int N) {
    return MomentSequence::make(SequenceKind::factorial_power, {{"s", s}}, N);
}

MomentSequence qhalf(int N) { return MomentSequence::make(SequenceKind::q_factorial, {{"q", 0.5}}, N); }

Series<Complex> euler(int N) { return Series<Complex>(Var::z, oracle::alternating_factorial_power(N, 1)); }

Series<Complex> times_z(const Series<Complex>& u) {
    std::vector<Complex> c(u.size() + 1);
    for (std::size_t p = 0; p < u.size(); ++p) c[p + 1] = u[p];
    return Series<Complex>(Var::z, c);
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

// 1. B_{m1}(d_{m2} u) = d_{m1 m2} B_{m1}(u) for both orderings of the pair.
Outcome commutation() {
    const int N = 40;
    const auto m1 = gevrey(1.0, N), m2 = qhalf(N);
    const auto p12 = combine_product(m1, m2), p21 = combine_product(m2, m1);
    std::mt19937_64 rng(1);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto u = oracle::random_series(rng, Var::z, N);
        if (!(formal_borel(moment_derivative(u, m2, 1), m1) == moment_derivative(formal_borel(u, m1), p12, 1))) ++bad;
        if (!(formal_borel(moment_derivative(u, m1, 1), m2) == moment_derivative(formal_borel(u, m2), p21, 1))) ++bad;
    }
    return {bad == 0, "400 exact comparisons, " + std::to_string(bad) + " mismatches"};
}

// 2. B(eps^{-k} u) = d^k B(u).
Outcome epsilon_identity() {
    const auto m = gevrey(1.0, 40);
    std::mt19937_64 rng(2);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + trial % 3;
        const auto u = oracle::random_bivariate(rng, Var::eps, 20, 8, k);
        if (!check_epsilon_borel_identity(u, k, m).holds) ++bad;
    }
    return {bad == 0, "100 trials, k in {1,2,3}, " + std::to_string(bad) + " mismatches"};
}

SingularlyPerturbedProblem<Rational> perturbed_problem(const std::vector<Rational>& f0, int N_eps) {
    SingularlyPerturbedProblem<Rational> prob;
    prob.k = 1;
    prob.p = 2;
    prob.s1 = prob.s2 = 1.0;
    prob.N_eps = N_eps;
    prob.N_z = 2 * N_eps + 10;
    prob.baseM = prob.m1 = prob.m2 = gevrey(1.0, prob.N_z + 5);
    prob.a = make_germ(Series<Rational>(Var::z, {Rational(1)}), 1.0);
    prob.f = Bivariate<Rational>(Var::eps, 0, static_cast<int>(f0.size()) - 1);
    prob.f.set_row(0, Series<Rational>(Var::z, f0));
    return prob;
}

// 3. eps w'' - w = -z^2 is solved by z^2 + 2 eps.
Outcome closed_form() {
    const auto prob = perturbed_problem({0, 0, -1}, 10);
    const auto sol = solve_main(prob);
    int bad = 0;
    for (int n = 0; n <= 10; ++n)
        for (int j = 0; j <= sol.frontier[n]; ++j) {
            const Rational expected = (n == 0 && j == 2) ? 1 : (n == 1 && j == 0) ? 2 : 0;
            if (sol.series(n, j) != expected) ++bad;
        }
    const double res = verify_residual(sol, prob);
    return {bad == 0 && res == 0.0, std::to_string(bad) + " wrong coefficients, residual " + sci(res)};
}

// 4. w_n(0) = (2n)! and level 2 against factorials.
Outcome level() {
    const int N = 30;
    const auto prob = perturbed_problem(std::vector<Rational>(2 * N + 11, Rational(-1)), N);
    const auto sol = solve_main(prob);
    int bad = 0;
    std::vector<double> mags;
    for (int n = 0; n <= N; ++n) {
        if (sol.series(n, 0) != oracle::factorial(2 * n)) ++bad;
        mags.push_back(ScalarTraits<Rational>::magnitude(sol.series(n, 0)));
    }
    const auto fit = fit_growth(mags, gevrey(1.0, N), {15, 30});
    std::ostringstream d;
    d << bad << " of 31 differ from (2n)!, s_est = " << fit.s_est;
    return {bad == 0 && std::abs(fit.s_est - 2.0) <= 0.2, d.str()};
}

// 5. Recursion and fixed-point series on the heat-type Cauchy problem.
Outcome construction_equivalence() {
    const int Nt = 12, Nz = 2 * Nt + 10;
    CauchyProblem<Rational> prob;
    prob.k = 1;
    prob.p = 2;
    prob.m1 = prob.m2 = gevrey(1.0, Nt + Nz + 5);
    prob.a = make_germ(Series<Rational>(Var::z, {Rational(1)}), 1.0);
    prob.f = Bivariate<Rational>(Var::t, 0, 0);
    prob.phi = {Series<Rational>(Var::z, std::vector<Rational>(Nz + 1, Rational(1)))};
    prob.N_t = Nt;
    prob.N_z = Nz;
    const auto rec = solve_cauchy(prob);
    const auto fp = fixed_point_solution(prob, 10, rec.traces_normalized);
    const auto agree = compare_solutions(fp, z_derivative(rec, prob.m2, 2), 10);
    return {agree.equal && agree.compared > 0,
            std::to_string(agree.compared) + " jointly resolved cells, max difference " + sci(agree.max_difference)};
}

// 6. int E(z xi) e(w xi) / (w xi) d xi = 1/(w - z).
Outcome kernel_cauchy() {
    struct Sample {
        Complex z, w;
    };
    const std::vector<Sample> samples = {{{0.2, 0.1}, {1.0, 0.3}}, {{-0.3, 0.0}, {1.5, 0.0}}, {{0.0, 0.1}, {0.8, -0.2}}};
    double worst = 0.0;
    for (double s : {1.0, 0.5}) {
        const auto k = make_gevrey_kernel(s);
        for (const auto& smp : samples) {
            const auto q = cauchy_kernel_identity(k, smp.z, smp.w, -std::arg(smp.w));
            worst = std::max(worst, std::abs(q.value - 1.0 / (smp.w - smp.z)));
        }
    }
    return {worst <= 1e-6, "6 samples, max error " + sci(worst)};
}

// 7. Contour derivative of 1/(1 - z) against n!/(1 - z)^{n+1}.
Outcome contour_derivative() {
    const auto k = make_gevrey_kernel(1.0);
    const auto g = make_germ(Series<Complex>(Var::z, std::vector<Complex>(41, Complex(1.0))), 0.9);
    double worst = 0.0;
    for (const Complex z : {Complex(0.1), Complex(0.0, 0.05), Complex(-0.08, 0.06), Complex(0.03, -0.02)})
        for (int n = 0; n <= 5; ++n) {
            const Complex ref = std::tgamma(n + 1.0) / std::pow(1.0 - z, n + 1);
            const Complex v = contour_moment_derivative(g, k, z, n).value;
            worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
        }
    return {worst <= 1e-8, "n <= 5 at 4 points with |z| <= 0.1, max relative error " + sci(worst)};
}

// 8. Euler series against int_0^inf e^{-t} / (1 + z t) dt.
Outcome euler_sum() {
    const auto r = borel_sum(euler(30), gevrey(1.0, 30), make_gevrey_kernel(1.0), 0.0, {0.05, 0.1, 0.2});
    double worst = 0.0;
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        worst = std::max(worst, std::abs(r.values[i] - oracle::euler_integral(r.grid[i].real())));
    return {worst <= 1e-6, "3 points, max error " + sci(worst)};
}

// 9. Geometric series along d = pi.
Outcome geometric_sum() {
    const auto r = borel_sum(Series<Complex>(Var::z, std::vector<Complex>(31, Complex(1.0))), gevrey(1.0, 30),
                             make_gevrey_kernel(1.0), kPi, {Complex(-0.5)});
    const double err = std::abs(r.values[0] - 2.0 / 3.0);
    return {err <= 1e-8, "error " + sci(err)};
}

// 10. S(z f) = z S(f), single level and multisum.
Outcome z_shift() {
    const int N = 30;
    const auto k = make_gevrey_kernel(1.0);
    const std::vector<Complex> g1 = {0.04, 0.08, 0.12, 0.16, 0.2};
    const auto sf = borel_sum(euler(N), gevrey(1.0, N + 1), k, 0.0, g1);
    const auto sg = borel_sum(times_z(euler(N)), gevrey(1.0, N + 1), k, 0.0, g1);
    double single = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i) single = std::max(single, std::abs(sg.values[i] - g1[i] * sf.values[i]));

    const Level l1{gevrey(1.0, N + 1), make_gevrey_kernel(1.0)}, l2{gevrey(2.0, N + 1), make_gevrey_kernel(2.0)};
    const auto md = make_multidirection(0.0, 0.0, l1, l2);
    auto c = oracle::alternating_factorial_power(N, 1);
    const auto c2 = oracle::alternating_factorial_power(N, 2);
    for (int p = 0; p <= N; ++p) c[p] += c2[p];
    const Series<Complex> f(Var::z, c);
    const std::vector<Complex> g2 = {0.02, 0.04, 0.06, 0.08, 0.1};
    const auto mf = multisum(f, l1, l2, md, g2);
    const auto mg = multisum(times_z(f), l1, l2, md, g2);
    double multi = 0.0;
    for (std::size_t i = 0; i < g2.size(); ++i) multi = std::max(multi, std::abs(mg.values[i] - g2[i] * mf.values[i]));
    return {single <= 1e-8 && multi <= 1e-5, "single-level " + sci(single) + ", multisum " + sci(multi)};
}

// 11. Multisum of f1 + f2 against the single-level sums of the parts.
Outcome multisum_split() {
    const int N = 30;
    const Level l1{gevrey(1.0, N), make_gevrey_kernel(1.0)}, l2{gevrey(2.0, N), make_gevrey_kernel(2.0)};
    const auto md = make_multidirection(0.0, 0.0, l1, l2);
    const Series<Complex> f1 = euler(N), f2(Var::z, oracle::alternating_factorial_power(N, 2));
    const auto rep = split_multisum_check(f1, f2, md, l1, l2, {0.03, 0.05, 0.08});
    double oracle_err = 0.0;
    for (std::size_t i = 0; i < rep.combined.grid.size(); ++i) {
        const double z = rep.combined.grid[i].real();
        oracle_err = std::max(oracle_err, std::abs(rep.combined.values[i] - oracle::euler_integral(z) -
                                                   oracle::double_euler_integral(z)));
    }
    return {rep.max_deviation <= 1e-5,
            "3 points, split deviation " + sci(rep.max_deviation) + ", distance to oracle " + sci(oracle_err)};
}

// 12. Strong regularity and growth index of Gevrey sequences; q-factorials fail (snq).
Outcome sequence_diagnostics() {
    bool ok = true;
    std::ostringstream d;
    for (double s : {0.5, 1.0, 1.5}) {
        const auto m = gevrey(s, 50);
        const auto rep = check_strongly_regular(m);
        const auto om = estimate_omega(m);
        const bool pass = rep.lc_ok && rep.mg_ok && rep.snq_verdict == Verdict::pass &&
                          std::abs(om.omega - s) <= 0.05 * s;
        ok = ok && pass;
        d << "s=" << s << ": omega " << om.omega << (pass ? "" : " (fail)") << "; ";
    }
    const auto q = check_strongly_regular(qhalf(50));
    ok = ok && q.snq_verdict == Verdict::fail;
    d << "q-factorial snq " << to_string(q.snq_verdict);
    return {ok, d.str()};
}

// 13. |S(z) - partial sum_N| <= C A^N M_N |z|^N for the Euler series.
Outcome remainder_fit() {
    const int N = 30;
    const std::vector<Complex> grid = {0.02, 0.05, 0.1, 0.15, 0.2};
    const auto f = euler(N);
    const auto sums = borel_sum(f, gevrey(1.0, N), make_gevrey_kernel(1.0), 0.0, grid);
    std::vector<RemainderSample> samples;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        RemainderSample s{grid[i], sums.values[i], {}};
        Complex acc = 0.0, zp = 1.0;
        for (int n = 0; n <= 10; ++n) {
            s.partial_sums.push_back(acc);
            acc += f[n] * zp;
            zp *= grid[i];
        }
        samples.push_back(s);
    }
    const auto fit = check_asymptotic_remainder(samples, gevrey(1.0, N));
    std::ostringstream d;
    d << "C = " << fit.C << ", A = " << fit.A;
    return {fit.consistent && std::isfinite(fit.C) && std::isfinite(fit.A), d.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "operator commutation", 10.0, commutation},
        {2, "eps^-k Borel identity", 10.0, epsilon_identity},
        {3, "closed-form solution", 0.0, closed_form},
        {4, "level prediction", 30.0, level},
        {5, "construction equivalence", 0.0, construction_equivalence},
        {6, "kernel Cauchy identity", 20.0, kernel_cauchy},
        {7, "contour moment derivative", 0.0, contour_derivative},
        {8, "Euler series Borel sum", 5.0, euler_sum},
        {9, "convergent series consistency", 0.0, geometric_sum},
        {10, "z-shift", 0.0, z_shift},
        {11, "multisum split", 60.0, multisum_split},
        {12, "sequence diagnostics", 0.0, sequence_diagnostics},
        {13, "asymptotic remainder", 0.0, remainder_fit},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            out.ok = false;
            out.detail += "; exceeded " + std::to_string(static_cast<int>(c.time_limit)) + " s";
        }
        if (!out.ok) ++failures;
        std::printf("%s %2d %-30s %7.3f s  %s\n", out.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
