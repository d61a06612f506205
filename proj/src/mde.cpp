#include "momsum/mde.hpp"

#include "momsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momsum {

std::string to_string(Construction c) {
    return c == Construction::recursion ? "recursion" : "fixed_point";
}

double predicted_level(int k, int p, double s2) {
    if (k <= 0) throw DomainError("k must be positive");
    return s2 * p / k;
}

namespace {

template <class T>
using Traits = ScalarTraits<T>;

template <class T>
int default_outer_order() {
    return Traits<T>::mode == Mode::exact ? 30 : 60;
}

template <class T>
Series<T> padded(const Series<T>& s, int N) {
    Series<T> out(s.var(), N);
    for (int p = 0; p <= std::min(N, s.N()); ++p) out[p] = s[p];
    return out;
}

template <class T>
Series<T> data_row(const Bivariate<T>& f, int n, int N_z) {
    if (n > f.N_outer()) return Series<T>(Var::z, N_z);
    return padded(f.row(n), N_z);
}

MomentSequence cover(const MomentSequence& m, int N, const std::string& name) {
    if (m.N() >= N) return m;
    try {
        return m.with_length(std::max(N, 2));
    } catch (const ShapeError&) {
        throw ShapeError(name + " has length N = " + std::to_string(m.N()) + " but order " +
                         std::to_string(N) + " is required");
    }
}

std::string format_frontier(const std::vector<int>& fr) {
    std::ostringstream os;
    os << "[";
    for (std::size_t n = 0; n < fr.size(); ++n) os << (n ? ", " : "") << fr[n];
    os << "]";
    return os.str();
}

template <class T>
void require_germ(const AnalyticGerm<T>& a) {
    if (a.series.var() != Var::z) throw ShapeError("a must be a series in z");
    if (Traits<T>::is_zero(a.series[0]))
        throw DomainError("a(0) != 0 is required (a must be invertible on the working disc)");
}

template <class T>
void require_exact_moments(const MomentSequence& m, const std::string& name) {
    if constexpr (Traits<T>::mode == Mode::exact)
        if (!m.has_exact()) throw DomainError(name + " (" + m.description() + ") has no exact values");
}

// Relative residual accumulator: |lhs - rhs| / max(|terms|).
struct ResidualMax {
    double value = 0.0;

    template <class T>
    void add(const T& diff, std::initializer_list<T> terms) {
        if (Traits<T>::is_zero(diff)) return;
        double scale = 0.0;
        for (const auto& t : terms) scale = std::max(scale, Traits<T>::magnitude(t));
        const double d = Traits<T>::magnitude(diff);
        double rel = scale > 0.0 ? d / scale : d;
        if (!(rel > 0.0)) rel = std::numeric_limits<double>::min();  // nonzero below double range
        value = std::max(value, rel);
    }
};

template <class T>
bool cells_equal(const T& a, const T& b) {
    if constexpr (Traits<T>::mode == Mode::exact) {
        return a == b;
    } else {
        const double scale = std::max(Traits<T>::magnitude(a), Traits<T>::magnitude(b));
        return Traits<T>::magnitude(a - b) <= 1e-12 * scale;
    }
}

template <class T>
std::vector<Series<T>> traces_or_empty(const FormalSolution<T>& sol, const MomentSequence& m2, int p,
                                       bool normalized) {
    try {
        return extract_traces(sol, m2, p, normalized);
    } catch (const ShapeError&) {
        return {};
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Main problem

template <class T>
void validate(const SingularlyPerturbedProblem<T>& prob) {
    if (prob.k < 1 || prob.p <= prob.k)
        throw DomainError("1 <= k < p is required (k = " + std::to_string(prob.k) +
                          ", p = " + std::to_string(prob.p) + ")");
    if (!(prob.s1 > 0.0) || !(prob.s2 > 0.0)) throw DomainError("s1 and s2 must be positive");
    if (!(prob.s2 * prob.p > prob.s1 * prob.k))
        throw DomainError("s2 p > s1 k is required");
    const double omega = growth_index(prob.baseM);
    const double lvl = omega * prob.s2 * prob.p / prob.k;
    if (lvl > 2.0 * (1.0 + 1e-9))
        throw DomainError("omega(M) s2 p / k <= 2 is required (got " + std::to_string(lvl) + ")");
    require_germ(prob.a);
    if (prob.f.outer() != Var::eps) throw ShapeError("f must be a bivariate series in (eps, z)");
    if (prob.N_eps == 0 || prob.N_eps < -1 || prob.N_z == 0 || prob.N_z < -1)
        throw DomainError("truncations must be positive (or -1 for the defaults)");
    require_exact_moments<T>(prob.m2, "m2");
}

template <class T>
FormalSolution<T> solve_main(const SingularlyPerturbedProblem<T>& prob) {
    validate(prob);
    const int k = prob.k, p = prob.p;
    const int Ne = prob.N_eps > 0 ? prob.N_eps : default_outer_order<T>();
    const int Nz = prob.N_z > 0 ? prob.N_z : p * Ne + 10;
    const MomentSequence m2 = cover(prob.m2, Nz, "m2");
    const Series<T> a = padded(prob.a.series, Nz);

    FormalSolution<T> sol;
    sol.series = Bivariate<T>(Var::eps, Ne, Nz);
    sol.frontier.assign(static_cast<std::size_t>(Ne) + 1, -1);
    for (int n = 0; n <= Ne; ++n) {
        const Series<T> fn = data_row(prob.f, n, Nz);
        if (n < k) {
            sol.series.set_row(n, scale(fn, T(-1)));
            sol.frontier[n] = Nz;
            continue;
        }
        const int prev = sol.frontier[n - k];
        if (prev < p) continue;
        const Series<T> d = moment_derivative(sol.series.row(n - k).truncated(prev), m2, p);
        sol.series.set_row(n, sub(mul(a, d), fn));
        sol.frontier[n] = prev - p;
    }
    sol.traces = traces_or_empty(sol, m2, p, false);
    sol.traces_normalized = traces_or_empty(sol, m2, p, true);
    sol.construction = Construction::recursion;
    sol.residual_norm = verify_residual(sol, prob);
    return sol;
}

template <class T>
double verify_residual(const FormalSolution<T>& sol, const SingularlyPerturbedProblem<T>& prob) {
    const int k = prob.k, p = prob.p;
    const Bivariate<T>& w = sol.series;
    const int Nz = w.N_z();
    const MomentSequence m2 = cover(prob.m2, Nz, "m2");
    const Series<T> a = padded(prob.a.series, Nz);
    ResidualMax res;
    for (int n = 0; n <= w.N_outer(); ++n) {
        int J = sol.frontier[n];
        if (J < 0) continue;
        Series<T> term(Var::z, Nz);
        if (n >= k) {
            const int prev = sol.frontier[n - k];
            if (prev < p) continue;
            term = padded(mul(a, moment_derivative(w.row(n - k).truncated(prev), m2, p)), Nz);
            J = std::min(J, prev - p);
        }
        const Series<T> fn = data_row(prob.f, n, Nz);
        for (int j = 0; j <= J; ++j) {
            const T lhs = term[j] - w(n, j);
            res.add(T(lhs - fn[j]), {term[j], w(n, j), fn[j]});
        }
    }
    return res.value;
}

template <class T>
std::vector<Series<T>> extract_traces(const FormalSolution<T>& sol, const MomentSequence& m2, int p,
                                      bool normalized, int upto) {
    if (p < 1) throw DomainError("trace count p must be positive");
    const auto& fr = sol.frontier;
    int last = -1;
    while (last + 1 < static_cast<int>(fr.size()) && fr[last + 1] >= p - 1) ++last;
    if (upto >= 0) {
        if (upto >= static_cast<int>(fr.size()) || upto > last)
            throw ShapeError("traces up to order " + std::to_string(upto) +
                             " need z-order " + std::to_string(p - 1) +
                             " resolved; resolved frontier is " + format_frontier(fr));
        last = upto;
    }
    if (last < 0)
        throw ShapeError("no outer order is resolved to z-order " + std::to_string(p - 1) +
                         "; resolved frontier is " + format_frontier(fr));
    require_exact_moments<T>(m2, "m2");
    const MomentSequence m = cover(m2, p - 1, "m2");
    std::vector<Series<T>> out;
    for (int j = 0; j < p; ++j) {
        Series<T> psi(sol.series.outer(), last);
        const T factor = normalized ? T(1) : moment_ratio<T>(m, j, 0);
        for (int n = 0; n <= last; ++n) psi[n] = sol.series(n, j) * factor;
        out.push_back(std::move(psi));
    }
    return out;
}

template <class T>
Bivariate<T> borel_in_epsilon(const Bivariate<T>& w, int k, const MomentSequence& m1) {
    if (k < 0) throw DomainError("k must be >= 0");
    const Bivariate<T> u = shift_outer(w, k);
    return formal_borel(u, cover(m1, u.N_outer(), "m1"), u.outer());
}

template <class T>
EpsilonBorelIdentity<T> check_epsilon_borel_identity(const Bivariate<T>& u, int k, const MomentSequence& m1) {
    const MomentSequence m = cover(m1, u.N_outer(), "m1");
    EpsilonBorelIdentity<T> out;
    out.lhs = formal_borel(unshift_outer(u, k), m, u.outer());
    out.rhs = moment_derivative(formal_borel(u, m, u.outer()), m, k, u.outer());
    out.holds = out.lhs.N_outer() == out.rhs.N_outer() && out.lhs.N_z() == out.rhs.N_z();
    for (int n = 0; out.holds && n <= out.lhs.N_outer(); ++n)
        for (int j = 0; out.holds && j <= out.lhs.N_z(); ++j)
            out.holds = cells_equal(out.lhs(n, j), out.rhs(n, j));
    return out;
}

template <class T>
double transformed_residual(const FormalSolution<T>& sol, const SingularlyPerturbedProblem<T>& prob) {
    const int k = prob.k, p = prob.p;
    const int Nz = sol.series.N_z();
    const int Nu = sol.series.N_outer() + k;
    require_exact_moments<T>(prob.m1, "m1");
    const MomentSequence m1 = cover(prob.m1, Nu, "m1");
    const MomentSequence m2 = cover(prob.m2, Nz, "m2");
    const Bivariate<T> U = borel_in_epsilon(sol.series, k, m1);
    const Series<T> a = padded(prob.a.series, Nz);
    auto frU = [&](int n) { return n < k ? Nz : sol.frontier[n - k]; };

    ResidualMax res;
    for (int n = 0; n + k <= Nu; ++n) {
        if (frU(n) < p) continue;
        const int J = std::min(frU(n) - p, frU(n + k));
        if (J < 0) continue;
        const Series<T> az = padded(mul(a, moment_derivative(U.row(n).truncated(frU(n)), m2, p)), Nz);
        const T ratio = moment_ratio<T>(m1, n + k, n);
        const T mn = moment_value<T>(m1, n);
        const Series<T> fn = data_row(prob.f, n, Nz);
        for (int j = 0; j <= J; ++j) {
            const T dk = U(n + k, j) * ratio;
            const T F = fn[j] / mn;
            res.add(T(az[j] - dk - F), {az[j], dk, F});
        }
    }
    return res.value;
}

template <class T>
GrowthFit solution_level_fit(const FormalSolution<T>& sol, const MomentSequence& baseM, Window window) {
    std::vector<double> mags;
    for (int n = 0; n <= sol.series.N_outer() && sol.frontier[n] >= 0; ++n)
        mags.push_back(Traits<T>::magnitude(sol.series(n, 0)));
    return fit_growth(mags, baseM, window);
}

// ---------------------------------------------------------------------------
// Cauchy problem

template <class T>
void validate(const CauchyProblem<T>& prob) {
    if (prob.k < 1 || prob.p <= prob.k)
        throw DomainError("1 <= k < p is required (k = " + std::to_string(prob.k) +
                          ", p = " + std::to_string(prob.p) + ")");
    require_germ(prob.a);
    if (prob.f.outer() != Var::t) throw ShapeError("f must be a bivariate series in (t, z)");
    if (static_cast<int>(prob.phi.size()) != prob.k)
        throw ShapeError("expected k = " + std::to_string(prob.k) + " initial data, got " +
                         std::to_string(prob.phi.size()));
    for (const auto& ph : prob.phi)
        if (ph.var() != Var::z) throw ShapeError("initial data must be series in z");
    if (prob.N_t == 0 || prob.N_t < -1 || prob.N_z == 0 || prob.N_z < -1)
        throw DomainError("truncations must be positive (or -1 for the defaults)");
    require_exact_moments<T>(prob.m1, "m1");
    require_exact_moments<T>(prob.m2, "m2");
}

template <class T>
FormalSolution<T> solve_cauchy(const CauchyProblem<T>& prob) {
    validate(prob);
    const int k = prob.k, p = prob.p;
    const int Nt = prob.N_t > 0 ? prob.N_t : default_outer_order<T>();
    const int Nz = prob.N_z > 0 ? prob.N_z : p * Nt + 10;
    const MomentSequence m1 = cover(prob.m1, Nt, "m1");
    const MomentSequence m2 = cover(prob.m2, Nz, "m2");
    const Series<T> a = padded(prob.a.series, Nz);

    FormalSolution<T> sol;
    sol.series = Bivariate<T>(Var::t, Nt, Nz);
    sol.frontier.assign(static_cast<std::size_t>(Nt) + 1, -1);
    for (int j = 0; j < k && j <= Nt; ++j) {
        sol.series.set_row(j, scale(padded(prob.phi[j], Nz), moment_ratio<T>(m1, 0, j)));
        sol.frontier[j] = Nz;
    }
    for (int n = 0; n + k <= Nt; ++n) {
        const int fr = sol.frontier[n];
        if (fr < p) continue;
        const Series<T> d = moment_derivative(sol.series.row(n).truncated(fr), m2, p);
        const Series<T> rhs = add(mul(a, d), data_row(prob.f, n, Nz));
        sol.series.set_row(n + k, scale(rhs, moment_ratio<T>(m1, n, n + k)));
        sol.frontier[n + k] = fr - p;
    }
    sol.traces = traces_or_empty(sol, m2, p, false);
    sol.traces_normalized = traces_or_empty(sol, m2, p, true);
    sol.construction = Construction::recursion;
    sol.residual_norm = verify_residual(sol, prob);
    return sol;
}

template <class T>
FormalSolution<T> z_derivative(const FormalSolution<T>& sol, const MomentSequence& m2, int p) {
    const int Nz = sol.series.N_z();
    if (p > Nz) throw ShapeError("derivative order exceeds the z-truncation");
    const MomentSequence m = cover(m2, Nz, "m2");
    FormalSolution<T> out;
    out.series = Bivariate<T>(sol.series.outer(), sol.series.N_outer(), Nz - p);
    out.frontier.assign(sol.frontier.size(), -1);
    for (int n = 0; n <= sol.series.N_outer(); ++n) {
        const int fr = sol.frontier[n];
        if (fr < p) continue;
        out.series.set_row(n, moment_derivative(sol.series.row(n).truncated(fr), m, p));
        out.frontier[n] = fr - p;
    }
    out.construction = sol.construction;
    return out;
}

template <class T>
FormalSolution<T> fixed_point_solution(const CauchyProblem<T>& prob, int Q, const std::vector<Series<T>>& psi) {
    validate(prob);
    if (Q < 1) throw DomainError("iteration count Q must be >= 1");
    const int k = prob.k, p = prob.p;
    if (static_cast<int>(psi.size()) != p)
        throw ShapeError("expected p = " + std::to_string(p) + " traces, got " + std::to_string(psi.size()));
    int Npsi = psi[0].N();
    for (const auto& s : psi) Npsi = std::min(Npsi, s.N());
    const int Nw = Npsi - k;
    if (Nw < 0) throw ShapeError("traces must reach t-order k = " + std::to_string(k));
    const int Nz = prob.N_z > 0 ? prob.N_z : p * Npsi + 10;
    const MomentSequence m1 = cover(prob.m1, Npsi, "m1");
    const MomentSequence m2 = cover(prob.m2, Nz + p, "m2");
    const Series<T> ainv = invert_germ(padded(prob.a.series, Nz));

    // Seed: a^{-1} (d^k_t sum_j z^j psi_j - f).
    Bivariate<T> omega(Var::t, Nw, Nz);
    for (int n = 0; n <= Nw; ++n) {
        Series<T> row(Var::z, Nz);
        const T r = moment_ratio<T>(m1, n + k, n);
        for (int j = 0; j < p && j <= Nz; ++j) row[j] = psi[j][n + k] * r;
        omega.set_row(n, mul(ainv, sub(row, data_row(prob.f, n, Nz))));
    }
    Bivariate<T> W = omega;
    int rows = Nw;
    for (int q = 1; q <= Q && rows - k >= 0; ++q) {
        rows -= k;
        Bivariate<T> next(Var::t, rows, Nz);
        for (int n = 0; n <= rows; ++n) {
            const Series<T> anti = moment_antiderivative(omega.row(n + k), m2, p).truncated(Nz);
            next.set_row(n, mul(ainv, scale(anti, moment_ratio<T>(m1, n + k, n))));
        }
        for (int n = 0; n <= rows; ++n)
            for (int j = 0; j <= Nz; ++j) W(n, j) += next(n, j);
        omega = std::move(next);
    }

    FormalSolution<T> sol;
    sol.series = W;
    sol.frontier.assign(static_cast<std::size_t>(Nw) + 1, -1);
    for (int n = 0; n <= Nw; ++n)
        sol.frontier[n] = std::min({Nz, p * (Q + 1) - 1, p * ((Nw - n) / k + 1) - 1});
    sol.traces_normalized = psi;
    const MomentSequence m2p = cover(m2, p - 1, "m2");
    for (const auto& s : psi) sol.traces.push_back(s);
    for (int j = 0; j < p; ++j) sol.traces[j] = scale(psi[j], moment_ratio<T>(m2p, j, 0));
    sol.construction = Construction::fixed_point;
    sol.residual_norm = verify_residual(sol, prob);
    return sol;
}

template <class T>
double verify_residual(const FormalSolution<T>& sol, const CauchyProblem<T>& prob) {
    const int k = prob.k, p = prob.p;
    const int Nz = sol.series.N_z();
    const int No = sol.series.N_outer();
    const Series<T> a = padded(prob.a.series, Nz);
    ResidualMax res;

    if (sol.construction == Construction::recursion) {
        const MomentSequence m1 = cover(prob.m1, No, "m1");
        const MomentSequence m2 = cover(prob.m2, Nz, "m2");
        for (int j = 0; j < k && j <= No; ++j) {
            const Series<T> ph = padded(prob.phi[j], Nz);
            const T r = moment_ratio<T>(m1, j, 0);
            for (int z = 0; z <= sol.frontier[j]; ++z) {
                const T lhs = sol.series(j, z) * r;
                res.add(T(lhs - ph[z]), {lhs, ph[z]});
            }
        }
        for (int n = 0; n + k <= No; ++n) {
            const int fr = sol.frontier[n];
            if (fr < p) continue;
            const int J = std::min(sol.frontier[n + k], fr - p);
            const Series<T> ad = padded(mul(a, moment_derivative(sol.series.row(n).truncated(fr), m2, p)), Nz);
            const Series<T> fn = data_row(prob.f, n, Nz);
            const T r = moment_ratio<T>(m1, n + k, n);
            for (int j = 0; j <= J; ++j) {
                const T dk = sol.series(n + k, j) * r;
                res.add(T(dk - ad[j] - fn[j]), {dk, ad[j], fn[j]});
            }
        }
        return res.value;
    }

    // Fixed-point construction: with U = sum_{j<p} z^j psi_j + d^{-p} W the
    // equation reads a W = d^k_t U - f.
    const auto& psi = sol.traces_normalized;
    if (static_cast<int>(psi.size()) != p) return res.value;
    int Npsi = psi[0].N();
    for (const auto& s : psi) Npsi = std::min(Npsi, s.N());
    const MomentSequence m1 = cover(prob.m1, Npsi, "m1");
    const MomentSequence m2 = cover(prob.m2, Nz + p, "m2");
    auto fr = [&](int n) { return n <= No ? sol.frontier[n] : -1; };
    for (int n = 0; n <= No && n + k <= Npsi; ++n) {
        const int J = std::min(fr(n), fr(n + k) + p);
        if (J < 0) continue;
        const Series<T> aw = mul(a.truncated(J), sol.series.row(n).truncated(J));
        const Series<T> fn = data_row(prob.f, n, Nz);
        const T r = moment_ratio<T>(m1, n + k, n);
        for (int j = 0; j <= J; ++j) {
            const T U = j < p ? psi[j][n + k] : T(sol.series(n + k, j - p) * moment_ratio<T>(m2, j - p, j));
            const T dk = U * r;
            res.add(T(aw[j] - dk + fn[j]), {aw[j], dk, fn[j]});
        }
    }
    return res.value;
}

template <class T>
Agreement compare_solutions(const FormalSolution<T>& a, const FormalSolution<T>& b, int max_outer) {
    Agreement out;
    out.equal = true;
    int No = std::min(a.series.N_outer(), b.series.N_outer());
    if (max_outer >= 0) No = std::min(No, max_outer);
    for (int n = 0; n <= No; ++n) {
        const int J = std::min({a.frontier[n], b.frontier[n], a.series.N_z(), b.series.N_z()});
        for (int j = 0; j <= J; ++j) {
            ++out.compared;
            const double scale = std::max({1.0, Traits<T>::magnitude(a.series(n, j)),
                                           Traits<T>::magnitude(b.series(n, j))});
            const T d = a.series(n, j) - b.series(n, j);
            out.max_difference = std::max(out.max_difference, Traits<T>::magnitude(d) / scale);
            if (!cells_equal(a.series(n, j), b.series(n, j))) out.equal = false;
        }
    }
    return out;
}

#define MOMSUM_INSTANTIATE_MDE(T)                                                                   \
    template void validate(const SingularlyPerturbedProblem<T>&);                                   \
    template void validate(const CauchyProblem<T>&);                                                \
    template FormalSolution<T> solve_main(const SingularlyPerturbedProblem<T>&);                    \
    template std::vector<Series<T>> extract_traces(const FormalSolution<T>&, const MomentSequence&, \
                                                   int, bool, int);                                 \
    template Bivariate<T> borel_in_epsilon(const Bivariate<T>&, int, const MomentSequence&);        \
    template EpsilonBorelIdentity<T> check_epsilon_borel_identity(const Bivariate<T>&, int,         \
                                                                  const MomentSequence&);           \
    template double transformed_residual(const FormalSolution<T>&,                                  \
                                         const SingularlyPerturbedProblem<T>&);                     \
    template FormalSolution<T> solve_cauchy(const CauchyProblem<T>&);                               \
    template FormalSolution<T> fixed_point_solution(const CauchyProblem<T>&, int,                   \
                                                    const std::vector<Series<T>>&);                 \
    template FormalSolution<T> z_derivative(const FormalSolution<T>&, const MomentSequence&, int);  \
    template double verify_residual(const FormalSolution<T>&, const SingularlyPerturbedProblem<T>&); \
    template double verify_residual(const FormalSolution<T>&, const CauchyProblem<T>&);             \
    template Agreement compare_solutions(const FormalSolution<T>&, const FormalSolution<T>&, int);  \
    template GrowthFit solution_level_fit(const FormalSolution<T>&, const MomentSequence&, Window);

MOMSUM_INSTANTIATE_MDE(Complex)
MOMSUM_INSTANTIATE_MDE(Rational)

}  // namespace momsum
