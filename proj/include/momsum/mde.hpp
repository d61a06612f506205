#pragma once

#include "momsum/formal_series.hpp"
#include "momsum/growth.hpp"
#include "momsum/moment_sequence.hpp"

#include <string>
#include <vector>

namespace momsum {

/// eps^k a(z) d^p_{m2,z} w - w = f(z, eps), solved for a formal w(z, eps).
///
/// The data a and f are taken as known up to the working truncations
/// (N_eps, N_z); stored coefficients beyond them are ignored and missing ones
/// are zero.
template <class T>
struct SingularlyPerturbedProblem {
    int k = 1;
    int p = 2;
    double s1 = 1.0;
    double s2 = 1.0;
    MomentSequence m1;
    MomentSequence m2;
    MomentSequence baseM;
    AnalyticGerm<T> a;
    Bivariate<T> f;  ///< outer variable eps
    int N_eps = -1;  ///< -1: 30 in exact mode, 60 in floating mode
    int N_z = -1;    ///< -1: p N_eps + 10
};

/// (d^k_{m1,t} - a(z) d^p_{m2,z}) u = f(t, z),  d^j_{m1,t} u(0, z) = phi_j(z).
template <class T>
struct CauchyProblem {
    int k = 1;
    int p = 2;
    MomentSequence m1;
    MomentSequence m2;
    AnalyticGerm<T> a;
    Bivariate<T> f;             ///< outer variable t
    std::vector<Series<T>> phi;  ///< k initial data
    int N_t = -1;
    int N_z = -1;
};

enum class Construction { recursion, fixed_point };
std::string to_string(Construction c);

template <class T>
struct FormalSolution {
    Bivariate<T> series;
    /// frontier[n]: largest resolved z-order of the outer coefficient n, -1 if
    /// none. Cells beyond the frontier are stored as zero and carry no meaning.
    std::vector<int> frontier;
    /// psi_j = d^j_{m2,z} w(0, .) for j < p.
    std::vector<Series<T>> traces;
    /// psi_j m2(0)/m2(j), i.e. the z^j column of the solution.
    std::vector<Series<T>> traces_normalized;
    double residual_norm = 0.0;
    Construction construction = Construction::recursion;
};

/// Throws DomainError naming the violated constraint. The constraint
/// omega(M) s2 p / k <= 2 admits the boundary value 2.
template <class T>
void validate(const SingularlyPerturbedProblem<T>& prob);
template <class T>
void validate(const CauchyProblem<T>& prob);

/// w_n = a d^p_{m2} w_{n-k} - f_n (n >= k), w_n = -f_n (n < k).
template <class T>
FormalSolution<T> solve_main(const SingularlyPerturbedProblem<T>& prob);

/// Traces for j < p over the outer orders 0..upto (-1: the longest prefix on
/// which every trace is resolved). ShapeError lists the frontier otherwise.
template <class T>
std::vector<Series<T>> extract_traces(const FormalSolution<T>& sol, const MomentSequence& m2, int p,
                                      bool normalized = false, int upto = -1);

/// U = B_{m1,eps}(eps^k w). m1 must cover N_outer + k.
template <class T>
Bivariate<T> borel_in_epsilon(const Bivariate<T>& w, int k, const MomentSequence& m1);

template <class T>
struct EpsilonBorelIdentity {
    Bivariate<T> lhs;  ///< B_{m1,eps}(eps^{-k} u)
    Bivariate<T> rhs;  ///< d^k_{m1,eps} B_{m1,eps} u
    bool holds = false;
};

/// Both sides of the shift identity; u must be divisible by eps^k.
template <class T>
EpsilonBorelIdentity<T> check_epsilon_borel_identity(const Bivariate<T>& u, int k,
                                                     const MomentSequence& m1);

/// Residual of a(z) d^p_{m2,z} U - d^k_{m1,eps} U = B_{m1,eps} f for
/// U = borel_in_epsilon(sol.series), over the resolved coefficients.
template <class T>
double transformed_residual(const FormalSolution<T>& sol, const SingularlyPerturbedProblem<T>& prob);

/// u_j = m1(0)/m1(j) phi_j (j < k), u_{n+k} = m1(n)/m1(n+k) (a d^p_{m2} u_n + f_n).
template <class T>
FormalSolution<T> solve_cauchy(const CauchyProblem<T>& prob);

/// Partial sum w_0 + ... + w_Q of w_q = a^{-1} d^k_{m1,t} d^{-p}_{m2,z} w_{q-1},
/// w_0 = a^{-1} d^k_{m1,t}(sum_j z^j psi_j) - a^{-1} f, approximating
/// d^p_{m2,z} u. `psi` are the normalized traces (z^j columns of u), j < p.
template <class T>
FormalSolution<T> fixed_point_solution(const CauchyProblem<T>& prob, int Q,
                                       const std::vector<Series<T>>& psi);

/// d^p_{m2,z} applied to a Cauchy solution, with the frontier lowered by p.
template <class T>
FormalSolution<T> z_derivative(const FormalSolution<T>& sol, const MomentSequence& m2, int p);

/// Maximum over resolved coefficients of |lhs - rhs| / max(|terms|), zero
/// when every term vanishes. Exactly 0 in exact mode for a true solution.
template <class T>
double verify_residual(const FormalSolution<T>& sol, const SingularlyPerturbedProblem<T>& prob);
template <class T>
double verify_residual(const FormalSolution<T>& sol, const CauchyProblem<T>& prob);

struct Agreement {
    bool equal = false;
    int compared = 0;  ///< number of jointly resolved cells
    double max_difference = 0.0;  ///< of |a - b| / max(1, |a|, |b|)
};

/// Compares two solutions on the jointly resolved cells with outer order <= max_outer.
template <class T>
Agreement compare_solutions(const FormalSolution<T>& a, const FormalSolution<T>& b, int max_outer = -1);

/// s2 p / k, the predicted level of the solution in eps.
double predicted_level(int k, int p, double s2);

/// Fits |w_n(0)| against the base sequence over the window.
template <class T>
GrowthFit solution_level_fit(const FormalSolution<T>& sol, const MomentSequence& baseM, Window window);

}  // namespace momsum
