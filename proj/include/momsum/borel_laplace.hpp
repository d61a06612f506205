#pragma once

#include "momsum/formal_series.hpp"
#include "momsum/kernel.hpp"
#include "momsum/moment_sequence.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace momsum {

/// Function of the radius r >= 0 along a fixed ray.
using RayFunction = std::function<Complex(double)>;

struct ContinuationStrategy {
    enum class Method { partial_sum, pade };
    Method method = Method::pade;
    int L = -1;  ///< numerator degree; -1 selects floor(N/2) - 1
    int M = -1;  ///< denominator degree; -1 selects floor(N/2)
    double doublet_tol = 1e-8;
    double pole_angle_tol = 0.05;  ///< radians
    double trust_tol = 1e-6;       ///< relative agreement defining the trust radius
    double radius_cap = 1e3;
};

/// Analytic continuation of a Borel transform along the ray r e^{i d}.
class BorelContinuation {
public:
    Complex at(Complex zeta) const;
    Complex operator()(double r) const;
    /// Same continuation with both Pade degrees lowered by one (stability probe).
    Complex alternate(double r) const;
    RayFunction ray() const;
    RayFunction alternate_ray() const;

    double direction() const noexcept { return d_; }
    const std::string& method() const noexcept { return method_; }
    int L() const noexcept { return L_; }
    int M() const noexcept { return M_; }
    const std::vector<Complex>& poles() const noexcept { return poles_; }
    int removed_doublets() const noexcept { return removed_; }
    /// Radius along the ray up to which the continuation is considered reliable
    /// (agreement with the stability probe, or the convergence radius estimate).
    double trust_radius() const noexcept { return trust_; }

private:
    friend BorelContinuation continue_borel(const Series<Complex>&, double, const ContinuationStrategy&);
    std::function<Complex(Complex)> main_, alt_;
    double d_ = 0.0;
    std::string method_;
    int L_ = 0, M_ = 0, removed_ = 0;
    double trust_ = 0.0;
    std::vector<Complex> poles_;
};

/// Throws SingularDirectionError when a Pade pole lies within the angular
/// tolerance of the ray inside the trust radius. Poles on the ray between one
/// and four trust radii lower both degrees along the diagonal (at most four
/// steps); the degrees used are reported by L() and M().
BorelContinuation continue_borel(const Series<Complex>& b, double d,
                                 const ContinuationStrategy& strat = {});

/// (T_{e,tau} f)(z) = int_0^{inf(tau)} e(u/z) f(u) du/u, f given along the ray tau.
/// Requires |arg z - tau| < s pi / 2.
QuadValue laplace_along(const Kernel& k, const RayFunction& f, double tau, Complex z);

struct GrowthOptions {
    double R_max = 50.0;
    int samples = 40;
    double tol = 1.0;
};

struct GrowthRecord {
    bool ok = false;
    double C = 0.0;
    double K = 0.0;
    double R_max = 0.0;
    std::string note;
};

/// Fits |f(r)| <= C exp(M(r/K)) on a radius grid in (0, R_max]; reports the
/// tightest (largest) admissible K.
GrowthRecord growth_classify(const RayFunction& f, const MomentSequence& M,
                             const GrowthOptions& opt = {});

struct RegionInfo {
    double bisector = 0.0;  ///< direction d of the sectorial region G_d(theta)
    double opening = 0.0;   ///< theta; sums live on openings beyond omega(M) pi
    double radius = 0.0;    ///< largest |z| on the grid
};

struct StageDiagnostics {
    std::string stage;
    std::string method;
    int pade_L = 0, pade_M = 0;
    int removed_doublets = 0;
    double trust_radius = 0.0;
    std::vector<Complex> poles;
    GrowthRecord growth;
};

struct SumResult {
    std::vector<Complex> grid;
    std::vector<Complex> values;
    std::vector<double> err_est;
    double direction = 0.0;
    double direction2 = 0.0;  ///< second direction for multisums
    bool multilevel = false;
    GrowthRecord growth;
    RegionInfo region;
    std::vector<StageDiagnostics> stages;
};

struct SumOptions {
    ContinuationStrategy strategy;
    GrowthOptions growth;
};

/// M-sum along d: formal Borel with the kernel moments, continuation, growth
/// classification against M, e-Laplace along d at every grid point.
SumResult borel_sum(const Series<Complex>& u, const MomentSequence& M, const Kernel& k, double d,
                    const std::vector<Complex>& grid, const SumOptions& opt = {});

struct Level {
    MomentSequence M;
    Kernel kernel;
};

struct Multidirection {
    double d1 = 0.0, d2 = 0.0;
    double omega1 = 0.0, omega2 = 0.0;
};

/// Throws DomainError unless omega1 < omega2 <= 2 and
/// |d1 - d2| < pi (omega2 - omega1) / 2.
void check_admissible(const Multidirection& md);

/// Fills omega1/omega2 from the level sequences.
Multidirection make_multidirection(double d1, double d2, const Level& l1, const Level& l2);

/// Two-level sum: Borel at level 1, quotient-level sum along d2, growth check
/// of the continuation against M1 along d1, level-1 Laplace along d1.
SumResult multisum(const Series<Complex>& u, const Level& l1, const Level& l2,
                   const Multidirection& md, const std::vector<Complex>& grid,
                   const SumOptions& opt = {});

struct SplitReport {
    double max_deviation = 0.0;
    std::vector<double> deviation;
    SumResult combined, part1, part2;
};

/// Compares multisum(f1 + f2) with S_{M1,d1}(f1) + S_{M2,d2}(f2) on the grid.
SplitReport split_multisum_check(const Series<Complex>& f1, const Series<Complex>& f2,
                                 const Multidirection& md, const Level& l1, const Level& l2,
                                 const std::vector<Complex>& grid, const SumOptions& opt = {});

}  // namespace momsum
