#pragma once

#include "momsum/formal_series.hpp"
#include "momsum/moment_sequence.hpp"
#include "momsum/scalar.hpp"

#include <memory>

namespace momsum {

/// Numerically fitted constants of a kernel. None of them is claimed optimal.
struct KernelMetadata {
    double alpha = 0.0;    ///< |e(x)| ~ x^alpha near 0 on the positive axis
    double beta = 0.0;     ///< |E(z)| <= c / |z|^beta on the negative axis
    double flat_C = 0.0;   ///< |e(x)| <= C exp(-M(x/K)) on the positive axis ...
    double flat_K = 0.0;   ///< ... with M the associated function of (p!)^s
    double rho2 = 0.0;     ///< rho(2) of (p!)^s, see rho_factor
};

/// Gevrey kernel of order s:
///   e(z) = (1/s) z^{1/s} exp(-z^{1/s}),  E(z) = sum z^p / Gamma(1+sp),
///   m_e(x) = Gamma(1+sx).
///
/// s ranges over (0, 2]. The order s = 2 kernel (E(z) = cosh sqrt z) sits on
/// the boundary of the strong-kernel family and is accepted so that order-2
/// series can be summed.
class Kernel {
public:
    double s() const noexcept;
    bool boundary() const noexcept { return s() >= 2.0; }

    /// Principal branch; requires |arg z| < s pi (DomainError otherwise).
    Complex e(Complex z) const;
    /// e(r e^{i theta}) on the Riemann surface of the logarithm.
    Complex e_polar(double r, double theta) const;
    /// log|e(r e^{i theta})|, finite where e itself underflows.
    double log_abs_e(double r, double theta) const;
    Complex E(Complex z) const;
    /// m_e(x) = Gamma(1 + s x); requires Re x > 0 except at x = 0.
    Complex moment(Complex x) const;
    double moment(double x) const;
    /// gamma_gevrey(s) truncated at N.
    MomentSequence moments(int N) const;
    /// (p!)^s truncated at N; its associated function drives the flatness fit.
    MomentSequence gevrey_sequence(int N) const;

    const KernelMetadata& metadata() const noexcept;
    /// |z| above which E switches from series to asymptotic evaluation.
    double series_radius() const noexcept;

private:
    friend Kernel make_gevrey_kernel(double s);
    struct State;
    std::shared_ptr<const State> st_;
};

/// Throws DomainError unless 0 < s <= 2.
Kernel make_gevrey_kernel(double s);

enum class KernelPart { e, E, moment };
Complex eval_kernel(const Kernel& k, KernelPart which, Complex z);

struct QuadValue {
    Complex value{};
    double error = 0.0;
};

/// Quadrature value of int_0^{inf(tau)} E(z xi) e(w xi) / (w xi) d xi,
/// which equals 1/(w - z) where the integral converges.
QuadValue cauchy_kernel_identity(const Kernel& k, Complex z, Complex w, double tau);

struct ContourOptions {
    double radius_fraction = 0.7;  ///< contour radius r1 as a fraction of the germ radius
    int min_nodes = 32;
    int max_nodes = 4096;
    double tol = 1e-12;
};

/// Largest |z| at which contour_moment_derivative accepts an evaluation:
/// r1 / (2 rho(2) K~) with r1 = radius_fraction * germ radius.
double contour_admissible_radius(const AnalyticGerm<Complex>& u, const Kernel& k,
                                 const ContourOptions& opt = {});

/// n-th m_e moment derivative of the germ at z, through the circle |w| = r1:
///   (1/2 pi i) oint u(w) int_0^{inf(-arg w)} xi^n E(z xi) e(w xi)/(w xi) d xi dw.
QuadValue contour_moment_derivative(const AnalyticGerm<Complex>& u, const Kernel& k, Complex z,
                                    int n, const ContourOptions& opt = {});

struct FlatnessFit {
    bool ok = false;
    double theta = 0.0;
    double C = 0.0;
    double K = 0.0;
};

/// Fits |e(r e^{i theta})| <= C exp(-M(r/K)) for r in [r_min, r_max].
FlatnessFit fit_flatness(const Kernel& k, double theta, double r_min = 1.0, double r_max = 1e3);

}  // namespace momsum
