#include "quadrature.hpp"

#include "momsum/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <deque>

namespace momsum::detail {

namespace {

// Bisection on 21-point Gauss-Kronrod panels. Accuracy is measured against the
// integral of |f| rather than |integral f|, so oscillating or cancelling
// panels stop at the noise level of the integrand instead of the depth limit;
// abs_tol is an absolute floor shared out among the halves.
template <class F>
Complex adaptive_panel(const F& f, double a, double b, double tol, double abs_tol, int depth, double& err) {
    using boost::math::quadrature::gauss_kronrod;
    double e = 0.0, l1 = 0.0;
    const Complex v = gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &e, &l1);
    if (depth == 0 || e <= std::max(tol * l1, abs_tol) || !(l1 > 0.0)) {
        err += e;
        return v;
    }
    const double m = 0.5 * (a + b);
    return adaptive_panel(f, a, m, tol, 0.5 * abs_tol, depth - 1, err) +
           adaptive_panel(f, m, b, tol, 0.5 * abs_tol, depth - 1, err);
}

}  // namespace

double arg_near(Complex z, double target) {
    double a = std::arg(z);
    const double two_pi = 2.0 * kPi;
    a += two_pi * std::round((target - a) / two_pi);
    return a;
}

RayQuadResult exp_weighted_integral(Complex c, const std::function<Complex(double)>& g,
                                    const RayQuadOptions& opt) {
    if (!(c.real() > 0.0)) throw DomainError("exponential weight must decay (Re c > 0)");
    auto integrand = [&](double v) -> Complex {
        const Complex w = c * std::exp(-c * v);
        if (std::abs(w) < 1e-300) return 0.0;
        const Complex gv = g(v);
        if (!std::isfinite(gv.real()) || !std::isfinite(gv.imag()))
            throw AccuracyError("integrand is not finite at v = " + std::to_string(v) +
                                "; growth exceeds the kernel decay");
        return w * gv;
    };

    RayQuadResult res;
    const double decay = c.real();
    double a = 0.0, h = opt.first_panel / std::max(decay, 1e-3);
    int quiet = 0;
    std::deque<double> recent;
    for (int k = 0; k < opt.max_panels; ++k) {
        double err = 0.0;
        // Tail panels only need to be accurate relative to the running total.
        const double floor = opt.rel_tol * std::abs(res.value);
        const Complex part = adaptive_panel(integrand, a, a + h, opt.panel_tol, floor, 12, err);
        res.value += part;
        res.error += err;
        res.panels = k + 1;
        a += h;
        h *= opt.panel_growth;

        const double mag = std::abs(part);
        if (mag <= opt.rel_tol * std::abs(res.value) + 1e-300 && decay * a > 1.0) {
            if (++quiet >= 2) return res;
        } else {
            quiet = 0;
        }
        recent.push_back(mag);
        if (recent.size() > 6) recent.pop_front();
        if (decay * a > 60.0 && recent.size() == 6) {
            bool growing = true;
            for (std::size_t i = 1; i < recent.size(); ++i) growing = growing && recent[i] > recent[i - 1];
            if (growing)
                throw AccuracyError("ray integrand keeps growing at v = " + std::to_string(a) +
                                    "; growth exceeds the kernel decay");
        }
    }
    throw AccuracyError("ray quadrature did not converge within " + std::to_string(opt.max_panels) +
                        " panels");
}

}  // namespace momsum::detail
