#include "momsum/borel_laplace.hpp"

#include "envelope.hpp"
#include "momsum/errors.hpp"
#include "pade.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace momsum {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

Complex horner(const std::vector<Complex>& c, std::size_t len, Complex x) {
    Complex acc = 0.0;
    for (std::size_t i = len; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Root-test estimate of the convergence radius over the second half of the
// coefficients.
double convergence_radius(const std::vector<Complex>& c) {
    double limsup = 0.0;
    for (std::size_t p = c.size() / 2; p < c.size(); ++p)
        if (p > 0 && std::abs(c[p]) > 0.0)
            limsup = std::max(limsup, std::pow(std::abs(c[p]), 1.0 / static_cast<double>(p)));
    return limsup > 0.0 ? 1.0 / limsup : std::numeric_limits<double>::infinity();
}

}  // namespace

// ---------------------------------------------------------------------------
// Continuation

Complex BorelContinuation::at(Complex zeta) const { return main_(zeta); }
Complex BorelContinuation::operator()(double r) const { return main_(std::polar(r, d_)); }
Complex BorelContinuation::alternate(double r) const { return alt_(std::polar(r, d_)); }

RayFunction BorelContinuation::ray() const {
    auto f = main_;
    const double d = d_;
    return [f, d](double r) { return f(std::polar(r, d)); };
}

RayFunction BorelContinuation::alternate_ray() const {
    auto f = alt_;
    const double d = d_;
    return [f, d](double r) { return f(std::polar(r, d)); };
}

BorelContinuation continue_borel(const Series<Complex>& b, double d, const ContinuationStrategy& strat) {
    if (b.size() < 8)
        throw DomainError("continue_borel needs at least 8 coefficients, got " + std::to_string(b.size()));
    if (!std::isfinite(d)) throw DomainError("direction must be finite");
    for (const auto& c : b.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw AccuracyError("Borel coefficients are not finite; lower the truncation order");
    BorelContinuation out;
    out.d_ = d;
    const int N = b.N();
    auto coeffs = std::make_shared<const std::vector<Complex>>(b.coeffs());

    if (strat.method == ContinuationStrategy::Method::partial_sum) {
        out.method_ = "partial_sum";
        out.L_ = N;
        out.M_ = 0;
        out.main_ = [coeffs](Complex x) { return horner(*coeffs, coeffs->size(), x); };
        out.alt_ = [coeffs](Complex x) { return horner(*coeffs, coeffs->size() - 1, x); };
        out.trust_ = std::min(convergence_radius(*coeffs), strat.radius_cap);
        return out;
    }

    out.method_ = "pade";
    const int L0 = strat.L >= 0 ? strat.L : N / 2 - 1;
    const int M0 = strat.M >= 0 ? strat.M : N / 2;
    if (L0 + M0 > N)
        throw DomainError("Pade degrees (" + std::to_string(L0) + "," + std::to_string(M0) +
                          ") exceed the truncation N = " + std::to_string(N));

    // A pole on the ray inside the trust radius is genuine. One just beyond it
    // cannot be trusted and would be integrated through, so the degrees are
    // lowered along the diagonal until the ray is clear up to kPoleReach times
    // the trust radius. Farther poles sit where the Laplace weight is negligible.
    constexpr int kMaxLowering = 4;
    constexpr double kPoleReach = 4.0;
    std::string blocked;
    for (int drop = 0; drop <= kMaxLowering && M0 - drop >= 1; ++drop) {
        const int L = std::max(L0 - drop, 0), M = M0 - drop;
        auto main = std::make_shared<const detail::Pade>(*coeffs, L, M, strat.doublet_tol);
        auto alt = std::make_shared<const detail::Pade>(*coeffs, std::max(L - 1, 0), std::max(M - 1, 0),
                                                        strat.doublet_tol);

        // Trust radius: how far along the ray the two approximants agree.
        constexpr int kScan = 240;
        const double r0 = 1e-3;
        double trust = 0.0;
        for (int i = 0; i < kScan; ++i) {
            const double r = r0 * std::pow(strat.radius_cap / r0, static_cast<double>(i) / (kScan - 1));
            const Complex x = std::polar(r, d);
            const Complex a = (*main)(x), c = (*alt)(x);
            if (!(std::abs(a - c) <= strat.trust_tol * std::max(1.0, std::abs(a)))) break;
            trust = r;
        }

        bool clear = true;
        for (const auto& pole : main->poles()) {
            const double rad = std::abs(pole);
            const double dev = std::abs(detail::arg_near(pole, d) - d);
            if (rad > std::min(strat.radius_cap, kPoleReach * trust) || dev >= strat.pole_angle_tol) continue;
            if (rad <= trust * 1.05)
                throw SingularDirectionError("Borel continuation has a pole at zeta = " + fmt(pole) +
                                             " on the ray d = " + fmt(d) + " (angular distance " +
                                             fmt(dev) + " rad)");
            if (clear) blocked += " [" + std::to_string(main->L()) + "/" + std::to_string(main->M()) + "]: " + fmt(pole);
            clear = false;
        }
        if (!clear) continue;

        out.L_ = main->L();
        out.M_ = main->M();
        out.removed_ = main->removed_doublets();
        out.poles_ = main->poles();
        out.trust_ = trust;
        out.main_ = [main](Complex x) { return (*main)(x); };
        out.alt_ = [alt](Complex x) { return (*alt)(x); };
        return out;
    }
    throw SingularDirectionError("no Pade approximant is free of poles on the ray d = " + fmt(d) +
                                 " just beyond its trust radius;" + blocked);
}

// ---------------------------------------------------------------------------

QuadValue laplace_along(const Kernel& k, const RayFunction& f, double tau, Complex z) {
    if (z == Complex{}) return {f(0.0), 0.0};
    const double s = k.s();
    const double theta = detail::arg_near(z, tau);
    const double phi = tau - theta;
    if (std::abs(phi) >= s * kPi / 2.0)
        throw DomainError("z = " + fmt(z) + " lies outside the validity window |arg z - tau| < " +
                          fmt(s * kPi / 2.0) + " of direction tau = " + fmt(tau));
    const Complex c = std::polar(1.0, phi / s);
    const double r = std::abs(z);
    auto g = [&](double v) { return f(r * std::pow(v, s)); };
    const auto res = detail::exp_weighted_integral(c, g);
    return {res.value, res.error};
}

GrowthRecord growth_classify(const RayFunction& f, const MomentSequence& M, const GrowthOptions& opt) {
    if (opt.samples < 6 || !(opt.R_max > 0.0)) throw DomainError("growth_classify needs >= 6 samples");
    GrowthRecord rec;
    rec.R_max = opt.R_max;
    std::vector<double> r, y;
    for (int i = 1; i <= opt.samples; ++i) {
        const double x = opt.R_max * i / opt.samples;
        const double mag = std::abs(f(x));
        if (!std::isfinite(mag)) {
            rec.note = "non-finite value at r = " + fmt(x);
            return rec;
        }
        r.push_back(x);
        y.push_back(mag > 0.0 ? std::log(mag) : -std::numeric_limits<double>::infinity());
    }
    const auto fit = detail::fit_envelope(r, y, M, detail::EnvelopeKind::growth, opt.tol);
    rec.ok = fit.ok;
    rec.K = fit.K;
    rec.C = std::exp(fit.logC);
    if (!fit.ok)
        rec.note = "no K in [1e-2, 1e2] bounds log|f(r)| by log C + M(r/K) up to r = " + fmt(opt.R_max);
    return rec;
}

// ---------------------------------------------------------------------------

namespace {

StageDiagnostics describe(const std::string& stage, const BorelContinuation& cont) {
    StageDiagnostics s;
    s.stage = stage;
    s.method = cont.method();
    s.pade_L = cont.L();
    s.pade_M = cont.M();
    s.removed_doublets = cont.removed_doublets();
    s.trust_radius = cont.trust_radius();
    s.poles = cont.poles();
    return s;
}

void check_window(const std::vector<Complex>& grid, double d, double s) {
    for (const auto& z : grid) {
        if (z == Complex{}) continue;
        if (std::abs(d - detail::arg_near(z, d)) >= s * kPi / 2.0)
            throw DomainError("grid point z = " + fmt(z) + " lies outside the validity window of direction " +
                              fmt(d) + " (half-opening " + fmt(s * kPi / 2.0) + ")");
    }
}

double max_abs(const std::vector<Complex>& grid) {
    double m = 0.0;
    for (const auto& z : grid) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

SumResult borel_sum(const Series<Complex>& u, const MomentSequence& M, const Kernel& k, double d,
                    const std::vector<Complex>& grid, const SumOptions& opt) {
    check_window(grid, d, k.s());
    SumResult res;
    res.grid = grid;
    res.direction = d;
    res.region = {d, k.s() * kPi, max_abs(grid)};

    const Series<Complex> b = formal_borel(u, k.moments(std::max(u.N(), 2)));
    const BorelContinuation cont = continue_borel(b, d, opt.strategy);
    StageDiagnostics diag = describe("borel continuation", cont);
    diag.growth = growth_classify(cont.ray(), M, opt.growth);
    res.growth = diag.growth;
    res.stages.push_back(diag);
    if (!diag.growth.ok)
        throw SummabilityError("Borel continuation along d = " + fmt(d) +
                               " fails the growth classification: " + diag.growth.note);

    const RayFunction f = cont.ray(), f_alt = cont.alternate_ray();
    for (const auto& z : grid) {
        const QuadValue main = laplace_along(k, f, d, z);
        const QuadValue alt = laplace_along(k, f_alt, d, z);
        res.values.push_back(main.value);
        res.err_est.push_back(main.error + std::abs(main.value - alt.value));
    }
    return res;
}

void check_admissible(const Multidirection& md) {
    if (!(md.omega1 > 0.0 && md.omega1 < md.omega2))
        throw DomainError("multidirection requires 0 < omega1 < omega2 (got " + fmt(md.omega1) + ", " +
                          fmt(md.omega2) + ")");
    if (md.omega2 > 2.0 + 1e-12)
        throw DomainError("multidirection requires omega2 <= 2 (got " + fmt(md.omega2) + ")");
    const double bound = kPi * (md.omega2 - md.omega1) / 2.0;
    if (!(std::abs(md.d1 - md.d2) < bound))
        throw DomainError("inadmissible multidirection: |d1 - d2| = " + fmt(std::abs(md.d1 - md.d2)) +
                          " must be < pi (omega2 - omega1) / 2 = " + fmt(bound));
}

namespace {

double level_omega(const Level& l) {
    const double w = growth_index(l.M);
    const double tol = l.M.known_growth_index() ? 1e-9 : 0.05 * w;
    if (std::abs(w - l.kernel.s()) > tol)
        throw DomainError("level sequence " + l.M.description() + " has growth index " + fmt(w) +
                          " but its kernel has order " + fmt(l.kernel.s()));
    return w;
}

}  // namespace

Multidirection make_multidirection(double d1, double d2, const Level& l1, const Level& l2) {
    Multidirection md;
    md.d1 = d1;
    md.d2 = d2;
    md.omega1 = level_omega(l1);
    md.omega2 = level_omega(l2);
    return md;
}

SumResult multisum(const Series<Complex>& u, const Level& l1, const Level& l2, const Multidirection& md,
                   const std::vector<Complex>& grid, const SumOptions& opt) {
    check_admissible(md);
    const double w1 = level_omega(l1), w2 = level_omega(l2);
    if (std::abs(w1 - md.omega1) > 1e-6 || std::abs(w2 - md.omega2) > 1e-6)
        throw DomainError("multidirection growth indices do not match the level sequences");
    check_window(grid, md.d1, l1.kernel.s());

    SumResult res;
    res.grid = grid;
    res.multilevel = true;
    res.direction = md.d1;
    res.direction2 = md.d2;
    res.region = {md.d1, md.omega1 * kPi, max_abs(grid)};

    const Kernel kq = make_gevrey_kernel(md.omega2 - md.omega1);
    const int N = std::max(u.N(), 2);

    // Stage 1: level-1 Borel, quotient-level continuation along d2.
    const Series<Complex> b = formal_borel(formal_borel(u, l1.kernel.moments(N)), kq.moments(N));
    const BorelContinuation cont = continue_borel(b, md.d2, opt.strategy);
    StageDiagnostics s1 = describe("quotient-level continuation along d2", cont);
    const int nM = 20;
    MomentSequence Mq = combine_quotient(l2.M.with_length(nM), l1.M.with_length(nM));
    s1.growth = growth_classify(cont.ray(), Mq, opt.growth);
    res.stages.push_back(s1);
    if (!s1.growth.ok)
        throw SummabilityError("stage 1 (quotient-level continuation along d2 = " + fmt(md.d2) +
                               ") fails the growth classification: " + s1.growth.note);

    // Stage 2: the quotient-level sum, continued along d1.
    auto make_g1 = [&](RayFunction f) -> RayFunction {
        const double d1 = md.d1, d2 = md.d2;
        return [f, kq, d1, d2](double r) {
            if (r == 0.0) return f(0.0);
            return laplace_along(kq, f, d2, std::polar(r, d1)).value;
        };
    };
    const RayFunction g1 = make_g1(cont.ray()), g1_alt = make_g1(cont.alternate_ray());
    StageDiagnostics s2;
    s2.stage = "level-1 continuation along d1";
    s2.method = "quadrature";
    s2.growth = growth_classify(g1, l1.M.with_length(nM), opt.growth);
    res.growth = s2.growth;
    res.stages.push_back(s2);
    if (!s2.growth.ok)
        throw SummabilityError("stage 2 (continuation along d1 = " + fmt(md.d1) +
                               ") fails the growth classification: " + s2.growth.note);

    // Stage 3: level-1 Laplace along d1.
    for (const auto& z : grid) {
        const QuadValue main = laplace_along(l1.kernel, g1, md.d1, z);
        const QuadValue alt = laplace_along(l1.kernel, g1_alt, md.d1, z);
        res.values.push_back(main.value);
        res.err_est.push_back(main.error + std::abs(main.value - alt.value));
    }
    return res;
}

SplitReport split_multisum_check(const Series<Complex>& f1, const Series<Complex>& f2,
                                 const Multidirection& md, const Level& l1, const Level& l2,
                                 const std::vector<Complex>& grid, const SumOptions& opt) {
    SplitReport rep;
    rep.combined = multisum(add(f1, f2), l1, l2, md, grid, opt);
    rep.part1 = borel_sum(f1, l1.M, l1.kernel, md.d1, grid, opt);
    rep.part2 = borel_sum(f2, l2.M, l2.kernel, md.d2, grid, opt);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double dev = std::abs(rep.combined.values[i] - rep.part1.values[i] - rep.part2.values[i]);
        rep.deviation.push_back(dev);
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

}  // namespace momsum
