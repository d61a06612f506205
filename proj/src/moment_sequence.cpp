#include "momsum/moment_sequence.hpp"

#include "momsum/errors.hpp"
#include "special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace momsum {

namespace {

constexpr double kLogMaxDouble = 709.0;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

bool is_positive_integer(double s) { return s >= 1.0 && s == std::floor(s) && s < 1e6; }

double require_param(const SequenceParams& params, const char* name) {
    auto it = params.find(name);
    if (it == params.end())
        throw DomainError(std::string("missing sequence parameter '") + name + "'");
    return it->second;
}

Rational rational_pow(const Rational& x, unsigned n) {
    Rational r = 1;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
}

// Double value of a rational whose natural log is known.
double value_from_exact(const Rational& q, double log_q) {
    if (log_q > kLogMaxDouble) return std::numeric_limits<double>::infinity();
    return q.convert_to<double>();
}

}  // namespace

std::string to_string(SequenceKind kind) {
    switch (kind) {
        case SequenceKind::factorial_power: return "factorial_power";
        case SequenceKind::gamma_gevrey: return "gamma_gevrey";
        case SequenceKind::q_factorial: return "q_factorial";
        case SequenceKind::explicit_values: return "explicit";
        case SequenceKind::derived: return "derived";
    }
    return "unknown";
}

SequenceKind sequence_kind_from_string(const std::string& name) {
    if (name == "factorial_power") return SequenceKind::factorial_power;
    if (name == "gamma_gevrey") return SequenceKind::gamma_gevrey;
    if (name == "q_factorial") return SequenceKind::q_factorial;
    if (name == "explicit") return SequenceKind::explicit_values;
    if (name == "derived") return SequenceKind::derived;
    throw ConfigError("unknown sequence kind '" + name + "'");
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

void MomentSequence::fill_from_logs(std::vector<double> logs) {
    values_.resize(logs.size());
    for (std::size_t p = 0; p < logs.size(); ++p)
        values_[p] = logs[p] > kLogMaxDouble ? std::numeric_limits<double>::infinity()
                                              : std::exp(logs[p]);
    log_values_ = std::move(logs);
}

MomentSequence MomentSequence::make(SequenceKind kind, const SequenceParams& params, int N) {
    if (N < 2) throw DomainError("sequence truncation N must be >= 2, got " + std::to_string(N));
    MomentSequence m;
    m.kind_ = kind;
    m.params_ = params;
    const std::size_t len = static_cast<std::size_t>(N) + 1;
    std::vector<double> logs(len);

    switch (kind) {
        case SequenceKind::factorial_power: {
            const double s = require_param(params, "s");
            if (!(s > 0.0) || !std::isfinite(s))
                throw DomainError("factorial_power requires s > 0, got s = " + fmt(s));
            for (std::size_t p = 0; p < len; ++p) logs[p] = s * std::lgamma(p + 1.0);
            m.fill_from_logs(logs);
            // Direct values are more accurate than exp(log) where they exist.
            for (std::size_t p = 0; p < len && p <= 170; ++p) {
                double v = std::pow(detail::gamma_real(p + 1.0), s);
                if (std::isfinite(v)) m.values_[p] = v;
            }
            if (is_positive_integer(s)) {
                auto ex = std::make_shared<std::vector<Rational>>(len);
                Rational f = 1;
                for (std::size_t p = 0; p < len; ++p) {
                    if (p > 0) f *= static_cast<unsigned long>(p);
                    (*ex)[p] = rational_pow(f, static_cast<unsigned>(s));
                    m.values_[p] = value_from_exact((*ex)[p], logs[p]);
                }
                m.exact_ = ex;
            }
            m.log_extension_ = [s](double p) { return s * std::lgamma(p + 1.0); };
            m.growth_index_ = s;
            m.description_ = "factorial_power(s=" + fmt(s) + ")";
            break;
        }
        case SequenceKind::gamma_gevrey: {
            const double s = require_param(params, "s");
            if (!(s > 0.0) || !std::isfinite(s))
                throw DomainError("gamma_gevrey requires s > 0, got s = " + fmt(s));
            for (std::size_t p = 0; p < len; ++p) logs[p] = std::lgamma(1.0 + s * p);
            m.fill_from_logs(logs);
            for (std::size_t p = 0; p < len; ++p) {
                if (logs[p] > kLogMaxDouble) break;
                m.values_[p] = detail::gamma_real(1.0 + s * p);
            }
            if (is_positive_integer(s)) {
                auto ex = std::make_shared<std::vector<Rational>>(len);
                const auto step = static_cast<unsigned long>(s);
                Rational f = 1;
                unsigned long upto = 0;
                for (std::size_t p = 0; p < len; ++p) {
                    for (; upto < step * p;) f *= ++upto;
                    (*ex)[p] = f;
                    m.values_[p] = value_from_exact(f, logs[p]);
                }
                m.exact_ = ex;
            }
            m.log_extension_ = [s](double p) { return std::lgamma(1.0 + s * p); };
            m.growth_index_ = s;
            m.description_ = "gamma_gevrey(s=" + fmt(s) + ")";
            break;
        }
        case SequenceKind::q_factorial: {
            const double q = require_param(params, "q");
            if (!(q > 0.0 && q < 1.0))
                throw DomainError("q_factorial requires q in (0,1), got q = " + fmt(q));
            auto ex = std::make_shared<std::vector<Rational>>(len);
            const Rational qr(q);
            Rational fact = 1, bracket = 0, qpow = 1;
            double dfact = 1.0, dbracket = 0.0, dqpow = 1.0, lfact = 0.0;
            std::vector<double> vals(len);
            for (std::size_t p = 0; p < len; ++p) {
                if (p > 0) {
                    bracket += qpow;  // [p]_q = 1 + q + ... + q^{p-1}
                    qpow *= qr;
                    fact *= bracket;
                    dbracket += dqpow;
                    dqpow *= q;
                    dfact *= dbracket;
                    lfact += std::log(dbracket);
                }
                (*ex)[p] = fact;
                logs[p] = lfact;
                vals[p] = dfact;
            }
            m.log_values_ = std::move(logs);
            m.values_ = std::move(vals);
            m.exact_ = ex;
            m.log_extension_ = [q](double p) { return detail::log_q_gamma(p + 1.0, q); };
            m.description_ = "q_factorial(q=" + fmt(q) + ")";
            break;
        }
        case SequenceKind::explicit_values:
        case SequenceKind::derived:
            throw DomainError("make_sequence cannot build kind '" + to_string(kind) +
                              "'; use from_values or combine");
    }
    m.rebuild_ = [kind, params](int n) { return MomentSequence::make(kind, params, n); };
    return m;
}

MomentSequence MomentSequence::from_values(std::vector<double> values,
                                           std::optional<std::vector<Rational>> exact) {
    if (values.size() < 3)
        throw DomainError("explicit sequence needs at least 3 values (N >= 2)");
    for (std::size_t p = 0; p < values.size(); ++p)
        if (!(values[p] > 0.0) || std::isnan(values[p]))
            throw DomainError("sequence values must be strictly positive; value[" +
                              std::to_string(p) + "] = " + fmt(values[p]));
    if (exact && exact->size() != values.size())
        throw ShapeError("exact and floating values differ in length");
    MomentSequence m;
    m.kind_ = SequenceKind::explicit_values;
    m.description_ = "explicit";
    std::vector<double> logs(values.size());
    for (std::size_t p = 0; p < values.size(); ++p) logs[p] = std::log(values[p]);
    if (exact) {
        for (std::size_t p = 0; p < values.size(); ++p)
            if ((*exact)[p] <= 0)
                throw DomainError("exact sequence values must be strictly positive");
        m.exact_ = std::make_shared<std::vector<Rational>>(std::move(*exact));
    } else if (std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        auto ex = std::make_shared<std::vector<Rational>>();
        ex->reserve(values.size());
        for (double v : values) ex->emplace_back(v);
        m.exact_ = ex;
    }
    m.values_ = std::move(values);
    m.log_values_ = std::move(logs);
    return m;
}

const Rational& MomentSequence::exact(std::size_t p) const {
    if (!exact_)
        throw DomainError("sequence " + description_ + " has no exact-rational mode");
    return exact_->at(p);
}

double MomentSequence::ratio(std::size_t num, std::size_t den) const {
    const double a = values_.at(num), b = values_.at(den);
    if (std::isfinite(a) && std::isfinite(b)) return a / b;
    return std::exp(log_values_[num] - log_values_[den]);
}

double MomentSequence::log_value_extended(double p) const {
    if (!log_extension_)
        throw DomainError("sequence " + description_ + " has no closed-form continuation");
    return log_extension_(p);
}

MomentSequence MomentSequence::with_length(int N) const {
    if (N < 2) throw DomainError("sequence truncation N must be >= 2");
    if (rebuild_) return rebuild_(N);
    if (N > this->N())
        throw ShapeError("explicit sequence of length " + std::to_string(size()) +
                         " cannot be extended to N = " + std::to_string(N));
    MomentSequence m = *this;
    const auto len = static_cast<std::size_t>(N) + 1;
    m.values_.resize(len);
    m.log_values_.resize(len);
    if (exact_)
        m.exact_ = std::make_shared<std::vector<Rational>>(exact_->begin(), exact_->begin() + len);
    return m;
}

// ---------------------------------------------------------------------------

MomentSequence combine_power(const MomentSequence& a, double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw DomainError("power exponent must be > 0, got " + fmt(s));
    MomentSequence m;
    m.kind_ = SequenceKind::derived;
    m.params_ = {{"s", s}};
    m.description_ = "power(" + a.description_ + ", " + fmt(s) + ")";
    std::vector<double> logs(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) logs[p] = s * a.log_values_[p];
    m.fill_from_logs(logs);
    for (std::size_t p = 0; p < a.size(); ++p) {
        double v = std::pow(a.values_[p], s);
        if (std::isfinite(v)) m.values_[p] = v;
    }
    if (a.exact_ && is_positive_integer(s)) {
        auto ex = std::make_shared<std::vector<Rational>>(a.size());
        for (std::size_t p = 0; p < a.size(); ++p) {
            (*ex)[p] = rational_pow((*a.exact_)[p], static_cast<unsigned>(s));
            m.values_[p] = value_from_exact((*ex)[p], logs[p]);
        }
        m.exact_ = ex;
    }
    if (a.log_extension_) {
        auto base = a.log_extension_;
        m.log_extension_ = [base, s](double p) { return s * base(p); };
    }
    if (a.growth_index_) m.growth_index_ = s * *a.growth_index_;
    m.rebuild_ = [a, s](int n) { return combine_power(a.with_length(n), s); };
    return m;
}

namespace {

void require_same_length(const MomentSequence& a, const MomentSequence& b, const char* op) {
    if (a.N() != b.N())
        throw ShapeError(std::string(op) + " of sequences with different truncations (N = " +
                         std::to_string(a.N()) + " vs " + std::to_string(b.N()) + ")");
}

}  // namespace

MomentSequence combine_product(const MomentSequence& a, const MomentSequence& b) {
    require_same_length(a, b, "product");
    MomentSequence m;
    m.kind_ = SequenceKind::derived;
    m.description_ = "product(" + a.description_ + ", " + b.description_ + ")";
    std::vector<double> logs(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) logs[p] = a.log_values_[p] + b.log_values_[p];
    m.fill_from_logs(logs);
    for (std::size_t p = 0; p < a.size(); ++p) {
        double v = a.values_[p] * b.values_[p];
        if (std::isfinite(v)) m.values_[p] = v;
    }
    if (a.exact_ && b.exact_) {
        auto ex = std::make_shared<std::vector<Rational>>(a.size());
        for (std::size_t p = 0; p < a.size(); ++p) {
            (*ex)[p] = (*a.exact_)[p] * (*b.exact_)[p];
            m.values_[p] = value_from_exact((*ex)[p], logs[p]);
        }
        m.exact_ = ex;
    }
    if (a.log_extension_ && b.log_extension_) {
        auto fa = a.log_extension_, fb = b.log_extension_;
        m.log_extension_ = [fa, fb](double p) { return fa(p) + fb(p); };
    }
    if (a.growth_index_ && b.growth_index_) m.growth_index_ = *a.growth_index_ + *b.growth_index_;
    m.rebuild_ = [a, b](int n) { return combine_product(a.with_length(n), b.with_length(n)); };
    return m;
}

MomentSequence combine_quotient(const MomentSequence& a, const MomentSequence& b) {
    require_same_length(a, b, "quotient");
    MomentSequence m;
    m.kind_ = SequenceKind::derived;
    m.description_ = "quotient(" + a.description_ + ", " + b.description_ + ")";
    std::vector<double> logs(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) logs[p] = a.log_values_[p] - b.log_values_[p];
    m.fill_from_logs(logs);
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (std::isfinite(a.values_[p]) && std::isfinite(b.values_[p])) {
            double v = a.values_[p] / b.values_[p];
            if (std::isfinite(v) && v > 0.0) m.values_[p] = v;
        }
    }
    if (a.exact_ && b.exact_) {
        auto ex = std::make_shared<std::vector<Rational>>(a.size());
        for (std::size_t p = 0; p < a.size(); ++p) {
            (*ex)[p] = (*a.exact_)[p] / (*b.exact_)[p];
            m.values_[p] = value_from_exact((*ex)[p], logs[p]);
        }
        m.exact_ = ex;
    }
    if (a.log_extension_ && b.log_extension_) {
        auto fa = a.log_extension_, fb = b.log_extension_;
        m.log_extension_ = [fa, fb](double p) { return fa(p) - fb(p); };
    }
    if (a.growth_index_ && b.growth_index_ && *a.growth_index_ > *b.growth_index_)
        m.growth_index_ = *a.growth_index_ - *b.growth_index_;
    m.rebuild_ = [a, b](int n) { return combine_quotient(a.with_length(n), b.with_length(n)); };
    return m;
}

MomentSequence combine(CombineOp op, const MomentSequence& a, const MomentSequence* b, double s) {
    switch (op) {
        case CombineOp::power: return combine_power(a, s);
        case CombineOp::product:
            if (!b) throw DomainError("product requires a second sequence");
            return combine_product(a, *b);
        case CombineOp::quotient:
            if (!b) throw DomainError("quotient requires a second sequence");
            return combine_quotient(a, *b);
    }
    throw DomainError("unknown combine operation");
}

// ---------------------------------------------------------------------------
// Diagnostics

namespace {

// Largest (M_{p+q}/(M_p M_q))^{1/(p+q)} over p+q <= n.
double mg_constant(std::span<const double> L, std::size_t n) {
    double best = 0.0;
    for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t p = 0; p <= r; ++p)
            best = std::max(best, (L[r] - L[p] - L[r - p]) / static_cast<double>(r));
    return std::exp(best);
}

struct LineFit {
    double intercept = 0.0, slope = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    LineFit f;
    f.slope = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace

SRCheckReport check_strongly_regular(const MomentSequence& seq) {
    const int N = seq.N();
    if (N < 10) throw DomainError("check_strongly_regular requires N >= 10, got " + std::to_string(N));
    SRCheckReport rep;
    rep.N_checked = N;
    const auto L = seq.log_values();

    // (lc)
    rep.lc_ok = true;
    for (int p = 1; p <= N - 1; ++p) {
        bool ok;
        if (seq.has_exact())
            ok = seq.exact(p) * seq.exact(p) <= seq.exact(p - 1) * seq.exact(p + 1);
        else
            ok = 2.0 * L[p] <= L[p - 1] + L[p + 1] + 1e-12 * std::max(1.0, std::abs(L[p]));
        if (!ok) {
            rep.lc_ok = false;
            rep.notes.push_back("(lc) fails at p = " + std::to_string(p));
            break;
        }
    }

    // (mg): the witness is the smallest constant valid on the prefix; the
    // verdict asks that it does not keep growing with the prefix length.
    rep.A1 = mg_constant(L, static_cast<std::size_t>(N));
    const double A1_half = mg_constant(L, static_cast<std::size_t>(N / 2));
    rep.mg_ok = std::isfinite(rep.A1) && rep.A1 <= 1.25 * A1_half;
    if (!rep.mg_ok)
        rep.notes.push_back("(mg) witness grows with the prefix: A1(N/2) = " + fmt(A1_half) +
                            ", A1(N) = " + fmt(rep.A1));

    // (snq) heuristic on the terms T_q = M_q / ((q+1) M_{q+1}).
    std::vector<double> logT(static_cast<std::size_t>(N));
    for (int q = 0; q < N; ++q) logT[q] = L[q] - L[q + 1] - std::log(q + 1.0);

    const int tail0 = N / 2;
    std::vector<double> xq, yq;
    for (int q = tail0; q < N; ++q) {
        xq.push_back(q);
        yq.push_back(logT[q]);
    }
    const LineFit geo = fit_line(xq, yq);
    const double geo_ratio = std::exp(geo.slope);

    std::vector<double> xl, yl;
    for (int q = N / 4; q < N; ++q) {
        xl.push_back(std::log(q + 1.0));
        yl.push_back(logT[q]);
    }
    const double beta = -fit_line(xl, yl).slope;

    auto tail_ratio = [&](int p, double tail_beyond) {
        double S = tail_beyond;
        for (int q = p; q < N; ++q) S += std::exp(logT[q]);
        return S / std::exp(L[p] - L[p + 1]);
    };

    if (geo_ratio < 0.95) {
        rep.snq_verdict = Verdict::pass;
        const double tail = std::exp(logT[N - 1]) * geo_ratio / (1.0 - geo_ratio);
        for (int p : {0, N / 4, N / 2}) rep.A2 = std::max(rep.A2, tail_ratio(p, tail));
        rep.notes.push_back("(snq) terms decay geometrically, ratio " + fmt(geo_ratio));
    } else if (beta >= 1.2) {
        // Power-law decay q^{-beta}; the remaining tail is bounded by an integral.
        const double tail = std::exp(logT[N - 1]) * N / (beta - 1.0);
        double r0 = tail_ratio(0, tail), r1 = tail_ratio(N / 4, tail), r2 = tail_ratio(N / 2, tail);
        rep.A2 = std::max({r0, r1, r2});
        if (r2 <= 1.5 * r1 && std::isfinite(rep.A2)) {
            rep.snq_verdict = Verdict::pass;
            rep.notes.push_back("(snq) terms decay like q^-" + fmt(beta) +
                                "; normalized tails stay bounded");
        } else {
            rep.snq_verdict = Verdict::inconclusive;
            rep.notes.push_back("(snq) normalized tails still growing at N/2");
        }
    } else if (beta < 1.1) {
        rep.snq_verdict = Verdict::fail;
        rep.A2 = std::numeric_limits<double>::infinity();
        rep.notes.push_back("(snq) terms behave like c/q^" + fmt(beta) + ", series diverges");
    } else {
        rep.snq_verdict = Verdict::inconclusive;
        rep.notes.push_back("(snq) decay exponent " + fmt(beta) + " too close to 1 to decide");
    }
    rep.snq_ok = rep.snq_verdict == Verdict::pass;
    return rep;
}

AssociatedValue associated_function(const MomentSequence& seq, double t) {
    if (!(t >= 0.0)) throw DomainError("associated_function requires t >= 0");
    AssociatedValue out;
    if (t == 0.0) return out;
    const auto L = seq.log_values();
    const double lt = std::log(t);
    double best = -L[0];
    std::size_t arg = 0;
    for (std::size_t p = 1; p < L.size(); ++p) {
        double g = static_cast<double>(p) * lt - L[p];
        if (g > best) {
            best = g;
            arg = p;
        }
    }
    out.value = best;
    out.argmax = arg;
    out.truncation_limited = arg + 1 == L.size();
    return out;
}

double associated_function_extended(const MomentSequence& seq, double t) {
    if (!(t >= 0.0)) throw DomainError("associated_function requires t >= 0");
    if (t == 0.0) return 0.0;
    const double lt = std::log(t);
    auto L = [&](double p) { return seq.log_value_extended(p); };
    auto delta = [&](double p) { return L(p + 1.0) - L(p); };
    // log-convexity: the increments are nondecreasing, so the sup over integers
    // sits at the first p whose increment reaches log t. Beyond ~1e13 the
    // increments drown in the rounding of L itself.
    constexpr double kMaxIndex = 1e13;
    if (delta(kMaxIndex) < lt) return std::numeric_limits<double>::infinity();
    double lo = 0.0, hi = kMaxIndex;
    if (delta(0.0) >= lt) return -L(0.0);
    while (hi - lo > 1.0) {
        double mid = std::floor(0.5 * (lo + hi));
        if (mid <= lo) mid = lo + 1.0;
        if (delta(mid) >= lt) hi = mid;
        else lo = mid;
    }
    return hi * lt - L(hi);
}

double associated_function_best(const MomentSequence& seq, double t) {
    if (seq.extensible()) return associated_function_extended(seq, t);
    return associated_function(seq, t).value;
}

OmegaEstimate estimate_omega(const MomentSequence& seq, const OmegaOptions& opt) {
    if (opt.points < 4 || !(opt.r_min > 1.0) || !(opt.r_max > opt.r_min))
        throw DomainError("estimate_omega needs >= 4 grid points on [r_min, r_max] with r_min > 1");
    OmegaEstimate est;
    est.used_extension = seq.extensible();
    std::vector<double> xs, ys;
    const double lr0 = std::log(opt.r_min), lr1 = std::log(opt.r_max);
    for (int i = 0; i < opt.points; ++i) {
        const double lr = lr0 + (lr1 - lr0) * i / (opt.points - 1);
        const double r = std::exp(lr);
        double v;
        if (est.used_extension) {
            v = associated_function_extended(seq, r);
        } else {
            AssociatedValue av = associated_function(seq, r);
            if (av.truncation_limited) {
                ++est.truncation_limited_points;
                continue;
            }
            v = av.value;
        }
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        xs.push_back(1.0 / lr);
        ys.push_back(std::log(v) / lr);
    }
    if (2 * est.truncation_limited_points >= opt.points)
        throw AccuracyError("M(r) is truncation-limited on " +
                            std::to_string(est.truncation_limited_points) + " of " +
                            std::to_string(opt.points) +
                            " grid points; increase the sequence length N");
    if (xs.size() < 4)
        throw AccuracyError("too few finite samples of M(r) to estimate the growth index");
    // Subleading terms of M(r) bend the curve at small r; the intercept is
    // taken from the larger half of the radii, the full fit gauges the spread.
    const std::size_t h = xs.size() / 2;
    std::vector<double> xh(xs.begin() + static_cast<long>(h), xs.end());
    std::vector<double> yh(ys.begin() + static_cast<long>(h), ys.end());
    const LineFit upper = fit_line(xh, yh);
    if (!(upper.intercept > 0.0))
        throw AccuracyError("extrapolated limsup of log M(r)/log r is not positive");
    est.omega = 1.0 / upper.intercept;
    const LineFit full = fit_line(xs, ys);
    double resid = 0.0;
    for (std::size_t i = 0; i < xh.size(); ++i)
        resid = std::max(resid, std::abs(yh[i] - upper.intercept - upper.slope * xh[i]));
    est.uncertainty = std::abs(full.intercept > 0.0 ? 1.0 / full.intercept - est.omega : est.omega) +
                      est.omega * resid / upper.intercept;
    return est;
}

double growth_index(const MomentSequence& seq) {
    if (auto w = seq.known_growth_index()) return *w;
    return estimate_omega(seq).omega;
}

EquivalenceReport check_equivalence(const MomentSequence& a, const MomentSequence& b) {
    if (a.N() != b.N())
        throw ShapeError("check_equivalence needs a common truncation (N = " + std::to_string(a.N()) +
                         " vs " + std::to_string(b.N()) + ")");
    const int N = a.N();
    if (N < 10) throw DomainError("check_equivalence requires N >= 10");
    std::vector<double> x, l;
    for (int p = 0; p <= N; ++p) {
        x.push_back(p);
        l.push_back(b.log_value(p) - a.log_value(p));
    }
    const LineFit f = fit_line(x, l);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int p = 0; p <= N; ++p) {
        const double r = l[p] - f.slope * p;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const int h = N / 2;
    const LineFit f1 = fit_line({x.begin(), x.begin() + h + 1}, {l.begin(), l.begin() + h + 1});
    const LineFit f2 = fit_line({x.begin() + h, x.end()}, {l.begin() + h, l.end()});
    EquivalenceReport rep;
    rep.D = rep.D_tilde = std::exp(f.slope);
    rep.C = std::exp(lo);
    rep.C_tilde = std::exp(hi);
    rep.slope_drift = std::abs(f2.slope - f1.slope);
    rep.equivalent = rep.slope_drift <= 0.1 && std::isfinite(rep.C) && std::isfinite(rep.C_tilde) &&
                     rep.C > 0.0;
    return rep;
}

double rho_factor(const MomentSequence& seq, double s, const RhoOptions& opt) {
    if (!(s >= 1.0)) throw DomainError("rho_factor requires s >= 1, got " + fmt(s));
    if (!(opt.step > 0.0) || !(opt.cap >= 1.0) || opt.t_points < 2 || !(opt.t_min > 0.0))
        throw DomainError("invalid rho_factor options");
    double t_max = opt.t_max;
    if (t_max <= 0.0) {
        if (seq.extensible()) {
            t_max = 1e4;
        } else {
            // Keep the argmax strictly inside the prefix.
            const int N = seq.N();
            t_max = 0.5 * std::exp(seq.log_value(N) - seq.log_value(N - 1));
        }
    }
    if (!(t_max > opt.t_min)) throw DomainError("rho_factor t-grid is empty");

    std::vector<double> ts, Mt;
    for (int i = 0; i < opt.t_points; ++i) {
        const double t = opt.t_min * std::pow(t_max / opt.t_min, static_cast<double>(i) / (opt.t_points - 1));
        ts.push_back(t);
        Mt.push_back(associated_function_best(seq, t));
    }
    auto holds = [&](double rho) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double rhs = s * associated_function_best(seq, ts[i] / rho);
            if (Mt[i] < rhs - 1e-12 * (1.0 + std::abs(rhs))) return false;
        }
        return true;
    };
    const auto steps = static_cast<long>(std::floor((opt.cap - 1.0) / opt.step + 1e-9));
    auto rho_at = [&](long k) { return 1.0 + static_cast<double>(k) * opt.step; };
    if (holds(1.0)) return 1.0;
    if (!holds(rho_at(steps)))
        throw AccuracyError("no rho <= " + fmt(opt.cap) + " satisfies M(t) >= s M(t/rho) on the grid");
    long lo = 0, hi = steps;  // holds(hi) true, holds(lo) false
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        if (holds(rho_at(mid))) hi = mid;
        else lo = mid;
    }
    return rho_at(hi);
}

}  // namespace momsum
