#include "momsum/formal_series.hpp"

#include "momsum/errors.hpp"

#include <algorithm>
#include <cmath>

namespace momsum {

std::string to_string(Var v) {
    switch (v) {
        case Var::z: return "z";
        case Var::eps: return "eps";
        case Var::t: return "t";
    }
    return "?";
}

Var var_from_string(const std::string& name) {
    if (name == "z") return Var::z;
    if (name == "eps" || name == "epsilon") return Var::eps;
    if (name == "t") return Var::t;
    throw ConfigError("unknown series variable '" + name + "'");
}

namespace {

void require_same_var(Var a, Var b, const char* op) {
    if (a != b)
        throw ShapeError(std::string(op) + ": operands in different variables (" + to_string(a) +
                         " vs " + to_string(b) + ")");
}

void require_order(int n, const char* op) {
    if (n < 0) throw DomainError(std::string(op) + ": order must be >= 0, got " + std::to_string(n));
}

void require_covers(const MomentSequence& m, int N, const char* op) {
    if (m.N() < N)
        throw ShapeError(std::string(op) + ": moment sequence of length N = " + std::to_string(m.N()) +
                         " does not cover order " + std::to_string(N));
}

}  // namespace

// ---------------------------------------------------------------------------
// Series

template <class T>
Series<T>::Series(Var v, int N) : var_(v) {
    if (N < 0) throw ShapeError("series truncation must be >= 0");
    c_.assign(static_cast<std::size_t>(N) + 1, T(0));
}

template <class T>
Series<T>::Series(Var v, std::vector<T> coeffs) : var_(v), c_(std::move(coeffs)) {
    if (c_.empty()) throw ShapeError("series needs at least one coefficient");
}

template <class T>
Series<T> Series<T>::monomial(Var v, int N, int p, T c) {
    Series s(v, N);
    if (p < 0 || p > N) throw ShapeError("monomial degree outside truncation");
    s.c_[static_cast<std::size_t>(p)] = std::move(c);
    return s;
}

template <class T>
Series<T> Series<T>::truncated(int N) const {
    if (N < 0 || N > this->N())
        throw ShapeError("cannot truncate order " + std::to_string(this->N()) + " series to " +
                         std::to_string(N));
    return Series(var_, std::vector<T>(c_.begin(), c_.begin() + N + 1));
}

template <class T>
bool Series<T>::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& x) { return ScalarTraits<T>::is_zero(x); });
}

template <class T>
Complex Series<T>::evaluate(Complex x) const {
    Complex acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + ScalarTraits<T>::to_complex(*it);
    return acc;
}

// ---------------------------------------------------------------------------
// Bivariate

template <class T>
Bivariate<T>::Bivariate(Var outer, int N_outer, int N_z) : outer_(outer), n_outer_(N_outer), n_z_(N_z) {
    if (outer == Var::z) throw ShapeError("bivariate outer variable must be eps or t");
    if (N_outer < 0 || N_z < 0) throw ShapeError("bivariate truncations must be >= 0");
    c_.assign(static_cast<std::size_t>(N_outer + 1) * static_cast<std::size_t>(N_z + 1), T(0));
}

template <class T>
std::size_t Bivariate<T>::index(int n, int j) const {
    if (n < 0 || n > n_outer_ || j < 0 || j > n_z_)
        throw ShapeError("bivariate index (" + std::to_string(n) + "," + std::to_string(j) +
                         ") outside truncation (" + std::to_string(n_outer_) + "," +
                         std::to_string(n_z_) + ")");
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n_z_ + 1) + static_cast<std::size_t>(j);
}

template <class T>
Series<T> Bivariate<T>::row(int n) const {
    std::vector<T> r(static_cast<std::size_t>(n_z_) + 1);
    for (int j = 0; j <= n_z_; ++j) r[j] = (*this)(n, j);
    return Series<T>(Var::z, std::move(r));
}

template <class T>
Series<T> Bivariate<T>::column(int j) const {
    std::vector<T> c(static_cast<std::size_t>(n_outer_) + 1);
    for (int n = 0; n <= n_outer_; ++n) c[n] = (*this)(n, j);
    return Series<T>(outer_, std::move(c));
}

template <class T>
void Bivariate<T>::set_row(int n, const Series<T>& s) {
    require_same_var(s.var(), Var::z, "set_row");
    for (int j = 0; j <= n_z_; ++j) (*this)(n, j) = j <= s.N() ? s[j] : T(0);
}

template <class T>
void Bivariate<T>::set_column(int j, const Series<T>& s) {
    require_same_var(s.var(), outer_, "set_column");
    for (int n = 0; n <= n_outer_; ++n) (*this)(n, j) = n <= s.N() ? s[n] : T(0);
}

template <class T>
Bivariate<T> Bivariate<T>::truncated(int N_outer, int N_z) const {
    if (N_outer < 0 || N_z < 0 || N_outer > n_outer_ || N_z > n_z_)
        throw ShapeError("invalid bivariate truncation");
    Bivariate out(outer_, N_outer, N_z);
    for (int n = 0; n <= N_outer; ++n)
        for (int j = 0; j <= N_z; ++j) out(n, j) = (*this)(n, j);
    return out;
}

template <class T>
bool Bivariate<T>::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const T& x) { return ScalarTraits<T>::is_zero(x); });
}

template <class T>
bool Bivariate<T>::operator==(const Bivariate& o) const {
    return outer_ == o.outer_ && n_outer_ == o.n_outer_ && n_z_ == o.n_z_ && c_ == o.c_;
}

// ---------------------------------------------------------------------------

template <class T>
AnalyticGerm<T> make_germ(Series<T> s, double radius) {
    if (!(radius > 0.0)) throw DomainError("germ radius must be > 0");
    require_same_var(s.var(), Var::z, "make_germ");
    const int N = s.N();
    double head = 0.0, tail = 0.0;
    const int split = N - N / 4;
    for (int p = 0; p <= N; ++p) {
        const double v = ScalarTraits<T>::magnitude(s[p]) * std::pow(radius, p);
        if (!std::isfinite(v)) throw DomainError("germ coefficients overflow on the declared disc");
        if (p < split || N < 4) head = std::max(head, v);
        else tail = std::max(tail, v);
    }
    if (N >= 4 && tail > 1e3 * std::max(head, 1e-300))
        throw DomainError("germ coefficients grow on the closed disc of radius " + std::to_string(radius));
    return {std::move(s), radius};
}

template <>
Complex moment_ratio<Complex>(const MomentSequence& m, std::size_t a, std::size_t b) {
    return {m.ratio(a, b), 0.0};
}

template <>
Rational moment_ratio<Rational>(const MomentSequence& m, std::size_t a, std::size_t b) {
    return m.exact(a) / m.exact(b);
}

// ---------------------------------------------------------------------------
// Moment calculus

template <class T>
Series<T> moment_derivative(const Series<T>& u, const MomentSequence& m, int n) {
    require_order(n, "moment_derivative");
    if (n > u.N())
        throw ShapeError("moment_derivative: order " + std::to_string(n) + " exceeds truncation " +
                         std::to_string(u.N()));
    require_covers(m, u.N(), "moment_derivative");
    Series<T> out(u.var(), u.N() - n);
    for (int p = 0; p <= out.N(); ++p) out[p] = u[p + n] * moment_ratio<T>(m, p + n, p);
    return out;
}

template <class T>
Series<T> moment_antiderivative(const Series<T>& u, const MomentSequence& m, int n) {
    require_order(n, "moment_antiderivative");
    require_covers(m, u.N() + n, "moment_antiderivative");
    Series<T> out(u.var(), u.N() + n);
    for (int p = n; p <= out.N(); ++p) out[p] = u[p - n] * moment_ratio<T>(m, p - n, p);
    return out;
}

template <class T>
Series<T> formal_borel(const Series<T>& u, const MomentSequence& m) {
    require_covers(m, u.N(), "formal_borel");
    Series<T> out = u;
    for (int p = 0; p <= u.N(); ++p) out[p] = u[p] / moment_value<T>(m, p);
    return out;
}

template <class T>
Series<T> formal_borel_inverse(const Series<T>& u, const MomentSequence& m) {
    require_covers(m, u.N(), "formal_borel_inverse");
    Series<T> out = u;
    for (int p = 0; p <= u.N(); ++p) out[p] = u[p] * moment_value<T>(m, p);
    return out;
}

namespace {

template <class T, class Op>
Bivariate<T> apply_in(const Bivariate<T>& u, Var which, int new_outer, int new_z, Op op) {
    if (which == Var::z) {
        Bivariate<T> out(u.outer(), u.N_outer(), new_z);
        for (int n = 0; n <= u.N_outer(); ++n) out.set_row(n, op(u.row(n)));
        return out;
    }
    require_same_var(which, u.outer(), "bivariate moment operation");
    Bivariate<T> out(u.outer(), new_outer, u.N_z());
    for (int j = 0; j <= u.N_z(); ++j) out.set_column(j, op(u.column(j)));
    return out;
}

template <class T>
int order_in(const Bivariate<T>& u, Var which) {
    return which == Var::z ? u.N_z() : u.N_outer();
}

}  // namespace

template <class T>
Bivariate<T> moment_derivative(const Bivariate<T>& u, const MomentSequence& m, int n, Var which) {
    require_order(n, "moment_derivative");
    const int N = order_in(u, which);
    if (n > N)
        throw ShapeError("moment_derivative: order " + std::to_string(n) + " exceeds truncation " +
                         std::to_string(N));
    return apply_in(u, which, u.N_outer() - n, u.N_z() - n,
                    [&](const Series<T>& s) { return moment_derivative(s, m, n); });
}

template <class T>
Bivariate<T> moment_antiderivative(const Bivariate<T>& u, const MomentSequence& m, int n, Var which) {
    require_order(n, "moment_antiderivative");
    return apply_in(u, which, u.N_outer() + n, u.N_z() + n,
                    [&](const Series<T>& s) { return moment_antiderivative(s, m, n); });
}

template <class T>
Bivariate<T> formal_borel(const Bivariate<T>& u, const MomentSequence& m, Var which) {
    return apply_in(u, which, u.N_outer(), u.N_z(),
                    [&](const Series<T>& s) { return formal_borel(s, m); });
}

template <class T>
Bivariate<T> formal_borel_inverse(const Bivariate<T>& u, const MomentSequence& m, Var which) {
    return apply_in(u, which, u.N_outer(), u.N_z(),
                    [&](const Series<T>& s) { return formal_borel_inverse(s, m); });
}

// ---------------------------------------------------------------------------
// Ring operations

template <class T>
Series<T> add(const Series<T>& a, const Series<T>& b) {
    require_same_var(a.var(), b.var(), "add");
    Series<T> out(a.var(), std::min(a.N(), b.N()));
    for (int p = 0; p <= out.N(); ++p) out[p] = a[p] + b[p];
    return out;
}

template <class T>
Series<T> sub(const Series<T>& a, const Series<T>& b) {
    require_same_var(a.var(), b.var(), "sub");
    Series<T> out(a.var(), std::min(a.N(), b.N()));
    for (int p = 0; p <= out.N(); ++p) out[p] = a[p] - b[p];
    return out;
}

template <class T>
Series<T> mul(const Series<T>& a, const Series<T>& b) {
    require_same_var(a.var(), b.var(), "mul");
    Series<T> out(a.var(), std::min(a.N(), b.N()));
    for (int p = 0; p <= out.N(); ++p) {
        T acc(0);
        for (int q = 0; q <= p; ++q) acc += a[q] * b[p - q];
        out[p] = acc;
    }
    return out;
}

template <class T>
Series<T> scale(const Series<T>& a, const T& c) {
    Series<T> out = a;
    for (auto& x : out.coeffs()) x *= c;
    return out;
}

template <class T>
Series<T> invert_germ(const Series<T>& u) {
    if (ScalarTraits<T>::is_zero(u[0]))
        throw DomainError("invert_germ: constant term is zero; the germ must satisfy a(0) != 0");
    Series<T> v(u.var(), u.N());
    const T inv0 = T(1) / u[0];
    v[0] = inv0;
    for (int p = 1; p <= u.N(); ++p) {
        T acc(0);
        for (int q = 1; q <= p; ++q) acc += u[q] * v[p - q];
        v[p] = -acc * inv0;
    }
    return v;
}

template <class T>
Bivariate<T> add(const Bivariate<T>& a, const Bivariate<T>& b) {
    require_same_var(a.outer(), b.outer(), "add");
    Bivariate<T> out(a.outer(), std::min(a.N_outer(), b.N_outer()), std::min(a.N_z(), b.N_z()));
    for (int n = 0; n <= out.N_outer(); ++n)
        for (int j = 0; j <= out.N_z(); ++j) out(n, j) = a(n, j) + b(n, j);
    return out;
}

template <class T>
Bivariate<T> sub(const Bivariate<T>& a, const Bivariate<T>& b) {
    require_same_var(a.outer(), b.outer(), "sub");
    Bivariate<T> out(a.outer(), std::min(a.N_outer(), b.N_outer()), std::min(a.N_z(), b.N_z()));
    for (int n = 0; n <= out.N_outer(); ++n)
        for (int j = 0; j <= out.N_z(); ++j) out(n, j) = a(n, j) - b(n, j);
    return out;
}

template <class T>
Bivariate<T> mul(const Bivariate<T>& a, const Bivariate<T>& b) {
    require_same_var(a.outer(), b.outer(), "mul");
    Bivariate<T> out(a.outer(), std::min(a.N_outer(), b.N_outer()), std::min(a.N_z(), b.N_z()));
    for (int n = 0; n <= out.N_outer(); ++n)
        for (int j = 0; j <= out.N_z(); ++j) {
            T acc(0);
            for (int n1 = 0; n1 <= n; ++n1)
                for (int j1 = 0; j1 <= j; ++j1) acc += a(n1, j1) * b(n - n1, j - j1);
            out(n, j) = acc;
        }
    return out;
}

template <class T>
Bivariate<T> scale(const Bivariate<T>& a, const T& c) {
    Bivariate<T> out = a;
    for (int n = 0; n <= a.N_outer(); ++n)
        for (int j = 0; j <= a.N_z(); ++j) out(n, j) *= c;
    return out;
}

template <class T>
Bivariate<T> multiply_by_germ(const Bivariate<T>& u, const Series<T>& g) {
    require_same_var(g.var(), Var::z, "multiply_by_germ");
    Bivariate<T> out(u.outer(), u.N_outer(), std::min(u.N_z(), g.N()));
    for (int n = 0; n <= u.N_outer(); ++n) out.set_row(n, mul(u.row(n), g));
    return out;
}

template <class T>
Bivariate<T> shift_outer(const Bivariate<T>& u, int k) {
    require_order(k, "shift_outer");
    Bivariate<T> out(u.outer(), u.N_outer() + k, u.N_z());
    for (int n = 0; n <= u.N_outer(); ++n)
        for (int j = 0; j <= u.N_z(); ++j) out(n + k, j) = u(n, j);
    return out;
}

template <class T>
Bivariate<T> unshift_outer(const Bivariate<T>& u, int k) {
    require_order(k, "unshift_outer");
    if (k > u.N_outer()) throw ShapeError("unshift_outer: shift exceeds outer truncation");
    for (int n = 0; n < k; ++n)
        for (int j = 0; j <= u.N_z(); ++j)
            if (!ScalarTraits<T>::is_zero(u(n, j)))
                throw DomainError("series is not divisible by " + to_string(u.outer()) + "^" +
                                  std::to_string(k) + ": coefficient (" + std::to_string(n) + "," +
                                  std::to_string(j) + ") is nonzero");
    Bivariate<T> out(u.outer(), u.N_outer() - k, u.N_z());
    for (int n = k; n <= u.N_outer(); ++n)
        for (int j = 0; j <= u.N_z(); ++j) out(n - k, j) = u(n, j);
    return out;
}

// ---------------------------------------------------------------------------

#define MOMSUM_INSTANTIATE(T)                                                                     \
    template class Series<T>;                                                                     \
    template class Bivariate<T>;                                                                  \
    template AnalyticGerm<T> make_germ(Series<T>, double);                                        \
    template Series<T> moment_derivative(const Series<T>&, const MomentSequence&, int);           \
    template Bivariate<T> moment_derivative(const Bivariate<T>&, const MomentSequence&, int, Var); \
    template Series<T> moment_antiderivative(const Series<T>&, const MomentSequence&, int);       \
    template Bivariate<T> moment_antiderivative(const Bivariate<T>&, const MomentSequence&, int,  \
                                                Var);                                             \
    template Series<T> formal_borel(const Series<T>&, const MomentSequence&);                     \
    template Bivariate<T> formal_borel(const Bivariate<T>&, const MomentSequence&, Var);          \
    template Series<T> formal_borel_inverse(const Series<T>&, const MomentSequence&);             \
    template Bivariate<T> formal_borel_inverse(const Bivariate<T>&, const MomentSequence&, Var);  \
    template Series<T> add(const Series<T>&, const Series<T>&);                                   \
    template Series<T> sub(const Series<T>&, const Series<T>&);                                   \
    template Series<T> mul(const Series<T>&, const Series<T>&);                                   \
    template Series<T> scale(const Series<T>&, const T&);                                         \
    template Series<T> invert_germ(const Series<T>&);                                             \
    template Bivariate<T> add(const Bivariate<T>&, const Bivariate<T>&);                          \
    template Bivariate<T> sub(const Bivariate<T>&, const Bivariate<T>&);                          \
    template Bivariate<T> mul(const Bivariate<T>&, const Bivariate<T>&);                          \
    template Bivariate<T> scale(const Bivariate<T>&, const T&);                                   \
    template Bivariate<T> multiply_by_germ(const Bivariate<T>&, const Series<T>&);                \
    template Bivariate<T> shift_outer(const Bivariate<T>&, int);                                  \
    template Bivariate<T> unshift_outer(const Bivariate<T>&, int);

MOMSUM_INSTANTIATE(Complex)
MOMSUM_INSTANTIATE(Rational)

#undef MOMSUM_INSTANTIATE

}  // namespace momsum
