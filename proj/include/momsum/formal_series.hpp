#pragma once

#include "momsum/moment_sequence.hpp"
#include "momsum/scalar.hpp"

#include <string>
#include <vector>

namespace momsum {

/// Variable a series is written in. Bivariate series always carry z as the
/// inner variable and eps or t as the outer one.
enum class Var { z, eps, t };

std::string to_string(Var v);
Var var_from_string(const std::string& name);

/// Truncated power series c_0 + c_1 x + ... + c_N x^N.
template <class T>
class Series {
public:
    Series() : Series(Var::z, 0) {}
    /// Zero series of truncation order N.
    Series(Var v, int N);
    Series(Var v, std::vector<T> coeffs);

    static Series monomial(Var v, int N, int p, T c);

    Var var() const noexcept { return var_; }
    int N() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::size_t size() const noexcept { return c_.size(); }
    const std::vector<T>& coeffs() const noexcept { return c_; }
    std::vector<T>& coeffs() noexcept { return c_; }
    const T& operator[](std::size_t p) const { return c_.at(p); }
    T& operator[](std::size_t p) { return c_.at(p); }

    Series truncated(int N) const;
    bool is_zero() const;
    bool operator==(const Series& o) const { return var_ == o.var_ && c_ == o.c_; }

    /// Horner evaluation of the truncated polynomial.
    Complex evaluate(Complex x) const;

private:
    Var var_;
    std::vector<T> c_;
};

/// Dense truncated series sum_{n,j} c_{n,j} w^n z^j, w the outer variable.
template <class T>
class Bivariate {
public:
    Bivariate() : Bivariate(Var::eps, 0, 0) {}
    Bivariate(Var outer, int N_outer, int N_z);

    Var outer() const noexcept { return outer_; }
    int N_outer() const noexcept { return n_outer_; }
    int N_z() const noexcept { return n_z_; }

    T& operator()(int n, int j) { return c_.at(index(n, j)); }
    const T& operator()(int n, int j) const { return c_.at(index(n, j)); }

    /// Coefficient of w^n, as a series in z.
    Series<T> row(int n) const;
    /// Coefficient of z^j, as a series in the outer variable.
    Series<T> column(int j) const;
    /// Writes a z-series into row n; entries beyond its length are zeroed,
    /// entries beyond N_z are dropped.
    void set_row(int n, const Series<T>& s);
    void set_column(int j, const Series<T>& s);

    Bivariate truncated(int N_outer, int N_z) const;
    bool is_zero() const;
    bool operator==(const Bivariate& o) const;

private:
    std::size_t index(int n, int j) const;

    Var outer_;
    int n_outer_;
    int n_z_;
    std::vector<T> c_;
};

/// Series paired with a radius on whose closed disc it is taken to be analytic.
template <class T>
struct AnalyticGerm {
    Series<T> series;
    double radius = 1.0;
};

/// Checks |c_p| r^p stays bounded over the prefix (no sustained growth in the
/// last quarter); throws DomainError otherwise.
template <class T>
AnalyticGerm<T> make_germ(Series<T> s, double radius);

/// m(a)/m(b) in the arithmetic of T.
template <class T>
T moment_ratio(const MomentSequence& m, std::size_t a, std::size_t b);
template <>
Complex moment_ratio<Complex>(const MomentSequence& m, std::size_t a, std::size_t b);
template <>
Rational moment_ratio<Rational>(const MomentSequence& m, std::size_t a, std::size_t b);

// ---------------------------------------------------------------------------
// Moment calculus. Output truncations: derivative N-n, antiderivative N+n,
// Borel N.

template <class T>
Series<T> moment_derivative(const Series<T>& u, const MomentSequence& m, int n);
template <class T>
Bivariate<T> moment_derivative(const Bivariate<T>& u, const MomentSequence& m, int n, Var which);

template <class T>
Series<T> moment_antiderivative(const Series<T>& u, const MomentSequence& m, int n);
template <class T>
Bivariate<T> moment_antiderivative(const Bivariate<T>& u, const MomentSequence& m, int n, Var which);

template <class T>
Series<T> formal_borel(const Series<T>& u, const MomentSequence& m);
template <class T>
Bivariate<T> formal_borel(const Bivariate<T>& u, const MomentSequence& m, Var which);

/// Coefficientwise multiplication by m(p); inverse of formal_borel.
template <class T>
Series<T> formal_borel_inverse(const Series<T>& u, const MomentSequence& m);
template <class T>
Bivariate<T> formal_borel_inverse(const Bivariate<T>& u, const MomentSequence& m, Var which);

// ---------------------------------------------------------------------------
// Truncated ring operations. Binary operations truncate to the smaller order.

template <class T>
Series<T> add(const Series<T>& a, const Series<T>& b);
template <class T>
Series<T> sub(const Series<T>& a, const Series<T>& b);
template <class T>
Series<T> mul(const Series<T>& a, const Series<T>& b);
template <class T>
Series<T> scale(const Series<T>& a, const T& c);
/// v with (u v)[p] = delta_{p0} for p <= N. Requires u[0] != 0.
template <class T>
Series<T> invert_germ(const Series<T>& u);

template <class T>
Bivariate<T> add(const Bivariate<T>& a, const Bivariate<T>& b);
template <class T>
Bivariate<T> sub(const Bivariate<T>& a, const Bivariate<T>& b);
template <class T>
Bivariate<T> mul(const Bivariate<T>& a, const Bivariate<T>& b);
template <class T>
Bivariate<T> scale(const Bivariate<T>& a, const T& c);
/// Multiplies every outer coefficient by the z-germ g.
template <class T>
Bivariate<T> multiply_by_germ(const Bivariate<T>& u, const Series<T>& g);

/// w^k u, outer truncation raised by k.
template <class T>
Bivariate<T> shift_outer(const Bivariate<T>& u, int k);
/// w^{-k} u; requires rows 0..k-1 to vanish (DomainError otherwise).
template <class T>
Bivariate<T> unshift_outer(const Bivariate<T>& u, int k);

}  // namespace momsum
