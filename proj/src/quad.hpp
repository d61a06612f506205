#pragma once
// Internal binary128 helpers. libquadmath provides the transcendental
// functions; std::complex is not specified for __float128, so a small complex
// type is kept here.

#include <quadmath.h>

#include <complex>

namespace momsum::detail {

using Quad = __float128;

struct QComplex {
    Quad re = 0;
    Quad im = 0;

    QComplex() = default;
    QComplex(Quad r, Quad i = 0) : re(r), im(i) {}
    explicit QComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    QComplex& operator+=(const QComplex& o) { re += o.re; im += o.im; return *this; }
    QComplex& operator-=(const QComplex& o) { re -= o.re; im -= o.im; return *this; }
    QComplex& operator*=(const QComplex& o) {
        Quad r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    QComplex& operator/=(const QComplex& o) {
        // Smith's algorithm
        if (fabsq(o.re) >= fabsq(o.im)) {
            Quad t = o.im / o.re, d = o.re + o.im * t;
            Quad r = (re + im * t) / d;
            im = (im - re * t) / d;
            re = r;
        } else {
            Quad t = o.re / o.im, d = o.re * t + o.im;
            Quad r = (re * t + im) / d;
            im = (im * t - re) / d;
            re = r;
        }
        return *this;
    }
};

inline QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
inline QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
inline QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
inline QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
inline QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
inline QComplex operator*(Quad s, const QComplex& a) { return {s * a.re, s * a.im}; }

inline Quad abs(const QComplex& a) { return hypotq(a.re, a.im); }
inline Quad norm(const QComplex& a) { return a.re * a.re + a.im * a.im; }

inline QComplex exp(const QComplex& a) {
    Quad m = expq(a.re);
    return {m * cosq(a.im), m * sinq(a.im)};
}

/// Polar construction r e^{i theta}.
inline QComplex polar(Quad r, Quad theta) { return {r * cosq(theta), r * sinq(theta)}; }

}  // namespace momsum::detail
