#pragma once

// Exact complex-rational scalars: the coefficient field for all symbolic work.
// Floating point enters only through to_complex()/evaluation.

#include <gmpxx.h>

#include <complex>
#include <string>
#include <utility>

#include "holder3/errors.hpp"

namespace holder3 {

using Rational = mpq_class;

struct CRat {
    Rational re{0};
    Rational im{0};

    CRat() = default;
    CRat(long n) : re(n) {}  // NOLINT: implicit by design, mirrors integer literals
    CRat(Rational r) : re(std::move(r)) {}  // NOLINT
    CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static CRat i() { return CRat{Rational(0), Rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    CRat conj() const { return {re, -im}; }

    CRat operator-() const { return {-re, -im}; }

    CRat& operator+=(const CRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRat& operator-=(const CRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend CRat operator+(CRat a, const CRat& b) { return a += b; }
    friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    CRat& operator*=(const CRat& o) { return *this = *this * o; }

    CRat inverse() const {
        Rational n = re * re + im * im;
        if (sgn(n) == 0) throw Error("division by zero complex rational");
        return {re / n, -im / n};
    }
    friend CRat operator/(const CRat& a, const CRat& b) { return a * b.inverse(); }

    friend bool operator==(const CRat& a, const CRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline Rational rational_from_decimal(const std::string& digits_int,
                                      const std::string& digits_frac) {
    mpz_class num(digits_int + digits_frac, 10);
    mpz_class den(1);
    for (std::size_t k = 0; k < digits_frac.size(); ++k) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace holder3
