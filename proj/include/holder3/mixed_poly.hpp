#pragma once

// Sparse real- or complex-coefficient polynomials in (z1,z2,z3) and their
// conjugates.  Exponents are kept as a pair of multi-indices (alpha for z,
// beta for zbar); storage is a map in graded-lexicographic order so that
// iteration by total degree is the natural loop.

#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "holder3/complex_rational.hpp"
#include "holder3/errors.hpp"

namespace holder3 {

struct Monomial {
    std::array<int, 3> a{{0, 0, 0}};  // exponents of z1,z2,z3
    std::array<int, 3> b{{0, 0, 0}};  // exponents of conj(z1..z3)

    int degree() const { return a[0] + a[1] + a[2] + b[0] + b[1] + b[2]; }

    Monomial conjugated() const { return Monomial{b, a}; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < 3; ++i) {
            r.a[i] = a[i] + o.a[i];
            r.b[i] = b[i] + o.b[i];
        }
        return r;
    }

    bool depends_on_z3() const { return a[2] > 0 || b[2] > 0; }
    // "pure" in the z' = (z1,z2) sense: z'^alpha or conj(z')^beta only
    bool is_pure_zp() const {
        if (depends_on_z3()) return false;
        int da = a[0] + a[1], db = b[0] + b[1];
        return (da > 0 && db == 0) || (da == 0 && db > 0);
    }
    // mixed in z' with no z3 factor: both holomorphic and antiholomorphic part
    bool is_mixed_zp() const {
        return !depends_on_z3() && a[0] + a[1] > 0 && b[0] + b[1] > 0;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct GradedLex {
    bool operator()(const Monomial& x, const Monomial& y) const {
        int dx = x.degree(), dy = y.degree();
        if (dx != dy) return dx < dy;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
};

namespace detail {

inline bool coeff_is_zero(const CRat& c) { return c.is_zero(); }
inline bool coeff_is_zero(const std::complex<double>& c) {
    return c.real() == 0.0 && c.imag() == 0.0;
}
inline CRat coeff_conj(const CRat& c) { return c.conj(); }
inline std::complex<double> coeff_conj(const std::complex<double>& c) {
    return std::conj(c);
}
inline std::complex<double> coeff_to_complex(const CRat& c) { return c.to_complex(); }
inline std::complex<double> coeff_to_complex(const std::complex<double>& c) { return c; }

}  // namespace detail

template <class C>
class MixedPoly {
  public:
    using TermMap = std::map<Monomial, C, GradedLex>;
    static constexpr int kNoCap = std::numeric_limits<int>::max() / 4;

    explicit MixedPoly(int degree_cap = kNoCap) : cap_(degree_cap) {}

    static MixedPoly zero(int cap = kNoCap) { return MixedPoly(cap); }

    static MixedPoly constant(const C& c, int cap = kNoCap) {
        MixedPoly p(cap);
        p.add_term(Monomial{}, c);
        return p;
    }

    static MixedPoly variable(int i, int cap = kNoCap) {
        MixedPoly p(cap);
        Monomial m;
        m.a[i] = 1;
        p.add_term(m, C(1));
        return p;
    }

    static MixedPoly conj_variable(int i, int cap = kNoCap) {
        MixedPoly p(cap);
        Monomial m;
        m.b[i] = 1;
        p.add_term(m, C(1));
        return p;
    }

    static MixedPoly from_term(const Monomial& m, const C& c, int cap = kNoCap) {
        MixedPoly p(cap);
        p.add_term(m, c);
        return p;
    }

    const TermMap& terms() const { return terms_; }
    int degree_cap() const { return cap_; }
    bool truncated() const { return truncated_; }
    void mark_truncated() { truncated_ = true; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Monomial& m, const C& c) {
        if (detail::coeff_is_zero(c)) return;
        if (m.degree() > cap_) {
            truncated_ = true;
            return;
        }
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (detail::coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    C coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C(0) : it->second;
    }

    std::optional<int> vanishing_order() const {
        if (terms_.empty()) return std::nullopt;  // zero polynomial: infinite order
        return terms_.begin()->first.degree();    // graded order: first term is minimal
    }

    int degree() const {
        return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
    }

    MixedPoly& operator+=(const MixedPoly& o) {
        require_compatible(o);
        cap_ = std::min(cap_, o.cap_);
        truncated_ = truncated_ || o.truncated_;
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MixedPoly& operator-=(const MixedPoly& o) {
        require_compatible(o);
        cap_ = std::min(cap_, o.cap_);
        truncated_ = truncated_ || o.truncated_;
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MixedPoly operator+(MixedPoly x, const MixedPoly& y) { return x += y; }
    friend MixedPoly operator-(MixedPoly x, const MixedPoly& y) { return x -= y; }

    MixedPoly operator-() const {
        MixedPoly r(cap_);
        r.truncated_ = truncated_;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend MixedPoly operator*(const MixedPoly& x, const MixedPoly& y) {
        x.require_compatible(y);
        MixedPoly r(std::min(x.cap_, y.cap_));
        r.truncated_ = x.truncated_ || y.truncated_;
        for (const auto& [mx, cx] : x.terms_)
            for (const auto& [my, cy] : y.terms_) r.add_term(mx * my, cx * cy);
        return r;
    }
    MixedPoly& operator*=(const MixedPoly& o) { return *this = *this * o; }

    MixedPoly scaled(const C& s) const {
        MixedPoly r(cap_);
        r.truncated_ = truncated_;
        if (detail::coeff_is_zero(s)) return r;
        for (const auto& [m, c] : terms_) r.add_term(m, c * s);
        return r;
    }

    MixedPoly conjugated() const {
        MixedPoly r(cap_);
        r.truncated_ = truncated_;
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m.conjugated(), detail::coeff_conj(c));
        return r;
    }

    // Formal Wirtinger derivative, z and zbar treated as independent slots.
    MixedPoly wirtinger(int var, bool conj_var) const {
        MixedPoly r(cap_);
        r.truncated_ = truncated_;
        for (const auto& [m, c] : terms_) {
            int e = conj_var ? m.b[var] : m.a[var];
            if (e == 0) continue;
            Monomial d = m;
            if (conj_var)
                d.b[var] -= 1;
            else
                d.a[var] -= 1;
            r.add_term(d, c * C(e));
        }
        return r;
    }

    // Substitute z2 = z3 = 0 (and conjugates): the restriction to the z1-axis.
    MixedPoly restricted_to_axis1() const {
        MixedPoly r(cap_);
        r.truncated_ = truncated_;
        for (const auto& [m, c] : terms_)
            if (m.a[1] == 0 && m.a[2] == 0 && m.b[1] == 0 && m.b[2] == 0)
                r.add_term(m, c);
        return r;
    }

    MixedPoly filtered(const auto& keep) const {
        MixedPoly r(cap_);
        for (const auto& [m, c] : terms_)
            if (keep(m)) r.terms_.emplace(m, c);
        return r;
    }

    std::complex<double> eval(const std::array<std::complex<double>, 3>& z) const {
        std::array<int, 3> ma{}, mb{};
        for (const auto& [m, c] : terms_)
            for (int i = 0; i < 3; ++i) {
                ma[i] = std::max(ma[i], m.a[i]);
                mb[i] = std::max(mb[i], m.b[i]);
            }
        std::array<std::vector<std::complex<double>>, 3> pz, pzb;
        for (int i = 0; i < 3; ++i) {
            pz[i].resize(ma[i] + 1);
            pzb[i].resize(mb[i] + 1);
            pz[i][0] = pzb[i][0] = 1.0;
            for (int k = 1; k <= ma[i]; ++k) pz[i][k] = pz[i][k - 1] * z[i];
            const std::complex<double> zc = std::conj(z[i]);
            for (int k = 1; k <= mb[i]; ++k) pzb[i][k] = pzb[i][k - 1] * zc;
        }
        std::complex<double> s = 0.0;
        for (const auto& [m, c] : terms_) {
            std::complex<double> t = detail::coeff_to_complex(c);
            for (int i = 0; i < 3; ++i) t *= pz[i][m.a[i]] * pzb[i][m.b[i]];
            s += t;
        }
        return s;
    }

    // Hermitian symmetry: coeff(alpha,beta) == conj(coeff(beta,alpha)).
    bool is_hermitian() const
        requires std::is_same_v<C, CRat>
    {
        for (const auto& [m, c] : terms_)
            if (coeff(m.conjugated()) != c.conj()) return false;
        return true;
    }

    double hermitian_defect() const {
        double worst = 0.0;
        for (const auto& [m, c] : terms_) {
            const auto d = detail::coeff_to_complex(coeff(m.conjugated())) -
                           std::conj(detail::coeff_to_complex(c));
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    }

    friend bool operator==(const MixedPoly& x, const MixedPoly& y) {
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const MixedPoly& x, const MixedPoly& y) { return !(x == y); }

    MixedPoly<std::complex<double>> to_numeric() const {
        MixedPoly<std::complex<double>> r(cap_);
        if (truncated_) r.mark_truncated();
        for (const auto& [m, c] : terms_) r.add_term(m, detail::coeff_to_complex(c));
        return r;
    }

    // Grammar-compatible rendering; reparsing the output reproduces the term map.
    std::string str() const
        requires std::is_same_v<C, CRat>
    {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << coeff_str(c);
            for (int i = 0; i < 3; ++i) {
                if (m.a[i] > 0) {
                    os << "*z" << (i + 1);
                    if (m.a[i] > 1) os << "^" << m.a[i];
                }
                if (m.b[i] > 0) {
                    os << "*conj(z" << (i + 1) << ")";
                    if (m.b[i] > 1) os << "^" << m.b[i];
                }
            }
        }
        return os.str();
    }

  private:
    static std::string coeff_str(const CRat& c) {
        auto rat = [](const Rational& q) {
            std::string s = q.get_str();
            return s;
        };
        std::ostringstream os;
        if (sgn(c.im) == 0) {
            os << "(" << rat(c.re) << ")";
        } else if (sgn(c.re) == 0) {
            os << "(" << rat(c.im) << ")*i";
        } else {
            os << "((" << rat(c.re) << ") + (" << rat(c.im) << ")*i)";
        }
        return os.str();
    }

    void require_compatible(const MixedPoly& o) const {
        if (cap_ != o.cap_ && cap_ != kNoCap && o.cap_ != kNoCap)
            throw CapMismatch("degree caps differ: " + std::to_string(cap_) + " vs " +
                              std::to_string(o.cap_));
    }

    TermMap terms_;
    int cap_;
    bool truncated_ = false;
};

using PolyQ = MixedPoly<CRat>;
using PolyD = MixedPoly<std::complex<double>>;

// Spec-facing free functions.
template <class C>
MixedPoly<C> add(const MixedPoly<C>& p, const MixedPoly<C>& q) {
    return p + q;
}
template <class C>
MixedPoly<C> mul(const MixedPoly<C>& p, const MixedPoly<C>& q) {
    return p * q;
}
template <class C>
MixedPoly<C> conjugate(const MixedPoly<C>& p) {
    return p.conjugated();
}

struct WirtVar {
    int index;      // 0..2
    bool conj;      // true for zbar_i
};

template <class C>
MixedPoly<C> wirtinger_derivative(const MixedPoly<C>& p, WirtVar v, int order = 1) {
    if (order < 1) throw Error("wirtinger_derivative: order must be >= 1");
    MixedPoly<C> r = p;
    for (int k = 0; k < order; ++k) r = r.wirtinger(v.index, v.conj);
    return r;
}

template <class C>
std::complex<double> evaluate(const MixedPoly<C>& p,
                              const std::array<std::complex<double>, 3>& z) {
    return p.eval(z);
}

template <class C>
std::optional<int> vanishing_order(const MixedPoly<C>& p) {
    return p.vanishing_order();
}

template <class C>
MixedPoly<C> power(const MixedPoly<C>& p, int n) {
    MixedPoly<C> r = MixedPoly<C>::constant(C(1), p.degree_cap());
    for (int k = 0; k < n; ++k) r = r * p;
    return r;
}

inline PolyQ re_part(const PolyQ& p) {
    return (p + p.conjugated()).scaled(CRat(Rational(1, 2)));
}

}  // namespace holder3
