#pragma once

// Holomorphic polynomial coordinate changes of C^3 and composition of mixed
// polynomials with them.  A map substitutes its components into the z slots
// and their coefficient-conjugates into the zbar slots, so real-valued
// polynomials stay real-valued.

#include <array>
#include <complex>
#include <vector>

#include "holder3/mixed_poly.hpp"

namespace holder3 {

template <class C>
struct HoloMap {
    std::array<MixedPoly<C>, 3> comp;

    static HoloMap identity(int cap = MixedPoly<C>::kNoCap) {
        return HoloMap{{MixedPoly<C>::variable(0, cap), MixedPoly<C>::variable(1, cap),
                        MixedPoly<C>::variable(2, cap)}};
    }

    bool is_holomorphic() const {
        for (const auto& p : comp)
            for (const auto& [m, c] : p.terms())
                if (m.b != std::array<int, 3>{{0, 0, 0}}) return false;
        return true;
    }

    bool fixes_origin() const {
        for (const auto& p : comp)
            if (!detail::coeff_is_zero(p.coeff(Monomial{}))) return false;
        return true;
    }

    std::array<std::complex<double>, 3> eval(
        const std::array<std::complex<double>, 3>& z) const {
        return {comp[0].eval(z), comp[1].eval(z), comp[2].eval(z)};
    }
};

using HoloMapQ = HoloMap<CRat>;
using HoloMapD = HoloMap<std::complex<double>>;

namespace detail {

template <class C>
class PowerCache {
  public:
    explicit PowerCache(const MixedPoly<C>& base, int cap)
        : cap_(cap), pows_{MixedPoly<C>::constant(C(1), cap)} {
        base_ = recapped(base, cap);
    }

    const MixedPoly<C>& operator[](int k) {
        while (static_cast<int>(pows_.size()) <= k) pows_.push_back(pows_.back() * base_);
        return pows_[k];
    }

    static MixedPoly<C> recapped(const MixedPoly<C>& p, int cap) {
        MixedPoly<C> r(cap);
        if (p.truncated()) r.mark_truncated();
        for (const auto& [m, c] : p.terms()) r.add_term(m, c);
        return r;
    }

  private:
    int cap_;
    MixedPoly<C> base_;
    std::vector<MixedPoly<C>> pows_;
};

}  // namespace detail

// p(map(z)): map components fill the z slots, their conjugates the zbar slots.
// Truncation above p's degree cap is recorded on the result.
template <class C>
MixedPoly<C> compose(const MixedPoly<C>& p, const HoloMap<C>& map) {
    const int cap = p.degree_cap();
    std::array<detail::PowerCache<C>, 3> zp{detail::PowerCache<C>(map.comp[0], cap),
                                            detail::PowerCache<C>(map.comp[1], cap),
                                            detail::PowerCache<C>(map.comp[2], cap)};
    std::array<detail::PowerCache<C>, 3> zbp{
        detail::PowerCache<C>(map.comp[0].conjugated(), cap),
        detail::PowerCache<C>(map.comp[1].conjugated(), cap),
        detail::PowerCache<C>(map.comp[2].conjugated(), cap)};

    MixedPoly<C> r(cap);
    if (p.truncated()) r.mark_truncated();
    for (const auto& [m, c] : p.terms()) {
        MixedPoly<C> t = MixedPoly<C>::constant(c, cap);
        for (int i = 0; i < 3; ++i) {
            if (m.a[i] > 0) t = t * zp[i][m.a[i]];
            if (m.b[i] > 0) t = t * zbp[i][m.b[i]];
        }
        r += t;
    }
    return r;
}

// (outer after inner)(z) = outer(inner(z))
template <class C>
HoloMap<C> compose(const HoloMap<C>& outer, const HoloMap<C>& inner) {
    HoloMap<C> r;
    for (int i = 0; i < 3; ++i) r.comp[i] = compose(outer.comp[i], inner);
    return r;
}

// A holomorphic coordinate change carried together with its exact inverse.
// Every map used by the pipeline is a shear / triangular substitution whose
// inverse is available in closed form, so no formal inversion is needed.
struct CoordChange {
    HoloMapQ fwd;
    HoloMapQ inv;

    static CoordChange identity(int cap) {
        return {HoloMapQ::identity(cap), HoloMapQ::identity(cap)};
    }

    // this, then apply `next` in the source of this: (r o fwd) o next.fwd
    CoordChange then(const CoordChange& next) const {
        return {compose(fwd, next.fwd), compose(next.inv, inv)};
    }
};

// z3 |-> s*z3 (rescales/rotates the transverse direction)
inline CoordChange scale_z3(const CRat& s, int cap) {
    CoordChange c = CoordChange::identity(cap);
    c.fwd.comp[2] = PolyQ::variable(2, cap).scaled(s);
    c.inv.comp[2] = PolyQ::variable(2, cap).scaled(s.inverse());
    return c;
}

// z3 |-> z3 - P(z1,z2) with P holomorphic: absorbs pure terms into Re z3.
inline CoordChange absorb_into_z3(const PolyQ& P, int cap) {
    CoordChange c = CoordChange::identity(cap);
    c.fwd.comp[2] = PolyQ::variable(2, cap) - detail::PowerCache<CRat>::recapped(P, cap);
    c.inv.comp[2] = PolyQ::variable(2, cap) + detail::PowerCache<CRat>::recapped(P, cap);
    return c;
}

// z1 |-> z1 + h*z2
inline CoordChange shear_z1_by_z2(const CRat& h, int cap) {
    CoordChange c = CoordChange::identity(cap);
    c.fwd.comp[0] = PolyQ::variable(0, cap) + PolyQ::variable(1, cap).scaled(h);
    c.inv.comp[0] = PolyQ::variable(0, cap) - PolyQ::variable(1, cap).scaled(h);
    return c;
}

// z2 |-> z2 + g(z1) with g holomorphic univariate, g(0) = 0.
inline CoordChange shear_z2_by_z1(const PolyQ& g, int cap) {
    CoordChange c = CoordChange::identity(cap);
    c.fwd.comp[1] = PolyQ::variable(1, cap) + detail::PowerCache<CRat>::recapped(g, cap);
    c.inv.comp[1] = PolyQ::variable(1, cap) - detail::PowerCache<CRat>::recapped(g, cap);
    return c;
}

inline CoordChange swap_z1_z2(int cap) {
    CoordChange c = CoordChange::identity(cap);
    std::swap(c.fwd.comp[0], c.fwd.comp[1]);
    std::swap(c.inv.comp[0], c.inv.comp[1]);
    return c;
}

}  // namespace holder3
