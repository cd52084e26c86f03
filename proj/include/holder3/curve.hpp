#pragma once

// Jets of smooth holomorphic curves through the origin and restriction of
// defining functions to them.  Curve components are univariate holomorphic
// polynomials in the parameter t, stored in variable slot 0.

#include <array>
#include <complex>
#include <optional>

#include "holder3/holo_map.hpp"
#include "holder3/mixed_poly.hpp"

namespace holder3 {

struct CurveJet {
    std::array<PolyQ, 3> comp;  // gamma_1, gamma_2, gamma_3 as polynomials in t
    int jet_order = PolyQ::kNoCap;

    static CurveJet axis1(int cap) {
        CurveJet g{{PolyQ::variable(0, cap), PolyQ::zero(cap), PolyQ::zero(cap)}, cap};
        return g;
    }

    bool vanishes_at_origin() const {
        for (const auto& c : comp)
            if (!detail::coeff_is_zero(c.coeff(Monomial{}))) return false;
        return true;
    }

    bool is_holomorphic_in_t() const {
        for (const auto& c : comp)
            for (const auto& [m, cc] : c.terms())
                if (m.b != std::array<int, 3>{{0, 0, 0}} || m.a[1] != 0 || m.a[2] != 0)
                    return false;
        return true;
    }

    CRat derivative_at_zero(int i) const {
        Monomial t1;
        t1.a[0] = 1;
        return comp[i].coeff(t1);
    }

    std::optional<int> component_order(int i) const { return comp[i].vanishing_order(); }

    // min over components of the vanishing order; nullopt if the jet is zero
    std::optional<int> order() const {
        std::optional<int> best;
        for (const auto& c : comp) {
            auto o = c.vanishing_order();
            if (o && (!best || *o < *best)) best = o;
        }
        return best;
    }

    HoloMapQ as_map() const { return HoloMapQ{{comp[0], comp[1], comp[2]}}; }

    std::array<std::complex<double>, 3> eval(std::complex<double> t) const {
        std::array<std::complex<double>, 3> z{t, 0.0, 0.0};
        return as_map().eval(z);
    }

    CurveJet with_component(int i, PolyQ p) const {
        CurveJet g = *this;
        g.comp[i] = std::move(p);
        return g;
    }
};

// p restricted to the curve: substitutes z_i = gamma_i(t), zbar_i = conj jet,
// producing a univariate mixed polynomial in (t, tbar).
template <class C>
MixedPoly<C> restrict_to_curve(const MixedPoly<C>& p, const CurveJet& gamma) {
    if constexpr (std::is_same_v<C, CRat>) {
        return compose(p, gamma.as_map());
    } else {
        HoloMapD m{{gamma.comp[0].to_numeric(), gamma.comp[1].to_numeric(),
                    gamma.comp[2].to_numeric()}};
        return compose(p, m);
    }
}

// Order of contact nu0(R o gamma) / nu0(gamma); nullopt when R o gamma == 0.
inline std::optional<Rational> contact_order(const PolyQ& R, const CurveJet& gamma) {
    auto num = restrict_to_curve(R, gamma).vanishing_order();
    auto den = gamma.order();
    if (!den) throw Error("contact_order: zero curve");
    if (!num) return std::nullopt;
    return Rational(*num, *den);
}

// Compositional inverse of a univariate jet g (in t) with g(0)=0, g'(0) != 0:
// returns s with g(s(t)) = t up to the jet order.
inline PolyQ invert_univariate_jet(const PolyQ& g, int cap) {
    Monomial t1;
    t1.a[0] = 1;
    CRat c1 = g.coeff(t1);
    if (c1.is_zero()) throw Error("invert_univariate_jet: vanishing linear coefficient");
    PolyQ s = PolyQ::variable(0, cap).scaled(c1.inverse());
    for (int k = 2; k <= cap; ++k) {
        // g(s) - t has lowest defect at order k; cancel it with a degree-k update
        HoloMapQ sub{{s, PolyQ::zero(cap), PolyQ::zero(cap)}};
        PolyQ defect = compose(g, sub) - PolyQ::variable(0, cap);
        Monomial tk;
        tk.a[0] = k;
        CRat d = defect.coeff(tk);
        if (!d.is_zero()) s.add_term(tk, -(d / c1));
    }
    return s;
}

// Reparametrizes the curve so that gamma_1(t) = t exactly (requires
// gamma_1'(0) != 0).
inline CurveJet reparametrize_unit_first(const CurveJet& gamma) {
    const int cap = gamma.jet_order;
    PolyQ sigma = invert_univariate_jet(gamma.comp[0], cap);
    HoloMapQ sub{{sigma, PolyQ::zero(cap), PolyQ::zero(cap)}};
    CurveJet out = gamma;
    for (int i = 0; i < 3; ++i) out.comp[i] = compose(gamma.comp[i], sub);
    return out;
}

// Transports the curve through the inverse of a coordinate change:
// if w = Psi(z) and gamma lives in w-space, the z-space curve is inv o gamma.
inline CurveJet transport_curve(const CurveJet& gamma, const HoloMapQ& inv) {
    CurveJet out = gamma;
    for (int i = 0; i < 3; ++i) out.comp[i] = compose(inv.comp[i], gamma.as_map());
    return out;
}

}  // namespace holder3
