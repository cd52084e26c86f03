#pragma once

// Special holomorphic coordinates for a polynomial defining function and a
// contact curve: pure-term elimination order by order, absorption of the
// curve into the z1-axis, and a shear that puts a nonzero mixed term on the
// z2-axis at the lowest mixed order m.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "holder3/curve.hpp"
#include "holder3/holo_map.hpp"
#include "holder3/mixed_poly.hpp"

namespace holder3 {

struct BloomGrahamResult {
    PolyQ normalized;        // R tilde = R o map
    CoordChange map;
    int m = 0;               // lowest total order carrying a mixed (z1,z2) term
    Monomial witness;        // a mixed monomial of order m with nonzero coefficient
    CRat witness_coeff;
    std::vector<int> killed_orders;  // pure orders absorbed into z3
};

// No mixed term up to eta: the type bound already gives the conclusion and
// the slice machinery does not apply.
struct TypeBoundBranch {
    PolyQ normalized;
    CoordChange map;
    int eta = 0;
    std::optional<int> lowest_mixed_order;  // nullopt: none at all within the cap
    std::string reason;
};

namespace detail {

inline Monomial z3_mono() {
    Monomial m;
    m.a[2] = 1;
    return m;
}

// pure holomorphic part of total order l in (z1,z2): terms z'^alpha, beta = 0
inline PolyQ pure_holo_part(const PolyQ& p, int l) {
    PolyQ out(p.degree_cap());
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() != l) continue;
        if (m.a[2] != 0 || m.b != std::array<int, 3>{{0, 0, 0}}) continue;
        out.add_term(m, c);
    }
    return out;
}

inline std::optional<std::pair<Monomial, CRat>> first_mixed_of_order(const PolyQ& p,
                                                                     int order) {
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() > order) break;
        if (m.degree() == order && m.is_mixed_zp()) return std::make_pair(m, c);
    }
    return std::nullopt;
}

inline std::optional<int> lowest_mixed_order(const PolyQ& p) {
    for (const auto& [m, c] : p.terms())
        if (m.is_mixed_zp()) return m.degree();
    return std::nullopt;
}

}  // namespace detail

// Order-by-order elimination of pure (z1,z2)-terms up to total order eta.
// Requires R real-valued, R(0) = 0, and a nonzero coefficient on z3; the
// leading transverse term is normalized to Re z3 first.
inline std::variant<BloomGrahamResult, TypeBoundBranch> bloom_graham_normalize(
    const PolyQ& R, int eta) {
    if (!R.is_hermitian())
        throw StageError("bloom_graham_normalize", "defining function is not real-valued");
    if (!R.coeff(Monomial{}).is_zero())
        throw StageError("bloom_graham_normalize", "R(0) != 0");
    const int cap = R.degree_cap();

    CRat c3 = R.coeff(detail::z3_mono());
    if (c3.is_zero())
        throw StageError("bloom_graham_normalize", "missing Re z3 leading term");

    CoordChange total = CoordChange::identity(cap);
    PolyQ cur = R;
    if (!(c3 == CRat(Rational(1, 2)))) {
        // scale z3 so the transverse linear part is exactly Re z3
        CoordChange m0 = scale_z3(CRat(Rational(1, 2)) / c3, cap);
        cur = compose(cur, m0.fwd);
        total = total.then(m0);
    }

    std::vector<int> killed;
    for (int l = 1; l <= eta; ++l) {
        PolyQ P = detail::pure_holo_part(cur, l);
        if (P.empty()) continue;
        // Re z3 + 2 Re P(z') = Re(z3 + 2P); substitute z3 - 2P for z3
        CoordChange step = absorb_into_z3(P.scaled(CRat(2)), cap);
        cur = compose(cur, step.fwd);
        total = total.then(step);
        killed.push_back(l);
    }

    auto lowest = detail::lowest_mixed_order(cur);
    if (!lowest || *lowest > eta) {
        TypeBoundBranch br;
        br.normalized = cur;
        br.map = total;
        br.eta = eta;
        br.lowest_mixed_order = lowest;
        br.reason = lowest
                        ? "lowest mixed order " + std::to_string(*lowest) +
                              " exceeds eta; the type bound 1/m <= 1/eta is immediate"
                        : "no mixed term within the jet; the type bound holds for "
                          "every order";
        return br;
    }

    BloomGrahamResult out;
    out.normalized = cur;
    out.map = total;
    out.m = *lowest;
    auto w = detail::first_mixed_of_order(cur, out.m);
    out.witness = w->first;
    out.witness_coeff = w->second;
    out.killed_orders = killed;
    return out;
}

// Verdict of the curve-vanishing check: the transverse component of the
// curve must vanish to order >= eta, and the curve is truncated to
// (gamma1, gamma2, 0).
struct CurveVanishing {
    CurveJet truncated;
    std::optional<int> gamma3_order;       // nullopt: gamma3 == 0
    std::optional<int> restricted_order;   // nu0(r o gamma); nullopt: identically 0
};

inline CurveVanishing check_curve_vanishing(const PolyQ& r_ambient, const CurveJet& gamma,
                                            int eta, int /*m*/) {
    auto restricted = restrict_to_curve(r_ambient, gamma);
    auto ro = restricted.vanishing_order();
    if (ro && *ro < eta)
        throw StageError("check_curve_vanishing",
                         "contact order " + std::to_string(*ro) + " is below eta = " +
                             std::to_string(eta));
    auto g3 = gamma.component_order(2);
    if (g3 && *g3 < eta) {
        // The pure transverse contribution (a_l/2) t^l cannot be cancelled by
        // mixed terms, so a low-order gamma3 contradicts the contact bound.
        Monomial tl;
        tl.a[0] = *g3;
        CRat pure = restricted.coeff(tl);
        throw StageError("check_curve_vanishing",
                         "gamma3 vanishes only to order " + std::to_string(*g3) +
                             " < eta; pure t^" + std::to_string(*g3) +
                             " coefficient of r o gamma is " +
                             (pure.is_zero() ? std::string("0 (inconsistent input)")
                                             : std::string("nonzero")));
    }
    CurveVanishing out;
    out.truncated = gamma.with_component(2, PolyQ::zero(gamma.jet_order));
    out.gamma3_order = g3;
    out.restricted_order = ro;
    return out;
}

// Shear z2 |-> z2 + gamma2(z1) so the curve becomes the z1-axis.  The curve
// must already be reparametrized to gamma(t) = (t, gamma2(t), 0).
inline std::pair<CoordChange, PolyQ> absorb_curve(const PolyQ& r, const CurveJet& gamma,
                                                  int /*eta*/) {
    if (gamma.derivative_at_zero(0).is_zero())
        throw StageError("absorb_curve",
                         "gamma1'(0) = 0; swap the roles of z1 and z2 first");
    Monomial t1;
    t1.a[0] = 1;
    if (!(gamma.comp[0] == PolyQ::variable(0, gamma.jet_order)) &&
        !(gamma.comp[0].coeff(t1) == CRat(1) && gamma.comp[0].size() == 1))
        throw StageError("absorb_curve", "curve must be reparametrized to gamma1(t) = t");
    CoordChange psi1 = shear_z2_by_z1(gamma.comp[1], r.degree_cap());
    PolyQ r1 = compose(r, psi1.fwd);
    return {psi1, r1};
}

// Candidate shear directions: h = 0 first, then 50 deterministic unit-modulus
// points with golden-angle spacing, snapped to rationals with denominator 1e6.
inline std::vector<CRat> shear_candidates() {
    std::vector<CRat> out;
    out.push_back(CRat(0));
    const double golden = 0.6180339887498949;
    for (int k = 1; k <= 50; ++k) {
        double theta = 2.0 * M_PI * std::fmod(k * golden, 1.0);
        auto snap = [](double x) {
            return Rational(static_cast<long>(std::llround(x * 1000000.0)), 1000000L);
        };
        out.emplace_back(snap(std::cos(theta)), snap(std::sin(theta)));
    }
    return out;
}

namespace detail {

// order-m homogeneous mixed part in (z1,z2) alone
inline PolyQ mixed_homogeneous_part(const PolyQ& p, int m) {
    PolyQ out(p.degree_cap());
    for (const auto& [mo, c] : p.terms())
        if (mo.degree() == m && mo.is_mixed_zp()) out.add_term(mo, c);
    return out;
}

inline bool has_z2_witness(const PolyQ& p, int m) {
    for (const auto& [mo, c] : p.terms())
        if (mo.degree() == m && mo.a[0] == 0 && mo.b[0] == 0 && mo.a[2] == 0 &&
            mo.b[2] == 0 && mo.a[1] > 0 && mo.b[1] > 0)
            return true;
    return false;
}

}  // namespace detail

// Finds h so that after z1 |-> z1 + h z2 some coefficient a_{0,a2,0,b2} with
// a2 + b2 = m, a2,b2 > 0 is nonzero.  Only the order-m homogeneous mixed part
// matters: the shear preserves total degree.
inline CRat find_shear_direction(const PolyQ& r1, int m) {
    PolyQ A = detail::mixed_homogeneous_part(r1, m);
    if (A.empty())
        throw StageError("find_shear_direction",
                         "no mixed term of order " + std::to_string(m));
    int tried = 0;
    for (const CRat& h : shear_candidates()) {
        ++tried;
        PolyQ sheared = h.is_zero() ? A : compose(A, shear_z1_by_z2(h, A.degree_cap()).fwd);
        if (detail::has_z2_witness(sheared, m)) return h;
    }
    throw StageError("find_shear_direction",
                     "no admissible shear among " + std::to_string(tried) +
                         " candidates; the mixed part appears degenerate");
}

struct Certificate {
    bool shape_ok = false;
    std::vector<std::string> shape_violations;
    std::optional<int> axis_order;  // nu0(r(t,0,0)); nullopt = identically zero
    bool contact_ok = false;
    int witness_a2 = 0, witness_b2 = 0;
    CRat witness_coeff;
    bool witness_ok = false;
    bool roundtrip_ok = false;  // psi composed with its inverse is the identity
};

struct SpecialCoordinates {
    PolyQ r;
    CoordChange psi;  // r = R o psi.fwd
    CRat h;
    int eta = 0;
    int m = 0;
    bool swapped_z1_z2 = false;
    Certificate cert;
};

using CertifyResult = std::variant<SpecialCoordinates, TypeBoundBranch>;

namespace detail {

inline Certificate make_certificate(const PolyQ& r, const CoordChange& psi, int eta,
                                    int m) {
    Certificate cert;
    // (i) term-shape scan
    cert.shape_ok = true;
    for (const auto& [mo, c] : r.terms()) {
        const int deg = mo.degree();
        if (mo == z3_mono() || mo == z3_mono().conjugated()) {
            if (!(c == CRat(Rational(1, 2)))) {
                cert.shape_ok = false;
                cert.shape_violations.push_back("transverse linear coefficient is not 1/2");
            }
            continue;
        }
        if (mo.depends_on_z3()) {
            if (deg < 2) {
                cert.shape_ok = false;
                cert.shape_violations.push_back("stray transverse linear term");
            }
            continue;  // O(|z3||z|) tail
        }
        if (deg > eta) continue;  // O(|z'|^{eta+1}) tail
        if (mo.is_mixed_zp() && deg >= m) continue;
        cert.shape_ok = false;
        cert.shape_violations.push_back("unexpected term of degree " +
                                        std::to_string(deg));
    }
    // (ii) symbolic vanishing order along the curve image (the z1-axis)
    cert.axis_order = r.restricted_to_axis1().vanishing_order();
    cert.contact_ok = !cert.axis_order || *cert.axis_order >= eta;
    // (iii) witness coefficient recomputed from scratch on the final r
    for (const auto& [mo, c] : r.terms()) {
        if (mo.degree() == m && mo.a[0] == 0 && mo.b[0] == 0 && mo.a[2] == 0 &&
            mo.b[2] == 0 && mo.a[1] > 0 && mo.b[1] > 0) {
            cert.witness_a2 = mo.a[1];
            cert.witness_b2 = mo.b[1];
            cert.witness_coeff = c;
            cert.witness_ok = !c.is_zero();
            break;
        }
    }
    // exact round trip of the coordinate change
    HoloMapQ round = compose(psi.fwd, psi.inv);
    HoloMapQ id = HoloMapQ::identity(r.degree_cap());
    cert.roundtrip_ok = true;
    for (int i = 0; i < 3; ++i)
        if (!((round.comp[i] - id.comp[i]).empty())) cert.roundtrip_ok = false;
    return cert;
}

}  // namespace detail

// Full pipeline: normalize, check the curve, absorb it, pick the shear, and
// certify properties (i)-(iii) on the result.
inline CertifyResult certify_special_coordinates(const PolyQ& R, const CurveJet& gamma_in,
                                                 int eta) {
    const int cap = R.degree_cap();
    CurveJet gamma = gamma_in;
    CoordChange pre = CoordChange::identity(cap);
    bool swapped = false;
    if (gamma.derivative_at_zero(0).is_zero() && !gamma.derivative_at_zero(1).is_zero()) {
        pre = swap_z1_z2(cap);
        gamma = transport_curve(gamma, pre.inv);
        swapped = true;
    }
    PolyQ R0 = compose(R, pre.fwd);

    auto bg = bloom_graham_normalize(R0, eta);
    if (std::holds_alternative<TypeBoundBranch>(bg)) {
        auto br = std::get<TypeBoundBranch>(bg);
        br.map = pre.then(br.map);
        return br;
    }
    auto& res = std::get<BloomGrahamResult>(bg);

    CurveJet g_norm = transport_curve(gamma, res.map.inv);
    CurveVanishing cv = check_curve_vanishing(res.normalized, g_norm, eta, res.m);

    if (cv.truncated.derivative_at_zero(0).is_zero())
        throw StageError("certify_special_coordinates",
                         "curve is tangent to the z2-axis after normalization; "
                         "gamma'(0) = 0 is outside the smooth-curve hypothesis");
    CurveJet g_unit = reparametrize_unit_first(cv.truncated);

    auto [psi1, r1] = absorb_curve(res.normalized, g_unit, eta);

    auto m_after = detail::lowest_mixed_order(r1);
    if (!m_after || *m_after != res.m)
        throw StageError("certify_special_coordinates",
                         "lowest mixed order changed under curve absorption");

    CRat h = find_shear_direction(r1, res.m);
    CoordChange psi2 = shear_z1_by_z2(h, cap);
    PolyQ r = h.is_zero() ? r1 : compose(r1, psi2.fwd);

    SpecialCoordinates out;
    out.r = r;
    out.psi = pre.then(res.map).then(psi1).then(psi2);
    out.h = h;
    out.eta = eta;
    out.m = res.m;
    out.swapped_z1_z2 = swapped;
    out.cert = detail::make_certificate(r, out.psi, eta, res.m);
    return out;
}

}  // namespace holder3
