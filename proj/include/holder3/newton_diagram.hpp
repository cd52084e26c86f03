#pragma once

// Newton diagram of a defining function in special coordinates: exponent
// projections, the lower-left boundary with exact rational weights, weighted
// truncations, mixed-term witnesses on the vertices, plurisubharmonicity
// sampling, and the core/vertex/tail decomposition.

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "holder3/mixed_poly.hpp"

namespace holder3 {

struct SegmentWeights {
    Rational eta_nu;
    Rational lambda_nu;
};

struct NewtonDiagram {
    int eta = 0;
    int m = 0;
    std::vector<Monomial> gamma;                          // Gamma
    std::vector<Monomial> gamma_L;                        // Gamma_L
    std::vector<Monomial> lambda_set;                     // Lambda (vertex, z2-mixed)
    std::set<std::pair<int, int>> s_points;               // S, includes (eta, 0)
    std::vector<std::pair<int, int>> vertices;            // (p_nu, q_nu), nu = 0..N
    std::vector<SegmentWeights> weights;                  // nu = 1..N
    std::vector<Rational> t_of;                           // t_l, l = 0..m

    int N() const { return static_cast<int>(vertices.size()) - 1; }

    static std::pair<int, int> projection(const Monomial& mo) {
        return {mo.a[0] + mo.b[0], mo.a[1] + mo.b[1]};
    }

    // segment index nu with q_{nu-1} < l <= q_nu
    int segment_for_level(int l) const {
        for (int nu = 1; nu <= N(); ++nu)
            if (vertices[nu - 1].second < l && l <= vertices[nu].second) return nu;
        throw Error("segment_for_level: level out of range");
    }

    Rational weight_of(const Monomial& mo, int nu) const {
        auto [p, q] = projection(mo);
        return Rational(p) / weights[nu - 1].eta_nu + Rational(q) / weights[nu - 1].lambda_nu;
    }

    bool on_boundary(const Monomial& mo) const {
        auto [p, q] = projection(mo);
        for (int nu = 1; nu <= N(); ++nu) {
            if (q < vertices[nu - 1].second || q > vertices[nu].second) continue;
            if (weight_of(mo, nu) == 1) return true;
        }
        return false;
    }
};

namespace detail {

// strict-turn lower hull in the (x=q, y=p) plane from (0, eta) to (m, 0);
// collinear interior points are not vertices
inline std::vector<std::pair<int, int>> lower_hull_pq(
    const std::set<std::pair<int, int>>& pts_qp) {
    std::vector<std::pair<long, long>> pts(pts_qp.begin(), pts_qp.end());
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            long cross = (b.first - a.first) * (pt.second - a.second) -
                         (b.second - a.second) * (pt.first - a.first);
            if (cross <= 0)
                hull.pop_back();  // b is above the chord or collinear: drop it
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<std::pair<int, int>> out;
    for (auto& [q, p] : hull) out.emplace_back(static_cast<int>(p), static_cast<int>(q));
    return out;
}

}  // namespace detail

inline NewtonDiagram build_diagram(const PolyQ& r, int m, int eta) {
    if (!(m < eta))
        throw StageError("build_diagram", "requires m < eta (got m = " + std::to_string(m) +
                                              ", eta = " + std::to_string(eta) + ")");
    NewtonDiagram dg;
    dg.eta = eta;
    dg.m = m;

    for (const auto& [mo, c] : r.terms())
        if (mo.is_mixed_zp() && mo.degree() >= m && mo.degree() <= eta)
            dg.gamma.push_back(mo);

    dg.s_points.insert({eta, 0});
    for (const auto& mo : dg.gamma) dg.s_points.insert(NewtonDiagram::projection(mo));

    for (const auto& [p, q] : dg.s_points) {
        if (q == 0 && p < eta)
            throw StageError("build_diagram",
                             "projection (" + std::to_string(p) +
                                 ", 0) with p < eta contradicts the contact bound");
        if (p == 0 && q < m)
            throw StageError("build_diagram",
                             "projection (0, " + std::to_string(q) +
                                 ") with q < m contradicts the lowest mixed order");
    }
    if (!dg.s_points.count({0, m}))
        throw StageError("build_diagram",
                         "no z2-only projection (0, m); run the shear first");

    // hull over q <= m; points beyond the (0, m) endpoint impose no constraint
    std::set<std::pair<int, int>> qp;  // (q, p), sorted by q then p
    for (const auto& [p, q] : dg.s_points)
        if (q <= m) qp.insert({q, p});
    dg.vertices = detail::lower_hull_pq(qp);

    if (dg.vertices.front() != std::make_pair(eta, 0) ||
        dg.vertices.back() != std::make_pair(0, m))
        throw StageError("build_diagram", "hull endpoints are not (eta,0), (0,m)");

    for (int nu = 1; nu <= dg.N(); ++nu) {
        auto [p0, q0] = dg.vertices[nu - 1];
        auto [p1, q1] = dg.vertices[nu];
        Rational D = Rational(p0) * q1 - Rational(p1) * q0;
        SegmentWeights w;
        w.eta_nu = D / Rational(q1 - q0);
        w.lambda_nu = D / Rational(p0 - p1);
        dg.weights.push_back(w);
    }

    // conditions (1)-(5), re-verified post-hoc as exact rational assertions
    auto fail = [](const std::string& what) {
        throw StageError("build_diagram", "condition check failed: " + what);
    };
    if (dg.weights.front().eta_nu != eta) fail("eta_1 = eta");
    if (dg.weights.back().lambda_nu != m) fail("lambda_N = m");
    for (int nu = 1; nu < dg.N(); ++nu) {
        if (!(dg.weights[nu].lambda_nu > dg.weights[nu - 1].lambda_nu))
            fail("lambda strictly increasing");
        if (!(dg.weights[nu].eta_nu < dg.weights[nu - 1].eta_nu))
            fail("eta strictly decreasing");
    }
    for (int nu = 1; nu <= dg.N(); ++nu) {
        for (int e = 0; e < 2; ++e) {
            auto [p, q] = dg.vertices[nu - 1 + e];
            if (Rational(p) / dg.weights[nu - 1].eta_nu +
                    Rational(q) / dg.weights[nu - 1].lambda_nu !=
                1)
                fail("segment endpoints satisfy p/eta + q/lambda = 1");
        }
        for (const auto& mo : dg.gamma)
            if (dg.weight_of(mo, nu) < 1) fail("a Gamma point lies below a segment line");
        for (const auto& [p, q] : dg.s_points)
            if (Rational(p) / dg.weights[nu - 1].eta_nu +
                    Rational(q) / dg.weights[nu - 1].lambda_nu <
                1)
                fail("an S point lies strictly below a segment line");
    }

    for (const auto& mo : dg.gamma)
        if (dg.on_boundary(mo)) dg.gamma_L.push_back(mo);
    for (const auto& mo : dg.gamma_L) {
        auto pr = NewtonDiagram::projection(mo);
        for (int nu = 1; nu <= dg.N(); ++nu)
            if (pr == dg.vertices[nu] && mo.a[1] > 0 && mo.b[1] > 0) {
                dg.lambda_set.push_back(mo);
                break;
            }
    }

    dg.t_of.resize(m + 1);
    dg.t_of[0] = eta;
    for (int l = 1; l <= m; ++l) {
        int nu = dg.segment_for_level(l);
        const auto& w = dg.weights[nu - 1];
        dg.t_of[l] = w.eta_nu * (Rational(1) - Rational(l) / w.lambda_nu);
    }
    return dg;
}

inline Rational t_exponent(const NewtonDiagram& dg, int l) {
    if (l < 0 || l > dg.m) throw StageError("t_exponent", "level out of range");
    return dg.t_of[l];
}

// Re z3 plus exactly the boundary terms of weight one for segment nu;
// equals the formal limit of t^{-1} r(H_t^nu(z)) as t -> 0.
inline PolyQ weighted_truncation(const PolyQ& r, const NewtonDiagram& dg, int nu) {
    if (nu < 1 || nu > dg.N()) throw StageError("weighted_truncation", "nu out of range");
    PolyQ out(r.degree_cap());
    Monomial z3;
    z3.a[2] = 1;
    out.add_term(z3, r.coeff(z3));
    out.add_term(z3.conjugated(), r.coeff(z3.conjugated()));
    for (const auto& mo : dg.gamma_L)
        if (dg.weight_of(mo, nu) == 1) out.add_term(mo, r.coeff(mo));
    return out;
}

// Double truncation: Re z3 plus the boundary terms sitting exactly on the
// vertex (p_nu, q_nu), the unique point shared by segments nu and nu+1.
inline PolyQ iterated_truncation(const PolyQ& r, const NewtonDiagram& dg, int nu) {
    if (nu < 1 || nu > dg.N() - 1)
        throw StageError("iterated_truncation", "nu must be in 1..N-1");
    PolyQ out(r.degree_cap());
    Monomial z3;
    z3.a[2] = 1;
    out.add_term(z3, r.coeff(z3));
    out.add_term(z3.conjugated(), r.coeff(z3.conjugated()));
    for (const auto& mo : dg.gamma_L)
        if (NewtonDiagram::projection(mo) == dg.vertices[nu]) out.add_term(mo, r.coeff(mo));
    return out;
}

// --- plurisubharmonicity sampling ---------------------------------------

struct GridSpec {
    int points_per_dim = 9;
    double radius = 0.5;
    double tol = 1e-9;
};

struct LeviVerdict {
    bool pass = false;
    double min_eigenvalue = 0.0;
    std::array<std::complex<double>, 3> worst_point{};
};

namespace detail {

// eigenvalues of a 3x3 Hermitian matrix: trigonometric closed form, followed
// by one Rayleigh-quotient refinement (the closed form loses ~sqrt(ulp) near
// repeated eigenvalues)
inline std::array<double, 3> hermitian3_eigenvalues(
    const std::array<std::array<std::complex<double>, 3>, 3>& A) {
    using Cd = std::complex<double>;
    using Mat = std::array<std::array<Cd, 3>, 3>;
    using Vec = std::array<Cd, 3>;
    const double tr = A[0][0].real() + A[1][1].real() + A[2][2].real();
    const double q = tr / 3.0;
    Mat B = A;
    for (int i = 0; i < 3; ++i) B[i][i] -= q;
    double p2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p2 += std::norm(B[i][j]);
    const double p = std::sqrt(p2 / 6.0);
    if (p < 1e-300) return {q, q, q};
    auto det3 = [](const Mat& M) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double rdet = (det3(B) / (p * p * p)).real() / 2.0;
    rdet = std::max(-1.0, std::min(1.0, rdet));
    const double phi = std::acos(rdet) / 3.0;

    auto matvec = [](const Mat& M, const Vec& v) {
        Vec r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i] += M[i][j] * v[j];
        return r;
    };
    auto refine = [&](double lam) {
        Mat M = A;
        for (int i = 0; i < 3; ++i) M[i][i] -= lam;
        // approximate null vector: best of the row cross products and the
        // coordinate axes, judged by the relative residual |Mv|/|v|
        std::vector<Vec> cand;
        auto cross = [](const Vec& x, const Vec& y) {
            return Vec{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
                       x[0] * y[1] - x[1] * y[0]};
        };
        cand.push_back(cross(M[0], M[1]));
        cand.push_back(cross(M[0], M[2]));
        cand.push_back(cross(M[1], M[2]));
        cand.push_back(Vec{1, 0, 0});
        cand.push_back(Vec{0, 1, 0});
        cand.push_back(Vec{0, 0, 1});
        double best = std::numeric_limits<double>::infinity();
        double out = lam;
        for (const auto& v : cand) {
            double n2 = std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
            if (n2 < 1e-60) continue;
            Vec Mv = matvec(M, v);
            double res = (std::norm(Mv[0]) + std::norm(Mv[1]) + std::norm(Mv[2])) / n2;
            if (res < best) {
                best = res;
                Vec Av = matvec(A, v);
                Cd num = std::conj(v[0]) * Av[0] + std::conj(v[1]) * Av[1] +
                         std::conj(v[2]) * Av[2];
                out = num.real() / n2;
            }
        }
        return out;
    };

    std::array<double, 3> ev;
    for (int k = 0; k < 3; ++k)
        ev[k] = refine(q + 2.0 * p * std::cos(phi + 2.0 * M_PI * k / 3.0));
    return ev;
}

inline std::vector<std::complex<double>> disc_grid(int n, double radius) {
    std::vector<std::complex<double>> pts;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            double x = -radius + 2.0 * radius * ix / (n - 1);
            double y = -radius + 2.0 * radius * iy / (n - 1);
            if (x * x + y * y <= radius * radius * (1.0 + 1e-12)) pts.emplace_back(x, y);
        }
    return pts;
}

}  // namespace detail

// Samples the full complex Hessian on a grid in the polydisc; pass iff the
// minimal eigenvalue stays above -tol everywhere.
template <class C>
LeviVerdict levi_psh_check(const MixedPoly<C>& p, const GridSpec& grid = {}) {
    std::array<std::array<PolyD, 3>, 3> H;
    PolyD pn = [&] {
        if constexpr (std::is_same_v<C, CRat>)
            return p.to_numeric();
        else
            return p;
    }();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) H[i][j] = pn.wirtinger(i, false).wirtinger(j, true);

    auto pts = detail::disc_grid(grid.points_per_dim, grid.radius);
    LeviVerdict v;
    v.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& z1 : pts)
        for (const auto& z2 : pts)
            for (const auto& z3 : pts) {
                const std::array<std::complex<double>, 3> z{z1, z2, z3};
                std::array<std::array<std::complex<double>, 3>, 3> A;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) A[i][j] = H[i][j].eval(z);
                auto ev = detail::hermitian3_eigenvalues(A);
                double mn = std::min({ev[0], ev[1], ev[2]});
                if (mn < v.min_eigenvalue) {
                    v.min_eigenvalue = mn;
                    v.worst_point = z;
                }
            }
    v.pass = v.min_eigenvalue >= -grid.tol;
    return v;
}

// --- mixed witness on a vertex -------------------------------------------

struct MixedWitness {
    enum class Kind { Witness, Refuted, Inconclusive } kind = Kind::Inconclusive;
    Monomial witness;                                // valid when kind == Witness
    std::complex<double> levi_det_sample = 0.0;      // valid when kind == Refuted
    std::array<std::complex<double>, 2> sample{};    // (z1, z2) of the refuting sample
};

// Looks for a boundary pair on vertex nu that is mixed in z2.  When none
// exists the vertex polynomial has the shape P(z1) z2^q + conj; if P has an
// antiholomorphic part, the Levi determinant -|q dP/dzbar1 z2^{q-1}|^2 goes
// negative and pseudoconvexity is refuted by a sample.
inline MixedWitness mixed_witness(const NewtonDiagram& dg, const PolyQ& r, int nu) {
    if (nu < 1 || nu > dg.N()) throw StageError("mixed_witness", "nu out of range");
    MixedWitness out;
    for (const auto& mo : dg.gamma_L)
        if (NewtonDiagram::projection(mo) == dg.vertices[nu] && mo.a[1] > 0 &&
            mo.b[1] > 0) {
            out.kind = MixedWitness::Kind::Witness;
            out.witness = mo;
            return out;
        }
    // collect P(z1) from terms z1^{a1} zbar1^{b1} z2^{q_nu}
    const auto [p_nu, q_nu] = dg.vertices[nu];
    PolyD P(PolyD::kNoCap);
    for (const auto& mo : dg.gamma_L) {
        if (NewtonDiagram::projection(mo) != dg.vertices[nu]) continue;
        if (mo.a[1] == q_nu && mo.b[1] == 0) {
            Monomial m1;
            m1.a[0] = mo.a[0];
            m1.b[0] = mo.b[0];
            P.add_term(m1, detail::coeff_to_complex(r.coeff(mo)));
        }
    }
    PolyD dP = P.wirtinger(0, true);
    if (!dP.empty()) {
        for (double rad : {0.3, 0.5, 0.7})
            for (int k = 0; k < 16; ++k) {
                std::complex<double> z1 = std::polar(rad, 2.0 * M_PI * k / 16.0);
                std::complex<double> z2 = 0.4;
                std::complex<double> g =
                    double(q_nu) * dP.eval({z1, 0.0, 0.0}) * std::pow(z2, q_nu - 1);
                double det = -std::norm(g);
                if (det < -1e-12) {
                    out.kind = MixedWitness::Kind::Refuted;
                    out.levi_det_sample = det;
                    out.sample = {z1, z2};
                    return out;
                }
            }
    }
    out.kind = MixedWitness::Kind::Inconclusive;
    return out;
}

// --- decomposition ---------------------------------------------------------

struct SliceDecomposition {
    PolyQ core_terms;  // Gamma_L minus Lambda
    // (alpha2, beta2) -> homogeneous M polynomial in (z1, zbar1), with its vertex
    struct MPoly {
        int a2 = 0, b2 = 0;
        int nu = 0;
        int p_nu = 0, q_nu = 0;
        PolyQ poly;
    };
    std::vector<MPoly> m_polynomials;
    struct TailTerm {
        Monomial mono;
        int k = 0, l = 0;
        Rational t_l;           // only for 1 <= l <= m
        int bound_exponent = 0; // [t_l]+1, or m+1 for the l > m class
        bool z2_class = false;  // dominated by |z2|^{m+1}
    };
    std::vector<TailTerm> tail;
};

inline SliceDecomposition decompose(const PolyQ& r, const NewtonDiagram& dg) {
    SliceDecomposition out;
    out.core_terms = PolyQ(r.degree_cap());

    auto in_lambda = [&](const Monomial& mo) {
        for (const auto& l : dg.lambda_set)
            if (l == mo) return true;
        return false;
    };

    std::map<std::pair<int, int>, SliceDecomposition::MPoly> mp;
    for (const auto& mo : dg.gamma_L) {
        if (!in_lambda(mo)) {
            out.core_terms.add_term(mo, r.coeff(mo));
            continue;
        }
        auto key = std::make_pair(mo.a[1], mo.b[1]);
        auto& entry = mp[key];
        if (entry.poly.empty() && entry.a2 == 0) {
            entry.a2 = mo.a[1];
            entry.b2 = mo.b[1];
            auto pr = NewtonDiagram::projection(mo);
            for (int nu = 1; nu <= dg.N(); ++nu)
                if (dg.vertices[nu] == pr) {
                    entry.nu = nu;
                    entry.p_nu = pr.first;
                    entry.q_nu = pr.second;
                }
            entry.poly = PolyQ(r.degree_cap());
        }
        Monomial m1;
        m1.a[0] = mo.a[0];
        m1.b[0] = mo.b[0];
        entry.poly.add_term(m1, r.coeff(mo));
    }
    for (auto& [k, v] : mp) {
        // homogeneity of exact degree p_nu holds by construction
        for (const auto& [mo, c] : v.poly.terms())
            if (mo.degree() != v.p_nu)
                throw StageError("decompose", "M polynomial is not homogeneous");
        out.m_polynomials.push_back(v);
    }

    for (const auto& mo : dg.gamma) {
        if (dg.on_boundary(mo)) continue;
        auto [k, l] = NewtonDiagram::projection(mo);
        SliceDecomposition::TailTerm t;
        t.mono = mo;
        t.k = k;
        t.l = l;
        if (l >= 1 && l <= dg.m) {
            t.t_l = dg.t_of[l];
            mpz_class fl = t.t_l.get_num() / t.t_l.get_den();  // floor for t_l >= 0
            t.bound_exponent = static_cast<int>(fl.get_si()) + 1;
            if (!(t.bound_exponent <= k))
                throw StageError("decompose",
                                 "interior term violates the [t_l]+1 <= k bound");
        } else if (l > dg.m) {
            t.z2_class = true;
            t.bound_exponent = dg.m + 1;
        } else {
            throw StageError("decompose", "interior term with l = 0 cannot occur");
        }
        out.tail.push_back(t);
    }
    return out;
}

}  // namespace holder3
