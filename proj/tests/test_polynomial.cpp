#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace th;

TEST_CASE("add: additive inverse cancels to the zero polynomial", "[poly]") {
    PolyQ p = P("z1*conj(z1)");
    PolyQ q = P("-z1*conj(z1)");
    CHECK((p + q).empty());
    CHECK(!vanishing_order(p + q).has_value());
}

TEST_CASE("Re z3 + |z2|^2 has the expected term map", "[poly]") {
    PolyQ p = P("Re(z3) + abs2(z2)");
    REQUIRE(p.size() == 3);
    CHECK(p.coeff(mono({0, 0, 1}, {0, 0, 0})) == CRat(Rational(1, 2)));
    CHECK(p.coeff(mono({0, 0, 0}, {0, 0, 1})) == CRat(Rational(1, 2)));
    CHECK(p.coeff(mono({0, 1, 0}, {0, 1, 0})) == CRat(1));
}

TEST_CASE("sum of the E1 and E2 bodies matches a brute-force term merge", "[poly]") {
    PolyQ e1 = P("Re(z3) + abs2(z2) + abs2(z1)^2");
    PolyQ e2 = P("Re(z3) + abs2(z1)^2*abs2(z2) + abs2(z2)^3 + abs2(z1)^5");
    PolyQ sum = e1 + e2;

    // independent oracle: flat-list merge with linear scans
    std::vector<std::pair<Monomial, CRat>> flat;
    auto push = [&](const PolyQ& p) {
        for (const auto& [m, c] : p.terms()) {
            bool found = false;
            for (auto& [fm, fc] : flat)
                if (fm == m) {
                    fc += c;
                    found = true;
                }
            if (!found) flat.emplace_back(m, c);
        }
    };
    push(e1);
    push(e2);
    std::size_t nonzero = 0;
    for (auto& [m, c] : flat) {
        if (c.is_zero()) continue;
        ++nonzero;
        CHECK(sum.coeff(m) == c);
    }
    CHECK(sum.size() == nonzero);
}

TEST_CASE("add rejects mismatched degree caps", "[poly]") {
    PolyQ p(4), q(7);
    p.add_term(mono({1, 0, 0}, {0, 0, 0}), CRat(1));
    q.add_term(mono({1, 0, 0}, {0, 0, 0}), CRat(1));
    CHECK_THROWS_AS(p + q, CapMismatch);
}

TEST_CASE("conjugation is an involution", "[poly]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        PolyQ p = rand_poly(rng);
        CHECK(p.conjugated().conjugated() == p);
    }
}

TEST_CASE("difference of squares in z2", "[poly]") {
    PolyQ p = P("(z2 + conj(z2)) * (z2 - conj(z2))");
    PolyQ expect = P("z2^2 - conj(z2)^2");
    CHECK(p == expect);
}

TEST_CASE("mul agrees with sampled pointwise products", "[poly]") {
    std::mt19937_64 rng(8);
    PolyQ p = P("Re(z3) + abs2(z2) + abs2(z1)^2");
    PolyQ q = P("z1*conj(z2) + i*z3");
    PolyQ pq = p * q;
    for (int i = 0; i < 100; ++i) {
        auto z = rand_point(rng);
        auto lhs = pq.eval(z);
        auto rhs = p.eval(z) * q.eval(z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("wirtinger monomial rule", "[poly]") {
    PolyQ p = P("z2*conj(z2)");
    CHECK(p.wirtinger(1, true) == P("z2"));
}

TEST_CASE("second mixed wirtinger derivative of |z2|^4 at z2 = 1", "[poly]") {
    PolyQ p = P("z2^2*conj(z2)^2");
    PolyQ d = wirtinger_derivative(wirtinger_derivative(p, WirtVar{1, false}),
                                   WirtVar{1, true});
    std::array<std::complex<double>, 3> z{0.0, 1.0, 0.0};
    CHECK(std::abs(d.eval(z) - 4.0) < 1e-12);

    // finite-difference oracle for the same value
    const double h = 1e-5;
    auto val = [&](std::complex<double> dz) {
        auto w = z;
        w[1] += dz;
        return p.eval(w);
    };
    auto dz2 = [&](std::complex<double> base_shift) {
        auto at = [&](std::complex<double> dz) { return val(base_shift + dz); };
        auto dx = (at({h, 0}) - at({-h, 0})) / (2 * h);
        auto dy = (at({0, h}) - at({0, -h})) / (2 * h);
        return 0.5 * (dx - std::complex<double>(0, 1) * dy);
    };
    auto ddx = (dz2({h, 0}) - dz2({-h, 0})) / (2 * h);
    auto ddy = (dz2({0, h}) - dz2({0, -h})) / (2 * h);
    auto fd = 0.5 * (ddx + std::complex<double>(0, 1) * ddy);
    CHECK(std::abs(fd - 4.0) < 1e-5);
}

TEST_CASE("wirtinger in z1 of a conjugate-only polynomial vanishes", "[poly]") {
    PolyQ p = P("conj(z1)^3 + conj(z2)");
    CHECK(p.wirtinger(0, false).empty());
}

TEST_CASE("wirtinger_derivative requires order >= 1", "[poly]") {
    CHECK_THROWS_AS(wirtinger_derivative(P("z1"), WirtVar{0, false}, 0), Error);
}

TEST_CASE("evaluation of real-valued polynomials is real", "[poly]") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        PolyQ p = rand_real_poly(rng);
        auto v = p.eval(rand_point(rng));
        CHECK(std::abs(v.imag()) < 1e-10);
    }
}

TEST_CASE("hand evaluation of Re z3 + |z2|^2 at (0, 1, -2)", "[poly]") {
    PolyQ p = P("Re(z3) + abs2(z2)");
    auto v = p.eval({0.0, 1.0, -2.0});
    CHECK(std::abs(v - std::complex<double>(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("evaluation at the origin returns the constant term", "[poly]") {
    PolyQ p = P("(3/7) + z1 + abs2(z2)");
    CHECK(std::abs(p.eval({0.0, 0.0, 0.0}) - 3.0 / 7.0) < 1e-15);
}

TEST_CASE("compose with the identity is the identity", "[poly]") {
    PolyQ p = P("Re(z3) + abs2(z2) + abs2(z1)^2");
    CHECK(compose(p, HoloMapQ::identity(p.degree_cap())) == p);
}

TEST_CASE("compose with a shear matches the hand expansion", "[poly]") {
    PolyQ p = P("Re(z3) + abs2(z2)");
    HoloMapQ shear = HoloMapQ::identity(PolyQ::kNoCap);
    shear.comp[1] = P("z2 + z1");
    PolyQ got = compose(p, shear);
    PolyQ expect = P("Re(z3) + abs2(z2) + z2*conj(z1) + z1*conj(z2) + abs2(z1)");
    CHECK(got == expect);
}

TEST_CASE("composition commutes with evaluation", "[poly]") {
    std::mt19937_64 rng(10);
    PolyQ p = P("Re(z3) + abs2(z2) + abs2(z1)^2 + z1*conj(z2)*z3");
    HoloMapQ m = rand_holo_map(rng);
    HoloMapD md{{m.comp[0].to_numeric(), m.comp[1].to_numeric(), m.comp[2].to_numeric()}};
    PolyQ c = compose(p, m);
    for (int i = 0; i < 100; ++i) {
        auto z = rand_point(rng, 0.6);
        auto lhs = c.eval(z);
        auto rhs = p.eval(md.eval(z));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("composition above the cap records truncation", "[poly]") {
    PolyQ p = R("abs2(z1)", 3);
    HoloMapQ sq = HoloMapQ::identity(3);
    sq.comp[0] = ExprParser("z1^2", ExprParser::Mode::Domain, 3).parse();
    PolyQ c = compose(p, sq);
    CHECK(c.empty());  // |z1|^4 exceeds the cap entirely
    CHECK(c.truncated());
}

TEST_CASE("vanishing order", "[poly]") {
    PolyQ t35 = P("z1^3 + z1^5");
    CHECK(vanishing_order(t35) == 3);
    CHECK(!vanishing_order(PolyQ::zero()).has_value());
    for (int k : {1, 2, 3}) {
        PolyQ e1 = P("Re(z3) + abs2(z2) + abs2(z1)^" + std::to_string(k));
        auto restricted = restrict_to_curve(e1, CurveJet::axis1(PolyQ::kNoCap));
        CHECK(vanishing_order(restricted) == 2 * k);
    }
}

TEST_CASE("restriction to curves and contact orders", "[poly]") {
    PolyQ p = P("Re(z3) + abs2(z1)^2");
    CurveJet axis = CurveJet::axis1(PolyQ::kNoCap);
    PolyQ restricted = restrict_to_curve(p, axis);
    CHECK(restricted == P("z1^2*conj(z1)^2"));
    CHECK(contact_order(p, axis) == Rational(4));

    CurveJet zero_curve{{PolyQ::zero(), PolyQ::zero(), PolyQ::zero()}, PolyQ::kNoCap};
    PolyQ with_const = P("(1/3) + Re(z3) + abs2(z2)");
    CHECK(restrict_to_curve(with_const, zero_curve) == P("(1/3)"));

    CurveJet parabola = curve("t\nt^2\n0", PolyQ::kNoCap);
    PolyQ q = P("Re(z3) + abs2(z2)");
    PolyQ rq = restrict_to_curve(q, parabola);
    CHECK(rq == P("z1^2*conj(z1)^2"));
    CHECK(contact_order(q, parabola) == Rational(4));
}

TEST_CASE("polynomial property suites", "[poly][property]") {
    CHECK(hermitian_preservation_failures(1000) == 0);
    CHECK(evaluation_homomorphism_failures(1000) == 0);
    CHECK(wirtinger_fd_failures(1000) == 0);
    CHECK(compose_associativity_failures(1000) == 0);
}
