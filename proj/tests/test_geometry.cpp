#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace th;

namespace {

SliceNormalization norm_for(const std::string& poly, int eta, int m, double delta,
                            std::complex<double> d = 1.0) {
    PolyQ r = R(poly, eta + 1);
    auto e = solve_e_delta(r, d, eta, delta);
    return slice_normalize(r, d * std::pow(delta, 1.0 / eta), e, delta, eta, m);
}

}  // namespace

TEST_CASE("membership predicates", "[geometry]") {
    const double delta = 1e-3;
    auto n = norm_for("Re(z3) + abs2(z2) + abs2(z1)^2", 4, 2, delta);
    Options opt;

    SECTION("slice origin pushed slightly inside") {
        PushedOutDomain dom{&n, opt.a, opt.epsilon0};
        // rho(0, -b delta / 2) ~ -b delta / 2 < eps0 J
        CHECK(dom.contains(0.0, std::complex<double>(-0.5 * delta, 0.0)));
    }
    SECTION("a point above the boundary is outside the true domain") {
        auto h = norm_for("Re(z3)", 4, 2, delta);
        FamilyDomain truth{&h, opt.a, opt.c, false, opt.epsilon0};
        std::array<std::complex<double>, 3> z{h.z1, 0.0, delta};
        CHECK(!truth.contains(z));
        z[2] = -delta;
        CHECK(truth.contains(z));
    }
    SECTION("boundary points belong to the pushed-out domain") {
        auto h = norm_for("Re(z3)", 4, 2, delta);
        PushedOutDomain dom{&h, opt.a, opt.epsilon0};
        // rho = 0 < eps0 J on the imaginary axis
        CHECK(dom.contains(0.0, std::complex<double>(0.0, 0.01)));
    }
    SECTION("a slab point outside chart boxes is rejected") {
        FamilyDomain truth{&n, opt.a, opt.c, false, opt.epsilon0};
        std::array<std::complex<double>, 3> z{n.z1, 0.3, -delta};
        CHECK(!truth.contains(z));  // |zeta2| >= a
    }
}

TEST_CASE("containment with a frozen slab is exact", "[geometry]") {
    Options opt;
    opt.c = 0.0;
    opt.samples = 2000;
    auto n = norm_for("Re(z3) + abs2(z2) + abs2(z1)^2", 4, 2, 1e-4);
    auto v = verify_containment(n, opt);
    CHECK(v.sup_ratio == 0.0);
    CHECK(v.violations == 0);
}

TEST_CASE("containment verdict on E1 at defaults", "[geometry]") {
    Options opt;
    auto n = norm_for("Re(z3) + abs2(z2) + abs2(z1)^2", 4, 2, 1e-4);
    auto v = verify_containment(n, opt);
    CHECK(v.samples == opt.samples);
    CHECK(v.in_domain > 0);
    CHECK(v.violations == 0);
    CHECK(v.realized_C <= 10.0);
    CHECK(v.pass);
}

TEST_CASE("containment difference scales about linearly in c", "[geometry]") {
    Options opt;
    opt.samples = 30000;
    auto n = norm_for("Re(z3) + abs2(z2) + abs2(z1)^2", 4, 2, 1e-4);
    auto v1 = verify_containment(n, opt);
    Options half = opt;
    half.c = opt.c / 2;
    auto v2 = verify_containment(n, half);
    double ratio = v2.sup_ratio / v1.sup_ratio;
    CHECK(ratio == Catch::Approx(0.5).margin(0.1));  // halving c halves the sup +-20%
}

TEST_CASE("containment verdicts are deterministic given the seed", "[geometry]") {
    Options opt;
    opt.samples = 5000;
    auto n = norm_for(slurp(data_file("e2.poly")), 10, 6, 1e-3);
    auto v1 = verify_containment(n, opt);
    auto v2 = verify_containment(n, opt);
    CHECK(v1.sup_ratio == v2.sup_ratio);
    CHECK(v1.violations == v2.violations);
    CHECK(v1.worst_point[0] == v2.worst_point[0]);
}

TEST_CASE("interpolation inequality holds with constant one", "[geometry]") {
    Options opt;
    opt.samples = 20000;

    SECTION("E2 boundary projections") {
        auto spec = DomainSpec::parse(slurp(data_file("e2.poly")), "t\n0\n0", 10,
                                      Options{});
        auto sc = std::get<SpecialCoordinates>(
            certify_special_coordinates(spec.R, spec.gamma, 10));
        auto dg = build_diagram(sc.r, sc.m, 10);
        auto v = verify_interpolation(dg, opt);
        CHECK(v.pass);
        CHECK(v.max_ratio <= 1.0 + 1e-12);
        CHECK(v.rows.size() == 3);  // (10,0), (4,2), (0,6)
    }

    SECTION("an interior boundary point genuinely exercises the bound") {
        auto spec =
            DomainSpec::parse("Re(z3) + abs2(z2)", "t\nt^2\n0", 4, Options{});
        auto sc = std::get<SpecialCoordinates>(
            certify_special_coordinates(spec.R, spec.gamma, 4));
        auto dg = build_diagram(sc.r, sc.m, 4);
        auto v = verify_interpolation(dg, opt);
        CHECK(v.pass);
        bool interior = false;
        for (const auto& row : v.rows)
            if (row.x == 2 && row.y == 1) {
                interior = true;
                CHECK(row.max_ratio <= 1.0);
                CHECK(row.max_ratio > 0.3);  // the bound is near-sharp on the segment
            }
        CHECK(interior);
    }

    SECTION("hand check of the E2 segment-2 midpoint (2,4)") {
        // |z1|^2 |z2|^4 <= |z1|^4 |z2|^2 + |z2|^6 by AM-GM with weights 1/2,1/2
        Halton<2> seq(0);
        double worst = 0.0;
        for (int i = 0; i < 20000; ++i) {
            auto u = seq.next();
            double s1 = 1e-6 + 0.5 * u[0], s2 = 1e-6 + 0.5 * u[1];
            double lhs = std::pow(s1, 2) * std::pow(s2, 4);
            double rhs = std::pow(s1, 4) * std::pow(s2, 2) + std::pow(s2, 6);
            worst = std::max(worst, lhs / rhs);
        }
        CHECK(worst <= 1.0);
    }
}

TEST_CASE("J^nu is dominated by J", "[geometry]") {
    Options opt;
    opt.samples = 20000;
    auto spec = DomainSpec::parse("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4,
                                  Options{});
    auto sc = std::get<SpecialCoordinates>(
        certify_special_coordinates(spec.R, spec.gamma, 4));
    auto dg = build_diagram(sc.r, sc.m, 4);
    auto n = norm_for("Re(z3) + abs2(z2) + abs2(z1)^2", 4, 2, 1e-4);
    auto v = verify_Jnu_dominated(n, dg, opt);
    CHECK(v.ratio_at_origin > 0.99);
    CHECK(v.max_ratio <= 4.0);
    CHECK(v.j_lower_bound_ok);
    CHECK(v.pass);

    // large |zeta3| pushes the ratio towards (delta + |zeta3|) / |zeta3| <= 2
    double big = (n.delta + 0.24) /
                 J_delta(n, 0.0, std::complex<double>(0.0, 0.24));
    CHECK(big <= 2.0);
}

TEST_CASE("J_delta lower bound is pointwise", "[geometry]") {
    auto n = norm_for(slurp(data_file("e2.poly")), 10, 6, 1e-3);
    Halton<4> seq(3);
    for (int i = 0; i < 5000; ++i) {
        auto u = seq.next();
        auto z2 = to_disc(u[0], u[1], 0.25);
        auto z3 = to_disc(u[2], u[3], 0.25);
        CHECK(J_delta(n, z2, z3) >= std::max(n.delta, std::abs(z3)) * (1 - 1e-12));
    }
}

TEST_CASE("polydisc radii follow the scale functions", "[geometry]") {
    auto n = norm_for(slurp(data_file("e2.poly")), 10, 6, 1e-3);
    const std::complex<double> z2{0.05, 0.0}, z3{0.0, 0.01};
    auto P = Polydisc::at(n, z2, z3, 0.05);
    CHECK(P.radius3 == Catch::Approx(0.05 * J_delta(n, z2, z3)));
    CHECK(P.radius2 > 0.0);
    CHECK(P.radius2 <= std::pow(P.radius3 / n.A.at(6), 1.0 / 6.0) * (1 + 1e-9));
    CHECK(P.contains(z2, z3));
    CHECK(!P.contains(z2 + 2.0 * P.radius2, z3));
    CHECK(membership(P, {0.0, z2, z3}) == P.contains(z2, z3));
}
