#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace th;

namespace {

struct Prepared {
    SpecialCoordinates sc;
    NewtonDiagram dg;
    SliceDecomposition decomp;
    DirectionChoice dir;
};

Prepared prepare(const std::string& poly, const std::string& crv, int eta) {
    auto spec = DomainSpec::parse(poly, crv, eta, Options{});
    auto v = certify_special_coordinates(spec.R, spec.gamma, eta);
    Prepared p{std::get<SpecialCoordinates>(v), {}, {}, {}};
    p.dg = build_diagram(p.sc.r, p.sc.m, eta);
    p.decomp = decompose(p.sc.r, p.dg);
    p.dir = choose_direction(p.decomp, 720);
    return p;
}

}  // namespace

TEST_CASE("direction choice", "[slice]") {
    SECTION("constant vertex polynomials accept any direction") {
        auto p = prepare("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4);
        CHECK(p.dir.theta0 == 0.0);
        CHECK(p.dir.margin == Catch::Approx(M_PI));
        CHECK(p.dir.min_modulus_profile.at(1) == Catch::Approx(1.0));
    }
    SECTION("z1^2 + zbar1^2 has zeros at odd multiples of pi/4") {
        SliceDecomposition d;
        SliceDecomposition::MPoly M;
        M.a2 = 1;
        M.b2 = 1;
        M.nu = 1;
        M.p_nu = 2;
        M.q_nu = 2;
        M.poly = P("z1^2 + conj(z1)^2");
        d.m_polynomials.push_back(M);
        auto dir = choose_direction(d, 720);
        // |M(e^{i theta})| = 2|cos 2theta|: maximal at theta = 0 mod pi/2
        CHECK(std::abs(std::remainder(dir.theta0, M_PI / 2)) < 1e-9);
        CHECK(dir.margin == Catch::Approx(M_PI / 4).margin(0.02));
    }
    SECTION("|z1|^4 is direction-independent") {
        auto p = prepare(slurp(data_file("e2.poly")), "t\n0\n0", 10);
        CHECK(p.dir.theta0 == 0.0);
        CHECK(p.dir.margin == Catch::Approx(M_PI));
    }
    SECTION("an empty decomposition is rejected") {
        CHECK_THROWS_AS(choose_direction(SliceDecomposition{}, 720), StageError);
    }
}

TEST_CASE("boundary point solve", "[slice]") {
    SECTION("E1 with d = 1 gives e_delta = -delta") {
        PolyQ r = R("Re(z3) + abs2(z2) + abs2(z1)^2", 5);
        for (double delta : {1e-2, 1e-4, 1e-6}) {
            auto e = solve_e_delta(r, 1.0, 4, delta);
            CHECK(std::abs(e - std::complex<double>(-delta, 0.0)) < 1e-12 * delta);
        }
    }
    SECTION("half-space stays at e_delta = 0") {
        auto e = solve_e_delta(R("Re(z3)", 5), 1.0, 4, 1e-3);
        CHECK(std::abs(e) < 1e-15);
    }
    SECTION("residuals meet the target across a sweep") {
        PolyQ r = R(slurp(data_file("e2.poly")), 11);
        for (double delta : Options{}.delta_sweep()) {
            auto e = solve_e_delta(r, 1.0, 10, delta);
            std::complex<double> z1 = std::pow(delta, 0.1);
            double res = std::abs(r.to_numeric().eval({z1, 0.0, e}));
            CHECK(res < 1e-12 * delta);
        }
    }
}

TEST_CASE("slice normalization on E1", "[slice]") {
    PolyQ r = R("Re(z3) + abs2(z2) + abs2(z1)^2", 5);
    const double delta = 1e-4;
    auto e = solve_e_delta(r, 1.0, 4, delta);
    auto n = slice_normalize(r, std::pow(delta, 0.25), e, delta, 4, 2);
    CHECK(std::abs(n.a_jk.at({1, 1}) - 1.0) < 1e-12);
    CHECK(n.A.at(2) == Catch::Approx(1.0));
    CHECK(n.tau == Catch::Approx(std::sqrt(delta)));
    CHECK(n.pure_residual < 1e-14);
    CHECK(n.r_residual < 1e-12 * delta);
    CHECK(std::abs(n.e_delta) <= 1.0000001 * delta);
}

TEST_CASE("half-space slice map is a pure translation", "[slice]") {
    PolyQ r = R("Re(z3)", 5);
    auto n = slice_normalize(r, 0.1, 0.0, 1e-3, 4, 2);
    for (int l = 2; l <= 2; ++l) CHECK(std::abs(n.c[l]) == 0.0);
    PolyD expect = PolyD::constant(0.0, PolyD::kNoCap) + PolyD::variable(2, PolyD::kNoCap);
    CHECK(n.phi.comp[2] == PolyD::variable(2, PolyD::kNoCap));
    CHECK(n.phi.comp[1] == PolyD::variable(1, PolyD::kNoCap));
}

TEST_CASE("pure slice terms are killed to machine precision", "[slice]") {
    // |z2|^2 + |z2^2 + z1^3|^2 freezes to a slice with a pure zeta2^2 term
    PolyQ r = R("Re(z3) + abs2(z2) + abs2(z2^2 + z1^3)", 7);
    const double delta = 1e-4;
    const int eta = 6, m = 2;
    auto e = solve_e_delta(r, 1.0, eta, delta);
    auto n = slice_normalize(r, std::pow(delta, 1.0 / eta), e, delta, eta, m);
    CHECK(std::abs(n.c[2]) == Catch::Approx(std::sqrt(delta)).epsilon(1e-9));
    CHECK(n.pure_residual < 1e-12);
    CHECK(std::abs(n.a_jk.at({1, 1}) - 1.0) < 1e-6);
    CHECK(std::abs(n.dr_dz3 - std::complex<double>(0.5, 0.0)) < 1e-12);
}

TEST_CASE("rho agrees with r through the slice map", "[slice]") {
    std::mt19937_64 rng(61);
    PolyQ r = R(slurp(data_file("e2.poly")), 11);
    for (double delta : {1e-2, 1e-4}) {
        auto e = solve_e_delta(r, 1.0, 10, delta);
        auto n = slice_normalize(r, std::pow(delta, 0.1), e, delta, 10, 6);
        PolyD rn = r.to_numeric();
        for (int i = 0; i < 100; ++i) {
            auto zeta = rand_point(rng, 0.3);
            auto lhs = n.rho.eval(zeta);
            auto rhs = rn.eval(n.phi.eval(zeta));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("slice normalization requires a transverse derivative", "[slice]") {
    // freeze far from the model shape: r independent of z3
    PolyQ r = P("abs2(z2)");
    CHECK_THROWS_AS(slice_normalize(r, 0.1, 0.0, 1e-3, 4, 2), StageError);
}

TEST_CASE("r-derivative scaling fits", "[slice]") {
    Options opt;
    auto deltas = opt.delta_sweep();

    SECTION("E1: the vertex split is constant") {
        auto p = prepare("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4);
        auto rows = verify_r_derivative_scaling(p.sc.r, p.dg, p.dir, deltas, opt);
        bool found = false;
        for (const auto& row : rows) {
            if (row.two_sided) {
                found = true;
                CHECK(row.l == 2);
                CHECK(row.a2 == 1);
                CHECK(row.b2 == 1);
                CHECK(row.target == 0.0);
                CHECK(std::abs(row.fit.slope) < 1e-12);
                CHECK(row.band_lo == Catch::Approx(1.0));
                CHECK(row.band_hi == Catch::Approx(1.0));
                CHECK(row.pass);
            } else {
                CHECK(row.pass);  // upper bounds, several identically zero
            }
        }
        CHECK(found);
    }

    SECTION("E2: vertex (4,2) scales like delta^{2/5}") {
        auto p = prepare(slurp(data_file("e2.poly")), "t\n0\n0", 10);
        auto rows = verify_r_derivative_scaling(p.sc.r, p.dg, p.dir, deltas, opt);
        int two_sided = 0;
        for (const auto& row : rows) {
            CHECK(row.pass);
            if (!row.two_sided) continue;
            ++two_sided;
            if (row.l == 2) {
                CHECK(row.fit.slope == Catch::Approx(0.4).margin(1e-9));
                CHECK(row.fit.r2 >= 0.99);
            } else {
                CHECK(row.l == 6);
                CHECK(std::abs(row.fit.slope) < 1e-9);
            }
        }
        CHECK(two_sided == 2);
    }

    SECTION("identically zero directions are flagged") {
        auto p = prepare("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4);
        auto rows = verify_r_derivative_scaling(p.sc.r, p.dg, p.dir, deltas, opt);
        bool saw_zero = false;
        for (const auto& row : rows)
            if (row.zero_values) {
                saw_zero = true;
                CHECK(!row.two_sided);
                CHECK(row.pass);
            }
        CHECK(saw_zero);
    }

    SECTION("a short sweep is rejected") {
        auto p = prepare("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4);
        std::vector<double> three{1e-2, 1e-3, 1e-4};
        CHECK_THROWS_AS(verify_r_derivative_scaling(p.sc.r, p.dg, p.dir, three, opt),
                        StageError);
    }
}

TEST_CASE("rho-derivative scaling fits", "[slice]") {
    Options opt;
    auto deltas = opt.delta_sweep();

    SECTION("E1: all c_l vanish, A_2 is constant") {
        auto p = prepare("Re(z3) + abs2(z2) + abs2(z1)^2", "t\n0\n0", 4);
        auto sweep = compute_slice_sweep(p.sc.r, p.dir, deltas, 4, p.sc.m);
        auto rep = verify_rho_derivative_scaling(sweep, p.dg, opt);
        for (const auto& row : rep.rows) {
            CHECK(row.pass);
            if (row.quantity.rfind("|c_", 0) == 0) CHECK(row.zero_values);
            if (row.quantity == "A_m") {
                CHECK(std::abs(row.fit.slope) < 1e-12);
                CHECK(row.band_lo == Catch::Approx(1.0));
            }
        }
        CHECK(rep.tau_monotone);
        CHECK(rep.tau_bound_ok);
        CHECK(rep.e_delta_C <= 1.0 + 1e-9);
        CHECK(rep.max_pure_residual < 1e-12);
    }

    SECTION("E2: A_m stays of unit size across the sweep") {
        auto p = prepare(slurp(data_file("e2.poly")), "t\n0\n0", 10);
        auto sweep = compute_slice_sweep(p.sc.r, p.dir, deltas, 10, p.sc.m);
        auto rep = verify_rho_derivative_scaling(sweep, p.dg, opt);
        for (const auto& row : rep.rows) {
            CHECK(row.pass);
            if (row.two_sided && !row.zero_values) CHECK(row.fit.r2 >= 0.99);
            if (row.quantity == "A_m") {
                CHECK(std::abs(row.fit.slope) <= 0.05);
                CHECK(row.band_hi / row.band_lo < 1.001);
            }
        }
        // tau = min over l of (delta / A_l)^{1/l}; consistency with the A_m entry
        for (const auto& s : sweep)
            CHECK(s.tau <= std::pow(s.delta / s.A.at(6), 1.0 / 6.0) * (1 + 1e-9));
        CHECK(rep.tau_monotone);
    }

    SECTION("nonzero c_2 obeys its upper bound") {
        auto spec = DomainSpec::parse("Re(z3) + abs2(z2) + abs2(z2^2 + z1^3)",
                                      "t\n0\n0", 6, Options{});
        auto sc = std::get<SpecialCoordinates>(
            certify_special_coordinates(spec.R, spec.gamma, 6));
        auto dg = build_diagram(sc.r, sc.m, 6);
        auto dir = choose_direction(decompose(sc.r, dg), 720);
        auto sweep = compute_slice_sweep(sc.r, dir, deltas, 6, sc.m);
        auto rep = verify_rho_derivative_scaling(sweep, dg, opt);
        bool saw_c2 = false;
        for (const auto& row : rep.rows)
            if (row.quantity == "|c_2|") {
                saw_c2 = true;
                CHECK(!row.zero_values);
                // |c_2| = delta^{1/2} while the bound only demands delta^{t_2/eta} = 1
                CHECK(row.fit.slope == Catch::Approx(0.5).margin(1e-9));
                CHECK(row.pass);
            }
        CHECK(saw_c2);
    }
}
