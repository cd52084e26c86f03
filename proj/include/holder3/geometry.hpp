#pragma once

// Pushed-out domains, slab families, polydiscs, and the sampled verification
// of the containment and interpolation estimates that make the holomorphic
// witness well-defined across the z1-slab.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "holder3/config.hpp"
#include "holder3/halton.hpp"
#include "holder3/newton_diagram.hpp"
#include "holder3/slice.hpp"

namespace holder3 {

// J_delta(zeta'') = (delta^2 + |zeta3|^2 + sum A_k^2 |zeta2|^{2k})^{1/2}
inline double J_delta(const SliceNormalization& norm, std::complex<double> z2,
                      std::complex<double> z3) {
    double s = norm.delta * norm.delta + std::norm(z3);
    const double r2 = std::abs(z2);
    for (const auto& [k, Ak] : norm.A) s += Ak * Ak * std::pow(r2, 2 * k);
    return std::sqrt(s);
}

// rho(z1_frozen, zeta'') < epsilon0 J_delta(zeta''), |zeta2|,|zeta3| < a
struct PushedOutDomain {
    const SliceNormalization* norm = nullptr;
    double a = 0.25;
    double epsilon0 = 0.1;

    bool contains(std::complex<double> z2, std::complex<double> z3) const {
        if (std::abs(z2) >= a || std::abs(z3) >= a) return false;
        double rho = norm->rho_slice.eval({0.0, z2, z3}).real();
        return rho < epsilon0 * J_delta(*norm, z2, z3);
    }
};

// slab in zeta1 crossed with either the true domain (rho(zeta1,.) < 0) or the
// pushed-out slice condition
struct FamilyDomain {
    const SliceNormalization* norm = nullptr;
    double a = 0.25;
    double c = 0.1;           // slab half-width factor, must be < 1
    bool pushed = false;      // true: Omega^{eps0}, false: the true domain
    double epsilon0 = 0.1;

    bool in_slab(std::complex<double> z1) const {
        return std::abs(z1 - norm->z1) <
               c * std::pow(norm->delta, 1.0 / norm->eta);
    }

    bool contains(const std::array<std::complex<double>, 3>& z) const {
        if (!in_slab(z[0]) || std::abs(z[1]) >= a || std::abs(z[2]) >= a) return false;
        if (pushed) {
            double rho = norm->rho_slice.eval({0.0, z[1], z[2]}).real();
            return rho < epsilon0 * J_delta(*norm, z[1], z[2]);
        }
        double rho = norm->rho.eval(z).real();
        return rho < 0.0;
    }
};

struct Polydisc {
    std::complex<double> center2, center3;
    double radius2 = 0.0, radius3 = 0.0;

    static Polydisc at(const SliceNormalization& norm, std::complex<double> z2,
                       std::complex<double> z3, double a1) {
        Polydisc P;
        P.center2 = z2;
        P.center3 = z3;
        P.radius3 = a1 * J_delta(norm, z2, z3);
        P.radius2 = tau_from_scales(norm.A, P.radius3);
        return P;
    }

    bool contains(std::complex<double> z2, std::complex<double> z3) const {
        return std::abs(z2 - center2) < radius2 && std::abs(z3 - center3) < radius3;
    }
};

template <class Domain>
bool membership(const Domain& d, const std::array<std::complex<double>, 3>& z) {
    return d.contains(z);
}

struct ContainmentVerdict {
    double sup_ratio = 0.0;       // sup |rho(w,.) - rho(z1,.)| / J_delta
    double realized_C = 0.0;      // sup_ratio / c
    long violations = 0;          // sampled members of Omega missing Omega^{eps0}
    long in_domain = 0;           // sampled members of the true domain
    long samples = 0;
    std::array<std::complex<double>, 3> worst_point{};
    bool pass = false;
};

// Samples the slab x disc x disc box, measuring the frozen-vs-moving slice
// difference against J_delta and checking the containment implication
// directly at every sampled point of the true domain.
inline ContainmentVerdict verify_containment(const SliceNormalization& norm,
                                             const Options& opt) {
    ContainmentVerdict v;
    const double s1 = opt.c * std::pow(norm.delta, 1.0 / norm.eta);
    Halton<6> seq(opt.seed);
    FamilyDomain truth{&norm, opt.a, opt.c, false, opt.epsilon0};
    PushedOutDomain pushed{&norm, opt.a, opt.epsilon0};
    for (long i = 0; i < opt.samples; ++i) {
        auto u = seq.next();
        const std::complex<double> z1 = to_disc(u[0], u[1], s1, norm.z1);
        const std::complex<double> z2 = to_disc(u[2], u[3], opt.a);
        const std::complex<double> z3 = to_disc(u[4], u[5], opt.a);
        const double rho_frozen = norm.rho_slice.eval({0.0, z2, z3}).real();
        const double rho_moving = norm.rho.eval({z1, z2, z3}).real();
        const double J = J_delta(norm, z2, z3);
        const double ratio = std::abs(rho_frozen - rho_moving) / J;
        ++v.samples;
        if (ratio > v.sup_ratio) {
            v.sup_ratio = ratio;
            v.worst_point = {z1, z2, z3};
        }
        if (rho_moving < 0.0) {
            ++v.in_domain;
            if (!pushed.contains(z2, z3)) ++v.violations;
        }
    }
    v.realized_C = opt.c > 0.0 ? v.sup_ratio / opt.c : 0.0;
    v.pass = v.realized_C <= opt.containment_max_C && v.violations == 0;
    return v;
}

struct InterpolationRow {
    int x = 0, y = 0;   // exponent projection
    int nu = 0;
    double max_ratio = 0.0;
};

struct InterpolationVerdict {
    std::vector<InterpolationRow> rows;
    double max_ratio = 0.0;
    bool pass = false;
};

// |z1|^x |z2|^y <= |z1|^{p_{nu-1}} |z2|^{q_{nu-1}} + |z1|^{p_nu} |z2|^{q_nu}
// for boundary projections; holds with constant 1 on the segment.
inline InterpolationVerdict verify_interpolation(const NewtonDiagram& dg,
                                                 const Options& opt) {
    InterpolationVerdict v;
    std::set<std::pair<int, int>> done;
    for (const auto& mo : dg.gamma_L) {
        auto [x, y] = NewtonDiagram::projection(mo);
        if (!done.insert({x, y}).second) continue;
        int nu = 0;
        for (int k = 1; k <= dg.N(); ++k) {
            if (y < dg.vertices[k - 1].second || y > dg.vertices[k].second) continue;
            if (Rational(x) / dg.weights[k - 1].eta_nu +
                    Rational(y) / dg.weights[k - 1].lambda_nu ==
                1)
                nu = k;
        }
        if (nu == 0) continue;
        InterpolationRow row{x, y, nu, 0.0};
        const auto [p0, q0] = dg.vertices[nu - 1];
        const auto [p1, q1] = dg.vertices[nu];
        Halton<2> seq(opt.seed);
        const long n = std::min<long>(opt.samples, 20000);
        for (long i = 0; i < n; ++i) {
            auto u = seq.next();
            double s1 = 1e-6 + (0.5 - 1e-6) * u[0];
            double s2 = 1e-6 + (0.5 - 1e-6) * u[1];
            double lhs = std::pow(s1, x) * std::pow(s2, y);
            double rhs = std::pow(s1, p0) * std::pow(s2, q0) +
                         std::pow(s1, p1) * std::pow(s2, q1);
            row.max_ratio = std::max(row.max_ratio, lhs / rhs);
        }
        v.max_ratio = std::max(v.max_ratio, row.max_ratio);
        v.rows.push_back(row);
    }
    v.pass = v.max_ratio <= 1.0 + 1e-9;
    return v;
}

struct JnuVerdict {
    double max_ratio = 0.0;  // sup J^nu / J over the box
    double ratio_at_origin = 0.0;
    bool j_lower_bound_ok = true;  // J >= max(delta, |zeta3|) pointwise
    bool pass = false;
};

// J^nu(zeta'') = delta + |zeta3| + sum_nu delta^{p_nu/eta} |zeta2|^{q_nu}
inline JnuVerdict verify_Jnu_dominated(const SliceNormalization& norm,
                                       const NewtonDiagram& dg, const Options& opt,
                                       double max_C = 64.0) {
    JnuVerdict v;
    auto Jnu = [&](std::complex<double> z2, std::complex<double> z3) {
        double s = norm.delta + std::abs(z3);
        for (int nu = 1; nu <= dg.N(); ++nu)
            s += std::pow(norm.delta, double(dg.vertices[nu].first) / dg.eta) *
                 std::pow(std::abs(z2), dg.vertices[nu].second);
        return s;
    };
    v.ratio_at_origin = Jnu(0.0, 0.0) / J_delta(norm, 0.0, 0.0);
    Halton<4> seq(opt.seed);
    const long n = std::min<long>(opt.samples, 20000);
    for (long i = 0; i < n; ++i) {
        auto u = seq.next();
        const std::complex<double> z2 = to_disc(u[0], u[1], opt.a);
        const std::complex<double> z3 = to_disc(u[2], u[3], opt.a);
        const double J = J_delta(norm, z2, z3);
        v.max_ratio = std::max(v.max_ratio, Jnu(z2, z3) / J);
        if (J < std::max(norm.delta, std::abs(z3)) * (1.0 - 1e-12))
            v.j_lower_bound_ok = false;
    }
    v.pass = v.max_ratio <= max_C && v.j_lower_bound_ok;
    return v;
}

}  // namespace holder3
