#pragma once

// Per-(d, delta) slice machinery: the good direction on the z1-circle, the
// boundary point e_delta, the slice coordinate change and its c_l / a_jk
// coefficients, the scale functions A_l and tau, and log-log verification of
// the derivative-scaling estimates.

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holder3/config.hpp"
#include "holder3/fit.hpp"
#include "holder3/holo_map.hpp"
#include "holder3/newton_diagram.hpp"

namespace holder3 {

struct DirectionChoice {
    double theta0 = 0.0;
    std::complex<double> d{1.0, 0.0};
    double margin = M_PI;                    // half-width of the good arc
    std::map<int, double> min_modulus_profile;  // nu -> min |M|/tau^{p_nu} on the arc
};

// Scans the circle for a direction where every vertex polynomial M stays away
// from zero; by homogeneity |M(tau e^{i theta})|/tau^{deg M} depends on theta
// only.
inline DirectionChoice choose_direction(const SliceDecomposition& decomp, int samples) {
    std::vector<std::pair<int, PolyD>> ms;
    for (const auto& mp : decomp.m_polynomials) ms.emplace_back(mp.nu, mp.poly.to_numeric());
    if (ms.empty())
        throw StageError("choose_direction", "empty decomposition: no vertex polynomials");

    auto score = [&](double theta) {
        double s = std::numeric_limits<double>::infinity();
        const std::complex<double> z1 = std::polar(1.0, theta);
        for (const auto& [nu, M] : ms) s = std::min(s, std::abs(M.eval({z1, 0.0, 0.0})));
        return s;
    };

    double best_theta = 0.0, best = -1.0;
    for (int k = 0; k < samples; ++k) {
        double theta = 2.0 * M_PI * k / samples;
        double s = score(theta);
        if (s > best) {
            best = s;
            best_theta = theta;
        }
    }
    if (!(best > 0.0))
        throw StageError("choose_direction", "all vertex polynomials vanish on the circle");

    DirectionChoice out;
    out.theta0 = best_theta;
    out.d = std::polar(1.0, best_theta);

    // widen the arc while the sampled score stays positive, then refine the
    // first bad offset by bisection
    const double step = 2.0 * M_PI / samples;
    double lo = 0.0, hi = M_PI;
    bool hit_bad = false;
    for (double off = step; off <= M_PI; off += step) {
        if (score(best_theta + off) <= 0.0 || score(best_theta - off) <= 0.0) {
            hi = off;
            hit_bad = true;
            break;
        }
        lo = off;
    }
    if (!hit_bad) {
        out.margin = M_PI;
    } else {
        for (int it = 0; it < 40; ++it) {
            double mid = 0.5 * (lo + hi);
            if (score(best_theta + mid) > 0.0 && score(best_theta - mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        out.margin = lo;
    }

    for (const auto& [nu, M] : ms) {
        double mn = std::numeric_limits<double>::infinity();
        const int arc_samples = 64;
        for (int k = -arc_samples; k <= arc_samples; ++k) {
            double theta = best_theta + out.margin * k / double(arc_samples) * 0.999;
            const std::complex<double> z1 = std::polar(1.0, theta);
            mn = std::min(mn, std::abs(M.eval({z1, 0.0, 0.0})));
        }
        auto it = out.min_modulus_profile.find(nu);
        if (it == out.min_modulus_profile.end())
            out.min_modulus_profile[nu] = mn;
        else
            it->second = std::min(it->second, mn);
    }
    return out;
}

// Solves r(d delta^{1/eta}, 0, x) = 0 for real x by damped Newton from 0.
inline std::complex<double> solve_e_delta(const PolyQ& r, std::complex<double> d, int eta,
                                          double delta) {
    const PolyD rn = r.to_numeric();
    const PolyD dr3 = rn.wirtinger(2, false);
    const std::complex<double> z1 = d * std::pow(delta, 1.0 / eta);
    auto value = [&](double x) {
        return rn.eval({z1, 0.0, std::complex<double>(x, 0.0)}).real();
    };
    auto slope = [&](double x) {
        return 2.0 * dr3.eval({z1, 0.0, std::complex<double>(x, 0.0)}).real();
    };
    double x = 0.0;
    const double target = 1e-12 * delta;
    for (int it = 0; it < 50; ++it) {
        double f = value(x);
        if (std::abs(f) < target) return {x, 0.0};
        double g = slope(x);
        if (g == 0.0) break;
        double step = -f / g;
        // damping: halve until the residual does not grow
        for (int k = 0; k < 30 && std::abs(value(x + step)) > std::abs(f); ++k)
            step *= 0.5;
        x += step;
    }
    if (std::abs(value(x)) < target) return {x, 0.0};
    throw StageError("solve_e_delta",
                     "no convergence in 50 iterations at delta = " + std::to_string(delta) +
                         "; the jet may not control this scale");
}

struct SliceNormalization {
    double delta = 0.0;
    int eta = 0;
    int m = 0;
    std::complex<double> z1;       // frozen coordinate d delta^{1/eta}
    std::complex<double> e_delta;  // transverse offset with r(tilde_e) = 0
    std::complex<double> dr_dz3, dr_dz2;
    std::vector<std::complex<double>> c;  // c[l] for l = 2..m (c[0], c[1] unused)
    HoloMapD phi;                          // full (zeta1, zeta2, Phi3(zeta''))
    PolyD rho;                             // r o phi, exact numeric composition
    PolyD rho_slice;                       // rho with zeta1 frozen at z1
    std::map<std::pair<int, int>, std::complex<double>> a_jk;  // j,k > 0, j+k <= m
    std::map<int, double> A;               // A_l = max |a_jk|, j+k = l
    double tau = 0.0;
    double pure_residual = 0.0;            // worst pure zeta2 coefficient, order <= m
    double r_residual = 0.0;               // |r(tilde_e)|

    std::array<std::complex<double>, 3> tilde_e() const { return {z1, 0.0, e_delta}; }
};

inline double tau_from_scales(const std::map<int, double>& A, double s) {
    double t = std::numeric_limits<double>::infinity();
    for (const auto& [l, Al] : A)
        if (Al > 0.0) t = std::min(t, std::pow(s / Al, 1.0 / l));
    return t;
}

// Builds Phi = (zeta1, zeta2, Phi3) step by step: an affine change that kills
// the constant and linear slice terms, then one shear per order l = 2..m that
// removes the pure zeta2^l term.
inline SliceNormalization slice_normalize(const PolyQ& r, std::complex<double> z1,
                                          std::complex<double> e_delta, double delta,
                                          int eta, int m) {
    SliceNormalization out;
    out.delta = delta;
    out.eta = eta;
    out.m = m;
    out.z1 = z1;
    out.e_delta = e_delta;

    const PolyD rn = r.to_numeric();
    const std::array<std::complex<double>, 3> te{z1, 0.0, e_delta};
    out.r_residual = std::abs(rn.eval(te));
    out.dr_dz3 = rn.wirtinger(2, false).eval(te);
    out.dr_dz2 = rn.wirtinger(1, false).eval(te);
    if (std::abs(out.dr_dz3) < 1e-14)
        throw StageError("slice_normalize", "vanishing transverse derivative at tilde_e");

    const std::complex<double> Dinv = 1.0 / out.dr_dz3;
    const int cap = PolyD::kNoCap;
    const PolyD zeta2 = PolyD::variable(1, cap);
    const PolyD zeta3 = PolyD::variable(2, cap);

    // Phi3 accumulates e_delta + Dinv*(zeta3/2 - sum c_l zeta2^l - dr_dz2 zeta2)
    PolyD phi3 = PolyD::constant(e_delta, cap) + zeta3.scaled(Dinv * 0.5) -
                 zeta2.scaled(Dinv * out.dr_dz2);
    out.c.assign(m + 1, 0.0);

    auto build_rho = [&](const PolyD& p3) {
        HoloMapD map{{PolyD::variable(0, cap), zeta2, p3}};
        return compose(rn, map);
    };
    auto freeze = [&](const PolyD& p) {
        HoloMapD fr{{PolyD::constant(z1, cap), zeta2, zeta3}};
        return compose(p, fr);
    };

    PolyD rho = build_rho(phi3);
    for (int l = 2; l <= m; ++l) {
        Monomial pure;
        pure.a[1] = l;
        std::complex<double> cl = freeze(rho).coeff(pure);
        out.c[l] = cl;
        if (cl == 0.0) continue;
        // zeta3 |-> zeta3 - 2 c_l zeta2^l inside Phi3
        HoloMapD shear{{PolyD::variable(0, cap), zeta2,
                        zeta3 - power(zeta2, l).scaled(2.0 * cl)}};
        phi3 = compose(phi3, shear);
        rho = build_rho(phi3);
    }

    out.phi = HoloMapD{{PolyD::variable(0, cap), zeta2, phi3}};
    out.rho = rho;
    out.rho_slice = freeze(rho);

    for (const auto& [mo, cc] : out.rho_slice.terms()) {
        if (mo.a[0] || mo.b[0] || mo.a[2] || mo.b[2]) continue;
        int j = mo.a[1], k = mo.b[1];
        if (j + k > m) continue;
        if (j > 0 && k > 0) out.a_jk[{j, k}] = cc;
        if ((j == 0) != (k == 0))
            out.pure_residual = std::max(out.pure_residual, std::abs(cc));
    }
    for (int l = 2; l <= m; ++l) {
        double Al = 0.0;
        for (const auto& [jk, cc] : out.a_jk)
            if (jk.first + jk.second == l) Al = std::max(Al, std::abs(cc));
        out.A[l] = Al;
    }
    out.tau = tau_from_scales(out.A, delta);
    return out;
}

inline std::vector<SliceNormalization> compute_slice_sweep(const PolyQ& r,
                                                           const DirectionChoice& dir,
                                                           const std::vector<double>& deltas,
                                                           int eta, int m) {
    std::vector<SliceNormalization> out;
    for (double delta : deltas) {
        std::complex<double> e = solve_e_delta(r, dir.d, eta, delta);
        std::complex<double> z1 = dir.d * std::pow(delta, 1.0 / eta);
        out.push_back(slice_normalize(r, z1, e, delta, eta, m));
    }
    return out;
}

// One row of a scaling-fit table.
struct FitRow {
    std::string quantity;
    int l = 0;
    int a2 = 0, b2 = 0;
    double target = 0.0;   // predicted exponent
    bool two_sided = false;
    FitResult fit;
    double band_lo = 0.0, band_hi = 0.0;  // value / delta^target over the sweep
    bool zero_values = false;
    bool pass = false;
};

namespace detail {

inline FitRow make_fit_row(std::string quantity, int l, int a2, int b2, double target,
                           bool two_sided, const std::vector<double>& deltas,
                           const std::vector<double>& values, const Options& opt) {
    FitRow row;
    row.quantity = std::move(quantity);
    row.l = l;
    row.a2 = a2;
    row.b2 = b2;
    row.target = target;
    row.two_sided = two_sided;
    bool all_zero = true;
    for (double v : values)
        if (v > 1e-300) all_zero = false;
    if (all_zero) {
        row.zero_values = true;
        // an identically-zero quantity satisfies any upper bound
        row.pass = !two_sided;
        return row;
    }
    row.fit = loglog_fit(deltas, values);
    row.band_lo = std::numeric_limits<double>::infinity();
    row.band_hi = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        double ratio = values[i] / std::pow(deltas[i], target);
        row.band_lo = std::min(row.band_lo, ratio);
        row.band_hi = std::max(row.band_hi, ratio);
    }
    if (row.fit.degenerate) {
        row.pass = false;
        return row;
    }
    if (two_sided)
        row.pass = std::abs(row.fit.slope - target) <= opt.slope_tol &&
                   row.fit.r2 >= opt.r2_min && row.fit.n >= 5;
    else
        row.pass = row.fit.slope >= target - opt.slope_tol && row.fit.n >= 5;
    return row;
}

}  // namespace detail

// |d^l r / dz2^{a2} dzbar2^{b2}| at tilde_e across the sweep, for every split
// of every level l = 1..m; vertex splits get the two-sided check.
inline std::vector<FitRow> verify_r_derivative_scaling(const PolyQ& r,
                                                       const NewtonDiagram& dg,
                                                       const DirectionChoice& dir,
                                                       const std::vector<double>& deltas,
                                                       const Options& opt) {
    if (deltas.size() < 5)
        throw StageError("verify_r_derivative_scaling", "need a sweep of >= 5 deltas");
    std::vector<FitRow> rows;
    const double eta = dg.eta;

    std::vector<std::array<std::complex<double>, 3>> points;
    for (double delta : deltas) {
        std::complex<double> e = solve_e_delta(r, dir.d, dg.eta, delta);
        points.push_back({dir.d * std::pow(delta, 1.0 / dg.eta), 0.0, e});
    }

    for (int l = 1; l <= dg.m; ++l) {
        for (int a2 = 0; a2 <= l; ++a2) {
            const int b2 = l - a2;
            PolyQ d = r;
            if (a2 > 0) d = wirtinger_derivative(d, WirtVar{1, false}, a2);
            if (b2 > 0) d = wirtinger_derivative(d, WirtVar{1, true}, b2);
            PolyD dn = d.to_numeric();
            std::vector<double> vals;
            for (const auto& pt : points) vals.push_back(std::abs(dn.eval(pt)));

            bool vertex_split = false;
            int nu_of_vertex = 0;
            for (int nu = 1; nu <= dg.N(); ++nu)
                if (dg.vertices[nu].second == l)
                    for (const auto& mo : dg.lambda_set)
                        if (NewtonDiagram::projection(mo) == dg.vertices[nu] &&
                            mo.a[1] == a2 && mo.b[1] == b2) {
                            vertex_split = true;
                            nu_of_vertex = nu;
                        }

            double target = vertex_split
                                ? dg.vertices[nu_of_vertex].first / eta
                                : dg.t_of[l].get_d() / eta;
            rows.push_back(detail::make_fit_row("d^" + std::to_string(l) + "r/dz2^" +
                                                    std::to_string(a2) + "dzb2^" +
                                                    std::to_string(b2),
                                                l, a2, b2, target, vertex_split, deltas,
                                                vals, opt));
        }
    }
    return rows;
}

struct RhoFitReport {
    std::vector<FitRow> rows;
    std::vector<double> taus;
    bool tau_monotone = false;
    bool tau_bound_ok = false;  // tau <= (delta/A_m)^{1/m} (1 + 1e-9)
    double e_delta_C = 0.0;     // max |e_delta| / delta
    double max_r_residual_ratio = 0.0;
    double max_pure_residual = 0.0;
};

// c_l decay, vertex derivatives of rho at the slice origin, and the size of
// A_m across the sweep.
inline RhoFitReport verify_rho_derivative_scaling(
    const std::vector<SliceNormalization>& sweep, const NewtonDiagram& dg,
    const Options& opt) {
    if (sweep.size() < 5)
        throw StageError("verify_rho_derivative_scaling", "need a sweep of >= 5 deltas");
    RhoFitReport rep;
    const double eta = dg.eta;
    std::vector<double> deltas;
    for (const auto& s : sweep) {
        deltas.push_back(s.delta);
        rep.taus.push_back(s.tau);
        rep.e_delta_C = std::max(rep.e_delta_C, std::abs(s.e_delta) / s.delta);
        rep.max_r_residual_ratio = std::max(rep.max_r_residual_ratio,
                                            s.r_residual / (1e-12 * s.delta));
        rep.max_pure_residual = std::max(rep.max_pure_residual, s.pure_residual);
    }

    for (int l = 2; l <= dg.m; ++l) {
        std::vector<double> vals;
        for (const auto& s : sweep) vals.push_back(std::abs(s.c[l]));
        rep.rows.push_back(detail::make_fit_row("|c_" + std::to_string(l) + "|", l, 0, 0,
                                                dg.t_of[l].get_d() / eta, false, deltas,
                                                vals, opt));
    }

    for (const auto& mo : dg.lambda_set) {
        auto pr = NewtonDiagram::projection(mo);
        std::vector<double> vals;
        for (const auto& s : sweep) {
            PolyD d = s.rho_slice;
            for (int k = 0; k < mo.a[1]; ++k) d = d.wirtinger(1, false);
            for (int k = 0; k < mo.b[1]; ++k) d = d.wirtinger(1, true);
            vals.push_back(std::abs(d.eval({0.0, 0.0, 0.0})));
        }
        rep.rows.push_back(detail::make_fit_row(
            "d^" + std::to_string(pr.second) + "rho/dz2^" + std::to_string(mo.a[1]) +
                "dzb2^" + std::to_string(mo.b[1]),
            pr.second, mo.a[1], mo.b[1], pr.first / eta, true, deltas, vals, opt));
    }

    {
        std::vector<double> vals;
        for (const auto& s : sweep) vals.push_back(s.A.count(dg.m) ? s.A.at(dg.m) : 0.0);
        rep.rows.push_back(
            detail::make_fit_row("A_m", dg.m, 0, 0, 0.0, true, deltas, vals, opt));
    }

    rep.tau_monotone = true;
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        // sweep is ordered by descending delta in the default spec
        bool increasing_delta = deltas[i] > deltas[i - 1];
        double lo = increasing_delta ? rep.taus[i - 1] : rep.taus[i];
        double hi = increasing_delta ? rep.taus[i] : rep.taus[i - 1];
        if (lo > hi * (1.0 + 1e-12)) rep.tau_monotone = false;
    }
    rep.tau_bound_ok = true;
    for (const auto& s : sweep) {
        double Am = s.A.count(dg.m) ? s.A.at(dg.m) : 0.0;
        if (Am > 0.0 &&
            s.tau > std::pow(s.delta / Am, 1.0 / dg.m) * (1.0 + 1e-9))
            rep.tau_bound_ok = false;
    }
    return rep;
}

}  // namespace holder3
