#pragma once

#include <random>
#include <string>

#include "holder3/holder3.hpp"

namespace th {

using namespace holder3;

// parse without the real-valuedness requirement (test scaffolding)
inline PolyQ P(const std::string& s, int cap = PolyQ::kNoCap) {
    return ExprParser(s, ExprParser::Mode::Domain, cap).parse();
}

inline PolyQ R(const std::string& s, int cap) { return parse_defining_function(s, cap); }

inline CurveJet curve(const std::string& s, int cap) { return parse_curve(s, cap); }

inline Monomial mono(std::array<int, 3> a, std::array<int, 3> b) {
    Monomial m;
    m.a = a;
    m.b = b;
    return m;
}

inline Rational rand_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    return Rational(num(rng), den(rng));
}

inline CRat rand_crat(std::mt19937_64& rng) {
    return CRat(rand_rational(rng), rand_rational(rng));
}

inline Monomial rand_monomial(std::mt19937_64& rng, int max_exp = 2) {
    std::uniform_int_distribution<int> e(0, max_exp);
    Monomial m;
    for (int i = 0; i < 3; ++i) {
        m.a[i] = e(rng);
        m.b[i] = e(rng);
    }
    return m;
}

inline PolyQ rand_poly(std::mt19937_64& rng, int max_terms = 4,
                       int cap = PolyQ::kNoCap) {
    std::uniform_int_distribution<int> n(1, max_terms);
    PolyQ p(cap);
    int k = n(rng);
    for (int i = 0; i < k; ++i) p.add_term(rand_monomial(rng), rand_crat(rng));
    return p;
}

inline PolyQ rand_real_poly(std::mt19937_64& rng, int max_terms = 3,
                            int cap = PolyQ::kNoCap) {
    PolyQ p = rand_poly(rng, max_terms, cap);
    return p + p.conjugated();
}

// holomorphic map fixing the origin, low degree, small support
inline HoloMapQ rand_holo_map(std::mt19937_64& rng, int cap = PolyQ::kNoCap) {
    HoloMapQ m = HoloMapQ::identity(cap);
    std::uniform_int_distribution<int> var(0, 2), deg(1, 2), coin(0, 1);
    for (int i = 0; i < 3; ++i) {
        int extras = coin(rng) + 1;
        for (int k = 0; k < extras; ++k) {
            Monomial mo;
            mo.a[var(rng)] += deg(rng);
            m.comp[i].add_term(mo, rand_crat(rng));
        }
    }
    return m;
}

inline std::complex<double> rand_point_coord(std::mt19937_64& rng, double radius = 0.8) {
    std::uniform_real_distribution<double> u(-radius, radius);
    return {u(rng), u(rng)};
}

inline std::array<std::complex<double>, 3> rand_point(std::mt19937_64& rng,
                                                      double radius = 0.8) {
    return {rand_point_coord(rng, radius), rand_point_coord(rng, radius),
            rand_point_coord(rng, radius)};
}

inline std::string data_file(const std::string& name) {
    return std::string(HOLDER3_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing data file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace th
