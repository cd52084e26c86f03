#pragma once

// Run options: the paper-level "small constants" plus sweep/sampling knobs.
// Acceptance thresholds live here, not in library code.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "holder3/errors.hpp"

namespace holder3 {

struct Options {
    double a = 0.25;        // chart box half-size
    double epsilon0 = 0.1;  // pushed-out domain margin
    double c = 0.1;         // z1-slab half-width factor
    double b = 1.0;         // witness probe depth factor
    double a1 = 0.05;       // polydisc scale

    std::string deltas = "1e-2:1e-6:9";          // geometric sweep spec
    std::string geometry_deltas = "1e-3,1e-4,1e-5";
    long samples = 100000;      // Halton points per geometry check
    long beta_samples = 10000;  // shell samples per delta for the sup-norm fit
    long seed = 0;              // Halton offset
    int theta_samples = 720;
    int quadrature_nodes = 256;
    int psh_points_per_dim = 9;
    double psh_radius = 0.5;
    double psh_tol = 1e-9;
    double slope_tol = 0.05;
    double beta_slope_tol = 0.1;
    double r2_min = 0.99;
    double containment_max_C = 10.0;
    std::string witness = "demo";  // "demo" or "grid:<file>"

    std::vector<double> delta_sweep() const { return parse_sweep(deltas); }
    std::vector<double> geometry_sweep() const { return parse_list(geometry_deltas); }

    // "start:end:count" geometric, or a comma-separated list
    static std::vector<double> parse_sweep(const std::string& spec) {
        if (spec.find(':') == std::string::npos) return parse_list(spec);
        double lo, hi;
        int n;
        char c1, c2;
        std::istringstream is(spec);
        if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 2)
            throw Error("bad delta sweep spec: " + spec);
        std::vector<double> out;
        for (int k = 0; k < n; ++k)
            out.push_back(lo * std::pow(hi / lo, double(k) / double(n - 1)));
        return out;
    }

    static std::vector<double> parse_list(const std::string& spec) {
        std::vector<double> out;
        std::istringstream is(spec);
        std::string item;
        while (std::getline(is, item, ',')) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            out.push_back(std::stod(item));
        }
        if (out.empty()) throw Error("empty delta list: " + spec);
        return out;
    }

    void set(const std::string& key, const std::string& value) {
        auto d = [&] { return std::stod(value); };
        auto l = [&] { return std::stol(value); };
        if (key == "a") a = d();
        else if (key == "epsilon0") epsilon0 = d();
        else if (key == "c") c = d();
        else if (key == "b") b = d();
        else if (key == "a1") a1 = d();
        else if (key == "deltas") deltas = value;
        else if (key == "geometry_deltas") geometry_deltas = value;
        else if (key == "samples") samples = l();
        else if (key == "beta_samples") beta_samples = l();
        else if (key == "seed") seed = l();
        else if (key == "theta_samples") theta_samples = static_cast<int>(l());
        else if (key == "quadrature_nodes") quadrature_nodes = static_cast<int>(l());
        else if (key == "psh_points_per_dim") psh_points_per_dim = static_cast<int>(l());
        else if (key == "psh_radius") psh_radius = d();
        else if (key == "psh_tol") psh_tol = d();
        else if (key == "slope_tol") slope_tol = d();
        else if (key == "beta_slope_tol") beta_slope_tol = d();
        else if (key == "r2_min") r2_min = d();
        else if (key == "containment_max_C") containment_max_C = d();
        else if (key == "witness") witness = value;
        else throw Error("unknown config key: " + key);
    }

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw Error("config line " + std::to_string(lineno) +
                                ": expected key = value");
                continue;
            }
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }

    // Canonical text of every option, used for the report's config hash.
    std::string canonical_text() const {
        std::ostringstream os;
        os.precision(17);
        os << "a=" << a << "\na1=" << a1 << "\nb=" << b
           << "\nbeta_samples=" << beta_samples << "\nbeta_slope_tol=" << beta_slope_tol
           << "\nc=" << c << "\ncontainment_max_C=" << containment_max_C
           << "\ndeltas=" << deltas << "\nepsilon0=" << epsilon0
           << "\ngeometry_deltas=" << geometry_deltas
           << "\npsh_points_per_dim=" << psh_points_per_dim
           << "\npsh_radius=" << psh_radius << "\npsh_tol=" << psh_tol
           << "\nquadrature_nodes=" << quadrature_nodes << "\nr2_min=" << r2_min
           << "\nsamples=" << samples << "\nseed=" << seed
           << "\nslope_tol=" << slope_tol << "\ntheta_samples=" << theta_samples
           << "\nwitness=" << witness << "\n";
        return os.str();
    }
};

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace holder3
