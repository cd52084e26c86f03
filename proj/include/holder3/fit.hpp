#pragma once

// Least-squares slope fits in log-log coordinates, used to compare measured
// decay rates against predicted exponents.

#include <cmath>
#include <vector>

namespace holder3 {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
    bool degenerate = false;  // fewer than 2 usable points or non-finite data
};

inline FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    FitResult f;
    f.n = static_cast<int>(x.size());
    if (x.size() != y.size() || x.size() < 2) {
        f.degenerate = true;
        return f;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            f.degenerate = true;
            return f;
        }
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double n = double(x.size());
    double den = n * sxx - sx * sx;
    if (den == 0.0) {
        f.degenerate = true;
        return f;
    }
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    // constant data fits its own mean exactly
    f.r2 = (ss_tot <= 1e-30) ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

// values(delta) fitted as C * delta^slope; zero/denormal values flagged.
inline FitResult loglog_fit(const std::vector<double>& deltas,
                            const std::vector<double>& values) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(values[i] > 1e-300)) {
            FitResult f;
            f.degenerate = true;
            f.n = static_cast<int>(deltas.size());
            return f;
        }
        lx.push_back(std::log(deltas[i]));
        ly.push_back(std::log(values[i]));
    }
    return linear_fit(lx, ly);
}

}  // namespace holder3
