#pragma once

// Halton low-discrepancy sampler with a seedable index offset.  Used for all
// sup-type sampled verdicts so that runs are reproducible point-for-point.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace holder3 {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= double(base);
        r += f * double(i % base);
        i /= base;
    }
    return r;
}

template <int Dim>
class Halton {
  public:
    explicit Halton(long seed = 0) : index_(1 + static_cast<std::uint64_t>(seed)) {}

    std::array<double, Dim> next() {
        static constexpr std::array<std::uint64_t, 6> bases{2, 3, 5, 7, 11, 13};
        static_assert(Dim <= 6);
        std::array<double, Dim> u{};
        for (int d = 0; d < Dim; ++d) u[d] = radical_inverse(index_, bases[d]);
        ++index_;
        return u;
    }

  private:
    std::uint64_t index_;
};

// (u,v) in [0,1)^2 -> uniform point of the disc of radius R about c.
inline std::complex<double> to_disc(double u, double v, double R,
                                    std::complex<double> c = 0.0) {
    double r = R * std::sqrt(u);
    double th = 2.0 * M_PI * v;
    return c + std::polar(r, th);
}

// uniform point of the annulus r0 <= |z - c| <= r1
inline std::complex<double> to_annulus(double u, double v, double r0, double r1,
                                       std::complex<double> c = 0.0) {
    double r = std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
    return c + std::polar(r, 2.0 * M_PI * v);
}

}  // namespace holder3
