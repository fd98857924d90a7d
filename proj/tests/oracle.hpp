#pragma once

// Test-side oracles, kept independent of the library code paths they check.
// Phi comes from composite Simpson on the density with tail truncation at
// -8.5 (tail mass < 1e-17), panels doubled until the value is stable to
// 1e-13; the inverse is plain bisection on that oracle.

#include <cmath>
#include <cstdint>
#include <functional>

namespace oracle {

inline double phi_simpson(double t) {
    if (t <= -8.5) return 0.0;
    if (t >= 8.5) return 1.0;
    const double a = -8.5;
    auto f = [](double u) { return std::exp(-0.5 * u * u) / 2.5066282746310005024; };
    auto simpson = [&](std::int64_t n) {
        double h = (t - a) / n;
        double s = f(a) + f(t);
        for (std::int64_t i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    double prev = simpson(64);
    for (std::int64_t n = 128; n <= (1 << 22); n *= 2) {
        double cur = simpson(n);
        if (std::abs(cur - prev) < 1e-13) return cur + (cur - prev) / 15.0;
        prev = cur;
    }
    return prev;
}

inline double phi_inv_bisect(double p) {
    double lo = -8.0, hi = 8.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        double mid = 0.5 * (lo + hi);
        if (phi_simpson(mid) < p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double psi_oracle(double x) { return phi_simpson(x) - phi_simpson(-x); }

} // namespace oracle
