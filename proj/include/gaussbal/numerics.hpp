#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gaussbal {

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
/// Plain bisection down to interval width <= tol.
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: no sign change on bracket");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; } else { hi = mid; }
    }
    return 0.5 * (lo + hi);
}

/// Boundary between a true-region and a false-region of a predicate.
/// Requires pred(t_true) and !pred(t_false); returns a point within tol of
/// the transition, on the true side.
template <class P>
double bisect_predicate(P&& pred, double t_true, double t_false, double tol, int max_iter = 200) {
    for (int i = 0; i < max_iter && std::abs(t_false - t_true) > tol; ++i) {
        double mid = 0.5 * (t_true + t_false);
        if (pred(mid)) t_true = mid; else t_false = mid;
    }
    return t_true;
}

/// Maximizer of a unimodal (e.g. concave) f on [lo, hi] by golden-section.
template <class F>
double golden_max(F&& f, double lo, double hi, double tol, int max_iter = 300) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && b - a > tol; ++i) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - invphi * (b - a); fc = f(c); }
        else         { a = c; c = d; fc = fd; d = a + invphi * (b - a); fd = f(d); }
    }
    return 0.5 * (a + b);
}

namespace detail {
template <class F>
double adsimp_rec(F& f, double a, double b, double fa, double fm, double fb,
                  double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adsimp_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1)
         + adsimp_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
} // namespace detail

/// Adaptive Simpson quadrature to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return detail::adsimp_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Composite Simpson with n panels (n made even internally).
template <class F>
double composite_simpson(F&& f, double a, double b, int n) {
    if (a == b) return 0.0;
    if (n % 2) ++n;
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace gaussbal
