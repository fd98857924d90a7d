#include "gaussbal/gauss.hpp"

#include "gaussbal/numerics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gaussbal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPhiInvClamp = 1e-16;
} // namespace

double std_normal_pdf(double x) {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double phi(double t) {
    if (std::isnan(t)) throw std::invalid_argument("phi: NaN argument");
    if (t == kInf) return 1.0;
    if (t == -kInf) return 0.0;
    // erfc is the accurate route in both tails.
    return 0.5 * std::erfc(-t / std::sqrt(2.0));
}

double phi_inv(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("phi_inv: p outside [0,1]");
    if (p < kPhiInvClamp) return -kInf;
    if (p > 1.0 - kPhiInvClamp) return kInf;
    // Bisection on [-8.3, 8.3] to a coarse bracket, then Newton refinements.
    double lo = -8.3, hi = 8.3;
    while (hi - lo > 1e-3) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) < p) lo = mid; else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        double d = std_normal_pdf(x);
        if (d <= 0) break;
        double step = (phi(x) - p) / d;
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return x;
}

double psi(double x) {
    if (!(x >= 0.0)) throw std::domain_error("psi: x must be >= 0");
    if (x == kInf) return 1.0;
    return std::erf(x / std::sqrt(2.0));
}

double psi_inv(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("psi_inv: p outside [0,1]");
    return phi_inv(0.5 * (1.0 + p));
}

MillsTail mills_tail(double A) {
    if (!(A > 0.0)) throw std::domain_error("mills_tail: A must be > 0");
    MillsTail out;
    out.value = phi(-A);
    out.bound = std::isinf(A) ? 0.0 : std::exp(-0.5 * A * A) / (A * kSqrt2Pi);
    return out;
}

RadiusDerived radius_derived(double r) {
    if (!(r >= 0.0)) throw std::domain_error("radius_derived: r must be >= 0");
    RadiusDerived out;
    out.r = r;
    out.p = psi(r);
    out.w = -phi_inv(out.p);
    return out;
}

const LemmaConstants& lemma_constants() {
    static const LemmaConstants c = [] {
        LemmaConstants out;
        // 2 + e^{-l^2/2} = l sqrt(2 pi); LHS - RHS strictly decreasing.
        out.lambda0 = bisect_root(
            [](double l) { return l * kSqrt2Pi - 2.0 - std::exp(-0.5 * l * l); },
            0.1, 3.0, 1e-12);
        // w_r - r strictly decreasing in r.
        out.r0 = bisect_root(
            [&](double r) { return radius_derived(r).w - r - out.lambda0; },
            0.01, 0.5, 1e-12);
        return out;
    }();
    return c;
}

// --- sampler ---------------------------------------------------------------

// The mt19937_64 raw-word sequence is pinned by the standard; the normal
// variates come from an explicit Box-Muller so the double stream is portable
// too (std::normal_distribution is implementation-defined).

GaussianSampler::GaussianSampler(std::uint64_t seed, int dim)
    : eng_(seed), dim_(dim), spare_(0), has_spare_(false) {
    if (dim < 1) throw std::domain_error("GaussianSampler: dim must be >= 1");
}

double GaussianSampler::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
}

void GaussianSampler::next(std::span<double> out) {
    if (static_cast<int>(out.size()) != dim_)
        throw std::invalid_argument("GaussianSampler::next: wrong span size");
    for (auto& v : out) v = next_normal();
}

std::vector<double> GaussianSampler::next_point() {
    std::vector<double> p(dim_);
    next(std::span<double>(p));
    return p;
}

std::uint64_t GaussianSampler::derive_seed(std::uint64_t seed, std::uint64_t worker) {
    // splitmix64 step on (seed, worker)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (worker + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace gaussbal
