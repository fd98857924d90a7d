#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gaussbal {

inline constexpr double kSqrt2Pi = 2.5066282746310005024;

/// Standard normal density.
double std_normal_pdf(double x);

/// Phi(t) = gamma_1((-inf, t]), the standard normal CDF. Accepts +-inf.
double phi(double t);

/// Inverse of Phi on [0, 1]. p below 1e-16 maps to -inf, above 1 - 1e-16
/// to +inf. Throws std::domain_error outside [0, 1].
double phi_inv(double p);

/// Psi(x) = 2 Phi(x) - 1 = gamma_1([-x, x]) for x >= 0 (+inf allowed).
double psi(double x);

/// Inverse of Psi on [0, 1]; psi_inv(1) = +inf.
double psi_inv(double p);

struct MillsTail {
    double value;  // T(A) = Phi(-A)
    double bound;  // e^{-A^2/2} / (A sqrt(2 pi)), always >= value
};

/// Upper Gaussian tail with its classical upper bound. Requires A > 0.
MillsTail mills_tail(double A);

/// Scalars attached to a transform radius r: p = gamma_1([-r, r]) and the
/// threshold w with Phi(-w) = p. w = +inf at r = 0.
struct RadiusDerived {
    double r;
    double p;
    double w;
};

RadiusDerived radius_derived(double r);

struct LemmaConstants {
    double lambda0;  // root of 2 + e^{-l^2/2} = l sqrt(2 pi)
    double r0;       // root of w_r - r = lambda0
};

/// Both roots by bisection (monotone on the brackets), cached after the
/// first call. r0 > 0.149 > 1/7.
const LemmaConstants& lemma_constants();

/// Deterministic stream of i.i.d. standard Gaussian vectors (Box-Muller over
/// a hand-rolled mt19937_64 -> [0,1) mapping, so identical seeds reproduce
/// identical streams on any platform). Single consumer per instance.
class GaussianSampler {
public:
    GaussianSampler(std::uint64_t seed, int dim);

    int dim() const { return dim_; }

    /// Fills out (size dim) with the next point of the stream.
    void next(std::span<double> out);

    std::vector<double> next_point();

    /// Stable per-worker seed derivation for parallel estimators.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t worker);

private:
    double next_normal();

    std::mt19937_64 eng_; // raw-word output is pinned by the standard
    int dim_;
    double spare_;
    bool has_spare_;
};

} // namespace gaussbal
