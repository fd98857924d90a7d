#pragma once

#include "gaussbal/bodies.hpp"
#include "gaussbal/gauss.hpp"

#include <cstdint>

namespace gaussbal {

/// Maximum lazy-wrapper nesting before construction throws.
inline constexpr int kMaxTransformDepth = 32;

/// Orthogonal map with rho(u) = |u| e_n (a Householder reflection), plus
/// its inverse (itself).
class Rotation {
public:
    explicit Rotation(int dim); // identity
    static Rotation to_last_axis(std::span<const double> u);

    int dim() const { return dim_; }
    Vec apply(std::span<const double> x) const;
    Vec apply_inv(std::span<const double> x) const;

private:
    int dim_;
    bool identity_ = true;
    Vec v_; // Householder vector, |v| = 1 when !identity_
};

Rotation rotate_to_axis(std::span<const double> u); // throws on u = 0

/// Oracle for rho(K) (or rho^{-1}(K) when inverse).
BodyPtr rotate_body(BodyPtr body, Rotation rho, bool inverse = false);

enum class TransformVariant { circ, star };

/// Lazy oracle for K o u (Gaussian slice condition gamma_1(I_y) >= p_r) or
/// K * u (Euclidean condition |I_y| >= 2r). Fibers over y in u-perp:
///   [a_y - r, b_y + r] when the condition holds, empty otherwise.
class CircTransformedBody : public Body {
public:
    CircTransformedBody(BodyPtr base, Vec u, TransformVariant variant);

    int dim() const override { return base_->dim(); }
    bool contains(std::span<const double> x) const override;
    Interval slice(std::span<const double> base, std::span<const double> dir) const override;
    std::optional<Vec> preferred_fiber() const override;
    bool cheap_slices() const override;
    int transform_depth() const override { return depth_; }
    std::optional<Vec> interior_hint() const override;

    const RadiusDerived& derived() const { return rd_; }
    TransformVariant variant() const { return variant_; }
    const Vec& u() const { return u_; }
    BodyPtr base() const { return base_; }

    /// Fiber of the transformed body over the (already projected) point y.
    Interval fiber(std::span<const double> y) const;

    /// Slice condition applied to a base-body fiber.
    bool z_condition(const Interval& base_fiber) const;

private:
    BodyPtr base_;
    Vec u_, u_hat_;
    RadiusDerived rd_;
    TransformVariant variant_;
    int depth_;
};

/// K o u; u = 0 returns K unchanged. Symmetric in u.
BodyPtr circ_transform(BodyPtr body, Vec u);

/// Banaszczyk's K * u; u = 0 returns K unchanged.
BodyPtr star_transform(BodyPtr body, Vec u);

/// Ehrhard symmetrization E(K): hypograph of psi(y) = Phi^{-1}(gamma_1(I_y)).
std::shared_ptr<const HypographBody> ehrhard_E(BodyPtr body);

struct E2Options {
    /// Monte Carlo sample count for section measures when dim >= 3.
    std::int64_t samples = 4'000'000;
    std::uint64_t seed = 20240501;
    /// z-grid for non-hypograph bodies of dim >= 3 (per-section MC).
    int z_grid = 257;
    double z_span = 8.5;
};

/// Ehrhard symmetrization E2(K): planar hypograph of
/// theta(z) = Phi^{-1}(gamma_{n-1}(K_z)). Exact for n = 2. For hypograph
/// bases of any dimension the sections are superlevel sets of psi, measured
/// with one shared sample set (empirical CCDF, exact and lazily evaluated);
/// other bodies of dim >= 3 get per-section Monte Carlo on a z-grid with
/// monotone interpolation.
std::shared_ptr<const PlanarHypographBody> ehrhard_E2(BodyPtr body, const E2Options& opt = {});

/// L_{theta_r} with theta_r(z) = theta(z - r) for z >= -w_r + r and
/// theta(-w_r) below; equals L o (r e_2) for non-increasing concave theta.
std::shared_ptr<const PlanarHypographBody> planar_T_r(
    std::shared_ptr<const PlanarHypographBody> L, double r);

/// Hypograph shift psi_r = psi + r where psi >= -w_r, -inf elsewhere;
/// equals Lambda o (r e_n).
std::shared_ptr<const HypographBody> hypograph_shift(
    std::shared_ptr<const HypographBody> body, double r);

} // namespace gaussbal
