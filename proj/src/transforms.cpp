#include "gaussbal/transforms.hpp"

#include "gaussbal/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace gaussbal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZConditionGrace = 1e-12;
} // namespace

// --- Rotation -----------------------------------------------------------------

Rotation::Rotation(int dim) : dim_(dim) {}

Rotation Rotation::to_last_axis(std::span<const double> u) {
    double n = norm2(u);
    if (n == 0) throw std::invalid_argument("rotate_to_axis: zero vector");
    Rotation rho(static_cast<int>(u.size()));
    Vec v(u.begin(), u.end());
    v.back() -= n; // u - |u| e_n
    double vn = norm2(v);
    if (vn < 1e-14 * n) return rho; // already on the axis
    for (auto& w : v) w /= vn;
    rho.identity_ = false;
    rho.v_ = std::move(v);
    return rho;
}

Vec Rotation::apply(std::span<const double> x) const {
    Vec y(x.begin(), x.end());
    if (identity_) return y;
    double c = 2.0 * dot(v_, x);
    for (int i = 0; i < dim_; ++i) y[i] -= c * v_[i];
    return y;
}

Vec Rotation::apply_inv(std::span<const double> x) const {
    return apply(x); // Householder reflections are involutions
}

Rotation rotate_to_axis(std::span<const double> u) {
    return Rotation::to_last_axis(u);
}

namespace {

class RotatedBody : public Body {
public:
    RotatedBody(BodyPtr base, Rotation rho, bool inverse)
        : base_(std::move(base)), rho_(std::move(rho)), inverse_(inverse) {}

    int dim() const override { return base_->dim(); }

    bool contains(std::span<const double> x) const override {
        return base_->contains(pull(x));
    }

    Interval slice(std::span<const double> base, std::span<const double> dir) const override {
        return base_->slice(pull(base), pull(dir));
    }

    ExtReal support(double beta) const override {
        Vec d = pull(Vec{std::cos(beta), std::sin(beta)});
        return base_->support(std::atan2(d[1], d[0]));
    }

    std::optional<Vec> preferred_fiber() const override {
        auto f = base_->preferred_fiber();
        if (!f) return std::nullopt;
        return push(*f);
    }

    bool cheap_slices() const override { return base_->cheap_slices(); }
    int transform_depth() const override { return base_->transform_depth() + 1; }

    std::optional<Vec> interior_hint() const override {
        auto h = base_->interior_hint();
        if (!h) return std::nullopt;
        return push(*h);
    }

private:
    Vec pull(std::span<const double> x) const {
        return inverse_ ? rho_.apply(x) : rho_.apply_inv(x);
    }
    Vec push(std::span<const double> x) const {
        return inverse_ ? rho_.apply_inv(x) : rho_.apply(x);
    }

    BodyPtr base_;
    Rotation rho_;
    bool inverse_;
};

} // namespace

BodyPtr rotate_body(BodyPtr body, Rotation rho, bool inverse) {
    return std::make_shared<RotatedBody>(std::move(body), std::move(rho), inverse);
}

// --- Banaszczyk transforms -------------------------------------------------------

CircTransformedBody::CircTransformedBody(BodyPtr base, Vec u, TransformVariant variant)
    : base_(std::move(base)), u_(std::move(u)), variant_(variant) {
    double r = norm2(u_);
    if (r == 0) throw std::invalid_argument("CircTransformedBody: u = 0 handled by factories");
    u_hat_ = normalized(u_);
    rd_ = radius_derived(r);
    depth_ = base_->transform_depth() + 1;
    if (depth_ > kMaxTransformDepth)
        throw std::runtime_error("transform nesting exceeds depth 32");
}

bool CircTransformedBody::z_condition(const Interval& base_fiber) const {
    if (variant_ == TransformVariant::circ)
        return gamma1(base_fiber) >= rd_.p - kZConditionGrace;
    if (base_fiber.is_empty) return false;
    return base_fiber.length() >= 2.0 * rd_.r - kZConditionGrace;
}

Interval CircTransformedBody::fiber(std::span<const double> y) const {
    Interval I = base_->slice(y, u_hat_);
    if (!z_condition(I)) return Interval::empty();
    return I.extended(rd_.r);
}

bool CircTransformedBody::contains(std::span<const double> x) const {
    double t = dot(x, u_hat_);
    Vec y(x.begin(), x.end());
    for (size_t i = 0; i < y.size(); ++i) y[i] -= t * u_hat_[i];
    Interval F = fiber(y);
    return F.contains(t, kMembershipTol);
}

Interval CircTransformedBody::slice(std::span<const double> base,
                                    std::span<const double> dir) const {
    double align = dot(dir, u_hat_);
    if (std::abs(std::abs(align) - 1.0) < 1e-12) {
        double t0 = dot(base, u_hat_);
        Vec y(base.begin(), base.end());
        for (size_t i = 0; i < y.size(); ++i) y[i] -= t0 * u_hat_[i];
        Interval F = fiber(y);
        if (F.is_empty) return F;
        if (align > 0) return {F.lo - t0, F.hi - t0};
        ExtReal lo = F.hi.is_finite() ? ExtReal(t0 - F.hi.value()) : ExtReal::neg_inf();
        ExtReal hi = F.lo.is_finite() ? ExtReal(t0 - F.lo.value()) : ExtReal::pos_inf();
        return {lo, hi};
    }
    return Body::slice(base, dir);
}

std::optional<Vec> CircTransformedBody::preferred_fiber() const { return u_hat_; }

bool CircTransformedBody::cheap_slices() const { return base_->cheap_slices(); }

std::optional<Vec> CircTransformedBody::interior_hint() const {
    return base_->interior_hint();
}

namespace {

BodyPtr make_transform(BodyPtr body, Vec u, TransformVariant variant) {
    if (norm2(u) == 0) return body; // K o 0 = K * 0 = K
    return std::make_shared<CircTransformedBody>(std::move(body), std::move(u), variant);
}

} // namespace

BodyPtr circ_transform(BodyPtr body, Vec u) {
    return make_transform(std::move(body), std::move(u), TransformVariant::circ);
}

BodyPtr star_transform(BodyPtr body, Vec u) {
    return make_transform(std::move(body), std::move(u), TransformVariant::star);
}

// --- Ehrhard symmetrizations --------------------------------------------------------

std::shared_ptr<const HypographBody> ehrhard_E(BodyPtr body) {
    int n = body->dim();
    if (n < 2) throw std::invalid_argument("ehrhard_E: dim must be >= 2");
    Vec en(n, 0.0);
    en[n - 1] = 1.0;
    PsiFn psi = [fixed = std::move(body), en, n](std::span<const double> y) -> ExtReal {
        Vec p(n, 0.0);
        std::copy(y.begin(), y.end(), p.begin());
        Interval I = fixed->slice(p, en);
        return ExtReal(phi_inv(gamma1(I)));
    };
    return std::make_shared<HypographBody>(n, std::move(psi));
}

std::shared_ptr<const PlanarHypographBody> ehrhard_E2(BodyPtr body, const E2Options& opt) {
    int n = body->dim();
    if (n < 2) throw std::invalid_argument("ehrhard_E2: dim must be >= 2");

    // Sections of a hypograph are superlevel sets of psi, so theta is
    // non-increasing; general bodies need not shrink monotonically.
    const bool hyp_base = static_cast<bool>(std::dynamic_pointer_cast<const HypographBody>(body));

    if (n == 2) {
        ThetaFn theta = [fixed = std::move(body)](double z) -> ExtReal {
            Vec p{0.0, z};
            Vec e1{1.0, 0.0};
            Interval I = fixed->slice(p, e1);
            return ExtReal(phi_inv(gamma1(I)));
        };
        return std::make_shared<PlanarHypographBody>(std::move(theta), hyp_base);
    }

    if (auto hyp = std::dynamic_pointer_cast<const HypographBody>(body)) {
        // Sections are superlevel sets {psi >= z}; one shared sample set
        // gives the whole empirical CCDF, queried exactly by binary search.
        auto vals = std::make_shared<std::vector<double>>();
        vals->reserve(opt.samples);
        GaussianSampler sampler(opt.seed, n - 1);
        Vec y(n - 1);
        for (std::int64_t i = 0; i < opt.samples; ++i) {
            sampler.next(y);
            vals->push_back(hyp->psi(y).value());
        }
        std::sort(vals->begin(), vals->end());
        const double N = static_cast<double>(vals->size());
        ThetaFn theta = [vals, N](double z) -> ExtReal {
            auto it = std::lower_bound(vals->begin(), vals->end(), z);
            double frac = static_cast<double>(vals->end() - it) / N;
            return ExtReal(phi_inv(frac));
        };
        return std::make_shared<PlanarHypographBody>(std::move(theta), true);
    }

    // General body, dim >= 3: per-section Monte Carlo on a z-grid, monotone
    // piecewise-linear interpolation in between.
    const int m = opt.z_grid;
    auto zs = std::make_shared<std::vector<double>>(m);
    auto th = std::make_shared<std::vector<double>>(m);
    std::int64_t per_section = std::max<std::int64_t>(1000, opt.samples / m);
    GaussianSampler sampler(opt.seed, n - 1);
    Vec p(n);
    for (int i = 0; i < m; ++i) {
        double z = -opt.z_span + 2 * opt.z_span * i / (m - 1);
        (*zs)[i] = z;
        std::int64_t hits = 0;
        for (std::int64_t k = 0; k < per_section; ++k) {
            sampler.next(std::span<double>(p.data(), n - 1));
            p[n - 1] = z;
            if (body->contains(p)) ++hits;
        }
        (*th)[i] = phi_inv(static_cast<double>(hits) / per_section);
    }
    ThetaFn theta = [zs, th](double z) -> ExtReal {
        const auto& Z = *zs;
        const auto& T = *th;
        if (z <= Z.front()) return ExtReal(T.front());
        if (z >= Z.back()) return ExtReal(T.back());
        auto it = std::upper_bound(Z.begin(), Z.end(), z);
        size_t j = static_cast<size_t>(it - Z.begin());
        double t = (z - Z[j - 1]) / (Z[j] - Z[j - 1]);
        double a = T[j - 1], b = T[j];
        if (std::isinf(a) || std::isinf(b)) return ExtReal(t < 0.5 ? a : b);
        return ExtReal(a + t * (b - a));
    };
    return std::make_shared<PlanarHypographBody>(std::move(theta), false);
}

std::shared_ptr<const PlanarHypographBody> planar_T_r(
    std::shared_ptr<const PlanarHypographBody> L, double r) {
    if (!(r >= 0)) throw std::domain_error("planar_T_r: r must be >= 0");
    if (!L->non_increasing())
        throw std::invalid_argument("planar_T_r: theta must be non-increasing");
    if (r == 0) return L;
    RadiusDerived rd = radius_derived(r);
    ThetaFn theta_r = [L, rd](double z) -> ExtReal {
        if (z >= -rd.w + rd.r) return L->theta(z - rd.r);
        return L->theta(-rd.w);
    };
    return std::make_shared<PlanarHypographBody>(std::move(theta_r), true);
}

std::shared_ptr<const HypographBody> hypograph_shift(
    std::shared_ptr<const HypographBody> body, double r) {
    if (!(r >= 0)) throw std::domain_error("hypograph_shift: r must be >= 0");
    if (r == 0) return body;
    RadiusDerived rd = radius_derived(r);
    int n = body->dim();
    PsiFn psi_r = [body, rd](std::span<const double> y) -> ExtReal {
        ExtReal v = body->psi(y);
        if (v >= ExtReal(-rd.w)) return v + rd.r;
        return ExtReal::neg_inf();
    };
    return std::make_shared<HypographBody>(n, std::move(psi_r));
}

} // namespace gaussbal
