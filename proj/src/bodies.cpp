#include "gaussbal/bodies.hpp"

#include "gaussbal/gauss.hpp"
#include "gaussbal/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace gaussbal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kParallelTol = 1e-14;
} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec normalized(std::span<const double> a) {
    double n = norm2(a);
    if (n == 0) throw std::invalid_argument("normalized: zero vector");
    Vec out(a.begin(), a.end());
    for (auto& v : out) v /= n;
    return out;
}

// --- Interval ----------------------------------------------------------------

double Interval::length() const {
    if (is_empty) return 0.0;
    if (!lo.is_finite() || !hi.is_finite()) return kInf;
    return hi.value() - lo.value();
}

bool Interval::contains(double t, double tol) const {
    if (is_empty) return false;
    return lo.value() - tol <= t && t <= hi.value() + tol;
}

Interval Interval::intersect(const Interval& o) const {
    if (is_empty || o.is_empty) return empty();
    ExtReal l = std::max(lo, o.lo), h = std::min(hi, o.hi);
    if (!(l <= h)) return empty();
    return {l, h};
}

Interval Interval::extended(double r) const {
    if (is_empty) return empty();
    return {lo - r, hi + r};
}

double gamma1(const Interval& I) {
    if (I.is_empty) return 0.0;
    double m = phi(I.hi.value()) - phi(I.lo.value());
    return m < 0 ? 0.0 : m;
}

// --- generic slice via membership ---------------------------------------------

namespace {


} // namespace

Interval Body::slice(std::span<const double> base, std::span<const double> dir) const {
    const double W = kSliceWindow;
    Vec p(base.size());
    auto member = [&](double t) {
        for (size_t i = 0; i < p.size(); ++i) p[i] = base[i] + t * dir[i];
        return contains(p);
    };

    // Locate some t inside the slice: t = 0, a projected hint, then
    // progressively finer dyadic grids (new points only).
    double t_in = 0.0;
    bool found = member(0.0);
    if (!found) {
        if (auto hint = interior_hint()) {
            Vec d(base.size());
            for (size_t i = 0; i < d.size(); ++i) d[i] = (*hint)[i] - base[i];
            double t = dot(d, dir);
            if (std::abs(t) <= W && member(t)) { t_in = t; found = true; }
        }
    }
    for (int k = 1; k <= 20 && !found; ++k) {
        double step = W / static_cast<double>(1 << (k - 1));
        for (double t = -W + 0.5 * step; t < W; t += step) {
            if (member(t)) { t_in = t; found = true; break; }
        }
    }
    if (!found) return Interval::empty();

    ExtReal hi = ExtReal::pos_inf(), lo = ExtReal::neg_inf();
    if (!member(W)) hi = ExtReal(bisect_predicate(member, t_in, W, 1e-8));
    if (!member(-W)) lo = ExtReal(bisect_predicate(member, t_in, -W, 1e-8));
    return {lo, hi};
}

ExtReal Body::support(double) const {
    throw std::logic_error("support function not available for this body type");
}

double Body::distance(std::span<const double>) const {
    throw std::logic_error("distance not available for this body type");
}

// --- HalfspaceBody -------------------------------------------------------------

HalfspaceBody::HalfspaceBody(Vec normal, double offset) {
    double n = norm2(normal);
    h_.normal = normalized(normal);
    h_.offset = offset / n; // offset rescales with the normal
}

bool HalfspaceBody::contains(std::span<const double> x) const {
    return dot(h_.normal, x) <= h_.offset + kMembershipTol;
}

Interval HalfspaceBody::slice(std::span<const double> base, std::span<const double> dir) const {
    double a = dot(h_.normal, dir);
    double b = h_.offset - dot(h_.normal, base);
    if (std::abs(a) <= kParallelTol)
        return b >= -kMembershipTol ? Interval::all() : Interval::empty();
    double t = b / a;
    if (a > 0) return {ExtReal::neg_inf(), ExtReal(t)};
    return {ExtReal(t), ExtReal::pos_inf()};
}

ExtReal HalfspaceBody::support(double beta) const {
    if (dim() != 2) throw std::logic_error("support: planar bodies only");
    double c = std::cos(beta), s = std::sin(beta);
    double align = c * h_.normal[0] + s * h_.normal[1];
    if (std::abs(align - 1.0) < 1e-12) return ExtReal(h_.offset);
    return ExtReal::pos_inf();
}

double HalfspaceBody::distance(std::span<const double> x) const {
    return std::max(0.0, dot(h_.normal, x) - h_.offset);
}

// --- PolytopeBody -------------------------------------------------------------

PolytopeBody::PolytopeBody(int dim, std::vector<Halfspace> constraints) : dim_(dim) {
    if (constraints.empty())
        throw std::invalid_argument("PolytopeBody: empty constraint list");
    cons_.reserve(constraints.size());
    for (auto& h : constraints) {
        double n = norm2(h.normal);
        if (n == 0) throw std::invalid_argument("PolytopeBody: zero normal");
        Halfspace u;
        u.normal.resize(h.normal.size());
        for (size_t i = 0; i < h.normal.size(); ++i) u.normal[i] = h.normal[i] / n;
        u.offset = h.offset / n;
        cons_.push_back(std::move(u));
    }
}

bool PolytopeBody::contains(std::span<const double> x) const {
    return contains_eps(x, kMembershipTol);
}

bool PolytopeBody::contains_eps(std::span<const double> x, double eps) const {
    for (const auto& h : cons_)
        if (dot(h.normal, x) > h.offset + eps) return false;
    return true;
}

Interval PolytopeBody::slice(std::span<const double> base, std::span<const double> dir) const {
    Interval out = Interval::all();
    for (const auto& h : cons_) {
        double a = dot(h.normal, dir);
        double b = h.offset - dot(h.normal, base);
        if (std::abs(a) <= kParallelTol) {
            if (b < -kMembershipTol) return Interval::empty();
            continue;
        }
        double t = b / a;
        Interval piece = a > 0 ? Interval{ExtReal::neg_inf(), ExtReal(t)}
                               : Interval{ExtReal(t), ExtReal::pos_inf()};
        out = out.intersect(piece);
        if (out.is_empty) return out;
    }
    return out;
}

const std::vector<Vec>& PolytopeBody::vertices2d() const {
    if (dim_ != 2) throw std::logic_error("vertices2d: planar polytopes only");
    if (verts2d_) return *verts2d_;
    std::vector<Vec> vs;
    const size_t m = cons_.size();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            const auto& a = cons_[i];
            const auto& b = cons_[j];
            double det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
            if (std::abs(det) < 1e-12) continue;
            double x = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
            double y = (a.normal[0] * b.offset - b.normal[0] * a.offset) / det;
            Vec v{x, y};
            if (contains_eps(v, 1e-9)) vs.push_back(std::move(v));
        }
    }
    // dedupe
    std::vector<Vec> uniq;
    for (auto& v : vs) {
        bool dup = false;
        for (auto& u : uniq)
            if (std::abs(u[0] - v[0]) < 1e-9 && std::abs(u[1] - v[1]) < 1e-9) { dup = true; break; }
        if (!dup) uniq.push_back(v);
    }
    if (uniq.size() < 3)
        throw std::logic_error("vertices2d: polytope is unbounded or degenerate");
    double cx = 0, cy = 0;
    for (auto& v : uniq) { cx += v[0]; cy += v[1]; }
    cx /= uniq.size(); cy /= uniq.size();
    std::sort(uniq.begin(), uniq.end(), [&](const Vec& p, const Vec& q) {
        return std::atan2(p[1] - cy, p[0] - cx) < std::atan2(q[1] - cy, q[0] - cx);
    });
    verts2d_ = std::make_shared<const std::vector<Vec>>(std::move(uniq));
    return *verts2d_;
}

ExtReal PolytopeBody::support(double beta) const {
    if (dim_ != 2) throw std::logic_error("support: planar bodies only");
    double c = std::cos(beta), s = std::sin(beta);
    // Unbounded iff the recession cone {r : <n_i, r> <= 0} has a direction
    // with positive <r, (c,s)>; its candidate rays are the constraint
    // perpendiculars and negated normals.
    for (const auto& h : cons_) {
        const double cands[3][2] = {{-h.normal[1], h.normal[0]},
                                    {h.normal[1], -h.normal[0]},
                                    {-h.normal[0], -h.normal[1]}};
        for (const auto& r : cands) {
            bool in_cone = true;
            for (const auto& g : cons_)
                if (g.normal[0] * r[0] + g.normal[1] * r[1] > 1e-12) { in_cone = false; break; }
            if (in_cone && c * r[0] + s * r[1] > 1e-12) return ExtReal::pos_inf();
        }
    }
    // Bounded in this direction: the max sits at a feasible vertex, or on a
    // single facet when all normals are parallel.
    double best = -kInf;
    const size_t m = cons_.size();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            const auto& a = cons_[i];
            const auto& b = cons_[j];
            double det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
            if (std::abs(det) < 1e-12) continue;
            double x = (a.offset * b.normal[1] - b.offset * a.normal[1]) / det;
            double y = (a.normal[0] * b.offset - b.normal[0] * a.offset) / det;
            Vec v{x, y};
            if (contains_eps(v, 1e-9)) best = std::max(best, c * x + s * y);
        }
    }
    if (best > -kInf) return ExtReal(best);
    for (const auto& h : cons_)
        if (std::abs(c - h.normal[0]) < 1e-12 && std::abs(s - h.normal[1]) < 1e-12)
            best = std::min(best == -kInf ? kInf : best, h.offset);
    if (best > -kInf && best < kInf) return ExtReal(best);
    throw std::logic_error("support: degenerate polytope");
}

double PolytopeBody::distance(std::span<const double> x) const {
    if (contains(x)) return 0.0;
    if (dim_ != 2) throw std::logic_error("distance: planar polytopes only");
    const auto& vs = vertices2d();
    double best = kInf;
    const size_t n = vs.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec& a = vs[i];
        const Vec& b = vs[(i + 1) % n];
        double ex = b[0] - a[0], ey = b[1] - a[1];
        double len2 = ex * ex + ey * ey;
        double t = len2 > 0 ? ((x[0] - a[0]) * ex + (x[1] - a[1]) * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        double dx = x[0] - (a[0] + t * ex), dy = x[1] - (a[1] + t * ey);
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
    }
    return best;
}

std::optional<Vec> PolytopeBody::interior_hint() const {
    // Chebyshev-ish: average of 2D vertices when available, else origin.
    if (dim_ == 2) {
        try {
            const auto& vs = vertices2d();
            Vec c{0, 0};
            for (auto& v : vs) { c[0] += v[0]; c[1] += v[1]; }
            c[0] /= vs.size(); c[1] /= vs.size();
            return c;
        } catch (const std::logic_error&) {}
    }
    return Vec(dim_, 0.0);
}

PolytopeBody PolytopeBody::translated(std::span<const double> v) const {
    std::vector<Halfspace> cs = cons_;
    for (auto& h : cs) h.offset += dot(h.normal, v);
    return PolytopeBody(dim_, std::move(cs));
}

PolytopeBody PolytopeBody::scaled(double s) const {
    if (!(s > 0)) throw std::invalid_argument("scaled: factor must be > 0");
    std::vector<Halfspace> cs = cons_;
    for (auto& h : cs) h.offset *= s;
    return PolytopeBody(dim_, std::move(cs));
}

// --- HypographBody --------------------------------------------------------------

HypographBody::HypographBody(int dim, PsiFn psi) : dim_(dim), psi_(std::move(psi)) {
    if (dim < 2) throw std::invalid_argument("HypographBody: dim must be >= 2");
}

bool HypographBody::contains(std::span<const double> x) const {
    ExtReal v = psi_(x.subspan(0, dim_ - 1));
    if (v.is_pos_inf()) return true;
    if (v.is_neg_inf()) return false;
    return x[dim_ - 1] <= v.value() + kMembershipTol;
}

Interval HypographBody::slice(std::span<const double> base, std::span<const double> dir) const {
    // Fibers along +-e_n are rays (-inf, psi(y)].
    bool axis = true;
    for (int i = 0; i + 1 < dim_; ++i)
        if (std::abs(dir[i]) > kParallelTol) { axis = false; break; }
    if (axis) {
        double dz = dir[dim_ - 1];
        ExtReal v = psi_(base.subspan(0, dim_ - 1));
        if (v.is_neg_inf()) return Interval::empty();
        if (v.is_pos_inf()) return Interval::all();
        double t = (v.value() - base[dim_ - 1]) / dz;
        if (dz > 0) return {ExtReal::neg_inf(), ExtReal(t)};
        return {ExtReal(t), ExtReal::pos_inf()};
    }
    return Body::slice(base, dir);
}

std::optional<Vec> HypographBody::preferred_fiber() const {
    Vec f(dim_, 0.0);
    f[dim_ - 1] = 1.0;
    return f;
}

// --- PlanarHypographBody ---------------------------------------------------------

PlanarHypographBody::PlanarHypographBody(ThetaFn theta, bool non_increasing)
    : theta_(std::move(theta)), non_increasing_(non_increasing) {}

bool PlanarHypographBody::contains(std::span<const double> x) const {
    ExtReal v = theta_(x[1]);
    if (v.is_pos_inf()) return true;
    if (v.is_neg_inf()) return false;
    return x[0] <= v.value() + kMembershipTol;
}

Interval PlanarHypographBody::slice(std::span<const double> base,
                                    std::span<const double> dir) const {
    if (std::abs(dir[1]) <= kParallelTol) {
        // horizontal: (-inf, theta(z) - x0] in the +e1 parameterization
        ExtReal v = theta_(base[1]);
        if (v.is_neg_inf()) return Interval::empty();
        if (v.is_pos_inf()) return Interval::all();
        double t = (v.value() - base[0]) / dir[0];
        if (dir[0] > 0) return {ExtReal::neg_inf(), ExtReal(t)};
        return {ExtReal(t), ExtReal::pos_inf()};
    }
    if (std::abs(dir[0]) <= kParallelTol && non_increasing_) {
        // vertical fiber {z : theta(z) >= x0}: a downward ray for
        // non-increasing theta.
        double x0 = base[0];
        auto above = [&](double z) {
            ExtReal v = theta_(z);
            if (v.is_pos_inf()) return true;
            if (v.is_neg_inf()) return false;
            return v.value() >= x0 - kMembershipTol;
        };
        double W = kSliceWindow;
        if (!above(-W)) return Interval::empty();
        ExtReal zhi = above(W) ? ExtReal::pos_inf()
                               : ExtReal(bisect_predicate(above, -W, W, 1e-10));
        // convert z-ray to t-range along dir
        if (dir[1] > 0) {
            ExtReal thi = zhi.is_finite() ? ExtReal((zhi.value() - base[1]) / dir[1])
                                          : ExtReal::pos_inf();
            return {ExtReal::neg_inf(), thi};
        }
        ExtReal tlo = zhi.is_finite() ? ExtReal((zhi.value() - base[1]) / dir[1])
                                      : ExtReal::neg_inf();
        return {tlo, ExtReal::pos_inf()};
    }
    return Body::slice(base, dir);
}

ExtReal PlanarHypographBody::support(double beta) const {
    double c = std::cos(beta), s = std::sin(beta);
    const double W = kSliceWindow;
    if (c < -1e-12 || s < -1e-12) return ExtReal::pos_inf(); // x or z unbounded below
    auto g = [&](double z) -> double {
        ExtReal v = theta_(z);
        if (v.is_pos_inf()) return kInf;
        if (v.is_neg_inf()) return -kInf;
        return c * v.value() + s * z;
    };
    // coarse bracket over the window, golden refinement
    const int N = 2048;
    double best = -kInf, zbest = 0;
    for (int i = 0; i <= N; ++i) {
        double z = -W + 2 * W * i / N;
        double v = g(z);
        if (v == kInf) return ExtReal::pos_inf();
        if (v > best) { best = v; zbest = z; }
    }
    if (best == -kInf) return ExtReal::neg_inf(); // empty body
    double h = 2 * W / N;
    // strict growth at the window edge means the sup is infinite
    if (zbest <= -W + h && g(-W) > g(-W + h) + 1e-12) return ExtReal::pos_inf();
    if (zbest >= W - h && g(W) > g(W - h) + 1e-12) return ExtReal::pos_inf();
    double z = golden_max(g, zbest - h, zbest + h, 1e-10);
    return ExtReal(std::max(best, g(z)));
}

double PlanarHypographBody::distance(std::span<const double> x) const {
    if (contains(x)) return 0.0;
    const double W = kSliceWindow;
    auto d2 = [&](double z) -> double {
        ExtReal v = theta_(z);
        if (!v.is_finite()) return kInf;
        double dx = std::max(0.0, x[0] - v.value());
        double dz = x[1] - z;
        return -(dx * dx + dz * dz); // negated: reuse golden_max
    };
    const int N = 2048;
    double best = -kInf, zbest = 0;
    for (int i = 0; i <= N; ++i) {
        double z = -W + 2 * W * i / N;
        double v = d2(z);
        if (v > best) { best = v; zbest = z; }
    }
    double h = 2 * W / N;
    double z = golden_max(d2, zbest - h, zbest + h, 1e-10);
    return std::sqrt(-std::max(best, d2(z)));
}

std::optional<Vec> PlanarHypographBody::preferred_fiber() const {
    return Vec{1.0, 0.0};
}

// --- piecewise-linear theta -------------------------------------------------------

ExtReal PiecewiseLinearTheta::operator()(double z) const {
    if (knots.empty()) throw std::logic_error("PiecewiseLinearTheta: no knots");
    if (z <= knots.front().first)
        return ExtReal(knots.front().second + left_slope * (z - knots.front().first));
    if (z > knots.back().first) {
        if (std::isinf(right_value) && right_value < 0) return ExtReal::neg_inf();
        return ExtReal(right_value);
    }
    auto it = std::lower_bound(knots.begin(), knots.end(), z,
                               [](const auto& k, double zz) { return k.first < zz; });
    const auto& [z1, x1] = *it;
    const auto& [z0, x0] = *(it - 1);
    double t = (z - z0) / (z1 - z0);
    return ExtReal(x0 + t * (x1 - x0));
}

// --- free ops ----------------------------------------------------------------------

ExtReal support_function(const Body& body, double beta) {
    if (body.dim() != 2) throw std::logic_error("support_function: planar bodies only");
    return body.support(beta);
}

InclusionResult inclusion_check(const Body& a, const Body& b,
                                const std::vector<double>& betas, double tol) {
    for (double beta : betas) {
        ExtReal ha = a.support(beta);
        ExtReal hb = b.support(beta);
        if (hb.is_pos_inf()) continue;
        if (ha.is_pos_inf() || ha.value() > hb.value() + tol)
            return {false, beta};
    }
    return {true, 0.0};
}

std::vector<double> uniform_angle_grid(int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = 2.0 * M_PI * i / n;
    return out;
}

namespace {

class MinkowskiSegmentBody : public Body {
public:
    MinkowskiSegmentBody(BodyPtr base, Vec u) : base_(std::move(base)), u_(std::move(u)) {
        r_ = norm2(u_);
        if (r_ > 0) u_hat_ = normalized(u_);
    }

    int dim() const override { return base_->dim(); }

    bool contains(std::span<const double> x) const override {
        if (r_ == 0) return base_->contains(x);
        Interval I = base_->slice(x, u_hat_);
        if (I.is_empty) return false;
        return I.lo <= ExtReal(r_ + kMembershipTol) && I.hi >= ExtReal(-r_ - kMembershipTol);
    }

    Interval slice(std::span<const double> base, std::span<const double> dir) const override {
        if (r_ > 0) {
            double align = dot(dir, u_hat_);
            if (std::abs(std::abs(align) - 1.0) < 1e-12) {
                Interval I = base_->slice(base, dir);
                return I.extended(r_);
            }
        }
        return Body::slice(base, dir);
    }

    ExtReal support(double beta) const override {
        ExtReal h = base_->support(beta);
        if (!h.is_finite()) return h;
        double c = std::cos(beta), s = std::sin(beta);
        return h + std::abs(c * u_[0] + s * u_[1]);
    }

    std::optional<Vec> preferred_fiber() const override {
        if (r_ == 0) return base_->preferred_fiber();
        return u_hat_;
    }
    bool cheap_slices() const override { return base_->cheap_slices(); }
    int transform_depth() const override { return base_->transform_depth() + 1; }
    std::optional<Vec> interior_hint() const override { return base_->interior_hint(); }

private:
    BodyPtr base_;
    Vec u_, u_hat_;
    double r_ = 0;
};

class MinkowskiBallBody : public Body {
public:
    MinkowskiBallBody(BodyPtr base, double eps) : base_(std::move(base)), eps_(eps) {
        if (!(eps > 0)) throw std::invalid_argument("minkowski_ball: eps must be > 0");
    }

    int dim() const override { return base_->dim(); }

    bool contains(std::span<const double> x) const override {
        return base_->distance(x) <= eps_ + kMembershipTol;
    }

    ExtReal support(double beta) const override {
        ExtReal h = base_->support(beta);
        return h.is_finite() ? h + eps_ : h;
    }

    double distance(std::span<const double> x) const override {
        return std::max(0.0, base_->distance(x) - eps_);
    }

    int transform_depth() const override { return base_->transform_depth() + 1; }
    std::optional<Vec> interior_hint() const override { return base_->interior_hint(); }

private:
    BodyPtr base_;
    double eps_;
};

class TranslatedBody : public Body {
public:
    TranslatedBody(BodyPtr base, Vec v) : base_(std::move(base)), v_(std::move(v)) {}

    int dim() const override { return base_->dim(); }

    bool contains(std::span<const double> x) const override {
        Vec y(x.begin(), x.end());
        for (size_t i = 0; i < y.size(); ++i) y[i] -= v_[i];
        return base_->contains(y);
    }

    Interval slice(std::span<const double> base, std::span<const double> dir) const override {
        Vec b(base.begin(), base.end());
        for (size_t i = 0; i < b.size(); ++i) b[i] -= v_[i];
        return base_->slice(b, dir);
    }

    ExtReal support(double beta) const override {
        ExtReal h = base_->support(beta);
        if (!h.is_finite()) return h;
        return h + (std::cos(beta) * v_[0] + std::sin(beta) * v_[1]);
    }

    double distance(std::span<const double> x) const override {
        Vec y(x.begin(), x.end());
        for (size_t i = 0; i < y.size(); ++i) y[i] -= v_[i];
        return base_->distance(y);
    }

    std::optional<Vec> preferred_fiber() const override { return base_->preferred_fiber(); }
    bool cheap_slices() const override { return base_->cheap_slices(); }
    int transform_depth() const override { return base_->transform_depth() + 1; }

    std::optional<Vec> interior_hint() const override {
        auto h = base_->interior_hint();
        if (!h) return std::nullopt;
        for (size_t i = 0; i < h->size(); ++i) (*h)[i] += v_[i];
        return h;
    }

private:
    BodyPtr base_;
    Vec v_;
};

} // namespace

BodyPtr minkowski_segment(BodyPtr body, Vec u) {
    return std::make_shared<MinkowskiSegmentBody>(std::move(body), std::move(u));
}

BodyPtr minkowski_ball(BodyPtr body, double eps) {
    return std::make_shared<MinkowskiBallBody>(std::move(body), eps);
}

BodyPtr translate_body(BodyPtr body, Vec v) {
    return std::make_shared<TranslatedBody>(std::move(body), std::move(v));
}

PolytopeBody minkowski_sum_2d(const PolytopeBody& A, const PolytopeBody& B) {
    auto lowest_first = [](std::vector<Vec> v) {
        size_t k = 0;
        for (size_t i = 1; i < v.size(); ++i)
            if (v[i][1] < v[k][1] - 1e-12 ||
                (std::abs(v[i][1] - v[k][1]) <= 1e-12 && v[i][0] < v[k][0]))
                k = i;
        std::rotate(v.begin(), v.begin() + k, v.end());
        return v;
    };
    std::vector<Vec> va = lowest_first(A.vertices2d());
    std::vector<Vec> vb = lowest_first(B.vertices2d());
    const size_t na = va.size(), nb = vb.size();
    auto edge_angle = [](const Vec& p, const Vec& q) {
        double a = std::atan2(q[1] - p[1], q[0] - p[0]);
        return a < 0 ? a + 2 * M_PI : a;
    };
    std::vector<Vec> out;
    out.push_back({va[0][0] + vb[0][0], va[0][1] + vb[0][1]});
    size_t i = 0, j = 0;
    while (i < na || j < nb) {
        const Vec& cur = out.back();
        if (j >= nb || (i < na && edge_angle(va[i % na], va[(i + 1) % na]) <=
                                      edge_angle(vb[j % nb], vb[(j + 1) % nb]))) {
            const Vec& p = va[i % na];
            const Vec& q = va[(i + 1) % na];
            out.push_back({cur[0] + q[0] - p[0], cur[1] + q[1] - p[1]});
            ++i;
        } else {
            const Vec& p = vb[j % nb];
            const Vec& q = vb[(j + 1) % nb];
            out.push_back({cur[0] + q[0] - p[0], cur[1] + q[1] - p[1]});
            ++j;
        }
    }
    out.pop_back(); // closes back on the start
    std::vector<Halfspace> cons;
    for (size_t k = 0; k < out.size(); ++k) {
        const Vec& p = out[k];
        const Vec& q = out[(k + 1) % out.size()];
        double ex = q[0] - p[0], ey = q[1] - p[1];
        double len = std::hypot(ex, ey);
        if (len < 1e-12) continue;
        Halfspace h;
        h.normal = {ey / len, -ex / len}; // outward for ccw polygons
        h.offset = h.normal[0] * p[0] + h.normal[1] * p[1];
        cons.push_back(std::move(h));
    }
    return PolytopeBody(2, std::move(cons));
}

} // namespace gaussbal
