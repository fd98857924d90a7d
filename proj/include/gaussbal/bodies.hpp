#pragma once

#include "gaussbal/extreal.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gaussbal {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
Vec normalized(std::span<const double> a); // throws on zero vector

/// Search window for slice endpoints: |t| beyond this is declared infinite
/// (Gaussian mass past radius 64 is far below every tolerance in use).
inline constexpr double kSliceWindow = 64.0;

/// Boundary ties resolve toward inclusion at this tolerance.
inline constexpr double kMembershipTol = 1e-12;

/// A (possibly unbounded, possibly empty) closed interval of slice
/// parameters t.
struct Interval {
    ExtReal lo = ExtReal::pos_inf();
    ExtReal hi = ExtReal::neg_inf();
    bool is_empty = true;

    Interval() = default;
    Interval(ExtReal lo_, ExtReal hi_)
        : lo(lo_), hi(hi_), is_empty(!(lo_ <= hi_)) {}

    static Interval empty() { return Interval(); }
    static Interval all() { return {ExtReal::neg_inf(), ExtReal::pos_inf()}; }

    double length() const;
    bool contains(double t, double tol = 0.0) const;
    Interval intersect(const Interval& o) const;
    Interval extended(double r) const; // [lo - r, hi + r]
};

/// gamma_1 mass Phi(hi) - Phi(lo) of an interval.
double gamma1(const Interval& I);

class Body;
using BodyPtr = std::shared_ptr<const Body>;

/// Oracle interface every convex set implements: membership plus line
/// slices. Transforms wrap oracles instead of materializing geometry, so
/// all bodies are immutable values and queries are pure.
class Body {
public:
    virtual ~Body() = default;

    virtual int dim() const = 0;

    virtual bool contains(std::span<const double> x) const = 0;

    /// {t : base + t dir in body} as a t-interval (dir unit). The default
    /// locates an interior point by 2^-k-spaced probing (k <= 20) and
    /// bisects both endpoints to 1e-8; slices shorter than 2^-20 of the
    /// window can be reported empty (treated as measure zero).
    virtual Interval slice(std::span<const double> base, std::span<const double> dir) const;

    /// Support function h(u_beta), u_beta = (cos beta, sin beta). Planar
    /// bodies only; +inf when unbounded in that direction.
    virtual ExtReal support(double beta) const;

    /// Euclidean distance to the body, 0 inside. Implemented for the types
    /// Minkowski ball enlargement needs.
    virtual double distance(std::span<const double> x) const;

    /// Fiber direction along which slice() is closed-form, if any; measure
    /// quadrature integrates across it.
    virtual std::optional<Vec> preferred_fiber() const { return std::nullopt; }

    /// True when slice() is cheap (closed form or a thin wrapper over one);
    /// gates quadrature vs Monte Carlo for dim 3.
    virtual bool cheap_slices() const { return false; }

    /// Nesting depth of lazy transform wrappers (guards runaway chains).
    virtual int transform_depth() const { return 0; }

    /// A point likely interior, used to seed slice searches.
    virtual std::optional<Vec> interior_hint() const { return std::nullopt; }
};

// --- concrete bodies --------------------------------------------------------

/// {x : <normal, x> <= offset}, |normal| = 1.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

class HalfspaceBody : public Body {
public:
    HalfspaceBody(Vec normal, double offset);

    int dim() const override { return static_cast<int>(h_.normal.size()); }
    bool contains(std::span<const double> x) const override;
    Interval slice(std::span<const double> base, std::span<const double> dir) const override;
    ExtReal support(double beta) const override;
    double distance(std::span<const double> x) const override;
    bool cheap_slices() const override { return true; }

    const Halfspace& halfspace() const { return h_; }

private:
    Halfspace h_;
};

/// Intersection of finitely many halfspaces.
class PolytopeBody : public Body {
public:
    PolytopeBody(int dim, std::vector<Halfspace> constraints);

    int dim() const override { return dim_; }
    bool contains(std::span<const double> x) const override;
    Interval slice(std::span<const double> base, std::span<const double> dir) const override;
    ExtReal support(double beta) const override;
    double distance(std::span<const double> x) const override;
    std::optional<Vec> interior_hint() const override;
    bool cheap_slices() const override { return true; }

    bool contains_eps(std::span<const double> x, double eps) const;
    const std::vector<Halfspace>& constraints() const { return cons_; }

    /// Vertices of a bounded planar polytope, counterclockwise.
    const std::vector<Vec>& vertices2d() const;

    PolytopeBody translated(std::span<const double> v) const;
    PolytopeBody scaled(double s) const; // s > 0, about the origin

private:
    int dim_;
    std::vector<Halfspace> cons_;
    mutable std::shared_ptr<const std::vector<Vec>> verts2d_;
};

using PsiFn = std::function<ExtReal(std::span<const double>)>;
using ThetaFn = std::function<ExtReal(double)>;

/// Hypograph {(y, z) in R^{n-1} x R : z <= psi(y)} of a concave psi.
/// Concavity is asserted by property tests, not enforced here.
class HypographBody : public Body {
public:
    HypographBody(int dim, PsiFn psi);

    int dim() const override { return dim_; }
    bool contains(std::span<const double> x) const override;
    Interval slice(std::span<const double> base, std::span<const double> dir) const override;
    std::optional<Vec> preferred_fiber() const override;
    bool cheap_slices() const override { return true; }

    ExtReal psi(std::span<const double> y) const { return psi_(y); }

private:
    int dim_;
    PsiFn psi_;
};

/// Planar hypograph opening left: {(x, z) : x <= theta(z)}, theta concave;
/// the non-increasing flag enables closed-form vertical slices.
class PlanarHypographBody : public Body {
public:
    PlanarHypographBody(ThetaFn theta, bool non_increasing);

    int dim() const override { return 2; }
    bool contains(std::span<const double> x) const override;
    Interval slice(std::span<const double> base, std::span<const double> dir) const override;
    ExtReal support(double beta) const override;
    double distance(std::span<const double> x) const override;
    std::optional<Vec> preferred_fiber() const override;
    bool cheap_slices() const override { return true; }

    ExtReal theta(double z) const { return theta_(z); }
    bool non_increasing() const { return non_increasing_; }

private:
    ThetaFn theta_;
    bool non_increasing_;
};

/// Piecewise-linear theta: knots (z_i, x_i) with z strictly increasing,
/// affine continuation of slope left_slope before the first knot, constant
/// right_value (often -inf) after the last.
struct PiecewiseLinearTheta {
    std::vector<std::pair<double, double>> knots;
    double left_slope = 0.0;
    double right_value = -std::numeric_limits<double>::infinity();

    ExtReal operator()(double z) const;
};

// --- free operations ---------------------------------------------------------

inline Interval slice_interval(const Body& body, std::span<const double> base,
                               std::span<const double> dir) {
    return body.slice(base, dir);
}

ExtReal support_function(const Body& body, double beta);

struct InclusionResult {
    bool included = true;
    double witness_beta = 0.0; // violating direction when !included
};

/// A subset of B iff h_A <= h_B + tol on the direction grid.
InclusionResult inclusion_check(const Body& a, const Body& b,
                                const std::vector<double>& betas, double tol = 1e-9);

std::vector<double> uniform_angle_grid(int n); // n angles over [0, 2 pi)

BodyPtr minkowski_segment(BodyPtr body, Vec u);
BodyPtr minkowski_ball(BodyPtr body, double eps);
BodyPtr translate_body(BodyPtr body, Vec v);

/// Minkowski sum of two bounded planar polytopes (edge merge on vertices).
PolytopeBody minkowski_sum_2d(const PolytopeBody& A, const PolytopeBody& B);

} // namespace gaussbal
