#include <doctest.h>

#include <stdexcept>

#include "gaussbal/analysis.hpp"
#include "gaussbal/bodies.hpp"
#include "gaussbal/gauss.hpp"
#include "gaussbal/transforms.hpp"
#include "oracle.hpp"

#include <cmath>
#include <random>

using namespace gaussbal;

namespace {

std::shared_ptr<PolytopeBody> unit_square(double half = 1.0) {
    std::vector<Halfspace> cs;
    cs.push_back({{1, 0}, half});
    cs.push_back({{-1, 0}, half});
    cs.push_back({{0, 1}, half});
    cs.push_back({{0, -1}, half});
    return std::make_shared<PolytopeBody>(2, std::move(cs));
}

// random non-increasing concave piecewise-linear theta
PiecewiseLinearTheta random_pl_theta(std::mt19937_64& rng, double start_x = 1.5) {
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    PiecewiseLinearTheta pl;
    double slope = -uni(0.05, 0.6);
    pl.left_slope = slope;
    double z = -uni(2.0, 3.0), x = start_x;
    int k = 3 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) {
        pl.knots.emplace_back(z, x);
        double dz = uni(0.5, 1.8);
        slope -= uni(0.05, 0.8); // concavity: slopes strictly decrease
        z += dz;
        x += slope * dz;
    }
    pl.right_value = -std::numeric_limits<double>::infinity();
    return pl;
}

// concave piecewise-linear psi on R as min of affine functions
struct MinAffinePsi {
    std::vector<std::pair<double, double>> lines; // psi(y) = min(a y + b)
    ExtReal operator()(std::span<const double> y) const {
        double best = std::numeric_limits<double>::infinity();
        for (auto [a, b] : lines) best = std::min(best, a * y[0] + b);
        return ExtReal(best);
    }
};

MinAffinePsi random_min_affine(std::mt19937_64& rng, int dim_y = 1) {
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    MinAffinePsi psi;
    int k = 3 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i)
        psi.lines.emplace_back(uni(-1.2, 1.2), uni(0.3, 2.0));
    (void)dim_y;
    return psi;
}

} // namespace

TEST_CASE("rotate_to_axis: axis fixed point, isometry, equivariance") {
    Vec u{0, 0, 3};
    Rotation rho = rotate_to_axis(u);
    Vec r = rho.apply(u);
    CHECK(r[0] == doctest::Approx(0.0));
    CHECK(r[1] == doctest::Approx(0.0));
    CHECK(r[2] == doctest::Approx(3.0));

    Vec v{1.0 / std::sqrt(2.0) * 0.4, 1.0 / std::sqrt(2.0) * 0.4};
    Rotation rho2 = rotate_to_axis(v);
    Vec rv = rho2.apply(v);
    CHECK(std::abs(rv[0]) < 1e-12);
    CHECK(rv[1] == doctest::Approx(0.4));

    std::mt19937_64 rng(3);
    GaussianSampler gs(9, 2);
    for (int i = 0; i < 1000; ++i) {
        auto x = gs.next_point();
        Vec y = rho2.apply(x);
        CHECK(norm2(y) == doctest::Approx(norm2(x)).epsilon(1e-12));
        Vec back = rho2.apply_inv(y);
        CHECK(back[0] == doctest::Approx(x[0]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rotate_to_axis(Vec{0, 0}), std::invalid_argument);
}

TEST_CASE("rotation preserves Gaussian measure (MC, 3 sigma)") {
    auto sq = unit_square();
    Rotation rho = rotate_to_axis(Vec{1, 2});
    auto rotated = rotate_body(sq, rho);
    MeasureOptions mc;
    mc.method = MeasureMethod::monte_carlo;
    mc.samples = 400'000;
    MeasureEstimate a = measure(*sq, mc);
    MeasureEstimate b = measure(*rotated, mc);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error);
}

TEST_CASE("circ_transform: u = 0 identity; halfplane ray shift; measure increases") {
    auto sq = unit_square();
    auto same = circ_transform(sq, Vec{0, 0});
    CHECK(same.get() == sq.get());

    // K = {x_2 <= d}, d >= -w_r: every fiber is a ray of mass >= p_r
    auto hp = std::make_shared<HalfspaceBody>(Vec{0, 1}, 0.3);
    double r = 0.25;
    auto moved = circ_transform(hp, Vec{0, r});
    for (double x = -3; x <= 3; x += 0.37)
        for (double y = -3; y <= 3; y += 0.41)
            CHECK(moved->contains(Vec{x, y}) == (y <= 0.3 + r + 1e-12));

    auto sq_t = circ_transform(sq, Vec{0, 0.1});
    MeasureEstimate before = measure(*sq);
    MeasureEstimate after = measure(*sq_t);
    CHECK(after.value >= before.value - (before.error + after.error));
}

TEST_CASE("star_transform: circ subset star subset (K-u) union (K+u)") {
    auto sq = unit_square();
    Vec u{0.08, 0.11};
    auto circ = circ_transform(sq, u);
    auto star = star_transform(sq, u);
    auto shifted_minus = translate_body(sq, Vec{-u[0], -u[1]});
    auto shifted_plus = translate_body(sq, Vec{u[0], u[1]});

    std::mt19937_64 rng(11);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    int in_circ = 0, in_star = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec x{uni(-1.5, 1.5), uni(-1.5, 1.5)};
        bool c = circ->contains(x);
        bool s = star->contains(x);
        if (c) {
            ++in_circ;
            CHECK(s); // circ subset star
        }
        if (s) {
            ++in_star;
            CHECK((shifted_minus->contains(x) || shifted_plus->contains(x)));
        }
    }
    CHECK(in_circ > 1000);
    CHECK(in_star >= in_circ);
}

TEST_CASE("ehrhard_E: hypograph fixed point, slab flattening, measure preserved") {
    // hypograph of a concave function: E returns psi pointwise
    MinAffinePsi pw;
    pw.lines = {{-0.5, 1.0}, {0.3, 1.4}, {0.0, 1.1}};
    auto lam = std::make_shared<HypographBody>(2, PsiFn(pw));
    auto sym = ehrhard_E(lam);
    for (double y = -4; y <= 4; y += 0.31) {
        Vec yv{y};
        CHECK(ext_abs_diff(sym->psi(yv), pw(yv)) < 1e-9);
    }

    // symmetric slab {|x_2| <= a}: psi becomes the constant Phi^{-1}(Psi(a))
    std::vector<Halfspace> cs;
    cs.push_back({{0, 1}, 0.8});
    cs.push_back({{0, -1}, 0.8});
    auto slab = std::make_shared<PolytopeBody>(2, std::move(cs));
    auto flat = ehrhard_E(slab);
    double expect = phi_inv(psi(0.8));
    for (double y = -3; y <= 3; y += 0.5) {
        Vec yv{y};
        CHECK(flat->psi(yv).value() == doctest::Approx(expect).epsilon(1e-10));
    }

    // measure preservation on the unit square
    auto sq = unit_square();
    auto esq = ehrhard_E(sq);
    MeasureEstimate a = measure(*sq);
    MeasureEstimate b = measure(*esq);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-8);
}

TEST_CASE("ehrhard_E2 (n=2): halfplane fixed point; square flattening; preservation") {
    auto hp = std::make_shared<HalfspaceBody>(Vec{0.6, 0.8}, 0.9);
    auto L = ehrhard_E2(hp);
    // sections (-inf, (d - s z)/c]: theta reproduces the boundary line
    for (double z = -3; z <= 3; z += 0.41)
        CHECK(L->theta(z).value() == doctest::Approx((0.9 - 0.8 * z) / 0.6).epsilon(1e-9));

    auto sq = unit_square();
    auto L2 = ehrhard_E2(sq);
    double inside = phi_inv(psi(1.0));
    CHECK(L2->theta(0.0).value() == doctest::Approx(inside).epsilon(1e-9));
    CHECK(L2->theta(0.99).value() == doctest::Approx(inside).epsilon(1e-9));
    CHECK(L2->theta(1.5).is_neg_inf());

    MeasureEstimate a = measure(*sq);
    MeasureEstimate b = measure(*L2);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error + 1e-7);
}

TEST_CASE("planar_T_r: constant theta shifts trivially; slope -1 formula; circ agreement") {
    double r = 1.0 / 7.0;
    RadiusDerived rd = radius_derived(r);

    auto Lconst = std::make_shared<PlanarHypographBody>(
        ThetaFn([](double) { return ExtReal(0.7); }), true);
    auto Tconst = planar_T_r(Lconst, r);
    for (double z = -5; z <= 5; z += 0.37)
        CHECK(Tconst->theta(z).value() == doctest::Approx(0.7));
    CHECK(Tconst->contains(Vec{0.69, -20.0}));

    auto L = std::make_shared<PlanarHypographBody>(
        ThetaFn([](double z) { return ExtReal(-z); }), true);
    auto T = planar_T_r(L, r);
    for (double z = -3; z <= 3; z += 0.17) {
        double expect = z >= -rd.w + r ? r - z : rd.w;
        CHECK(T->theta(z).value() == doctest::Approx(expect).epsilon(1e-12));
    }

    // membership agreement with circ_transform on a grid
    auto C = circ_transform(L, Vec{0, r});
    for (double x = -2; x <= 2; x += 0.23) {
        for (double z = -2; z <= 2; z += 0.29) {
            Vec p{x, z};
            if (std::abs(x - T->theta(z).value()) < 1e-7) continue; // boundary ties
            CHECK(T->contains(p) == C->contains(p));
        }
    }
}

TEST_CASE("hypograph_shift: cylinder and constant cases; circ agreement at random points") {
    double r = 0.12;
    RadiusDerived rd = radius_derived(r);

    // "cylinder": psi = +inf on [-1,1], -inf outside; shift is the identity
    auto cyl = std::make_shared<HypographBody>(2, PsiFn([](std::span<const double> y) {
        return std::abs(y[0]) <= 1.0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
    }));
    auto cyl_shift = hypograph_shift(cyl, r);
    for (double y = -2; y <= 2; y += 0.3) {
        Vec yv{y};
        CHECK(cyl_shift->psi(yv) == cyl->psi(yv));
    }

    auto flat = std::make_shared<HypographBody>(2, PsiFn([](std::span<const double>) {
        return ExtReal(0.4);
    }));
    auto flat_shift = hypograph_shift(flat, r);
    Vec y0{0.0};
    CHECK(flat_shift->psi(y0).value() == doctest::Approx(0.4 + r));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        MinAffinePsi pw = random_min_affine(rng);
        auto lam = std::make_shared<HypographBody>(2, PsiFn(pw));
        auto shifted = hypograph_shift(lam, r);
        auto circ = circ_transform(lam, Vec{0, r});
        auto uni = [&](double a, double b) {
            return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        };
        for (int i = 0; i < 2000; ++i) {
            Vec p{uni(-3, 3), uni(-3, 3)};
            ExtReal v = shifted->psi(std::span<const double>(p.data(), 1));
            if (v.is_finite() && std::abs(p[1] - v.value()) < 1e-7) continue; // boundary
            // points near the w_r cut can differ by bisection tolerance
            ExtReal base = pw(std::span<const double>(p.data(), 1));
            if (base.is_finite() && std::abs(base.value() + rd.w) < 1e-6) continue;
            CHECK(shifted->contains(p) == circ->contains(p));
        }
    }
}

TEST_CASE("Claim 1 commutation, n = 2 (exact sections)") {
    std::mt19937_64 rng(37);
    double r = 1.0 / 7.0;
    for (int trial = 0; trial < 3; ++trial) {
        MinAffinePsi pw = random_min_affine(rng);
        auto lam = std::make_shared<HypographBody>(2, PsiFn(pw));
        auto lhs = ehrhard_E2(hypograph_shift(lam, r)); // theta'_r
        auto rhs = planar_T_r(ehrhard_E2(lam), r);      // theta_r
        double worst = 0;
        for (int i = 0; i < 257; ++i) {
            double z = -6.0 + 12.0 * i / 256;
            worst = std::max(worst, ext_abs_diff(lhs->theta(z), rhs->theta(z)));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("equivariance: reflections and u-symmetry of circ") {
    auto sq = unit_square();
    std::vector<Halfspace> cs;
    cs.push_back({{1, 0}, 0.8});
    cs.push_back({{-1, 0}, 1.1});
    cs.push_back({{0, 1}, 0.9});
    cs.push_back({{0.6, 0.8}, 1.0});
    cs.push_back({{0, -1}, 1.3});
    auto body = std::make_shared<PolytopeBody>(2, std::move(cs));
    Vec u{0.09, -0.07};

    auto t1 = circ_transform(body, u);
    auto t2 = circ_transform(body, Vec{-u[0], -u[1]}); // K o u = K o (-u)

    // reflection pi across the x-axis
    std::vector<Halfspace> ref;
    for (const auto& h : body->constraints())
        ref.push_back({{h.normal[0], -h.normal[1]}, h.offset});
    auto rbody = std::make_shared<PolytopeBody>(2, std::move(ref));
    auto t3 = circ_transform(rbody, Vec{u[0], -u[1]}); // (pi K) o (pi u)

    std::mt19937_64 rng(53);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < 10000; ++i) {
        Vec p{uni(-1.6, 1.6), uni(-1.6, 1.6)};
        bool a = t1->contains(p);
        CHECK(a == t2->contains(p));
        Vec q{p[0], -p[1]};
        CHECK(a == t3->contains(q));
    }
}

TEST_CASE("rotation equivariance of circ on membership") {
    auto sq = unit_square();
    Vec u{0.1, 0.05};
    Rotation rho = rotate_to_axis(Vec{0.6, 0.8});
    auto lhs = rotate_body(circ_transform(sq, u), rho);       // rho(K o u)
    auto rhs = circ_transform(rotate_body(sq, rho), rho.apply(u)); // rho(K) o rho(u)
    std::mt19937_64 rng(71);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    int inside = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec p{uni(-1.6, 1.6), uni(-1.6, 1.6)};
        bool a = lhs->contains(p);
        CHECK(a == rhs->contains(p));
        inside += a;
    }
    CHECK(inside > 500);
}

TEST_CASE("transform depth guard") {
    BodyPtr b = unit_square();
    for (int i = 0; i < 32; ++i) b = circ_transform(b, Vec{0, 0.01});
    CHECK_THROWS_AS(circ_transform(b, Vec{0, 0.01}), std::runtime_error);
}
