#include <doctest.h>

#include <stdexcept>

#include "gaussbal/analysis.hpp"
#include "gaussbal/body_io.hpp"
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

std::shared_ptr<PolytopeBody> cube(int n, double half) {
    std::vector<Halfspace> cs;
    for (int i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            Halfspace h;
            h.normal.assign(n, 0.0);
            h.normal[i] = s;
            h.offset = half;
            cs.push_back(std::move(h));
        }
    }
    return std::make_shared<PolytopeBody>(n, std::move(cs));
}

} // namespace

TEST_CASE("measure: halfplane exact, square quadrature, product cube by MC") {
    HalfspaceBody hp({1, 0}, 0.0);
    MeasureEstimate m = measure(hp);
    CHECK(m.value == 0.5);
    CHECK(m.method == MeasureMethod::exact);

    auto sq = unit_square();
    MeasureEstimate sqm = measure(*sq);
    CHECK(sqm.method == MeasureMethod::quadrature);
    CHECK(std::abs(sqm.value - 0.46606494267439227) <= sqm.error + 1e-9);

    // gamma_4(t B_inf^4) >= 1/2 at t = sqrt(2 log 4)
    double t = std::sqrt(2.0 * std::log(4.0));
    auto b4 = cube(4, t);
    MeasureOptions mc;
    mc.method = MeasureMethod::monte_carlo;
    mc.samples = 500'000;
    MeasureEstimate m4 = measure(*b4, mc);
    CHECK(std::abs(m4.value - 0.668164246831) <= m4.error);
    CHECK(m4.value >= 0.5);
}

TEST_CASE("measure: 3D quadrature vs product structure and MC") {
    auto c = cube(3, 1.0);
    MeasureEstimate q = measure(*c); // nested quadrature path
    double expect = std::pow(psi(1.0), 3);
    CHECK(q.method == MeasureMethod::quadrature);
    CHECK(std::abs(q.value - expect) <= q.error + 1e-6);

    MeasureOptions mc;
    mc.method = MeasureMethod::monte_carlo;
    mc.samples = 400'000;
    mc.workers = 2;
    MeasureEstimate m = measure(*c, mc);
    CHECK(std::abs(m.value - expect) <= m.error);
}

TEST_CASE("cone_measure: degenerate cases and the frozen quadrature anchor") {
    ConeMeasure zero = cone_measure(cone_region(0.8, 0.5, 0.0));
    CHECK(zero.estimate.value == 0.0);

    ConeMeasure tiny = cone_measure(cone_region(1e-3, 0.5, 0.1));
    CHECK(tiny.estimate.value >= 0.0);
    CHECK(tiny.estimate.value < 1e-3);

    ConeMeasure cm = cone_measure(cone_region(M_PI / 4, 0.5, 0.1));
    CHECK(std::abs(cm.estimate.value - 0.00095011785073108391) <= 1e-9);
    CHECK(std::abs(cm.upper_bound - 0.017516488522726661) <= 1e-9);
    CHECK(cm.estimate.value <= cm.upper_bound);
}

TEST_CASE("halfplane_delta: boundary angles, positivity anchor, domain") {
    CHECK(halfplane_delta(0.0, 1.3, 0.1) == 0.0);
    double d = 0.7, r = 0.13;
    CHECK(halfplane_delta(M_PI / 2, d, r) == doctest::Approx(phi(d + r) - phi(d)));
    CHECK(std::abs(halfplane_delta(1.2, 0.0, 1.0 / 7.0) - 0.052846617856547824) <= 1e-8);
    CHECK_THROWS_AS(halfplane_delta(-0.1, 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(halfplane_delta(2.0, 0.0, 0.1), std::domain_error);
}

TEST_CASE("lemma_scan: admissible grid clean; extended scan finds violations") {
    std::vector<double> alphas, ds, rs;
    for (int k = 1; k <= 19; k += 3) alphas.push_back(k * M_PI / 40);
    for (double d = 0; d <= 4.0; d += 1.0) ds.push_back(d);
    for (int i = 0; i <= 5; ++i) rs.push_back(i / 35.0);
    auto rows = lemma_scan(alphas, ds, rs);
    for (const auto& row : rows) {
        CHECK(!row.flagged);
        CHECK(row.delta >= -1e-9);
        if (row.r > 0 && row.alpha > 0 && row.bound < 1.0)
            CHECK(row.cone <= row.bound + 1e-12);
    }

    // sharpness: almost vertical halfplanes violate monotonicity for large r
    auto bad = lemma_scan({M_PI / 40}, {0.0, 2.0}, {0.7, 0.9});
    bool any = false;
    for (const auto& row : bad) any = any || row.flagged;
    CHECK(any);
}

TEST_CASE("appendix_scan_rp: p = 1/2 threshold covers 1/7; large p stays below 1") {
    std::vector<double> alphas;
    for (int k = 1; k <= 19; k += 2) alphas.push_back(k * M_PI / 40);
    std::vector<double> offs = {0.0, 0.5, 1.0, 2.0};
    std::vector<double> rs;
    for (int i = 1; i <= 10; ++i) rs.push_back(i / 70.0);
    rs.push_back(0.5);
    rs.push_back(1.05);

    auto rows = appendix_scan_rp({0.5, 0.995}, rs, alphas, offs);
    CHECK(rows[0].r_threshold >= 1.0 / 7.0 - 1e-12);
    CHECK(rows[1].r_threshold <= 1.0 + 0.06); // grid tolerance
    CHECK(rows[0].slab_bound == doctest::Approx(psi_inv(0.5)));
    double q = phi_inv(0.995);
    CHECK(rows[1].shape_exponent == doctest::Approx(q * q * std::exp(q * q)));
}

TEST_CASE("s_inequality_bound: identity at t = 1 and the frozen value") {
    CHECK(s_inequality_bound(0.37, 1.0) == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(s_inequality_bound(0.25, 2.0) == doctest::Approx(0.47605669558255733).epsilon(1e-11));
    CHECK_THROWS_AS(s_inequality_bound(0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(s_inequality_bound(0.5, 0.5), std::domain_error);
}

TEST_CASE("verify_step1: equality for hypographs, inequality for square and disk") {
    auto flat = std::make_shared<HypographBody>(2, PsiFn([](std::span<const double> y) {
        return ExtReal(1.0 - 0.3 * y[0] * y[0] > 0.2 ? 1.0 - 0.3 * y[0] * y[0] : 0.2);
    }));
    // hypograph input: E fixes it, both sides equal
    Step1Report hrep = verify_step1(flat, 0.1);
    CHECK(std::abs(hrep.lhs.value - hrep.rhs.value) <= hrep.lhs.error + hrep.rhs.error + 1e-7);

    Step1Report sq = verify_step1(unit_square(), 0.1);
    CHECK(sq.lhs.value >= sq.rhs.value - (sq.lhs.error + sq.rhs.error + 1e-7));

    std::vector<Halfspace> cs;
    for (int i = 0; i < 32; ++i) {
        double a = 2 * M_PI * i / 32;
        cs.push_back({{std::cos(a), std::sin(a)}, 1.2});
    }
    auto disk = std::make_shared<PolytopeBody>(2, std::move(cs));
    Step1Report dr = verify_step1(disk, 1.0 / 7.0);
    CHECK(dr.lhs.value >= dr.rhs.value - (dr.lhs.error + dr.rhs.error + 1e-7));
}

TEST_CASE("verify_step3: horizontal halfplane, affine slope -1, random corpus") {
    double r = 1.0 / 7.0;
    double w = radius_derived(r).w;

    // horizontal halfplane: H = L
    auto horiz = std::make_shared<PlanarHypographBody>(
        ThetaFn([](double z) { return z <= 0.25 ? ExtReal::pos_inf() : ExtReal::neg_inf(); }),
        true);
    Step3Report hrep = verify_step3(horiz, r);
    CHECK(hrep.horizontal_halfplane);
    CHECK(hrep.H.offset == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(std::abs(hrep.lhs.value - hrep.rhs.value) <= hrep.lhs.error + 1e-7);

    // affine theta of slope -1: L is the halfplane x + z <= 0, alpha = pi/4
    auto aff = std::make_shared<PlanarHypographBody>(
        ThetaFn([](double z) { return ExtReal(-z); }), true);
    Step3Report arep = verify_step3(aff, r);
    CHECK(!arep.skip_case);
    CHECK(arep.alpha == doctest::Approx(M_PI / 4).epsilon(1e-6));
    CHECK(arep.measure_H.value >= arep.measure_L.value - (arep.measure_L.error + 1e-7));
    CHECK(arep.lhs.value >= arep.rhs.value - (arep.lhs.error + arep.rhs.error + 1e-6));
    // L is itself a halfplane, so the construction recovers it: equality
    CHECK(std::abs(arep.lhs.value - arep.rhs.value) <= 1e-5);

    // skip case: theta constant below -w_r
    auto vert = std::make_shared<PlanarHypographBody>(
        ThetaFn([w](double z) { return z <= -w + 0.5 ? ExtReal(0.9) : ExtReal(0.9 - (z + w - 0.5)); }),
        true);
    Step3Report vrep = verify_step3(vert, r);
    CHECK(vrep.skip_case);
    CHECK(vrep.lhs.value >= vrep.rhs.value - (vrep.lhs.error + vrep.rhs.error + 1e-7));

    // excluded case: theta(-w_r) = -inf
    auto low = std::make_shared<PlanarHypographBody>(
        ThetaFn([w](double z) { return z <= -w - 1.0 ? ExtReal(0.0) : ExtReal::neg_inf(); }),
        true);
    CHECK_THROWS_AS(verify_step3(low, r), std::invalid_argument);
}

TEST_CASE("verify_step3 on random piecewise-linear hypographs with measure >= 1/2") {
    std::mt19937_64 rng(101);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    double r = 1.0 / 7.0;
    int done = 0;
    while (done < 5) {
        PiecewiseLinearTheta pl;
        double slope = -uni(0.1, 0.7);
        pl.left_slope = slope;
        double z = -uni(1.8, 2.5), x = uni(1.0, 2.2);
        pl.knots.emplace_back(z, x);
        for (int i = 0; i < 4; ++i) {
            double dz = uni(0.6, 1.5);
            slope -= uni(0.05, 0.7);
            z += dz;
            x += slope * dz;
            pl.knots.emplace_back(z, x);
        }
        pl.right_value = -std::numeric_limits<double>::infinity();
        auto L = std::make_shared<PlanarHypographBody>(ThetaFn(pl), true);
        MeasureEstimate m = measure(*L);
        if (m.value < 0.5 + 0.01) continue;
        ++done;
        Step3Report rep = verify_step3(L, r);
        CHECK(!rep.horizontal_halfplane);
        CHECK(rep.measure_H.value >= rep.measure_L.value - (rep.measure_L.error + 1e-7));
        CHECK(rep.lhs.value >= rep.rhs.value - (rep.lhs.error + rep.rhs.error + 1e-6));
        CHECK(rep.a1 >= -1e-9);
        CHECK(rep.D >= rep.H.offset - 1e-9);
    }
}

TEST_CASE("step 2 identity: gamma_2(L o re2) = gamma_n(Lambda o re_n) for hypographs") {
    std::mt19937_64 rng(57);
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    double r = 1.0 / 7.0;
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<std::pair<double, double>> lines;
        int k = 3 + static_cast<int>(rng() % 3);
        for (int i = 0; i < k; ++i) lines.emplace_back(uni(-1.0, 1.0), uni(0.5, 1.8));
        auto lam = std::make_shared<HypographBody>(2, PsiFn([lines](std::span<const double> y) {
            double best = std::numeric_limits<double>::infinity();
            for (auto [a, b] : lines) best = std::min(best, a * y[0] + b);
            return ExtReal(best);
        }));
        auto L = ehrhard_E2(lam);
        MeasureEstimate lhs = measure(*circ_transform(L, Vec{0, r}));
        MeasureEstimate rhs = measure(*circ_transform(lam, Vec{0, r}));
        CHECK(std::abs(lhs.value - rhs.value) <= lhs.error + rhs.error + 1e-6);
    }
}

TEST_CASE("isoperimetry and Ehrhard concavity on random planar polytopes") {
    for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
        RandomBodyOptions opt;
        opt.dim = 2;
        opt.seed = seed;
        auto K = random_polytope(opt);
        MeasureEstimate mk = measure(*K);
        CHECK(mk.value >= 0.5);
        CHECK(mk.value <= 0.92);

        for (double eps : {0.1, 0.35}) {
            MeasureEstimate grown = measure(*minkowski_ball(K, eps));
            double bound = phi(phi_inv(mk.value) + eps);
            CHECK(grown.value >= bound - (grown.error + mk.error + 1e-5));
        }
    }

    // Phi^{-1}(gamma((1-l)A + lB)) midpoint concavity
    RandomBodyOptions oa, ob;
    oa.dim = ob.dim = 2;
    oa.seed = 5;
    ob.seed = 8;
    auto A = random_polytope(oa);
    auto B = random_polytope(ob);
    auto comb = [&](double l) {
        PolytopeBody sa = A->scaled(1.0 - l);
        PolytopeBody sb = B->scaled(l);
        auto s = std::make_shared<PolytopeBody>(minkowski_sum_2d(sa, sb));
        return phi_inv(measure(*s).value);
    };
    double f0 = phi_inv(measure(*A).value);
    double f1 = phi_inv(measure(*B).value);
    double fq = comb(0.25), fh = comb(0.5), f3 = comb(0.75);
    CHECK(fh >= 0.5 * (fq + f3) - 1e-5);
    CHECK(fq >= 0.5 * (f0 + fh) - 1e-5);
    CHECK(f3 >= 0.5 * (fh + f1) - 1e-5);
}

TEST_CASE("random_polytope: determinism and measure window") {
    RandomBodyOptions opt;
    opt.dim = 3;
    opt.seed = 42;
    auto a = random_polytope(opt);
    auto b = random_polytope(opt);
    REQUIRE(a->constraints().size() == b->constraints().size());
    for (size_t i = 0; i < a->constraints().size(); ++i) {
        CHECK(a->constraints()[i].offset == b->constraints()[i].offset);
        CHECK(a->constraints()[i].normal == b->constraints()[i].normal);
    }
    MeasureEstimate m = measure(*a);
    CHECK(m.value >= 0.50);
    CHECK(m.value <= 0.92);
}

TEST_CASE("run_verify_pipeline on a planar polytope") {
    RandomBodyOptions opt;
    opt.dim = 2;
    opt.seed = 3;
    auto K = random_polytope(opt);
    VerifyChainReport rep = run_verify_pipeline(K, Vec{0.1, 0.1});
    double tol = 2e-6;
    // chain: delta_K >= delta_Lam ~= delta_L >= delta_H >= -tol
    CHECK(rep.delta_K() >= rep.delta_Lam() - tol);
    CHECK(std::abs(rep.delta_Lam() - rep.delta_L()) <= tol);
    CHECK(rep.delta_L() >= rep.delta_H() - tol);
    CHECK(rep.delta_H() >= -tol);
    CHECK(std::abs(rep.m_Lam.value - rep.m_K.value) <= tol);
    CHECK(std::abs(rep.m_L.value - rep.m_K.value) <= tol);
}
