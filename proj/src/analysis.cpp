#include "gaussbal/analysis.hpp"

#include "gaussbal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace gaussbal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadSpan = 8.5; // gamma_1 tail beyond: < 1e-17

// --- quadrature over a 1D cross-section family -------------------------------

struct FiberFrame {
    Vec fiber;          // unit fiber direction
    std::vector<Vec> cross; // orthonormal complement
};

FiberFrame make_frame(const Body& body) {
    int n = body.dim();
    Vec f;
    if (auto pf = body.preferred_fiber()) f = normalized(*pf);
    else {
        f.assign(n, 0.0);
        f[0] = 1.0;
    }
    FiberFrame out;
    out.fiber = f;
    Rotation rho = Rotation::to_last_axis(f); // rho(f) = e_n
    for (int i = 0; i + 1 < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        out.cross.push_back(rho.apply_inv(e));
    }
    return out;
}

MeasureEstimate quadrature_2d(const Body& body) {
    FiberFrame fr = make_frame(body);
    const Vec& f = fr.fiber;
    const Vec& a = fr.cross[0];
    auto slice_at = [&](double z) {
        Vec base{z * a[0], z * a[1]};
        return body.slice(base, f);
    };
    auto nonempty = [&](double z) { return !slice_at(z).is_empty; };

    const int NS = 256;
    int first = -1, last = -1;
    for (int i = 0; i <= NS; ++i) {
        double z = -kQuadSpan + 2 * kQuadSpan * i / NS;
        if (nonempty(z)) {
            if (first < 0) first = i;
            last = i;
        }
    }
    MeasureEstimate out;
    out.method = MeasureMethod::quadrature;
    if (first < 0) {
        // nothing found at 2^-8 resolution: treat as measure zero
        out.value = 0.0;
        out.error = 1e-9;
        return out;
    }
    auto grid_z = [&](int i) { return -kQuadSpan + 2 * kQuadSpan * i / NS; };
    double zlo = first == 0 ? -kQuadSpan
                            : bisect_predicate(nonempty, grid_z(first), grid_z(first - 1), 1e-10);
    double zhi = last == NS ? kQuadSpan
                            : bisect_predicate(nonempty, grid_z(last), grid_z(last + 1), 1e-10);
    auto g = [&](double z) { return gamma1(slice_at(z)) * std_normal_pdf(z); };
    double S1 = composite_simpson(g, zlo, zhi, 4096);
    double S2 = composite_simpson(g, zlo, zhi, 2048);
    out.value = std::clamp(S1, 0.0, 1.0);
    out.error = std::max(std::abs(S1 - S2) / 15.0 * 2.0, 1e-9) + 2e-17;
    return out;
}

MeasureEstimate quadrature_3d(const Body& body) {
    FiberFrame fr = make_frame(body);
    const Vec& f = fr.fiber;
    const Vec& b1 = fr.cross[0];
    const Vec& b2 = fr.cross[1];
    auto slice_at = [&](double z1, double z2) {
        Vec base{z1 * b1[0] + z2 * b2[0], z1 * b1[1] + z2 * b2[1],
                 z1 * b1[2] + z2 * b2[2]};
        return body.slice(base, f);
    };

    // inner integral over z1 at fixed z2, with jump-aware range detection
    auto inner = [&](double z2) {
        auto nonempty = [&](double z1) { return !slice_at(z1, z2).is_empty; };
        const int NS = 128;
        int first = -1, last = -1;
        for (int i = 0; i <= NS; ++i) {
            double z = -kQuadSpan + 2 * kQuadSpan * i / NS;
            if (nonempty(z)) {
                if (first < 0) first = i;
                last = i;
            }
        }
        if (first < 0) return 0.0;
        auto grid_z = [&](int i) { return -kQuadSpan + 2 * kQuadSpan * i / NS; };
        double zlo = first == 0 ? -kQuadSpan
                                : bisect_predicate(nonempty, grid_z(first), grid_z(first - 1), 1e-9);
        double zhi = last == NS ? kQuadSpan
                                : bisect_predicate(nonempty, grid_z(last), grid_z(last + 1), 1e-9);
        auto g = [&](double z1) { return gamma1(slice_at(z1, z2)) * std_normal_pdf(z1); };
        return composite_simpson(g, zlo, zhi, 1024);
    };

    double S = adaptive_simpson([&](double z2) { return inner(z2) * std_normal_pdf(z2); },
                                -kQuadSpan, kQuadSpan, 5e-9);
    MeasureEstimate out;
    out.method = MeasureMethod::quadrature;
    out.value = std::clamp(S, 0.0, 1.0);
    out.error = 5e-7; // adaptive tolerance plus inner range-bisection slack
    return out;
}

MeasureEstimate monte_carlo(const Body& body, const MeasureOptions& opt) {
    const int n = body.dim();
    const int workers = std::max(1, opt.workers);
    const std::int64_t N = std::max<std::int64_t>(1, opt.samples);
    std::vector<std::int64_t> hits(workers, 0);
    auto run = [&](int w) {
        std::int64_t lo = N * w / workers, hi = N * (w + 1) / workers;
        GaussianSampler sampler(GaussianSampler::derive_seed(opt.seed, w), n);
        Vec x(n);
        std::int64_t h = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            sampler.next(x);
            if (body.contains(x)) ++h;
        }
        hits[w] = h;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> ts;
        for (int w = 0; w < workers; ++w) ts.emplace_back(run, w);
        for (auto& t : ts) t.join();
    }
    std::int64_t total = 0;
    for (auto h : hits) total += h;
    double p = static_cast<double>(total) / static_cast<double>(N);
    MeasureEstimate out;
    out.method = MeasureMethod::monte_carlo;
    out.samples = N;
    out.value = p;
    out.error = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(N));
    return out;
}

MeasureEstimate measure_exact(const Body& body) {
    MeasureEstimate out;
    out.method = MeasureMethod::exact;
    if (auto* h = dynamic_cast<const HalfspaceBody*>(&body)) {
        out.value = phi(h->halfspace().offset);
        return out;
    }
    if (body.dim() == 1) {
        Vec base{0.0}, dir{1.0};
        out.value = gamma1(body.slice(base, dir));
        return out;
    }
    throw std::invalid_argument("measure: exact method only for halfspaces and dim 1");
}

} // namespace

MeasureEstimate measure(const Body& body, const MeasureOptions& opt) {
    const int n = body.dim();
    switch (opt.method) {
    case MeasureMethod::exact:
        return measure_exact(body);
    case MeasureMethod::quadrature:
        if (n == 1) return measure_exact(body);
        if (n == 2) return quadrature_2d(body);
        if (n == 3) return quadrature_3d(body);
        throw std::invalid_argument("measure: quadrature supports dim <= 3");
    case MeasureMethod::monte_carlo:
        if (n > 8 && opt.samples <= 2'000'000)
            throw std::invalid_argument("measure: dim > 8 needs an explicit larger sample budget");
        return monte_carlo(body, opt);
    case MeasureMethod::automatic:
    default:
        if (dynamic_cast<const HalfspaceBody*>(&body) || n == 1) return measure_exact(body);
        if (n == 2) return quadrature_2d(body);
        if (n == 3 && body.cheap_slices()) return quadrature_3d(body);
        if (n > 8) throw std::invalid_argument("measure: dim > 8 needs an explicit sample budget");
        return monte_carlo(body, opt);
    }
}

// --- cone of the half-plane lemma -------------------------------------------------

ConeRegion cone_region(double alpha, double d, double r) {
    if (!(alpha >= 0.0 && alpha <= M_PI / 2))
        throw std::domain_error("cone_region: alpha outside [0, pi/2]");
    if (!(r >= 0.0)) throw std::domain_error("cone_region: r must be >= 0");
    ConeRegion cone;
    cone.alpha = alpha;
    cone.c = std::cos(alpha);
    cone.s = std::sin(alpha);
    cone.d = d;
    cone.r = r;
    cone.w = radius_derived(r).w;
    if (cone.s == 0.0) cone.x0 = d;
    else if (cone.c <= 1e-300) cone.x0 = (d + cone.s * cone.w) >= 0 ? kInf : -kInf;
    else cone.x0 = (d + cone.s * cone.w) / cone.c;
    return cone;
}

ConeMeasure cone_measure(const ConeRegion& cone) {
    ConeMeasure out;
    out.upper_bound = kInf;
    if (cone.w > cone.r) {
        double A = cone.w - cone.r;
        out.upper_bound = cone.s * std::exp(-0.5 * (cone.d + cone.r * cone.s) *
                                            (cone.d + cone.r * cone.s)) /
                          kSqrt2Pi * phi(-A) / A;
    }
    out.estimate.method = MeasureMethod::quadrature;
    out.estimate.error = 1e-10;

    if (cone.r == 0.0 || cone.s == 0.0 || cone.x0 == kInf) {
        out.estimate.value = 0.0;
        out.estimate.error = 0.0;
        return out;
    }
    if (cone.x0 == -kInf) {
        // alpha = pi/2 with d < -w_r: the cone swallows all of H + r e_2
        out.estimate.value = phi(cone.d + cone.r * cone.s);
        out.estimate.error = 0.0;
        return out;
    }
    double lim = std::max(cone.x0, 0.0) + 45.0;
    auto f = [&](double x) {
        return phi((cone.d + cone.r * cone.s - cone.c * x) / cone.s) * std_normal_pdf(x);
    };
    out.estimate.value = std::max(0.0, adaptive_simpson(f, cone.x0, lim, 1e-12));
    return out;
}

double halfplane_delta(double alpha, double d, double r) {
    if (!(alpha >= 0.0 && alpha <= M_PI / 2))
        throw std::domain_error("halfplane_delta: alpha outside [0, pi/2]");
    if (!(r >= 0.0)) throw std::domain_error("halfplane_delta: r must be >= 0");
    if (r == 0.0 || alpha == 0.0) return 0.0;
    double c = std::cos(alpha), s = std::sin(alpha);
    if (c <= 1e-300) {
        // horizontal boundary: H o re2 = H + re2 when Phi(d) >= p_r, else empty
        double w = radius_derived(r).w;
        return d >= -w ? phi(d + r) - phi(d) : -phi(d);
    }
    ConeMeasure cm = cone_measure(cone_region(alpha, d, r));
    return phi(d + r * s) - phi(d) - cm.estimate.value;
}

std::vector<LemmaScanRow> lemma_scan(const std::vector<double>& alphas,
                                     const std::vector<double>& ds,
                                     const std::vector<double>& rs,
                                     double flag_tol) {
    std::vector<LemmaScanRow> rows;
    rows.reserve(alphas.size() * ds.size() * rs.size());
    for (double a : alphas) {
        for (double d : ds) {
            for (double r : rs) {
                LemmaScanRow row;
                row.alpha = a;
                row.d = d;
                row.r = r;
                ConeMeasure cm = cone_measure(cone_region(a, d, r));
                row.cone = cm.estimate.value;
                row.bound = cm.upper_bound;
                row.delta = halfplane_delta(a, d, r);
                row.flagged = row.delta < -flag_tol;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

std::vector<RpScanRow> appendix_scan_rp(const std::vector<double>& ps,
                                        const std::vector<double>& rs,
                                        const std::vector<double>& alphas,
                                        const std::vector<double>& d_offsets,
                                        double flag_tol) {
    std::vector<double> r_sorted = rs;
    std::sort(r_sorted.begin(), r_sorted.end());
    std::vector<RpScanRow> rows;
    for (double p : ps) {
        if (!(p > 0.0 && p < 1.0)) throw std::domain_error("appendix_scan_rp: p outside (0,1)");
        double dmin = phi_inv(p);
        RpScanRow row;
        row.p = p;
        row.slab_bound = psi_inv(p);
        row.shape_exponent = dmin * dmin * std::exp(dmin * dmin);
        row.r_threshold = 0.0;
        for (double r : r_sorted) {
            bool ok = true;
            for (double a : alphas) {
                for (double off : d_offsets) {
                    if (halfplane_delta(a, dmin + off, r) < -flag_tol) { ok = false; break; }
                }
                if (!ok) break;
            }
            if (!ok) break;
            row.r_threshold = r;
        }
        rows.push_back(row);
    }
    return rows;
}

double s_inequality_bound(double p, double t) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("s_inequality_bound: p outside (0,1)");
    if (!(t >= 1.0)) throw std::domain_error("s_inequality_bound: t must be >= 1");
    return psi(t * psi_inv(p));
}

// --- step verifiers ------------------------------------------------------------------

Step1Report verify_step1(BodyPtr K, double r, const MeasureOptions& opt) {
    int n = K->dim();
    Vec u(n, 0.0);
    u[n - 1] = r;
    auto lam = ehrhard_E(K);
    Step1Report rep;
    rep.lhs = measure(*circ_transform(K, u), opt);
    rep.rhs = measure(*circ_transform(lam, u), opt);
    return rep;
}

Step3Report verify_step3(std::shared_ptr<const PlanarHypographBody> L, double r,
                         const MeasureOptions& opt, double tangent_h) {
    if (!(r > 0.0)) throw std::domain_error("verify_step3: r must be > 0");
    Step3Report rep;
    RadiusDerived rd = radius_derived(r);
    const double w = rd.w;

    rep.measure_L = measure(*L, opt);

    ExtReal a0 = L->theta(-w);
    if (a0.is_neg_inf())
        throw std::invalid_argument(
            "verify_step3: theta(-w_r) = -inf, so gamma_2(L) <= gamma_1([-r,r]) < 1/2; "
            "the step-3 hypothesis excludes this");

    BodyPtr Lt = circ_transform(L, Vec{0.0, r});
    rep.lhs = measure(*Lt, opt);

    if (a0.is_pos_inf()) {
        // L contains a horizontal half-plane below -w_r; take H = {z <= y0}.
        rep.horizontal_halfplane = true;
        auto full = [&](double z) { return L->theta(z).is_pos_inf(); };
        double y0 = full(kSliceWindow)
                        ? kSliceWindow
                        : bisect_predicate(full, -w, kSliceWindow, 1e-10);
        rep.H.normal = {0.0, 1.0};
        rep.H.offset = y0;
        rep.measure_H.value = phi(y0);
        rep.measure_H.method = MeasureMethod::exact;
        rep.rhs.value = y0 >= -w ? phi(y0 + r) : 0.0;
        rep.rhs.method = MeasureMethod::exact;
        return rep;
    }

    // Most vertical tangent at p0 = (a0, -w_r): left derivative of theta.
    double m = (a0.value() - L->theta(-w - tangent_h).value()) / tangent_h;
    rep.a0 = a0.value();
    if (std::abs(m) <= 1e-12) {
        // Vertical tangent: theta constant on (-inf, -w_r], so the cut
        // {x <= a0} removes nothing and L o re2 = L + re2 contains L.
        rep.skip_case = true;
        rep.rhs = rep.measure_L;
        return rep;
    }
    if (m > 0)
        throw std::invalid_argument("verify_step3: theta must be non-increasing");

    double alpha = std::atan(-m);
    double c = std::cos(alpha), s = std::sin(alpha);
    rep.alpha = alpha;
    rep.D = c * rep.a0 - s * w;

    // L' = hypograph of theta extended by the tangent line below -w_r.
    double D = rep.D;
    auto Lp = std::make_shared<PlanarHypographBody>(
        ThetaFn([L, w, D, c, s](double z) -> ExtReal {
            if (z >= -w) return L->theta(z);
            return ExtReal((D - s * z) / c);
        }),
        true);
    MeasureEstimate mLp = measure(*Lp, opt);
    double d = phi_inv(mLp.value);
    rep.H.normal = {c, s};
    rep.H.offset = d;
    rep.a1 = (d + s * w) / c;
    rep.measure_H.value = phi(d);
    rep.measure_H.method = MeasureMethod::exact;
    rep.measure_H.error = mLp.error; // uncertainty inherited from d

    ConeMeasure cm = cone_measure(cone_region(alpha, d, r));
    rep.rhs.value = phi(d + r * s) - cm.estimate.value;
    rep.rhs.method = MeasureMethod::quadrature;
    rep.rhs.error = cm.estimate.error + mLp.error;
    return rep;
}

double VerifyChainReport::delta_H() const {
    return step3.rhs.value - step3.measure_H.value;
}

VerifyChainReport run_verify_pipeline(BodyPtr K, Vec u, const MeasureOptions& opt) {
    VerifyChainReport rep;
    const int n = K->dim();
    double r = norm2(u);
    rep.r = r;

    if (!(r > 0.0)) throw std::domain_error("run_verify_pipeline: |u| must be > 0");
    rep.m_K = measure(*K, opt);

    Rotation rho = rotate_to_axis(u);
    BodyPtr B = rotate_body(K, rho);
    Vec re_n(n, 0.0);
    re_n[n - 1] = r;

    rep.m_K_t = measure(*circ_transform(B, re_n), opt);

    auto Lam = ehrhard_E(B);
    rep.m_Lam = measure(*Lam, opt);
    rep.m_Lam_t = measure(*circ_transform(Lam, re_n), opt);

    E2Options e2;
    e2.seed = opt.seed;
    auto L = ehrhard_E2(Lam, e2);
    rep.m_L = measure(*L, opt);
    rep.m_L_t = measure(*circ_transform(L, Vec{0.0, r}), opt);
    rep.e2_error = n >= 3 ? 3.0 * 0.5 / std::sqrt(static_cast<double>(e2.samples)) : 0.0;

    rep.step3 = verify_step3(L, r, opt, n >= 3 ? 2e-3 : 1e-7);
    return rep;
}

// --- random body corpus ------------------------------------------------------------

std::shared_ptr<const PolytopeBody> random_polytope(const RandomBodyOptions& opt) {
    if (opt.dim < 2) throw std::invalid_argument("random_polytope: dim must be >= 2");
    std::mt19937_64 rng(GaussianSampler::derive_seed(opt.seed, 1));
    auto uni = [&](double a, double b) {
        return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    GaussianSampler gauss(GaussianSampler::derive_seed(opt.seed, 2), opt.dim);

    const int n = opt.dim;
    int m = opt.min_facets +
            static_cast<int>(rng() % static_cast<std::uint64_t>(opt.max_facets - opt.min_facets + 1));
    std::vector<Halfspace> cons;
    for (int i = 0; i < m; ++i) {
        Vec v(n);
        do gauss.next(v); while (norm2(v) < 1e-6);
        Halfspace h;
        h.normal = normalized(v);
        h.offset = uni(0.6, 2.2);
        cons.push_back(std::move(h));
    }
    for (int i = 0; i < n; ++i) {
        for (double sgn : {1.0, -1.0}) {
            Halfspace h;
            h.normal.assign(n, 0.0);
            h.normal[i] = sgn;
            h.offset = 10.0;
            cons.push_back(std::move(h));
        }
    }

    MeasureOptions mopt;
    mopt.seed = GaussianSampler::derive_seed(opt.seed, 3);
    mopt.samples = 300'000;
    if (n >= 3) mopt.method = MeasureMethod::monte_carlo;
    auto meas = [&](const PolytopeBody& P) { return measure(P, mopt).value; };

    PolytopeBody poly(n, cons);
    double target = uni(opt.target_lo + 0.02, opt.target_hi - 0.05);

    for (int it = 0; it < 60 && meas(poly) < opt.target_lo + 0.02; ++it)
        poly = poly.scaled(1.25);

    double f0 = meas(poly);
    if (f0 > target) {
        Vec v(n);
        do gauss.next(v); while (norm2(v) < 1e-6);
        v = normalized(v);
        auto shifted = [&](double t) {
            Vec tv(n);
            for (int i = 0; i < n; ++i) tv[i] = t * v[i];
            return poly.translated(tv);
        };
        double T = 1.0;
        while (meas(shifted(T)) > target && T < 64.0) T *= 2.0;
        double t = bisect_root([&](double t_) { return meas(shifted(t_)) - target; },
                               0.0, T, 1e-3, 60);
        poly = shifted(t);
    }
    return std::make_shared<PolytopeBody>(std::move(poly));
}

} // namespace gaussbal
