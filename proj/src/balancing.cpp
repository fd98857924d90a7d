#include "gaussbal/balancing.hpp"

#include "gaussbal/gauss.hpp"
#include "gaussbal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gaussbal {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWalkTol = 1e-9;
} // namespace

double gauge_value(Gauge g, std::span<const double> x) {
    switch (g) {
    case Gauge::l2:
        return norm2(x);
    case Gauge::l1: {
        double s = 0;
        for (double v : x) s += std::abs(v);
        return s;
    }
    case Gauge::linf:
    default: {
        double s = 0;
        for (double v : x) s = std::max(s, std::abs(v));
        return s;
    }
    }
}

namespace {

// +1 sorts before -1, componentwise from the front.
bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

Vec signed_sum(const BalancingInstance& inst, const std::vector<int>& signs) {
    Vec s(inst.dim, 0.0);
    for (size_t i = 0; i < inst.vectors.size(); ++i)
        for (int k = 0; k < inst.dim; ++k) s[k] += signs[i] * inst.vectors[i][k];
    return s;
}

} // namespace

SignResult brute_force_signs(const BalancingInstance& inst) {
    const int t = static_cast<int>(inst.vectors.size());
    if (t < 1) throw std::invalid_argument("brute_force_signs: empty instance");
    if (t > 24) throw std::invalid_argument("brute_force_signs: instance too large (t > 24)");
    const int n = inst.dim;

    std::vector<int> signs(t, +1);
    Vec cur(n, 0.0);
    for (const auto& u : inst.vectors)
        for (int k = 0; k < n; ++k) cur[k] += u[k];

    std::vector<int> best_signs = signs;
    double best = gauge_value(inst.gauge, cur);

    // Gray-code walk: one flip per step.
    const std::uint64_t total = 1ULL << t;
    for (std::uint64_t k = 1; k < total && best > 0.0; ++k) {
        int bit = __builtin_ctzll(k);
        signs[bit] = -signs[bit];
        for (int j = 0; j < n; ++j) cur[j] += 2.0 * signs[bit] * inst.vectors[bit][j];
        double g = gauge_value(inst.gauge, cur);
        if (g < best || (g == best && lex_less(signs, best_signs))) {
            best = g;
            best_signs = signs;
        }
    }

    SignResult out;
    out.signs = best_signs;
    Vec sum = signed_sum(inst, best_signs);
    out.value = gauge_value(inst.gauge, sum);
    out.verified = inst.body ? inst.body->contains_eps(sum, 0.0) : false;
    return out;
}

// --- transform chain with per-level fiber caches -----------------------------------

namespace {

class TransformChain {
public:
    TransformChain(const PolytopeBody& k0, const std::vector<Vec>& us,
                   TransformVariant var, const ChainOptions& opt)
        : k0_(k0), n_(k0.dim()), t_(static_cast<int>(us.size())), var_(var), opt_(opt) {
        levels_.resize(t_ + 1);
        for (int i = 1; i <= t_; ++i) {
            Level& L = levels_[i];
            L.r = norm2(us[i - 1]);
            if (L.r == 0) continue;
            L.u_hat = normalized(us[i - 1]);
            L.rd = radius_derived(L.r);
            Rotation rho = Rotation::to_last_axis(L.u_hat);
            for (int k = 0; k + 1 < n_; ++k) {
                Vec e(n_, 0.0);
                e[k] = 1.0;
                L.basis.push_back(rho.apply_inv(e));
            }
        }
        for (int i = 2; i <= t_ - 1; ++i) build_cache(i);
    }

    int depth() const { return t_; }

    bool member(int level, std::span<const double> x) const {
        if (level == 0) return k0_.contains_eps(x, kWalkTol);
        const Level& L = levels_[level];
        if (L.r == 0) return member(level - 1, x);
        double tt = dot(x, L.u_hat);
        Vec y(x.begin(), x.end());
        for (int k = 0; k < n_; ++k) y[k] -= tt * L.u_hat[k];
        Interval F = fiber(level, y);
        return F.contains(tt, kWalkTol);
    }

    /// Fiber of K_level along its own direction, at ambient base y in u^perp.
    Interval fiber(int level, std::span<const double> y) const {
        const Level& L = levels_[level];
        if (level == 1) {
            Interval I = k0_.slice(y, L.u_hat);
            return apply_rule(L, I);
        }
        if (L.m > 0) {
            double c[2] = {0, 0};
            for (size_t k = 0; k < L.basis.size(); ++k) c[k] = dot(y, L.basis[k]);
            return fiber_cached(L, c);
        }
        return fiber_exact(level, y, std::nan(""));
    }

    Interval fiber_exact(int level, std::span<const double> y, double hint) const {
        const Level& L = levels_[level];
        const double W = opt_.grid_span + 2.0;
        Vec p(n_);
        auto memb = [&](double s) {
            for (int k = 0; k < n_; ++k) p[k] = y[k] + s * L.u_hat[k];
            return member(level - 1, p);
        };
        double s_in = 0.0;
        bool found = false;
        if (!std::isnan(hint) && memb(hint)) { s_in = hint; found = true; }
        if (!found && memb(0.0)) { s_in = 0.0; found = true; }
        for (int k = 1; k <= 8 && !found; ++k) {
            double step = W / static_cast<double>(1 << (k - 1));
            for (double s = -W + 0.5 * step; s < W; s += step)
                if (memb(s)) { s_in = s; found = true; break; }
        }
        if (!found) return Interval::empty();
        double shi = memb(W) ? W : bisect_predicate(memb, s_in, W, 1e-9);
        double slo = memb(-W) ? -W : bisect_predicate(memb, s_in, -W, 1e-9);
        return apply_rule(L, Interval{ExtReal(slo), ExtReal(shi)});
    }

private:
    struct Level {
        Vec u_hat;
        double r = 0;
        RadiusDerived rd{};
        std::vector<Vec> basis; // orthonormal basis of u_hat^perp
        // fiber cache: lo/hi per grid node, +inf/-inf sentinel for empty
        std::vector<double> lo, hi;
        int m = 0;
        double span = 0, h = 0;
    };

    Interval apply_rule(const Level& L, const Interval& I) const {
        bool keep;
        if (var_ == TransformVariant::circ)
            keep = gamma1(I) >= L.rd.p - 1e-12;
        else
            keep = !I.is_empty && I.length() >= 2.0 * L.r - 1e-12;
        if (!keep) return Interval::empty();
        return I.extended(L.r);
    }

    void build_cache(int i) {
        Level& L = levels_[i];
        if (L.r == 0) return;
        const int D = n_ - 1;
        if (D > 2) return; // dim > 3: no cache, exact recursion only
        L.m = D == 1 ? opt_.grid_1d : opt_.grid_2d;
        L.span = opt_.grid_span;
        L.h = 2.0 * L.span / (L.m - 1);
        size_t count = D == 1 ? static_cast<size_t>(L.m)
                              : static_cast<size_t>(L.m) * static_cast<size_t>(L.m);
        L.lo.assign(count, kInf);
        L.hi.assign(count, -kInf);
        Vec y(n_);
        const int rows = D == 1 ? 1 : L.m;
        for (int j = 0; j < rows; ++j) {
            double hint = std::nan("");
            for (int a = 0; a < L.m; ++a) {
                double c0 = -L.span + L.h * a;
                for (int k = 0; k < n_; ++k)
                    y[k] = c0 * L.basis[0][k] + (D == 2 ? (-L.span + L.h * j) * L.basis[1][k] : 0.0);
                Interval F = fiber_exact(i, y, hint);
                if (!F.is_empty) {
                    size_t idx = D == 1 ? static_cast<size_t>(a)
                                        : static_cast<size_t>(j) * L.m + a;
                    L.lo[idx] = F.lo.value();
                    L.hi[idx] = F.hi.value();
                    hint = 0.5 * (F.lo.value() + F.hi.value());
                }
            }
        }
    }

    Interval fiber_cached(const Level& L, const double* c) const {
        const int D = n_ - 1;
        auto node = [&](int a, int j) -> size_t {
            return D == 1 ? static_cast<size_t>(a) : static_cast<size_t>(j) * L.m + a;
        };
        double fx = (c[0] + L.span) / L.h;
        double fy = D == 2 ? (c[1] + L.span) / L.h : 0.0;
        if (fx < 0 || fx > L.m - 1 || (D == 2 && (fy < 0 || fy > L.m - 1)))
            return Interval::empty();
        int a0 = std::min(static_cast<int>(fx), L.m - 2);
        int j0 = D == 2 ? std::min(static_cast<int>(fy), L.m - 2) : 0;
        double tx = fx - a0, ty = fy - j0;

        size_t ids[4];
        double wts[4];
        int cnt;
        if (D == 1) {
            ids[0] = node(a0, 0); wts[0] = 1 - tx;
            ids[1] = node(a0 + 1, 0); wts[1] = tx;
            cnt = 2;
        } else {
            ids[0] = node(a0, j0);         wts[0] = (1 - tx) * (1 - ty);
            ids[1] = node(a0 + 1, j0);     wts[1] = tx * (1 - ty);
            ids[2] = node(a0, j0 + 1);     wts[2] = (1 - tx) * ty;
            ids[3] = node(a0 + 1, j0 + 1); wts[3] = tx * ty;
            cnt = 4;
        }
        double wsum = 0, lo = 0, hi = 0;
        for (int k = 0; k < cnt; ++k) {
            if (L.lo[ids[k]] == kInf) continue; // empty corner
            wsum += wts[k];
            lo += wts[k] * L.lo[ids[k]];
            hi += wts[k] * L.hi[ids[k]];
        }
        // Mixed cells interpolate over the nonempty corners; this smears the
        // cap boundary by at most one cell. Entirely empty: empty fiber.
        if (wsum < 0.25) return Interval::empty();
        return {ExtReal(lo / wsum), ExtReal(hi / wsum)};
    }

    const PolytopeBody& k0_;
    int n_, t_;
    TransformVariant var_;
    ChainOptions opt_;
    std::vector<Level> levels_;
};

} // namespace

ChainResult chain_extract_signs(const BalancingInstance& inst, const ChainOptions& opt) {
    ChainResult out;
    const int t = static_cast<int>(inst.vectors.size());
    if (t < 1) throw std::invalid_argument("chain_extract_signs: empty instance");
    if (!inst.body) throw std::invalid_argument("chain_extract_signs: K_0 required");
    if (inst.body->dim() != inst.dim)
        throw std::invalid_argument("chain_extract_signs: dim mismatch");
    const double bound = (opt.variant == TransformVariant::circ ? 1.0 / 7.0 : 1.0 / 5.0) + 1e-12;
    for (const auto& u : inst.vectors)
        if (norm2(u) > bound)
            throw std::invalid_argument("chain_extract_signs: |u_i| exceeds the radius bound");

    TransformChain chain(*inst.body, inst.vectors, opt.variant, opt);

    Vec x(inst.dim, 0.0);
    if (!chain.member(t, x)) {
        out.failure = "0 not found in K_t within oracle tolerance";
        return out;
    }
    std::vector<int> signs(t, +1);
    for (int i = t; i >= 1; --i) {
        bool took = false;
        for (int eps : {+1, -1}) {
            Vec cand = x;
            for (int k = 0; k < inst.dim; ++k) cand[k] += eps * inst.vectors[i - 1][k];
            if (chain.member(i - 1, cand)) {
                signs[i - 1] = eps;
                x = std::move(cand);
                took = true;
                break;
            }
        }
        if (!took) {
            std::ostringstream os;
            os << "no feasible sign at step " << i << " (tolerance breach)";
            out.failure = os.str();
            return out;
        }
    }
    if (!inst.body->contains_eps(x, 0.0)) {
        out.failure = "extracted point failed the exact K_0 check";
        return out;
    }
    out.success = true;
    out.signs = std::move(signs);
    out.point = std::move(x);
    return out;
}

// --- beta / vb experiments -----------------------------------------------------------

namespace {

Vec random_unit_gauge(Gauge g, int n, GaussianSampler& gs, std::mt19937_64& rng) {
    Vec v(n);
    if (g == Gauge::linf) {
        for (auto& c : v)
            c = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    } else {
        gs.next(v);
    }
    double nv = gauge_value(g, v);
    if (nv < 1e-12) { v.assign(n, 0.0); v[0] = 1.0; nv = 1.0; }
    for (auto& c : v) c /= nv;
    return v;
}

} // namespace

BetaReport beta_experiment(Gauge U, Gauge V, int n, int trials, std::uint64_t seed) {
    if (n < 1 || n > 24) throw std::invalid_argument("beta_experiment: n out of range");
    BetaReport rep;
    GaussianSampler gs(GaussianSampler::derive_seed(seed, 11), n);
    std::mt19937_64 rng(GaussianSampler::derive_seed(seed, 12));
    for (int trial = 0; trial < trials; ++trial) {
        BalancingInstance inst;
        inst.dim = n;
        inst.gauge = V;
        if (trial == 0) {
            for (int i = 0; i < n; ++i) {
                Vec e(n, 0.0);
                e[i] = 1.0;
                inst.vectors.push_back(std::move(e));
            }
        } else {
            for (int i = 0; i < n; ++i)
                inst.vectors.push_back(random_unit_gauge(U, n, gs, rng));
        }
        double v = brute_force_signs(inst).value;
        rep.per_trial.push_back(v);
        rep.max_min_gauge = std::max(rep.max_min_gauge, v);
    }
    return rep;
}

VbReport vb_report(const BalancingInstance& inst) {
    VbReport rep;
    const int t = static_cast<int>(inst.vectors.size());
    for (int T = 1; T <= t; ++T) {
        BalancingInstance prefix;
        prefix.dim = inst.dim;
        prefix.gauge = inst.gauge;
        prefix.vectors.assign(inst.vectors.begin(), inst.vectors.begin() + T);
        double v = brute_force_signs(prefix).value;
        rep.prefix.push_back({T, v});
        rep.vb_estimate = std::max(rep.vb_estimate, v);
        if (T == inst.dim || (t < inst.dim && T == t)) rep.beta_estimate = v;
    }
    return rep;
}

} // namespace gaussbal
