#pragma once

#include "gaussbal/bodies.hpp"
#include "gaussbal/transforms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gaussbal {

enum class Gauge { l2, l1, linf };

double gauge_value(Gauge g, std::span<const double> x);

struct BalancingInstance {
    int dim = 0;
    std::vector<Vec> vectors;
    std::shared_ptr<const PolytopeBody> body; // K_0
    Gauge gauge = Gauge::linf;
};

struct SignResult {
    std::vector<int> signs;
    double value = 0.0; // gauge of the signed sum
    bool verified = false; // signed sum passes the exact K_0 constraint check
};

/// Exhaustive minimizer of || sum eps_i u_i ||_gauge over eps in {+-1}^t.
/// Ties break lexicographically with +1 preferred. Guarded at t <= 24.
SignResult brute_force_signs(const BalancingInstance& inst);

struct ChainOptions {
    TransformVariant variant = TransformVariant::circ;
    int grid_1d = 8193;     // fiber-cache resolution, dim 2 (1D grid)
    int grid_2d = 161;      // fiber-cache resolution per axis, dim 3
    double grid_span = 14.0;
};

struct ChainResult {
    bool success = false;
    std::vector<int> signs;
    Vec point;           // eps . u on success
    std::string failure; // diagnostic on failure
};

/// Builds K_i = K_{i-1} o u_i (or *), checks 0 in K_t, then walks backward
/// choosing eps_i with x + eps_i u_i in K_{i-1} (+1 preferred when both
/// work). The returned signs are verified against the explicit K_0 with no
/// tolerance, so a success is sound; a failure signals a numerical
/// tolerance breach, not a theory failure.
/// Requires |u_i| <= 1/7 for circ, 1/5 for star; gamma(K_0) >= 1/2 is the
/// caller's responsibility.
ChainResult chain_extract_signs(const BalancingInstance& inst, const ChainOptions& opt = {});

struct BetaReport {
    double max_min_gauge = 0.0;     // empirical lower bound for beta(U, V)
    std::vector<double> per_trial;  // brute-force optimum per trial
};

/// Random (plus one structured) n-tuples from the U sphere, brute-forced in
/// the V gauge. Trial 0 is the canonical basis witness.
BetaReport beta_experiment(Gauge U, Gauge V, int n, int trials, std::uint64_t seed);

struct VbRow {
    int t;
    double min_gauge;
};

struct VbReport {
    std::vector<VbRow> prefix; // brute-force optimum per prefix length
    double beta_estimate = 0.0; // prefix t = dim
    double vb_estimate = 0.0;   // max over prefixes
};

/// Per-prefix brute-force minima of one vector stream: exhibits
/// beta <= vb empirically.
VbReport vb_report(const BalancingInstance& inst);

} // namespace gaussbal
