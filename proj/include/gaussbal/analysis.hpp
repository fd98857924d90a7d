#pragma once

#include "gaussbal/bodies.hpp"
#include "gaussbal/gauss.hpp"
#include "gaussbal/transforms.hpp"

#include <cstdint>
#include <vector>

namespace gaussbal {

enum class MeasureMethod { automatic, exact, quadrature, monte_carlo };

struct MeasureEstimate {
    double value = 0.0;
    double error = 0.0; // half-width: 3 sigma for MC, Richardson bound for quadrature
    MeasureMethod method = MeasureMethod::exact;
    std::int64_t samples = 0;
};

struct MeasureOptions {
    MeasureMethod method = MeasureMethod::automatic;
    std::int64_t samples = 2'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
};

/// Gaussian measure of a body: exact for halfspaces and 1D slices,
/// quadrature for dim <= 3 when slices are cheap, Monte Carlo otherwise
/// (refuses dim > 8 unless the sample budget is raised above the default).
MeasureEstimate measure(const Body& body, const MeasureOptions& opt = {});

/// The cone C_r = {(x, y) : c x0 <= c x <= d + r s - s y} subtracted from
/// H + r e_2 by the transform, with apex abscissa x0 given by c x0 - s w = d.
struct ConeRegion {
    double alpha = 0, c = 1, s = 0;
    double d = 0;
    double r = 0;
    double w = 0;  // w_r
    double x0 = 0; // +inf when r = 0
};

ConeRegion cone_region(double alpha, double d, double r);

struct ConeMeasure {
    MeasureEstimate estimate;
    double upper_bound; // (s e^{-(d+rs)^2/2}/sqrt(2pi)) T(w_r - r)/(w_r - r); +inf if w_r <= r
};

/// gamma_2(C_r) by adaptive quadrature of
/// int_{x0}^inf Phi((d + rs - cx)/s) e^{-x^2/2} dx / sqrt(2 pi).
ConeMeasure cone_measure(const ConeRegion& cone);

/// gamma_2(H o (r e_2)) - gamma_2(H) for H = {c x + s y <= d}.
/// Exact at alpha = 0 (zero) and alpha = pi/2; quadrature in between.
/// Negative values are meaningful (monotonicity failures for large r).
double halfplane_delta(double alpha, double d, double r);

struct LemmaScanRow {
    double alpha, d, r;
    double delta;
    double cone;
    double bound;
    bool flagged; // delta < -flag_tol: genuine violation, not noise
};

std::vector<LemmaScanRow> lemma_scan(const std::vector<double>& alphas,
                                     const std::vector<double>& ds,
                                     const std::vector<double>& rs,
                                     double flag_tol = 1e-9);

struct RpScanRow {
    double p;
    double r_threshold;    // largest grid r with no scanned violation at measure >= p
    double slab_bound;     // Psi^{-1}(p): symmetric-slab ceiling for r_p^(s)
    double shape_exponent; // Phi^{-1}(p)^2 e^{Phi^{-1}(p)^2}; r_p <= exp(-c * this), c unspecified
};

std::vector<RpScanRow> appendix_scan_rp(const std::vector<double>& ps,
                                        const std::vector<double>& rs,
                                        const std::vector<double>& alphas,
                                        const std::vector<double>& d_offsets,
                                        double flag_tol = 1e-9);

/// Psi(t Psi^{-1}(p)): the S-inequality lower bound for gamma_n(tK).
double s_inequality_bound(double p, double t);

struct Step1Report {
    MeasureEstimate lhs; // gamma_n(K o r e_n)
    MeasureEstimate rhs; // gamma_n(E(K) o r e_n)
};

Step1Report verify_step1(BodyPtr K, double r, const MeasureOptions& opt = {});

struct Step3Report {
    bool horizontal_halfplane = false; // L is {z <= y0}: H = L
    bool skip_case = false;            // vertical tangent: L o re2 = L + re2 contains L
    double alpha = 0;                  // tangent angle, tan(alpha) = -theta'(-w_r)
    double D = 0;                      // tangent offset c a0 - s w_r
    double a0 = 0;                     // theta(-w_r)
    double a1 = 0;                     // (d + s w_r)/c
    Halfspace H;                       // {c x + s z <= d}, d = Phi^{-1}(gamma_2(L'))
    MeasureEstimate measure_L;
    MeasureEstimate measure_H;
    MeasureEstimate lhs; // gamma_2(L o r e_2)
    MeasureEstimate rhs; // gamma_2(H o r e_2)
};

/// tangent_h: step for the left-derivative of theta at -w_r (raise it for
/// empirical Monte Carlo thetas, whose pointwise noise breaks tiny steps).
Step3Report verify_step3(std::shared_ptr<const PlanarHypographBody> L, double r,
                         const MeasureOptions& opt = {}, double tangent_h = 1e-7);

struct VerifyChainReport {
    double r = 0;
    MeasureEstimate m_K, m_K_t;     // gamma(K), gamma(K o u)
    MeasureEstimate m_Lam, m_Lam_t; // after E
    MeasureEstimate m_L, m_L_t;     // after E2
    Step3Report step3;              // H and its measures
    double e2_error = 0;            // extra tolerance when E2 sections used MC

    double delta_K() const { return m_K_t.value - m_K.value; }
    double delta_Lam() const { return m_Lam_t.value - m_Lam.value; }
    double delta_L() const { return m_L_t.value - m_L.value; }
    double delta_H() const;
};

/// The full step 1 -> 2 -> 3 reduction on one body: measures every stage of
/// the inequality chain relating gamma_n(K o u) - gamma_n(K) down to the
/// half-plane gain.
VerifyChainReport run_verify_pipeline(BodyPtr K, Vec u, const MeasureOptions& opt = {});

struct RandomBodyOptions {
    int dim = 2;
    std::uint64_t seed = 1;
    int min_facets = 6;
    int max_facets = 12;
    double target_lo = 0.52;
    double target_hi = 0.90;
};

/// Random bounded polytope: 6-12 uniform-normal halfspaces around the
/// origin plus a +-10 box, rescaled/translated by bisection until the
/// Gaussian measure lands in [target_lo, target_hi]. Deterministic per seed.
std::shared_ptr<const PolytopeBody> random_polytope(const RandomBodyOptions& opt);

} // namespace gaussbal
