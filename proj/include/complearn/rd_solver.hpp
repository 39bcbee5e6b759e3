#pragma once

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "complearn/finite_joint.hpp"
#include "complearn/loss.hpp"

namespace complearn {

struct RDPoint {
    double distortion;
    double rate_bits;
    double slope;  // positive Lagrange multiplier lambda, in bits per loss unit
    bool converged = true;
    // Lagrange-dual intercept: R(D) >= dual_intercept_bits - slope * D holds
    // for the true curve whatever the solver's convergence state (it is the
    // dual value of the solved output marginals). NaN when unavailable.
    double dual_intercept_bits = std::numeric_limits<double>::quiet_NaN();
};

/// Sampled conditional rate-distortion curve. Points are sorted by strictly
/// decreasing distortion with nondecreasing rate, and the chords steepen as
/// distortion shrinks (discrete convexity).
struct RDCurve {
    std::vector<RDPoint> points;
    std::string source_id;
    std::string loss_id;

    void validate(double tol = 1e-9) const;

    double max_rate() const;
    double zero_rate_distortion() const;

    /// Piecewise-linear D(R); rates beyond the sampled range clamp (flag out).
    double distortion_at_rate(double rate, bool* clamped = nullptr) const;
    /// Piecewise-linear R(D) through the sampled points.
    double rate_at_distortion(double distortion) const;
    /// Certified lower bound max(0, max_k [dual_intercept_k - slope_k * D]) on
    /// the true rate, from the Lagrange-dual values of the solved output
    /// marginals. Tight at converged points; never above the true curve, so
    /// inequality checks against it cannot falsely fail.
    double rate_lower_bound_at_distortion(double distortion) const;

    std::string to_csv() const;  // columns: slope,distortion,rate
    nlohmann::json to_json() const;
    static RDCurve from_json(const nlohmann::json& j);
};

struct BAOptions {
    int max_iters = 10000;
    double tol = 1e-9;  // relative change of the per-x Lagrangian
    std::vector<double> reproduction;  // defaults to the source y alphabet
};

/// One Lagrangian-optimal point: per side symbol, alternating minimization on
/// the conditional source p(y|x) at common slope, then averaged over p(x).
struct BAPoint {
    double distortion = 0.0;
    double rate_bits = 0.0;
    double slope = 0.0;
    bool converged = true;
    bool descent_ok = true;  // per-iteration Lagrangian never increased
    int iterations = 0;
    double dual_intercept_bits = 0.0;  // see RDPoint
    std::vector<double> reproduction;
    std::vector<std::vector<double>> channels;          // per x: ny * nrep, row-major
    std::vector<std::vector<double>> output_marginals;  // per x: nrep
};

/// `warm` optionally seeds the per-x output marginals (e.g. from a nearby
/// slope) to cut iteration counts on large alphabets.
BAPoint ba_rd_point(const FiniteJoint& dist, const LossFunction& loss, double slope,
                    const BAOptions& opts = {},
                    const std::vector<std::vector<double>>* warm = nullptr);

/// Expected loss of the best constant reproduction chosen per side symbol
/// (the rate-zero endpoint of the conditional curve).
double zero_rate_distortion(const FiniteJoint& dist, const LossFunction& loss,
                            const std::vector<double>& reproduction = {});

/// Geometric slope grid spanning [1e-3, 1e3] scaled by the zero-rate
/// distortion of the instance.
std::vector<double> default_slope_grid(const FiniteJoint& dist, const LossFunction& loss,
                                       int count = 40);

RDCurve rd_curve(const FiniteJoint& dist, const LossFunction& loss,
                 std::vector<double> slopes = {}, const BAOptions& opts = {});

/// Bisection on the slope until the achieved rate matches `target_rate`.
BAPoint solve_at_rate(const FiniteJoint& dist, const LossFunction& loss, double target_rate,
                      double rate_tol = 1e-5, const BAOptions& opts = {});

/// Distortion-rate function of a memoryless Gaussian source under squared
/// error: sigma^2 * 2^(-2R). For the additive-noise regression family this is
/// also the worst-case conditional value at rate R, independent of the
/// regression function.
double gaussian_drf(double sigma, double rate);

struct SupDrfResult {
    double value;
    std::size_t argmax;
    bool flagged;  // some family member failed to converge
};

/// sup over an explicit family of joints of the conditional distortion-rate
/// value at `rate`.
SupDrfResult sup_drf(const std::vector<FiniteJoint>& family, const LossFunction& loss,
                     double rate, const BAOptions& opts = {});

}  // namespace complearn
