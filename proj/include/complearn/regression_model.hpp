#pragma once

#include <utility>
#include <vector>

#include "json.hpp"

#include "complearn/finite_joint.hpp"

namespace complearn {

/// Regression setting: Y = f0(X) + Z with X uniform on [domain_lo, domain_hi]
/// and Z zero-mean Gaussian with standard deviation sigma.
///
/// f0 is piecewise linear through `breakpoints` (sorted by x). A repeated x
/// value encodes a jump discontinuity, so staircase functions are
/// representable exactly. Outside the breakpoint span the nearest endpoint
/// value is used.
struct RegressionModel {
    std::vector<std::pair<double, double>> breakpoints;
    double sigma = 1.0;
    double domain_lo = 0.0;
    double domain_hi = 1.0;

    double f0(double x) const;
    double volume() const { return domain_hi - domain_lo; }
    double f0_min() const;
    double f0_max() const;

    /// Checks sigma > 0, volume > 0, breakpoint ordering and values in [0, 1].
    void validate() const;

    static RegressionModel constant(double value, double sigma, double lo = 0.0,
                                    double hi = 1.0);

    nlohmann::json to_json() const;
    static RegressionModel from_json(const nlohmann::json& j);
};

/// Grids used to bring the continuous regression model onto finite alphabets.
struct DiscretizationSpec {
    int x_bins = 1;
    int y_grid = 257;
    double y_span = 6.0;  // half-width beyond the output range, in units of sigma

    void validate() const;
};

/// Finite joint with cell (i, j) mass (1/x_bins) * Gaussian mass of y-cell j
/// centered at f0(x_i), renormalized per row. Refuses (usage error) when the
/// truncated tail mass of any row reaches 1e-6.
FiniteJoint discretize_regression(const RegressionModel& model, const DiscretizationSpec& spec);

/// Same, on an explicit output range (so different models share one alphabet).
FiniteJoint discretize_regression(const RegressionModel& model, const DiscretizationSpec& spec,
                                  double y_lo, double y_hi);

/// Exact squared L2 distance (1/V) * integral (f - g)^2 between the piecewise
/// linear regression functions of two models sharing a domain.
double l2q_sq_distance(const RegressionModel& f, const RegressionModel& g);

}  // namespace complearn
