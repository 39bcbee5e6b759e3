#pragma once

#include <cstdint>
#include <span>

#include "complearn/hypothesis_grid.hpp"
#include "complearn/loss.hpp"
#include "complearn/regression_model.hpp"

namespace complearn {

/// Sample mean of l(f(x_i), y_i) for one grid member.
double empirical_risk(const HypothesisGrid& grid, std::size_t member,
                      std::span<const double> xs, std::span<const double> ys,
                      const LossFunction& loss);

struct ErmResult {
    std::size_t index;
    double risk;
};

/// Minimizer of the empirical risk over the grid; ties go to the lowest index.
ErmResult erm(const HypothesisGrid& grid, std::span<const double> xs,
              std::span<const double> ys, const LossFunction& loss);

/// Exact expected squared loss of a grid member under the regression model:
/// ||f0 - g||^2_{2,Q} + sigma^2, by closed-form piecewise integration.
/// Only defined for the squared loss.
double true_risk_regression(const HypothesisGrid& grid, std::size_t member,
                            const RegressionModel& model, const LossFunction& loss);

/// Randomized soundness check of the modulus inequality
/// |l(f(x), u) - l(f(x), u')| <= eta(l(u, u')). Returns the maximum violation
/// observed (expected <= 0 up to rounding). `eta_scale` deliberately shrinks
/// eta for falsification tests.
double modulus_soundness_check(const LossFunction& loss, const HypothesisGrid& grid,
                               int trials, std::uint64_t seed, double eta_scale = 1.0);

}  // namespace complearn
